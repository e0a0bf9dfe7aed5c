mod common;

use common::{set, tuple};
use paving_exchange::catalog::{self, fano, m1, m2, m3, uniform};
use paving_exchange::lemmas::{pick_type02, solve_uniform};
use paving_exchange::oracle::{shortest_sequence, DEFAULT_CAP};
use paving_exchange::relaxation::type_of;
use paving_exchange::sequence::validate_with;
use paving_exchange::star::{repair_type0_pair, repair_xbb, star_degree2, star_degree3};
use paving_exchange::{
    apply_step, normalize_sequence, relax, validate_sequence, BasisTuple, ElementSet, Error,
    ExchangeSequence, ExchangeStep, LiftState, Matroid, Solver, StarContext,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn apply_step_examples() {
    let u = uniform(2, 4);
    let t = tuple(&["0,1", "2,3"]);
    let moved = apply_step(&t, &ExchangeStep::new(0, 1, 1, 2), |b| u.is_basis(b)).unwrap();
    assert_eq!(moved, tuple(&["0,2", "1,3"]));

    let m = m1();
    let bad = apply_step(&moved, &ExchangeStep::new(0, 1, 2, 1), |b| m.is_basis(b));
    assert!(bad.is_err());

    let same = apply_step(&t, &ExchangeStep::new(0, 1, 1, 1), |b| u.is_basis(b)).unwrap();
    assert_eq!(same, t);
}

#[test]
fn validate_and_normalize() {
    let u = uniform(2, 4);
    let t = tuple(&["0,1", "2,3"]);
    assert!(validate_sequence(&u, &ExchangeSequence::empty(t.clone()), &t).is_ok());
    let end = tuple(&["0,2", "1,3"]);
    let seq = ExchangeSequence {
        start: t.clone(),
        steps: vec![ExchangeStep::new(0, 1, 1, 2)],
    };
    assert!(validate_sequence(&u, &seq, &end).is_ok());
    assert!(!validate_sequence(&u, &seq, &t).is_ok());
    assert_eq!(ExchangeSequence::parse(&seq.to_text()).unwrap(), seq);

    let with_noop = ExchangeSequence {
        start: t.clone(),
        steps: vec![ExchangeStep::new(0, 1, 1, 1), ExchangeStep::new(0, 1, 1, 2)],
    };
    assert_eq!(normalize_sequence(&with_noop).unwrap(), seq);

    let looped = ExchangeSequence {
        start: t.clone(),
        steps: vec![
            ExchangeStep::new(0, 1, 0, 3),
            ExchangeStep::new(0, 1, 3, 0),
            ExchangeStep::new(0, 1, 1, 2),
        ],
    };
    assert_eq!(normalize_sequence(&looped).unwrap(), seq);
    assert_eq!(normalize_sequence(&seq).unwrap(), seq);
}

#[test]
fn uniform_distances_match_oracle() {
    let u = uniform(2, 4);
    let t = tuple(&["0,1", "2,3"]);
    for end in [tuple(&["0,2", "1,3"]), tuple(&["2,3", "0,1"])] {
        let seq = solve_uniform(&u, &t, &end).unwrap();
        let geo = shortest_sequence(&u, &t, &end, DEFAULT_CAP).unwrap();
        assert_eq!(seq.len(), geo.len());
    }
}

#[test]
fn picker_examples() {
    assert_eq!(
        pick_type02(&m2(), set("0,1,2,3"), set("0,1,2"), set("3,4,5"), 4),
        Ok(0)
    );
    assert_eq!(
        pick_type02(&m1(), set("0,1"), set("0,1"), set("2,3"), 2),
        Ok(0)
    );
}

/// Every entry of every interior state is a basis of `m`.
fn interior_in(m: &Matroid, seq: &ExchangeSequence) -> bool {
    let states = seq.states().unwrap();
    states.len() <= 2
        || states[1..states.len() - 1]
            .iter()
            .flatten()
            .all(|b| m.is_basis(*b))
}

#[test]
fn star_degree2_examples() {
    let m = m1();
    let ctx = StarContext::new(&m, set("0,1")).unwrap();
    let mut solver = Solver::new();
    let (x, y, xe, ye) = (set("0,2"), set("1,3"), set("0,3"), set("1,2"));
    let seq = star_degree2(&mut solver, &ctx, x, y, xe, ye, 2, 1, 1, 3).unwrap();
    let end = BasisTuple(vec![xe, ye]);
    assert!(validate_sequence(&m, &seq, &end).is_ok());
    assert!(shortest_sequence(&m, &seq.start, &end, DEFAULT_CAP).is_ok());

    // middle already a basis: returned as given
    let u = m2();
    let ctx = StarContext::new(&u, set("0,1,2,3")).unwrap();
    let seq = star_degree2(
        &mut solver,
        &ctx,
        set("0,1,4"),
        set("2,3,5"),
        set("0,3,5"),
        set("1,2,4"),
        4,
        5,
        1,
        3,
    );
    let seq = seq.unwrap();
    assert_eq!(seq.len(), 2);
}

/// Random two-step windows through a type-0 middle, on every line of Fano.
#[test]
fn star_degree2_on_fano_windows() {
    let m = fano();
    let mut solver = Solver::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tried = 0;
    for _ in 0..20_000 {
        let h = *catalog::fano_lines().choose(&mut rng).unwrap();
        let ctx = StarContext::new(&m, h).unwrap();
        let x = *m.bases().choose(&mut rng).unwrap();
        let y = *m.bases().choose(&mut rng).unwrap();
        let Some(a) = (x - y).iter().collect::<Vec<_>>().choose(&mut rng).copied() else {
            continue;
        };
        let Some(s) = (y - x).iter().collect::<Vec<_>>().choose(&mut rng).copied() else {
            continue;
        };
        let (xm, ym) = (x.swap(a, s), y.swap(s, a));
        if type_of(xm, h) != 0 || !m.is_basis(ym) {
            continue;
        }
        let Some(t) = (xm - ym)
            .iter()
            .collect::<Vec<_>>()
            .choose(&mut rng)
            .copied()
        else {
            continue;
        };
        let Some(b) = (ym - xm)
            .iter()
            .collect::<Vec<_>>()
            .choose(&mut rng)
            .copied()
        else {
            continue;
        };
        let (xe, ye) = (xm.swap(t, b), ym.swap(b, t));
        if !m.is_basis(xe) || !m.is_basis(ye) {
            continue;
        }
        tried += 1;
        let seq = star_degree2(&mut solver, &ctx, x, y, xe, ye, a, s, t, b).unwrap();
        assert!(validate_sequence(&m, &seq, &BasisTuple(vec![xe, ye])).is_ok());
    }
    assert!(tried > 50, "only {tried} windows");
    assert_eq!(solver.counter("star2/unreachable"), 0);
}

#[test]
fn repair_type0_pair_examples() {
    let m = m2();
    let ctx = StarContext::new(&m, set("0,1,2,3")).unwrap();
    let seq = repair_type0_pair(&ctx, set("0,1,2"), set("3,4,5"), 0, 3).unwrap();
    assert!((2..=3).contains(&seq.len()));
    let relaxed = relax(&m, set("0,1,2,3")).unwrap();
    let end = tuple(&["1,2,3", "0,4,5"]);
    assert!(validate_sequence(&relaxed, &seq, &end).is_ok());
    assert!(interior_in(&m, &seq));

    assert!(matches!(
        repair_type0_pair(&ctx, set("0,1,2"), set("1,3,4"), 0, 3),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn star_degree3_verbatim() {
    let m = m2();
    let ctx = StarContext::new(&m, set("0,1,2,3")).unwrap();
    let mut solver = Solver::new();
    let seq = star_degree3(
        &mut solver,
        &ctx,
        set("0,1,4"),
        set("2,3,5"),
        set("2,4,5"),
        4,
        5,
        1,
        2,
    )
    .unwrap();
    assert_eq!(seq.len(), 2);
    let end = tuple(&["0,2,5", "2,3,4", "1,4,5"]);
    assert!(validate_sequence(&m, &seq, &end).is_ok());
}

/// Random degree-3 windows whose first row passes through a type-0 set.
#[test]
fn star_degree3_random_windows() {
    let mut solver = Solver::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tried = 0;
    let pool = common::relaxable(10, 4);
    for _ in 0..200_000 {
        let (m, hs) = pool.choose(&mut rng).unwrap();
        let h = *hs.choose(&mut rng).unwrap();
        let pick = |rng: &mut ChaCha8Rng| *m.bases().choose(rng).unwrap();
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let any =
            |s: ElementSet, rng: &mut ChaCha8Rng| s.iter().collect::<Vec<_>>().choose(rng).copied();
        let (Some(a), Some(s)) = (any(x - y, &mut rng), any(y - x, &mut rng)) else {
            continue;
        };
        let (xm, ye) = (x.swap(a, s), y.swap(s, a));
        if type_of(xm, h) != 0 || !m.is_basis(ye) {
            continue;
        }
        let (Some(t), Some(b)) = (any(xm - z, &mut rng), any(z - xm, &mut rng)) else {
            continue;
        };
        let (xe, ze) = (xm.swap(t, b), z.swap(b, t));
        if !m.is_basis(xe) || !m.is_basis(ze) {
            continue;
        }
        tried += 1;
        let ctx = StarContext::new(m, h).unwrap();
        let seq = star_degree3(&mut solver, &ctx, x, y, z, a, s, t, b).unwrap();
        assert!(validate_sequence(m, &seq, &BasisTuple(vec![xe, ye, ze])).is_ok());
        if tried == 300 {
            break;
        }
    }
    assert!(tried > 50, "only {tried} windows");
    assert_eq!(solver.counter("star3/unreachable"), 0);
}

/// Random `(X,Y,Z)` with `X` of type 0 and an exchange between `Y` and `Z`.
#[test]
fn repair_xbb_random() {
    let mut solver = Solver::new();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pool = common::relaxable(10, 6);
    let mut tried = 0;
    for _ in 0..200_000 {
        let (m, hs) = pool.choose(&mut rng).unwrap();
        let h = *hs.choose(&mut rng).unwrap();
        let Some(x) = common::random_subset(h, m.rank(), &mut rng) else {
            continue;
        };
        let y = *m.bases().choose(&mut rng).unwrap();
        let z = *m.bases().choose(&mut rng).unwrap();
        if type_of(y, h) + type_of(z, h) < 3 {
            continue;
        }
        let any =
            |s: ElementSet, rng: &mut ChaCha8Rng| s.iter().collect::<Vec<_>>().choose(rng).copied();
        let (Some(yy), Some(zz)) = (any(y - z, &mut rng), any(z - y, &mut rng)) else {
            continue;
        };
        let (ye, ze) = (y.swap(yy, zz), z.swap(zz, yy));
        if !m.is_basis(ye) || !m.is_basis(ze) {
            continue;
        }
        tried += 1;
        let ctx = StarContext::new(m, h).unwrap();
        let seq = repair_xbb(&mut solver, &ctx, x, y, z, yy, zz).unwrap();
        let relaxed = relax(m, h).unwrap();
        assert!(validate_sequence(&relaxed, &seq, &BasisTuple(vec![x, ye, ze])).is_ok());
        assert!(seq.len() > 1);
        for state in &seq.states().unwrap()[1..seq.len()] {
            assert!(state[1..].iter().all(|b| m.is_basis(*b)), "{state:?}");
        }
        if tried == 300 {
            break;
        }
    }
    assert!(tried > 50, "only {tried} windows");

    let m = m2();
    let ctx = StarContext::new(&m, set("0,1,2,3")).unwrap();
    assert!(repair_xbb(
        &mut solver,
        &ctx,
        set("0,1,2"),
        set("0,4,5"),
        set("1,4,5"),
        4,
        4
    )
    .is_err());
}

#[test]
fn solve_examples() {
    let mut solver = Solver::new();
    for (_, m) in catalog::named() {
        let t = BasisTuple(vec![m.bases()[0], m.bases()[1]]);
        assert!(solver.solve(&m, &t, &t).unwrap().is_empty());
    }
    let m = m1();
    let from = tuple(&["0,2", "1,3"]);
    let to = tuple(&["0,3", "1,2"]);
    let seq = solver.solve_degree2(&m, set("0,1"), &from, &to).unwrap();
    assert!(validate_sequence(&m, &seq, &to).is_ok());
    assert!(solver
        .solve_degree2(&m, set("0,1"), &from, &from)
        .unwrap()
        .is_empty());

    let not_paving = Matroid::from_bases(3, 2, [set("0,1")]).unwrap();
    let t = tuple(&["0,1"]);
    assert!(matches!(
        solver.solve(&not_paving, &t, &t),
        Err(Error::Precondition(_))
    ));
    assert!(solver.solve(&m, &from, &tuple(&["0,2", "1,2"])).is_err());
}

#[test]
fn lower_to_relaxation_examples() {
    let mut solver = Solver::new();
    let m = m1();
    let h = set("0,1");
    let u = relax(&m, h).unwrap();
    let from = tuple(&["0,1", "2,3"]);
    let to = tuple(&["0,2", "1,3"]);
    let seq = solver.lower_to_relaxation(&m, h, &from, &to).unwrap();
    assert!(validate_sequence(&u, &seq, &to).is_ok());

    // both ends already bases of M1: the solution never leaves M1
    let from = tuple(&["0,2", "1,3"]);
    let to = tuple(&["0,3", "1,2"]);
    let seq = solver.lower_to_relaxation(&m, h, &from, &to).unwrap();
    assert!(validate_sequence(&m, &seq, &to).is_ok());

    let m = m2();
    let h = set("0,1,2,3");
    let from = tuple(&["0,1,2", "3,4,5"]);
    let to = tuple(&["3,4,5", "0,1,2"]);
    let seq = solver.lower_to_relaxation(&m, h, &from, &to).unwrap();
    assert!(validate_with(|b| b.len() == 3, &seq, &to).is_ok());
    let first = seq.states().unwrap()[1].clone();
    assert!(first.iter().all(|b| m.is_basis(*b)));
}

#[test]
fn lift_without_type0_entries_is_unchanged() {
    let m = m2();
    let h = set("0,1,2,3");
    let mut solver = Solver::new();
    let from = tuple(&["0,1,4", "2,3,5", "0,4,5"]);
    let to = tuple(&["0,1,5", "2,3,4", "0,4,5"]);
    let seq = ExchangeSequence::from_states(&[from.0.clone(), to.0.clone()]).unwrap();
    assert_eq!(solver.lift_sequence(&m, h, &seq).unwrap(), seq);
}

#[test]
fn reduce_consecutive_leaves_separated_runs() {
    let m = m2();
    let h = set("0,1,2,3");
    let mut solver = Solver::new();
    let states = vec![
        vec![set("0,1,4"), set("2,3,5"), set("0,4,5")],
        vec![set("0,1,2"), set("3,4,5"), set("0,4,5")],
        vec![set("0,1,5"), set("3,4,2"), set("0,4,5")],
    ];
    let mut lift = LiftState {
        hyperplane: h,
        states: states.clone(),
    };
    assert_eq!(lift.r_set(), vec![0]);
    assert_eq!(lift.h_set(0), vec![1]);
    solver.reduce_consecutive(&m, &mut lift, 0).unwrap();
    assert_eq!(lift.states, states);
}

/// Two type-0 rows plus a type-3 row trading an element inside `H`: the
/// configuration that needs the pair repair followed by re-dispatch.
#[test]
fn lift_through_two_type0_rows() {
    let m = m3();
    let h = set("0,1,2,3,4");
    let relaxed = relax(&m, h).unwrap();
    let start = tuple(&["0,1,2,5", "1,2,3,6", "0,3,4,7"]);
    let a = tuple(&["0,1,2,3", "1,2,3,4", "0,5,6,7"]);
    let b = tuple(&["0,1,2,3", "0,1,2,3", "4,5,6,7"]);
    let end = tuple(&["0,1,2,6", "1,2,3,5", "0,3,4,7"]);
    let mut states = shortest_sequence(&relaxed, &start, &a, DEFAULT_CAP)
        .unwrap()
        .states()
        .unwrap();
    states.push(b.0.clone());
    states.extend(
        shortest_sequence(&relaxed, &b, &end, DEFAULT_CAP)
            .unwrap()
            .states()
            .unwrap()
            .into_iter()
            .skip(1),
    );
    let seq = ExchangeSequence::from_states(&states).unwrap();
    assert!(validate_sequence(&relaxed, &seq, &end).is_ok());

    let mut solver = Solver::new();
    let out = solver.lift_sequence(&m, h, &seq).unwrap();
    assert!(validate_sequence(&m, &out, &end).is_ok());
    assert!(
        solver.counter("consecutive/II(d)") > 0,
        "{:?}",
        solver.counters()
    );
    assert!(solver
        .log()
        .iter()
        .any(|l| l.starts_with("apply consecutive/II(d) at step ")));
}

#[test]
fn lift_campaigns() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (m, degree) in [(m2(), 3), (m1(), 4), (fano(), 4)] {
        let mut solver = Solver::new();
        let failures = common::lift_campaign(&mut solver, &m, degree, 30, 10, false, &mut rng);
        assert!(failures.is_empty(), "{failures:?}");
        for label in common::UNREACHABLE {
            assert_eq!(solver.counter(label), 0);
        }
    }
}

#[test]
fn solver_is_deterministic() {
    let m = fano();
    let from = tuple(&["0,1,3", "2,4,6", "1,5,6"]);
    let to = tuple(&["1,5,6", "0,1,3", "2,4,6"]);
    let first = Solver::new().solve(&m, &from, &to).unwrap().to_text();
    let second = Solver::new().solve(&m, &from, &to).unwrap().to_text();
    assert_eq!(first, second);
}

#![allow(dead_code)]

use paving_exchange::catalog;
use paving_exchange::oracle::{neighbors, sample_pair, shortest_sequence, DEFAULT_CAP};
use paving_exchange::relaxation::{stressed_hyperplanes, type_of};
use paving_exchange::{
    relax, validate_sequence, BasisTuple, ElementSet, ExchangeSequence, Matroid, Solver,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn set(s: &str) -> ElementSet {
    s.parse().unwrap()
}

pub fn tuple(items: &[&str]) -> BasisTuple {
    BasisTuple(items.iter().map(|s| set(s)).collect())
}

/// Paving matroids with at least one stressed hyperplane of size ≥ r,
/// each paired with those hyperplanes.
pub fn relaxable(random: usize, seed: u64) -> Vec<(Matroid, Vec<ElementSet>)> {
    let mut ms: Vec<Matroid> = catalog::named().into_iter().map(|(_, m)| m).collect();
    ms.push(catalog::m3());
    ms.extend(catalog::random_paving(random, seed));
    ms.into_iter()
        .filter_map(|m| {
            let hs = stressed_hyperplanes(&m);
            (!hs.is_empty()).then_some((m, hs))
        })
        .collect()
}

/// A uniformly random `size`-subset of `pool`.
pub fn random_subset(pool: ElementSet, size: usize, rng: &mut ChaCha8Rng) -> Option<ElementSet> {
    let items: Vec<usize> = pool.iter().collect();
    (items.len() >= size).then(|| items.choose_multiple(rng, size).copied().collect())
}

/// A random `r`-set with exactly `ty` elements outside `h`.
pub fn random_of_type(
    n: usize,
    r: usize,
    h: ElementSet,
    ty: usize,
    rng: &mut ChaCha8Rng,
) -> Option<ElementSet> {
    let inside = random_subset(h, r.checked_sub(ty)?, rng)?;
    let outside = random_subset(ElementSet::full(n) - h, ty, rng)?;
    Some(inside | outside)
}

/// Random walk by symmetric exchanges that keeps every entry's type inside
/// `allowed`. Independent of the solver; used to produce matching targets.
pub fn type_walk(
    start: &[ElementSet],
    h: ElementSet,
    allowed: &dyn Fn(usize) -> bool,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<ElementSet> {
    let mut cur = start.to_vec();
    let n = cur.len();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let xs: Vec<usize> = (cur[i] - cur[j]).iter().collect();
        let ys: Vec<usize> = (cur[j] - cur[i]).iter().collect();
        let (Some(&x), Some(&y)) = (xs.choose(rng), ys.choose(rng)) else {
            continue;
        };
        let (a, b) = (cur[i].swap(x, y), cur[j].swap(y, x));
        if allowed(type_of(a, h)) && allowed(type_of(b, h)) {
            cur[i] = a;
            cur[j] = b;
        }
    }
    cur
}

/// Builds a sequence in the relaxation of `m` at `h` between two tuples of
/// bases of `m`: a random walk in the relaxation followed by a geodesic to
/// the target. With `biased`, the walk prefers tuples with many entries
/// inside `h`, which is where the rarer lifting cases live.
pub fn relaxed_walk(
    m: &Matroid,
    h: ElementSet,
    degree: usize,
    walk_len: usize,
    biased: bool,
    rng: &mut ChaCha8Rng,
) -> (ExchangeSequence, BasisTuple) {
    let relaxed = relax(m, h).unwrap();
    let (a, b) = sample_pair(m, degree, rng, DEFAULT_CAP).unwrap();
    let mut states = vec![a.0.clone()];
    for _ in 0..walk_len {
        let options = neighbors(&relaxed, states.last().unwrap());
        let pick = if biased {
            let score = |t: &Vec<ElementSet>| {
                t.iter().filter(|x| x.is_subset(h)).count() * 4
                    + t.iter().map(|x| (*x - h).len()).max().unwrap_or(0)
            };
            options.choose_weighted(rng, |t| 1u64 << score(t)).ok()
        } else {
            options.choose(rng)
        };
        match pick {
            Some(next) => states.push(next.clone()),
            None => break,
        }
    }
    let mid = BasisTuple(states.last().unwrap().clone());
    let tail = shortest_sequence(&relaxed, &mid, &b, DEFAULT_CAP).unwrap();
    states.extend(tail.states().unwrap().into_iter().skip(1));
    (ExchangeSequence::from_states(&states).unwrap(), b)
}

/// Lifts `samples` relaxed walks on `m`; returns the failures as messages.
pub fn lift_campaign(
    solver: &mut Solver,
    m: &Matroid,
    degree: usize,
    samples: usize,
    walk_len: usize,
    biased: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<String> {
    let hs = stressed_hyperplanes(m);
    let mut failures = Vec::new();
    for k in 0..samples {
        let h = *hs.choose(rng).unwrap();
        let (seq, end) = relaxed_walk(m, h, degree, walk_len, biased, rng);
        match solver.lift_sequence(m, h, &seq) {
            Ok(out) => {
                let report = validate_sequence(m, &out, &end);
                if !report.is_ok() {
                    failures.push(format!("sample {k}: {report}"));
                }
            }
            Err(e) => failures.push(format!("sample {k}: {e}")),
        }
    }
    failures
}

/// Lifting case labels logged by the solver.
pub const CONSECUTIVE_CASES: [&str; 6] = [
    "consecutive/I(a)",
    "consecutive/I(b)",
    "consecutive/II(a)",
    "consecutive/II(b)",
    "consecutive/II(c)",
    "consecutive/II(d)",
];

pub const ELIMINATE_CASES: [&str; 5] = [
    "eliminate/I-merge",
    "eliminate/I-star2",
    "eliminate/II-star3",
    "eliminate/II(a)",
    "eliminate/II(b)",
];

pub const UNREACHABLE: [&str; 2] = ["star2/unreachable", "star3/unreachable"];

/// Type-≤1 solver on random instances: certificates validate in the
/// relaxation and every intermediate entry keeps type ≤ 1.
pub fn suite_type_le1(count: usize, seed: u64) -> Result<usize, String> {
    use paving_exchange::lemmas::solve_type_le1;
    let pool = relaxable(30, seed);
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (m, hs) = pool.choose(&mut rng).unwrap();
        let h = *hs.choose(&mut rng).unwrap();
        let degree = rng.gen_range(1..=4);
        let from: Option<Vec<ElementSet>> = (0..degree)
            .map(|_| {
                let ty = rng.gen_range(0..=1);
                random_of_type(m.n(), m.rank(), h, ty, &mut rng)
            })
            .collect();
        let Some(from) = from else { continue };
        let to = type_walk(&from, h, &|t| t <= 1, 20, &mut rng);
        let (from, to) = (BasisTuple(from), BasisTuple(to));
        let seq =
            solve_type_le1(m, h, &from, &to).map_err(|e| format!("{from:?} -> {to:?}: {e}"))?;
        let relaxed = relax(m, h).unwrap();
        let report = validate_sequence(&relaxed, &seq, &to);
        if !report.is_ok() {
            return Err(format!("{from:?} -> {to:?}: {report}"));
        }
        for state in seq.states().unwrap() {
            if let Some(b) = state.iter().find(|b| type_of(**b, h) > 1) {
                return Err(format!("{from:?} -> {to:?}: intermediate {b} has type > 1"));
            }
        }
        done += 1;
    }
    Ok(done)
}

/// Type-1 solver: every intermediate entry has type exactly 1, so the
/// certificate is valid in `m` itself.
pub fn suite_type1(count: usize, seed: u64) -> Result<usize, String> {
    use paving_exchange::lemmas::solve_type1_bases;
    let pool = relaxable(30, seed);
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (m, hs) = pool.choose(&mut rng).unwrap();
        let h = *hs.choose(&mut rng).unwrap();
        let degree = rng.gen_range(1..=4);
        let from: Option<Vec<ElementSet>> = (0..degree)
            .map(|_| random_of_type(m.n(), m.rank(), h, 1, &mut rng))
            .collect();
        let Some(from) = from else { continue };
        let to = type_walk(&from, h, &|t| t == 1, 20, &mut rng);
        let (from, to) = (BasisTuple(from), BasisTuple(to));
        let seq =
            solve_type1_bases(m, h, &from, &to).map_err(|e| format!("{from:?} -> {to:?}: {e}"))?;
        let report = validate_sequence(m, &seq, &to);
        if !report.is_ok() {
            return Err(format!("{from:?} -> {to:?}: {report}"));
        }
        for state in seq.states().unwrap() {
            if let Some(b) = state.iter().find(|b| type_of(**b, h) != 1) {
                return Err(format!("{from:?} -> {to:?}: intermediate {b} left type 1"));
            }
        }
        done += 1;
    }
    Ok(done)
}

/// Type-0/type-≥2 picker: the returned element gives two bases of `m`.
pub fn suite_pick_type02(count: usize, seed: u64) -> Result<usize, String> {
    use paving_exchange::lemmas::pick_type02;
    let pool = relaxable(30, seed);
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (m, hs) = pool.choose(&mut rng).unwrap();
        let h = *hs.choose(&mut rng).unwrap();
        let Some(x) = random_of_type(m.n(), m.rank(), h, 0, &mut rng) else {
            continue;
        };
        let ty = rng.gen_range(2..=m.rank());
        let Some(y) = random_of_type(m.n(), m.rank(), h, ty, &mut rng) else {
            continue;
        };
        let outside: Vec<usize> = (y - h).iter().collect();
        let a = *outside.choose(&mut rng).unwrap();
        let s = pick_type02(m, h, x, y, a).map_err(|e| format!("X={x} Y={y} a={a}: {e}"))?;
        if !(x - y).contains(s) || !m.is_basis(x.swap(s, a)) || !m.is_basis(y.swap(a, s)) {
            return Err(format!("X={x} Y={y} a={a}: bad choice {s}"));
        }
        done += 1;
    }
    Ok(done)
}

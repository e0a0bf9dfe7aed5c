//! Local repair procedures.
//!
//! Each procedure takes a short window of tuples that is valid in a
//! relaxation and rewrites it. The `star` procedures return windows valid
//! in the paving matroid itself; the `repair` procedures return windows
//! whose interior tuples consist of bases of the unrelaxed matroid.
//!
//! Every window produced here is re-checked before it is returned, so a
//! mistaken case assumption surfaces as an internal error naming the case.

use crate::error::{Error, Result};
use crate::lemmas::{align, pick_type02};
use crate::matroid::Matroid;
use crate::relaxation::{is_stressed, type_of};
use crate::sequence::{step_between, ExchangeSequence};
use crate::set::ElementSet;
use crate::solver::Solver;
use crate::walk::{embed, project, State, Walk};

/// A matroid together with one of its stressed hyperplanes of size `≥ r`.
#[derive(Clone, Copy, Debug)]
pub struct StarContext<'a> {
    pub matroid: &'a Matroid,
    pub hyperplane: ElementSet,
}

impl<'a> StarContext<'a> {
    pub fn new(matroid: &'a Matroid, hyperplane: ElementSet) -> Result<Self> {
        if hyperplane.len() < matroid.rank() || !is_stressed(matroid, hyperplane)? {
            return Err(Error::precondition(format!(
                "{{{hyperplane}}} is not a stressed hyperplane of size >= r"
            )));
        }
        Ok(StarContext {
            matroid,
            hyperplane,
        })
    }
}

/// Two-step window `(X,Y) -> (X-a+s, Y-s+a) -> (X',Y')` with all four outer
/// sets bases of a paving matroid; returns a sequence using bases only.
#[allow(clippy::too_many_arguments)]
pub fn star_degree2(
    solver: &mut Solver,
    ctx: &StarContext,
    x: ElementSet,
    y: ElementSet,
    x_end: ElementSet,
    y_end: ElementSet,
    a: usize,
    s: usize,
    t: usize,
    b: usize,
) -> Result<ExchangeSequence> {
    let mid = vec![x.swap(a, s), y.swap(s, a)];
    if !mid[0].is_subset(ctx.hyperplane) && !mid[1].is_subset(ctx.hyperplane) {
        solver.count("star2/verbatim");
    }
    let end = vec![mid[0].swap(t, b), mid[1].swap(b, t)];
    if end != [x_end, y_end] {
        return Err(Error::precondition("the exchanges do not lead to (X', Y')"));
    }
    let window = vec![vec![x, y], mid, end];
    check_window_structure(&window)?;
    ExchangeSequence::from_states(&star2(solver, ctx.matroid, &window)?)
}

/// `(X,Y) -> (X-s+t, Y-t+s)` with `X`, `X'` of type 0 and `Y`, `Y'` bases of
/// type ≥ 2, rewritten into three steps whose interior uses bases only.
pub fn repair_type0_pair(
    ctx: &StarContext,
    x: ElementSet,
    y: ElementSet,
    s: usize,
    t: usize,
) -> Result<ExchangeSequence> {
    let from = vec![x, y];
    let to = vec![x.swap(s, t), y.swap(t, s)];
    ExchangeSequence::from_states(&pair_repair(ctx.matroid, ctx.hyperplane, &from, &to)?)
}

/// Degree-3 window: `X` exchanges `a` for `s` with `Y`, then `t` for `b` with
/// `Z`. All outer sets are bases of the paving matroid.
#[allow(clippy::too_many_arguments)]
pub fn star_degree3(
    solver: &mut Solver,
    ctx: &StarContext,
    x: ElementSet,
    y: ElementSet,
    z: ElementSet,
    a: usize,
    s: usize,
    t: usize,
    b: usize,
) -> Result<ExchangeSequence> {
    let s0 = vec![x, y, z];
    let s1 = vec![x.swap(a, s), y.swap(s, a), z];
    let s2 = vec![s1[0].swap(t, b), s1[1], z.swap(b, t)];
    let window = vec![s0, s1, s2];
    check_window_structure(&window)?;
    ExchangeSequence::from_states(&star3(solver, ctx.matroid, &window, 0)?)
}

/// `(X,Y,Z) -> (X, Y-y+z, Z-z+y)` where `X` has type 0 and the other four
/// sets are bases with total type ≥ 3; the rewrite keeps its interior in
/// the unrelaxed matroid.
pub fn repair_xbb(
    solver: &mut Solver,
    ctx: &StarContext,
    x: ElementSet,
    y: ElementSet,
    z: ElementSet,
    y_el: usize,
    z_el: usize,
) -> Result<ExchangeSequence> {
    if y_el == z_el {
        return Err(Error::precondition(
            "the exchange must move two distinct elements",
        ));
    }
    let from = vec![x, y, z];
    let to = vec![x, y.swap(y_el, z_el), z.swap(z_el, y_el)];
    check_window_structure(&[from.clone(), to.clone()])?;
    ExchangeSequence::from_states(&xbb(solver, ctx.matroid, ctx.hyperplane, &from, &to)?)
}

fn check_window_structure(states: &[State]) -> Result<()> {
    for pair in states.windows(2) {
        step_between(&pair[0], &pair[1])
            .map_err(|e| Error::precondition(format!("not an exchange window: {e}")))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// shared helpers

fn all_bases(m: &Matroid, state: &[ElementSet]) -> bool {
    state.iter().all(|b| m.is_basis(*b))
}

/// `(out, in)` with `after = before - out + in`.
fn diff1(before: ElementSet, after: ElementSet) -> Result<(usize, usize)> {
    match ((before - after).single(), (after - before).single()) {
        (Some(o), Some(i)) => Ok((o, i)),
        _ => Err(Error::internal(format!(
            "{{{before}}} -> {{{after}}} is not a single exchange"
        ))),
    }
}

fn circuit(m: &Matroid, basis: ElementSet, e: usize) -> Result<ElementSet> {
    m.fundamental_circuit(basis, e)
        .map_err(|err| Error::internal(format!("fundamental circuit: {err}")))
}

/// Rejects a result that leaves the matroid or skips a state.
fn finish(m: &Matroid, states: Vec<State>, label: &str) -> Result<Vec<State>> {
    for (k, st) in states.iter().enumerate() {
        if let Some(b) = st.iter().find(|b| !m.is_basis(**b)) {
            return Err(Error::internal(format!(
                "{label}: tuple {k} holds non-basis {{{b}}}"
            )));
        }
    }
    Ok(states)
}

/// As [`finish`] but only the interior tuples must be bases.
fn finish_interior(m: &Matroid, states: Vec<State>, label: &str) -> Result<Vec<State>> {
    if states.len() < 3 {
        return Err(Error::internal(format!("{label}: rewrite is too short")));
    }
    for (k, st) in states.iter().enumerate().take(states.len() - 1).skip(1) {
        if let Some(b) = st.iter().find(|b| !m.is_basis(**b)) {
            return Err(Error::internal(format!(
                "{label}: interior tuple {k} holds non-basis {{{b}}}"
            )));
        }
    }
    Ok(states)
}

fn permute(states: &[State], order: &[usize]) -> Vec<State> {
    states.iter().map(|s| project(s, order)).collect()
}

/// Time reversal combined with swapping rows 1 and 2. It maps a canonical
/// degree-3 window onto the canonical form of its symmetric counterpart and
/// is its own inverse.
fn mirror(states: &[State]) -> Vec<State> {
    let mut out = permute(states, &[0, 2, 1]);
    out.reverse();
    out
}

fn reversed(mut states: Vec<State>) -> Vec<State> {
    states.reverse();
    states
}

fn hyperplane_of(m: &Matroid, dependent: ElementSet) -> Result<ElementSet> {
    if m.rank_of(dependent) + 1 != m.rank() {
        return Err(Error::precondition(format!(
            "{{{dependent}}} does not span a hyperplane; the matroid is not paving"
        )));
    }
    Ok(m.closure(dependent))
}

/// Rows that differ between two tuples.
pub(crate) fn changed_rows(a: &[ElementSet], b: &[ElementSet]) -> Vec<usize> {
    (0..a.len()).filter(|&r| a[r] != b[r]).collect()
}

// ---------------------------------------------------------------------------
// degree 2

/// Resolves a two-step window on two rows whose middle tuple holds exactly
/// one non-basis.
pub(crate) fn star2(solver: &mut Solver, m: &Matroid, w: &[State]) -> Result<Vec<State>> {
    if w.len() != 3 {
        return Err(Error::internal("degree-2 window must hold three tuples"));
    }
    if all_bases(m, &w[1]) {
        solver.count("star2/verbatim");
        return Ok(w.to_vec());
    }
    if !all_bases(m, &w[0]) || !all_bases(m, &w[2]) {
        return Err(Error::precondition(
            "window endpoints must consist of bases",
        ));
    }
    let bad: Vec<usize> = (0..2).filter(|&r| !m.is_basis(w[1][r])).collect();
    match bad.as_slice() {
        [0] => star2_oriented(solver, m, w),
        [1] => {
            let flipped = permute(w, &[1, 0]);
            Ok(permute(&star2_oriented(solver, m, &flipped)?, &[1, 0]))
        }
        _ => Err(Error::precondition(
            "both middle sets are non-bases; the window lies in no single relaxation",
        )),
    }
}

fn star2_oriented(solver: &mut Solver, m: &Matroid, w: &[State]) -> Result<Vec<State>> {
    let (x, y) = (w[0][0], w[0][1]);
    let xm = w[1][0];
    let (a, s) = diff1(x, xm)?;
    let (t, b) = diff1(xm, w[2][0])?;
    if w[1][1] != y.swap(s, a) || w[2][1] != w[1][1].swap(b, t) {
        return Err(Error::internal(
            "degree-2 window exchanges are inconsistent",
        ));
    }
    let h = hyperplane_of(m, xm)?;
    let distinct = ElementSet::from_elements([a, b, s, t]).len();
    if distinct < 4 {
        solver.count("star2/trivial");
        let mut walk = Walk::new(w[0].clone());
        walk.goto(w[2].clone())?;
        return finish(m, walk.into_states(), "star2/trivial");
    }
    let ground = m.ground();
    if (x | y) != ground || !(x & y).is_empty() {
        solver.count("star2/minor");
        let states = solver.minor_solve(m, x | y, x & y, &w[0], &w[2])?;
        return finish(m, states, "star2/minor");
    }
    let xt = x - ElementSet::from_elements([a, t]);
    let yt = y - ElementSet::from_elements([b, s]);
    let mut walk = Walk::new(w[0].clone());
    let label;
    if circuit(m, w[2][1], s)?.contains(t) {
        label = "star2/step1a";
        walk.exchange(0, 1, a, b)?;
        walk.exchange(0, 1, t, s)?;
    } else if circuit(m, y, t)?.contains(s) {
        label = "star2/step1b";
        walk.exchange(0, 1, t, s)?;
        walk.exchange(0, 1, a, b)?;
    } else if m.is_basis(xt.plus(a).plus(b)) {
        label = "star2/step2";
        walk.exchange(0, 1, t, b)?;
        walk.exchange(0, 1, a, s)?;
    } else {
        let h_ab = m.closure(xt.plus(a).plus(b));
        let h_as = m.closure(yt.plus(a).plus(s));
        let h_bt = m.closure(yt.plus(b).plus(t));
        if let Some(p) = (ground - (h | h_ab)).first() {
            label = "star2/step3p";
            walk.exchange(0, 1, a, p)?;
            walk.exchange(0, 1, t, b)?;
            walk.exchange(0, 1, p, s)?;
        } else if let Some(q) = (ground - (h_as | h_bt)).first() {
            label = "star2/step3q";
            walk.exchange(0, 1, q, s)?;
            walk.exchange(0, 1, t, b)?;
            walk.exchange(0, 1, a, q)?;
        } else {
            solver.count("star2/unreachable");
            return Err(Error::internal(format!(
                "degree-2 case analysis exhausted on {:?} -> {:?}; the hyperplane count contradiction was reached",
                w[0], w[2]
            )));
        }
    }
    solver.count(label);
    finish(m, walk.into_states(), label)
}

/// The three-step rewrite of a type-0 exchange `(X,Y) -> (X',Y')` through
/// bases of `m`.
pub(crate) fn pair_repair(
    m: &Matroid,
    h: ElementSet,
    from: &State,
    to: &State,
) -> Result<Vec<State>> {
    let (x, y) = (from[0], from[1]);
    let (s, t) =
        diff1(x, to[0]).map_err(|_| Error::precondition("rows must differ by one exchange"))?;
    if to[1] != y.swap(t, s) {
        return Err(Error::precondition("second row does not mirror the first"));
    }
    if !x.is_subset(h) || !to[0].is_subset(h) {
        return Err(Error::precondition(
            "first row must be of type 0 on both sides",
        ));
    }
    if type_of(y, h) < 2 || !m.is_basis(y) || !m.is_basis(to[1]) {
        return Err(Error::precondition(
            "second row must hold bases of type >= 2 on both sides",
        ));
    }
    let a = (circuit(m, y, s)? - h)
        .first()
        .ok_or_else(|| Error::internal(format!("C({{{y}}}, {s}) lies inside H")))?;
    let b = (circuit(m, to[1], t)? - h)
        .first()
        .ok_or_else(|| Error::internal(format!("C({{{}}}, {t}) lies inside H", to[1])))?;
    let mut walk = Walk::new(from.clone());
    walk.exchange(0, 1, s, a)?;
    walk.exchange(0, 1, a, b)?;
    walk.exchange(0, 1, b, t)?;
    finish_interior(m, walk.into_states(), "pair-repair")
}

// ---------------------------------------------------------------------------
// generic window resolution

/// Replaces every tuple holding a non-basis by a rewrite of the two-step
/// window around it. Non-bases must be isolated between tuples of bases.
pub(crate) fn repair_isolated(
    solver: &mut Solver,
    m: &Matroid,
    states: &[State],
    depth: usize,
) -> Result<Vec<State>> {
    let mut walk = Walk::new(states[0].clone());
    let mut j = 1;
    while j < states.len() {
        if all_bases(m, &states[j]) {
            walk.goto(states[j].clone())?;
            j += 1;
            continue;
        }
        if j + 1 >= states.len() || !all_bases(m, &states[j - 1]) || !all_bases(m, &states[j + 1]) {
            return Err(Error::internal(format!(
                "non-basis in tuple {j} is not isolated between tuples of bases"
            )));
        }
        let window = [
            states[j - 1].clone(),
            states[j].clone(),
            states[j + 1].clone(),
        ];
        let resolved = resolve_window(solver, m, &window, depth)?;
        walk.extend(&resolved)?;
        j += 2;
    }
    Ok(walk.into_states())
}

/// Dispatches a two-step window to the degree-2 or degree-3 procedure on
/// the rows it touches.
pub(crate) fn resolve_window(
    solver: &mut Solver,
    m: &Matroid,
    w: &[State],
    depth: usize,
) -> Result<Vec<State>> {
    let r1 = changed_rows(&w[0], &w[1]);
    let r2 = changed_rows(&w[1], &w[2]);
    if r1.len() != 2 || r2.len() != 2 {
        return Err(Error::internal("window steps must each touch two rows"));
    }
    if r1 == r2 {
        let small = permute(w, &r1);
        let out = star2(solver, m, &small)?;
        return Ok(embed(&out, &r1, &w[0]));
    }
    let x = *r1
        .iter()
        .find(|r| r2.contains(r))
        .ok_or_else(|| Error::internal("window steps touch disjoint rows"))?;
    let y = *r1.iter().find(|&&r| r != x).expect("two rows");
    let z = *r2.iter().find(|&&r| r != x).expect("two rows");
    let rows = [x, y, z];
    if rows[1..].iter().any(|&r| !m.is_basis(w[1][r])) {
        return Err(Error::internal("non-basis outside the shared row"));
    }
    let small = permute(w, &rows);
    let out = star3(solver, m, &small, depth + 1)?;
    Ok(embed(&out, &rows, &w[0]))
}

// ---------------------------------------------------------------------------
// degree 3

/// Named pieces of a canonical degree-3 window: row 0 trades `a` for `s`
/// with row 1, then `t` for `b` with row 2.
struct Frame {
    x: ElementSet,
    y: ElementSet,
    z: ElementSet,
    y1: ElementSet,
    x1: ElementSet,
    z1: ElementSet,
    a: usize,
    s: usize,
    t: usize,
    b: usize,
    h: ElementSet,
}

impl Frame {
    fn new(m: &Matroid, w: &[State]) -> Result<Self> {
        let (x, y, z) = (w[0][0], w[0][1], w[0][2]);
        let xm = w[1][0];
        let (a, s) = diff1(x, xm)?;
        let (t, b) = diff1(xm, w[2][0])?;
        if w[1][1] != y.swap(s, a) || w[1][2] != z || w[2][1] != w[1][1] || w[2][2] != z.swap(b, t)
        {
            return Err(Error::internal("degree-3 window is not in canonical form"));
        }
        Ok(Frame {
            x,
            y,
            z,
            y1: w[1][1],
            x1: w[2][0],
            z1: w[2][2],
            a,
            s,
            t,
            b,
            h: hyperplane_of(m, xm)?,
        })
    }

    fn start(&self) -> State {
        vec![self.x, self.y, self.z]
    }

    fn end(&self) -> State {
        vec![self.x1, self.y1, self.z1]
    }
}

type Attempt = Result<Option<Vec<State>>>;
type Case = fn(&mut Solver, &Matroid, &[State], &Frame, usize) -> Attempt;

/// Tries `case` on the window, then on its mirror image.
fn both_ways(solver: &mut Solver, m: &Matroid, w: &[State], depth: usize, case: Case) -> Attempt {
    let f = Frame::new(m, w)?;
    if let Some(out) = case(solver, m, w, &f, depth)? {
        return Ok(Some(out));
    }
    let mw = mirror(w);
    let mf = Frame::new(m, &mw)?;
    Ok(case(solver, m, &mw, &mf, depth)?.map(|out| mirror(&out)))
}

/// Resolves a canonical degree-3 window valid in the relaxation at the
/// closure of its middle set.
pub(crate) fn star3(
    solver: &mut Solver,
    m: &Matroid,
    w: &[State],
    depth: usize,
) -> Result<Vec<State>> {
    if depth > solver.max_depth() {
        return Err(Error::internal(format!(
            "degree-3 recursion exceeded the depth cap of {}",
            solver.max_depth()
        )));
    }
    if all_bases(m, &w[1]) {
        solver.count("star3/verbatim");
        return finish(m, w.to_vec(), "star3/verbatim");
    }
    if !all_bases(m, &w[0]) || !all_bases(m, &w[2]) {
        return Err(Error::precondition(
            "window endpoints must consist of bases",
        ));
    }
    let f = Frame::new(m, w)?;
    if f.s == f.t && f.a == f.b {
        solver.count("star3/degree2");
        let mut walk = Walk::new(f.start());
        walk.goto(f.end())?;
        return finish(m, walk.into_states(), "star3/degree2");
    }
    if f.s == f.t {
        return degenerate_one(solver, m, &f);
    }
    if f.a == f.b {
        return degenerate_two(solver, m, &f);
    }
    let cases: [(&str, Case); 2] = [
        ("star3/degenerate-III", degenerate_three),
        ("star3/degenerate-IV", degenerate_four),
    ];
    for (label, case) in cases {
        if let Some(out) = both_ways(solver, m, w, depth, case)? {
            solver.count(label);
            return Ok(out);
        }
    }
    let ground = m.ground();
    let common = f.x & f.y & f.z;
    if (f.x | f.y | f.z) != ground || !common.is_empty() {
        solver.count("star3/minor");
        let states = solver.minor_solve(m, f.x | f.y | f.z, common, &f.start(), &f.end())?;
        return finish(m, states, "star3/minor");
    }
    let steps: [(&str, Case); 5] = [
        ("star3/step1", step_one),
        ("star3/step2", step_two),
        ("star3/step3", step_three),
        ("star3/step4", step_four),
        ("star3/step5", step_five),
    ];
    for (label, case) in steps {
        if let Some(out) = both_ways(solver, m, w, depth, case)? {
            solver.count(label);
            return finish(m, out, label);
        }
    }
    solver.count("star3/unreachable");
    Err(Error::internal(format!(
        "degree-3 case analysis exhausted on {:?} -> {:?}; the hyperplane count contradiction was reached",
        f.start(),
        f.end()
    )))
}

fn degenerate_one(solver: &mut Solver, m: &Matroid, f: &Frame) -> Result<Vec<State>> {
    solver.count("star3/degenerate-I");
    let (a, s, b) = (f.a, f.s, f.b);
    let p = (f.x - f.z)
        .iter()
        .find(|&p| m.is_basis(f.x.swap(p, b)) && m.is_basis(f.z.swap(b, p)))
        .ok_or_else(|| Error::internal("no exchange partner for b between X and Z"))?;
    let mut walk = Walk::new(f.start());
    if p == a {
        walk.exchange(0, 2, a, b)?;
        walk.exchange(1, 2, s, a)?;
    } else {
        walk.exchange(0, 2, p, b)?;
        walk.exchange(0, 1, a, s)?;
        walk.exchange(0, 2, s, p)?;
    }
    finish(m, walk.into_states(), "star3/degenerate-I")
}

fn degenerate_two(solver: &mut Solver, m: &Matroid, f: &Frame) -> Result<Vec<State>> {
    solver.count("star3/degenerate-II");
    let (a, s, t) = (f.a, f.s, f.t);
    let q = (f.y - f.x)
        .iter()
        .find(|&q| m.is_basis(f.x.swap(a, q)) && m.is_basis(f.y.swap(q, a)))
        .ok_or_else(|| Error::internal("no exchange partner for a between X and Y"))?;
    let p = (f.x1 - f.y1)
        .iter()
        .find(|&p| m.is_basis(f.x1.swap(p, q)) && m.is_basis(f.y1.swap(q, p)))
        .ok_or_else(|| Error::internal("no exchange partner for q between X' and Y'"))?;
    let mut walk = Walk::new(f.start());
    walk.exchange(0, 1, a, q)?;
    walk.exchange(0, 1, p, s)?;
    walk.exchange(0, 2, t, a)?;
    walk.exchange(0, 1, q, p)?;
    finish(m, walk.into_states(), "star3/degenerate-II")
}

fn degenerate_three(
    solver: &mut Solver,
    m: &Matroid,
    w: &[State],
    f: &Frame,
    depth: usize,
) -> Attempt {
    if f.z.contains(f.s) {
        return Ok(None);
    }
    let q = (circuit(m, f.z, f.s)? - f.h)
        .first()
        .ok_or_else(|| Error::internal("C(Z, s) lies inside H"))?;
    let corner = vec![f.x.swap(f.a, q), f.y1, f.z.swap(q, f.s)];
    let first = star3(
        solver,
        m,
        &[w[0].clone(), w[1].clone(), corner.clone()],
        depth + 1,
    )?;
    let rest = solver.solve_states(m, &project(&corner, &[0, 2]), &project(&f.end(), &[0, 2]))?;
    let mut walk = Walk::new(f.start());
    walk.extend(&first)?;
    walk.extend(&embed(&rest, &[0, 2], &corner))?;
    Ok(Some(finish(m, walk.into_states(), "star3/degenerate-III")?))
}

fn degenerate_four(
    solver: &mut Solver,
    m: &Matroid,
    _w: &[State],
    f: &Frame,
    depth: usize,
) -> Attempt {
    if !f.y.contains(f.b) {
        return Ok(None);
    }
    let (a, s, t, b) = (f.a, f.s, f.t, f.b);
    let c = circuit(m, f.y, a)?;
    let mut walk = Walk::new(f.start());
    if c.contains(b) {
        walk.exchange(0, 1, a, b)?;
        walk.exchange(0, 1, b, s)?;
        walk.exchange(0, 2, t, b)?;
    } else if c.contains(t) {
        if f.z.contains(a) {
            walk.exchange(1, 2, t, a)?;
            walk.exchange(0, 2, a, b)?;
            walk.exchange(0, 1, t, s)?;
        } else {
            walk.exchange(0, 2, a, b)?;
            walk.exchange(1, 2, t, a)?;
            walk.exchange(0, 1, t, s)?;
        }
    } else {
        return Err(Error::internal("C(Y, a) contains neither b nor t"));
    }
    let out = repair_isolated(solver, m, &walk.into_states(), depth)?;
    Ok(Some(finish(m, out, "star3/degenerate-IV")?))
}

/// `X~`, `Y~`, `Z~`: the rows with the moving elements removed.
fn cores(f: &Frame) -> (ElementSet, ElementSet, ElementSet) {
    let e = |xs: [usize; 2]| ElementSet::from_elements(xs);
    (
        f.x - e([f.a, f.t]),
        f.y - e([f.s, f.t]),
        f.z - e([f.b, f.s]),
    )
}

fn step_one(_: &mut Solver, m: &Matroid, _w: &[State], f: &Frame, _: usize) -> Attempt {
    let (xt, _, _) = cores(f);
    if !m.is_basis(xt.plus(f.a).plus(f.b)) {
        return Ok(None);
    }
    let mut walk = Walk::new(f.start());
    walk.exchange(0, 2, f.t, f.b)?;
    walk.exchange(0, 1, f.a, f.s)?;
    Ok(Some(walk.into_states()))
}

fn step_two(solver: &mut Solver, m: &Matroid, _w: &[State], f: &Frame, depth: usize) -> Attempt {
    if !circuit(m, f.z, f.t)?.contains(f.s) {
        return Ok(None);
    }
    let mut walk = Walk::new(f.start());
    walk.exchange(0, 2, f.t, f.s)?;
    walk.exchange(1, 2, f.s, f.b)?;
    walk.exchange(0, 1, f.a, f.b)?;
    Ok(Some(repair_isolated(
        solver,
        m,
        &walk.into_states(),
        depth,
    )?))
}

fn step_three(solver: &mut Solver, m: &Matroid, _w: &[State], f: &Frame, _: usize) -> Attempt {
    let (xt, _, zt) = cores(f);
    let h_zbt = m.closure(zt.plus(f.b).plus(f.t));
    if h_zbt.contains(f.a) {
        return Ok(None);
    }
    let corner = vec![xt.plus(f.b).plus(f.s), f.y, zt.plus(f.a).plus(f.t)];
    let rows = [0, 2];
    let first = solver.solve_states(m, &project(&f.start(), &rows), &project(&corner, &rows))?;
    let mut walk = Walk::new(f.start());
    walk.extend(&embed(&first, &rows, &f.start()))?;
    walk.exchange(1, 2, f.s, f.a)?;
    Ok(Some(walk.into_states()))
}

fn step_four(_: &mut Solver, m: &Matroid, _w: &[State], f: &Frame, _: usize) -> Attempt {
    let (xt, yt, _) = cores(f);
    let h_ab = m.closure(xt.plus(f.a).plus(f.b));
    let Some(p) = (m.ground() - (f.h | h_ab)).first() else {
        return Ok(None);
    };
    if !yt.contains(p) {
        return Ok(None);
    }
    let mut walk = Walk::new(f.start());
    walk.exchange(0, 1, f.a, p)?;
    walk.exchange(0, 2, f.t, f.b)?;
    walk.exchange(0, 1, p, f.s)?;
    Ok(Some(walk.into_states()))
}

fn step_five(_: &mut Solver, m: &Matroid, _w: &[State], f: &Frame, _: usize) -> Attempt {
    let (xt, yt, zt) = cores(f);
    let h_abs = m.closure(yt.plus(f.a).plus(f.s));
    let h_t = m.closure(yt.plus(f.t));
    let Some(p) = (m.ground() - (h_abs | h_t)).first() else {
        return Ok(None);
    };
    let mut walk = Walk::new(f.start());
    if zt.contains(p) {
        walk.exchange(1, 2, f.t, p)?;
        walk.exchange(0, 1, f.t, f.s)?;
        walk.exchange(0, 2, f.a, f.b)?;
        walk.exchange(1, 2, p, f.a)?;
    } else if xt.contains(p) {
        walk.exchange(0, 1, p, f.s)?;
        walk.exchange(0, 2, f.t, f.b)?;
        walk.exchange(0, 1, f.a, p)?;
    } else {
        return Ok(None);
    }
    Ok(Some(walk.into_states()))
}

// ---------------------------------------------------------------------------
// type-0 row beside an exchange of two bases

/// Rewrites `(X,Y,Z) -> (X,Y',Z')` where `X` has type 0 and `Y,Z,Y',Z'` are
/// bases with total type ≥ 3. Interior tuples hold bases only.
pub(crate) fn xbb(
    solver: &mut Solver,
    m: &Matroid,
    h: ElementSet,
    from: &State,
    to: &State,
) -> Result<Vec<State>> {
    let (x, y, z) = (from[0], from[1], from[2]);
    if to[0] != x {
        return Err(Error::precondition("first row must stay fixed"));
    }
    let (ye, ze) =
        diff1(y, to[1]).map_err(|_| Error::precondition("rows 1,2 must differ by one exchange"))?;
    if to[2] != z.swap(ze, ye) {
        return Err(Error::precondition("rows 1,2 must differ by one exchange"));
    }
    if !x.is_subset(h) {
        return Err(Error::precondition("first row must be of type 0"));
    }
    if !all_bases(m, &from[1..]) || !all_bases(m, &to[1..]) {
        return Err(Error::precondition("rows 1,2 must hold bases"));
    }
    let total = type_of(y, h) + type_of(z, h);
    if total < 3 {
        return Err(Error::precondition(
            "total type of rows 1,2 must be at least 3",
        ));
    }
    if total == 3 {
        solver.count("xbb/type3");
        let left = to_type_one(m, h, from)?;
        let right = to_type_one(m, h, to)?;
        let mut walk = Walk::new(from.clone());
        walk.goto(left.clone())?;
        walk.extend(&align(h, &left, &right)?)?;
        walk.goto(to.clone())?;
        return finish_interior(m, walk.into_states(), "xbb/type3");
    }
    if type_of(y, h) < 2 {
        let flipped = [project(from, &[0, 2, 1]), project(to, &[0, 2, 1])];
        let out = xbb_oriented(solver, m, h, &flipped[0], &flipped[1])?;
        return Ok(permute(&out, &[0, 2, 1]));
    }
    xbb_oriented(solver, m, h, from, to)
}

/// The type-2 row of a total-type-3 tuple trades an outside element with
/// the type-0 row so that all three rows have type 1.
fn to_type_one(m: &Matroid, h: ElementSet, state: &State) -> Result<State> {
    let w = if type_of(state[1], h) == 2 { 1 } else { 2 };
    let a = (state[w] - h)
        .first()
        .expect("type 2 row has outside elements");
    let s = pick_type02(m, h, state[0], state[w], a)?;
    let mut out = state.clone();
    out[0] = state[0].swap(s, a);
    out[w] = state[w].swap(a, s);
    Ok(out)
}

fn xbb_oriented(
    solver: &mut Solver,
    m: &Matroid,
    h: ElementSet,
    from: &State,
    to: &State,
) -> Result<Vec<State>> {
    let (x, y) = (from[0], from[1]);
    let (ye, ze) = diff1(y, to[1])?;
    let mut walk = Walk::new(from.clone());
    let label = match (h.contains(ye), h.contains(ze)) {
        (false, false) => {
            let p = pick_type02(m, h, x, y, ye)?;
            walk.exchange(0, 1, p, ye)?;
            walk.exchange(0, 2, ye, ze)?;
            walk.exchange(0, 1, ze, p)?;
            "xbb/I"
        }
        (false, true) => {
            let p = pick_type02(m, h, x, y, ye)?;
            let xp = x.swap(p, ye);
            let q = if x.contains(ze) {
                ze
            } else {
                (xp - from[2])
                    .iter()
                    .find(|&q| m.is_basis(xp.swap(q, ze)) && m.is_basis(from[2].swap(ze, q)))
                    .ok_or_else(|| Error::internal("xbb/II: no partner for z"))?
            };
            walk.exchange(0, 1, p, ye)?;
            walk.exchange(0, 2, q, ze)?;
            walk.exchange(0, 1, ze, p)?;
            walk.exchange(0, 2, ye, q)?;
            "xbb/II"
        }
        (true, false) => {
            let out = xbb_oriented(solver, m, h, to, from)?;
            return Ok(reversed(out));
        }
        (true, true) => {
            if x.contains(ye) && x.contains(ze) {
                let c = (circuit(m, y, ze)? - h)
                    .first()
                    .ok_or_else(|| Error::internal("C(Y, z) lies inside H"))?;
                walk.exchange(0, 1, ze, c)?;
                walk.exchange(0, 2, ye, ze)?;
                walk.exchange(0, 1, c, ye)?;
            } else if !x.contains(ye) && x.contains(ze) {
                let out = xbb_oriented(solver, m, h, to, from)?;
                return Ok(reversed(out));
            } else {
                xbb_case_three(solver, m, h, &mut walk, from, to, ye, ze)?;
            }
            "xbb/III"
        }
    };
    solver.count(label);
    finish_interior(m, walk.into_states(), label)
}

#[allow(clippy::too_many_arguments)]
fn xbb_case_three(
    solver: &mut Solver,
    m: &Matroid,
    h: ElementSet,
    walk: &mut Walk,
    from: &State,
    to: &State,
    ye: usize,
    ze: usize,
) -> Result<()> {
    let (x, y) = (from[0], from[1]);
    let c = (y - h).first().expect("type >= 2 row");
    let p = pick_type02(m, h, x, y, c)?;
    let (xc, yc) = (x.swap(p, c), y.swap(c, p));
    let q = if x.contains(ye) {
        ye
    } else {
        (xc - yc)
            .iter()
            .find(|&q| m.is_basis(xc.swap(q, ye)) && m.is_basis(yc.swap(ye, q)))
            .ok_or_else(|| Error::internal("xbb/III: no partner for y"))?
    };
    walk.exchange(0, 1, p, c)?;
    walk.exchange(0, 1, q, ye)?;
    walk.exchange(0, 2, ye, ze)?;
    // from here to (X, Y') through a pair of bases one exchange away
    let y_end = to[1];
    let c2 = (y_end - h).first().expect("type >= 2 row");
    let p2 = pick_type02(m, h, x, y_end, c2)?;
    let target = vec![x.swap(p2, c2), y_end.swap(c2, p2), to[2]];
    let rows = [0, 1];
    let current = walk.current().clone();
    let link = solver.solve_states(m, &project(&current, &rows), &project(&target, &rows))?;
    walk.extend(&embed(&link, &rows, &current))?;
    walk.exchange(0, 1, c2, p2)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::relaxation::relax;
    use crate::sequence::{validate_sequence, validate_with, BasisTuple};

    fn set(s: &str) -> ElementSet {
        s.parse().unwrap()
    }

    #[test]
    fn star2_on_m1() {
        let m1 = catalog::m1();
        let ctx = StarContext::new(&m1, set("0,1")).unwrap();
        let mut solver = Solver::new();
        // ({0,2},{1,3}) -> ({0,1},{2,3}) -> ({0,3},{1,2})
        let seq = star_degree2(
            &mut solver,
            &ctx,
            set("0,2"),
            set("1,3"),
            set("0,3"),
            set("1,2"),
            2,
            1,
            1,
            3,
        )
        .unwrap();
        let end = BasisTuple(vec![set("0,3"), set("1,2")]);
        assert!(validate_sequence(&m1, &seq, &end).is_ok());
    }

    #[test]
    fn star2_verbatim_when_middle_is_basis() {
        let m2 = catalog::m2();
        let ctx = StarContext::new(&m2, set("0,1,2,3")).unwrap();
        let mut solver = Solver::new();
        let seq = star_degree2(
            &mut solver,
            &ctx,
            set("0,1,4"),
            set("2,3,5"),
            set("1,2,5"),
            set("0,3,4"),
            0,
            2,
            4,
            5,
        )
        .unwrap();
        assert_eq!(seq.len(), 2);
    }

    #[test]
    fn pair_repair_on_m2() {
        let m2 = catalog::m2();
        let h = set("0,1,2,3");
        let ctx = StarContext::new(&m2, h).unwrap();
        let seq = repair_type0_pair(&ctx, set("0,1,2"), set("3,4,5"), 0, 3).unwrap();
        let end = BasisTuple(vec![set("1,2,3"), set("0,4,5")]);
        assert!(validate_sequence(&relax(&m2, h).unwrap(), &seq, &end).is_ok());
        let states = seq.states().unwrap();
        for st in &states[1..states.len() - 1] {
            assert!(st.iter().all(|b| m2.is_basis(*b)));
        }
        let normalized = crate::sequence::normalize_sequence(&seq).unwrap();
        assert!(normalized.len() >= 2);

        assert!(repair_type0_pair(&ctx, set("0,1,2"), set("0,3,4"), 1, 3).is_err());
    }

    #[test]
    fn xbb_on_m2() {
        let m2 = catalog::m2();
        let h = set("0,1,2,3");
        let ctx = StarContext::new(&m2, h).unwrap();
        let mut solver = Solver::new();
        // X type 0, Y type 2, Z type 2; exchange 4 and 5 which lie outside H
        let (x, y, z) = (set("0,1,2"), set("0,4,6"), set("3,5,7"));
        let m = crate::matroid::make_paving_from_hyperplanes(8, 3, &[h]).unwrap();
        let ctx8 = StarContext::new(&m, h).unwrap();
        let seq = repair_xbb(&mut solver, &ctx8, x, y, z, 4, 5).unwrap();
        let end = BasisTuple(vec![x, set("0,5,6"), set("3,4,7")]);
        assert!(validate_with(|b| relax(&m, h).unwrap().is_basis(b), &seq, &end).is_ok());
        assert!(repair_xbb(
            &mut solver,
            &ctx,
            set("0,1,2"),
            set("0,4,5"),
            set("3,4,5"),
            4,
            4
        )
        .is_err());
    }
}

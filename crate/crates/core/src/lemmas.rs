//! Building blocks: solving uniform matroids, solving tuples whose entries
//! all have type at most 1, and the type-0/type-2 exchange picker.

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::relaxation::{is_stressed, type_of};
use crate::sequence::{BasisTuple, ExchangeSequence};
use crate::set::ElementSet;
use crate::walk::{State, Walk};

pub(crate) fn check_same_union(a: &BasisTuple, b: &BasisTuple) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::precondition(format!(
            "tuples have degrees {} and {}",
            a.degree(),
            b.degree()
        )));
    }
    if a.multiset_union() != b.multiset_union() {
        return Err(Error::precondition(format!(
            "multiset unions differ: [{}] vs [{}]",
            a.multiset_union(),
            b.multiset_union()
        )));
    }
    Ok(())
}

fn check_sizes(r: usize, tuples: [&BasisTuple; 2]) -> Result<()> {
    for t in tuples {
        if let Some(b) = t.entries().iter().find(|b| b.len() != r) {
            return Err(Error::precondition(format!(
                "{{{b}}} does not have {r} elements"
            )));
        }
    }
    Ok(())
}

/// Exchange sequence between two tuples of the uniform matroid `u`.
pub fn solve_uniform(u: &Matroid, from: &BasisTuple, to: &BasisTuple) -> Result<ExchangeSequence> {
    if !u.is_uniform() {
        return Err(Error::precondition("matroid is not uniform"));
    }
    check_same_union(from, to)?;
    check_sizes(u.rank(), [from, to])?;
    let states = align(u.ground(), &from.0, &to.0)?;
    ExchangeSequence::from_states(&states)
}

/// Exchange sequence in the relaxation of `m` at `h` between two tuples of
/// type-≤1 sets, keeping every intermediate set of type ≤ 1.
pub fn solve_type_le1(
    m: &Matroid,
    h: ElementSet,
    from: &BasisTuple,
    to: &BasisTuple,
) -> Result<ExchangeSequence> {
    check_stressed(m, h)?;
    check_same_union(from, to)?;
    check_sizes(m.rank(), [from, to])?;
    for b in from.entries().iter().chain(to.entries()) {
        if type_of(*b, h) > 1 {
            return Err(Error::precondition(format!(
                "{{{b}}} has type {} relative to {{{h}}}",
                type_of(*b, h)
            )));
        }
    }
    let states = align(h, &from.0, &to.0)?;
    ExchangeSequence::from_states(&states)
}

/// As [`solve_type_le1`] for tuples of type-1 sets only; every intermediate
/// set is then of type exactly 1, hence a basis of `m` itself.
pub fn solve_type1_bases(
    m: &Matroid,
    h: ElementSet,
    from: &BasisTuple,
    to: &BasisTuple,
) -> Result<ExchangeSequence> {
    for b in from.entries().iter().chain(to.entries()) {
        if type_of(*b, h) != 1 {
            return Err(Error::precondition(format!(
                "{{{b}}} is not of type 1 relative to {{{h}}}"
            )));
        }
    }
    let seq = solve_type_le1(m, h, from, to)?;
    let states = seq.states().map_err(|f| Error::internal(f.to_string()))?;
    for state in &states {
        if let Some(b) = state.iter().find(|b| type_of(**b, h) != 1) {
            return Err(Error::internal(format!(
                "intermediate set {{{b}}} left type 1"
            )));
        }
    }
    Ok(seq)
}

fn check_stressed(m: &Matroid, h: ElementSet) -> Result<()> {
    if h.len() < m.rank() || !is_stressed(m, h)? {
        return Err(Error::precondition(format!(
            "{{{h}}} is not a stressed hyperplane of size >= r"
        )));
    }
    Ok(())
}

/// Smallest `s ∈ x \ y` with `x - s + a` and `y - a + s` both bases of `m`.
///
/// `x` must be of type 0 and `y` a basis of type ≥ 2 relative to the
/// stressed hyperplane `h`, with `a ∈ y \ h`.
pub fn pick_type02(
    m: &Matroid,
    h: ElementSet,
    x: ElementSet,
    y: ElementSet,
    a: usize,
) -> Result<usize> {
    if h.contains(a) || !y.contains(a) {
        return Err(Error::precondition(format!("{a} is not in {{{y}}} \\ H")));
    }
    if type_of(x, h) != 0 || type_of(y, h) < 2 {
        return Err(Error::precondition(format!(
            "need a type-0 set and a type->=2 basis, got {{{x}}} and {{{y}}}"
        )));
    }
    (x - y)
        .iter()
        .find(|&s| m.is_basis(x.swap(s, a)) && m.is_basis(y.swap(a, s)))
        .ok_or_else(|| {
            Error::internal(format!(
                "no exchange partner for {a} between {{{x}}} and {{{y}}}"
            ))
        })
}

/// Element-level alignment of two tuples whose entries all have at most one
/// element outside `h`. Taking `h` to be the ground set handles uniform
/// matroids. Returns the visited tuples.
pub(crate) fn align(h: ElementSet, from: &[ElementSet], to: &[ElementSet]) -> Result<Vec<State>> {
    let n = from.len();
    let mut walk = Walk::new(from.to_vec());
    let stuck =
        |what: &str, m: usize| Error::internal(format!("alignment stuck at position {m}: {what}"));

    // outside-h parts first
    for m in 0..n {
        let cur = walk.current()[m] - h;
        let target = to[m] - h;
        if cur == target {
            continue;
        }
        match (cur.single(), target.single()) {
            (cur_out, Some(b)) => {
                let state = walk.current();
                let k = (m + 1..n)
                    .find(|&k| state[k].contains(b))
                    .ok_or_else(|| stuck("no later set holds the target element", m))?;
                let give = match cur_out {
                    Some(a) => a,
                    None => (state[m] - state[k])
                        .first()
                        .ok_or_else(|| stuck("nothing to give", m))?,
                };
                walk.exchange(m, k, give, b)?;
            }
            (Some(a), None) => {
                let state = walk.current();
                let k = (m + 1..n)
                    .find(|&k| (state[k] - h).is_empty())
                    .ok_or_else(|| stuck("no later type-0 set", m))?;
                let c = (state[k] - state[m])
                    .first()
                    .ok_or_else(|| stuck("nothing to take", m))?;
                walk.exchange(m, k, a, c)?;
            }
            (None, None) => return Err(stuck("entry has type above 1", m)),
        }
    }

    // then the parts inside h
    for m in 0..n {
        let mut guard = 0usize;
        while walk.current()[m] != to[m] {
            guard += 1;
            if guard > 2 * from[m].len() + 2 {
                return Err(stuck("no progress", m));
            }
            let state = walk.current().clone();
            let missing = to[m] - state[m];
            let extra = state[m] - to[m];
            let t = missing.first().ok_or_else(|| stuck("sizes differ", m))?;
            let holders: Vec<usize> = (m + 1..n).filter(|&k| state[k].contains(t)).collect();
            let direct = holders
                .iter()
                .find_map(|&k| (extra - state[k]).first().map(|s| (k, s)));
            if let Some((k, s)) = direct {
                walk.exchange(m, k, s, t)?;
                continue;
            }
            let k = *holders
                .first()
                .ok_or_else(|| stuck("target element missing later", m))?;
            let s = extra.first().ok_or_else(|| stuck("sizes differ", m))?;
            let l = (m + 1..n)
                .find(|&l| l != k && !state[l].contains(s))
                .ok_or_else(|| stuck("no set without the surplus element", m))?;
            let p = ((state[l] - state[k]) & h)
                .first()
                .ok_or_else(|| stuck("no pivot element", m))?;
            walk.exchange(k, l, t, p)?;
            walk.exchange(m, l, s, t)?;
        }
    }
    Ok(walk.into_states())
}

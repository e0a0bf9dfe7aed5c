//! Stressed hyperplanes and their relaxation.
//!
//! A hyperplane `H` of a rank-`r` matroid is stressed when every `r`-subset
//! of `H` is a circuit. Declaring those `r`-subsets to be bases yields a new
//! matroid, the relaxation at `H`. Every paving matroid reaches the uniform
//! matroid after finitely many relaxations.
//!
//! Relative to a fixed `H`, an `r`-set `S` has *type* `|S \ H|`. Type-0 sets
//! are exactly the new bases of the relaxation; type-1 sets are bases of the
//! original matroid.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::set::ElementSet;

pub fn is_stressed(m: &Matroid, h: ElementSet) -> Result<bool> {
    if !m.is_hyperplane(h) {
        return Err(Error::precondition(format!("{{{h}}} is not a hyperplane")));
    }
    Ok(stressed_unchecked(m, h))
}

fn stressed_unchecked(m: &Matroid, h: ElementSet) -> bool {
    // an r-subset of a rank-(r-1) flat is dependent; it is a circuit iff all
    // of its (r-1)-subsets are independent
    h.subsets_of_size(m.rank())
        .all(|s| s.iter().all(|e| m.is_independent(s.minus(e))))
}

/// The relaxation of `m` at the stressed hyperplane `h`, `|h| ≥ r`.
pub fn relax(m: &Matroid, h: ElementSet) -> Result<Matroid> {
    if h.len() < m.rank() {
        return Err(Error::precondition(format!(
            "relaxation needs |H| >= r, {{{h}}} has {} elements",
            h.len()
        )));
    }
    if !is_stressed(m, h)? {
        return Err(Error::precondition(format!(
            "hyperplane {{{h}}} is not stressed"
        )));
    }
    let added = h.subsets_of_size(m.rank());
    Matroid::from_bases(m.n(), m.rank(), m.bases().iter().copied().chain(added))
}

/// Stressed hyperplanes with at least `r` elements, sorted by bit pattern.
pub fn stressed_hyperplanes(m: &Matroid) -> Vec<ElementSet> {
    m.hyperplanes()
        .into_iter()
        .filter(|h| h.len() >= m.rank() && stressed_unchecked(m, *h))
        .collect()
}

/// Smallest stressed hyperplane of size `≥ r`, if any.
pub fn first_stressed_hyperplane(m: &Matroid) -> Option<ElementSet> {
    stressed_hyperplanes(m).into_iter().next()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxationStep {
    pub hyperplane: ElementSet,
    pub matroid: Matroid,
}

/// A chain of relaxations from `origin` to a uniform matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxationTrace {
    pub origin: Matroid,
    pub steps: Vec<RelaxationStep>,
}

impl RelaxationTrace {
    pub fn last(&self) -> &Matroid {
        self.steps.last().map_or(&self.origin, |s| &s.matroid)
    }

    /// One `relax H=<list> bases=<count>` line per step.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let _ = writeln!(
                out,
                "relax H={} bases={}",
                step.hyperplane,
                step.matroid.num_bases()
            );
        }
        out
    }
}

/// Relaxes at the smallest stressed hyperplane of size `≥ r` until the
/// matroid is uniform. Every intermediate matroid is checked to be paving.
pub fn relaxation_trace(m: &Matroid) -> Result<RelaxationTrace> {
    if !m.is_paving() {
        return Err(Error::precondition(
            "relaxation trace needs a paving matroid",
        ));
    }
    let mut steps = Vec::new();
    let mut current = m.clone();
    while !current.is_uniform() {
        let h = first_stressed_hyperplane(&current).ok_or_else(|| {
            Error::precondition(format!(
                "non-uniform matroid with {} bases has no stressed hyperplane of size >= r",
                current.num_bases()
            ))
        })?;
        let next = relax(&current, h)?;
        if !next.is_paving() {
            return Err(Error::internal(format!(
                "relaxation at {{{h}}} left the paving class"
            )));
        }
        steps.push(RelaxationStep {
            hyperplane: h,
            matroid: next.clone(),
        });
        current = next;
    }
    Ok(RelaxationTrace {
        origin: m.clone(),
        steps,
    })
}

/// `|s \ h|`.
pub fn type_of(s: ElementSet, h: ElementSet) -> usize {
    (s - h).len()
}

/// Whether `s = S' + x` with `S' ⊆ h` and `x ∉ h`. When `h` is a stressed
/// hyperplane of size `≥ r` such an `s` is always a basis.
pub fn in_b_of(h: ElementSet, x: usize, s: ElementSet) -> bool {
    s.contains(x) && !h.contains(x) && s.minus(x).is_subset(h)
}

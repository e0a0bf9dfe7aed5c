//! Brute-force ground truth over fibers.
//!
//! The fiber of a multiset is the set of ordered tuples of bases whose
//! multiset union it is; two tuples are adjacent when they differ by one
//! symmetric exchange. Everything here enumerates explicitly, so it is only
//! meant for small matroids.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::sequence::{validate_sequence, BasisTuple, ExchangeSequence, Multiset};
use crate::set::ElementSet;
use crate::solver::Solver;

/// Default bound on the number of tuples explored in one fiber.
pub const DEFAULT_CAP: usize = 10_000_000;

/// Fibers up to this size get an exact diameter; larger ones report the
/// eccentricity of their smallest tuple as a lower bound.
pub const EXACT_DIAMETER_LIMIT: usize = 1024;

type Tuple = Vec<ElementSet>;

/// Tuples one symmetric exchange away from `t`.
pub fn neighbors(m: &Matroid, t: &[ElementSet]) -> Vec<Tuple> {
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            for x in (t[i] - t[j]).iter() {
                for y in (t[j] - t[i]).iter() {
                    let (bi, bj) = (t[i].swap(x, y), t[j].swap(y, x));
                    if m.is_basis(bi) && m.is_basis(bj) {
                        let mut next = t.to_vec();
                        next[i] = bi;
                        next[j] = bj;
                        out.push(next);
                    }
                }
            }
        }
    }
    out
}

/// Every ordered tuple of `degree` bases whose multiset union is `union`,
/// in lexicographic order.
pub fn enumerate_fiber(
    m: &Matroid,
    union: &Multiset,
    degree: usize,
    cap: usize,
) -> Result<Vec<Tuple>> {
    if union.0.len() != degree * m.rank() {
        return Ok(Vec::new());
    }
    let mut counts = vec![0u32; m.n()];
    for &e in &union.0 {
        if e >= m.n() {
            return Ok(Vec::new());
        }
        counts[e] += 1;
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(degree);
    fill(m, &mut counts, degree, &mut current, &mut out, cap)?;
    Ok(out)
}

fn fill(
    m: &Matroid,
    counts: &mut [u32],
    degree: usize,
    current: &mut Tuple,
    out: &mut Vec<Tuple>,
    cap: usize,
) -> Result<()> {
    if current.len() == degree {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(current.clone());
        return Ok(());
    }
    let support: ElementSet = (0..counts.len()).filter(|&e| counts[e] > 0).collect();
    let remaining = degree - current.len();
    for &b in m.bases() {
        if !b.is_subset(support) {
            continue;
        }
        for e in b.iter() {
            counts[e] -= 1;
        }
        // each later row holds an element at most once
        if counts.iter().all(|&c| (c as usize) < remaining) {
            current.push(b);
            fill(m, counts, degree, current, out, cap)?;
            current.pop();
        }
        for e in b.iter() {
            counts[e] += 1;
        }
    }
    Ok(())
}

/// Breadth-first distances from `start` to every tuple reachable from it.
pub fn fiber_bfs(m: &Matroid, start: &[ElementSet], cap: usize) -> Result<HashMap<Tuple, usize>> {
    if let Some(b) = start.iter().find(|b| !m.is_basis(**b)) {
        return Err(Error::precondition(format!("{{{b}}} is not a basis")));
    }
    let mut dist = HashMap::new();
    dist.insert(start.to_vec(), 0);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(t) = queue.pop_front() {
        let d = dist[&t];
        for next in neighbors(m, &t) {
            if !dist.contains_key(&next) {
                if dist.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    Ok(dist)
}

/// A geodesic from `from` to `to` in the fiber graph.
pub fn shortest_sequence(
    m: &Matroid,
    from: &BasisTuple,
    to: &BasisTuple,
    cap: usize,
) -> Result<ExchangeSequence> {
    if from.degree() != to.degree() || from.multiset_union() != to.multiset_union() {
        return Err(Error::precondition("tuples have different multiset unions"));
    }
    for b in from.entries().iter().chain(to.entries()) {
        if !m.is_basis(*b) {
            return Err(Error::precondition(format!("{{{b}}} is not a basis")));
        }
    }
    let mut parent: HashMap<Tuple, Option<Tuple>> = HashMap::new();
    parent.insert(from.0.clone(), None);
    let mut queue = VecDeque::from([from.0.clone()]);
    while let Some(t) = queue.pop_front() {
        if t == to.0 {
            break;
        }
        for next in neighbors(m, &t) {
            if !parent.contains_key(&next) {
                if parent.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                parent.insert(next.clone(), Some(t.clone()));
                queue.push_back(next);
            }
        }
    }
    if !parent.contains_key(&to.0) {
        return Err(Error::internal(format!(
            "fiber of [{}] is disconnected: no path between the tuples",
            from.multiset_union()
        )));
    }
    let mut path = vec![to.0.clone()];
    while let Some(Some(prev)) = parent.get(path.last().unwrap()) {
        path.push(prev.clone());
    }
    path.reverse();
    ExchangeSequence::from_states(&path)
}

/// The fiber graph with nodes in lexicographic order.
#[derive(Clone, Debug)]
pub struct FiberGraph {
    pub union: Multiset,
    pub degree: usize,
    pub nodes: Vec<Tuple>,
    pub adjacency: Vec<Vec<usize>>,
}

impl FiberGraph {
    pub fn new(m: &Matroid, union: &Multiset, degree: usize, cap: usize) -> Result<Self> {
        let nodes = enumerate_fiber(m, union, degree, cap)?;
        let index: HashMap<&Tuple, usize> = nodes.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let adjacency = nodes
            .iter()
            .map(|t| {
                let mut adj: Vec<usize> = neighbors(m, t).iter().map(|n| index[n]).collect();
                adj.sort_unstable();
                adj
            })
            .collect();
        Ok(FiberGraph {
            union: union.clone(),
            degree,
            nodes,
            adjacency,
        })
    }

    fn distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.is_empty() || self.distances(0).iter().all(Option::is_some)
    }

    pub fn diameter(&self) -> Diameter {
        if self.nodes.is_empty() {
            return Diameter::Exact(0);
        }
        let ecc = |v: usize| self.distances(v).into_iter().flatten().max().unwrap_or(0);
        if self.nodes.len() <= EXACT_DIAMETER_LIMIT {
            Diameter::Exact((0..self.nodes.len()).map(ecc).max().unwrap_or(0))
        } else {
            Diameter::AtLeast(ecc(0))
        }
    }

    pub fn report(&self) -> FiberReport {
        FiberReport {
            union: self.union.clone(),
            size: self.nodes.len(),
            connected: self.is_connected(),
            diameter: self.diameter(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diameter {
    Exact(usize),
    AtLeast(usize),
}

impl Diameter {
    pub fn value(self) -> usize {
        match self {
            Diameter::Exact(d) | Diameter::AtLeast(d) => d,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Exact(d) => write!(f, "{d}"),
            Diameter::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub union: Multiset,
    pub size: usize,
    pub connected: bool,
    pub diameter: Diameter,
}

impl fmt::Display for FiberReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fiber union={} size={} connected={} diameter={}",
            self.union, self.size, self.connected, self.diameter
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteReport {
    pub degree: usize,
    pub fibers: Vec<FiberReport>,
}

impl WhiteReport {
    pub fn all_connected(&self) -> bool {
        self.fibers.iter().all(|f| f.connected)
    }

    pub fn max_diameter(&self) -> usize {
        self.fibers
            .iter()
            .map(|f| f.diameter.value())
            .max()
            .unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.fibers {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        let verdict = if self.all_connected() {
            "all connected".to_string()
        } else {
            format!(
                "{} disconnected",
                self.fibers.iter().filter(|f| !f.connected).count()
            )
        };
        out.push_str(&format!(
            "degree={} fibers={} max_diameter={} {verdict}\n",
            self.degree,
            self.fibers.len(),
            self.max_diameter()
        ));
        out
    }
}

/// Multiset unions of all `degree`-tuples of bases, sorted.
pub fn fiber_unions(m: &Matroid, degree: usize) -> Vec<Multiset> {
    let bases = m.bases();
    let mut seen = HashSet::new();
    let mut idx = vec![0usize; degree];
    if degree == 0 || bases.is_empty() {
        return Vec::new();
    }
    loop {
        let sets: Vec<ElementSet> = idx.iter().map(|&i| bases[i]).collect();
        seen.insert(Multiset::of(&sets));
        // next non-decreasing index list
        let mut p = degree;
        while p > 0 && idx[p - 1] == bases.len() - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        for q in p..degree {
            idx[q] = idx[p - 1];
        }
    }
    let mut out: Vec<Multiset> = seen.into_iter().collect();
    out.sort();
    out
}

/// Checks that every fiber of degree `degree` is connected. Fibers are
/// checked in parallel; the report lists them in sorted order.
pub fn verify_white(m: &Matroid, degree: usize, cap: usize) -> Result<WhiteReport> {
    let unions = fiber_unions(m, degree);
    let fibers = unions
        .par_iter()
        .map(|u| FiberGraph::new(m, u, degree, cap).map(|g| g.report()))
        .collect::<Result<Vec<_>>>()?;
    Ok(WhiteReport { degree, fibers })
}

/// `y_A y_B - y_A' y_B'` for two pairs of bases related by one exchange.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub lhs: (ElementSet, ElementSet),
    pub rhs: (ElementSet, ElementSet),
}

impl Binomial {
    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "binomial y[{}] y[{}] - y[{}] y[{}]",
            self.lhs.0, self.lhs.1, self.rhs.0, self.rhs.1
        )
    }
}

fn sorted_pair(a: ElementSet, b: ElementSet) -> (ElementSet, ElementSet) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All quadric exchange binomials, one per unordered pair of unordered
/// basis pairs. A swap that reproduces the same pair gives a trivial record.
pub fn emit_quadric_binomials(m: &Matroid) -> Vec<Binomial> {
    let mut out = HashSet::new();
    let bases = m.bases();
    for (i, &a) in bases.iter().enumerate() {
        for &b in &bases[i + 1..] {
            for x in (a - b).iter() {
                for y in (b - a).iter() {
                    let (a2, b2) = (a.swap(x, y), b.swap(y, x));
                    if m.is_basis(a2) && m.is_basis(b2) {
                        let p = sorted_pair(a, b);
                        let q = sorted_pair(a2, b2);
                        let (lhs, rhs) = if p <= q { (p, q) } else { (q, p) };
                        out.insert(Binomial { lhs, rhs });
                    }
                }
            }
        }
    }
    let mut out: Vec<Binomial> = out.into_iter().collect();
    out.sort();
    out
}

/// Result of running the solver against the oracle on a set of instances.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheck {
    pub instances: usize,
    pub validated: usize,
    /// Solver failures, invalid certificates, or certificates shorter than
    /// the geodesic.
    pub disagreements: Vec<String>,
    /// Degree-2 geodesics longer than `min(r, r - |B1 ∩ B1'| + 1)`.
    pub bound_violations: Vec<String>,
    pub total_length: usize,
    pub total_geodesic: usize,
}

impl CrossCheck {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.bound_violations.is_empty()
    }
}

impl fmt::Display for CrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cross-check instances={} validated={} disagreements={} bound_violations={} length={} geodesic={}",
            self.instances,
            self.validated,
            self.disagreements.len(),
            self.bound_violations.len(),
            self.total_length,
            self.total_geodesic
        )
    }
}

/// Solves each pair, validates the certificate and compares it with a
/// geodesic.
pub fn cross_check<'a, I>(m: &Matroid, solver: &mut Solver, pairs: I, cap: usize) -> CrossCheck
where
    I: IntoIterator<Item = (&'a BasisTuple, &'a BasisTuple)>,
{
    let mut report = CrossCheck::default();
    for (from, to) in pairs {
        report.instances += 1;
        let label = || {
            format!(
                "{} -> {}",
                from.to_text().replace('\n', " "),
                to.to_text().replace('\n', " ")
            )
        };
        let seq = match solver.solve(m, from, to) {
            Ok(seq) => seq,
            Err(e) => {
                report
                    .disagreements
                    .push(format!("{}: solver error: {e}", label()));
                continue;
            }
        };
        let check = validate_sequence(m, &seq, to);
        if !check.is_ok() {
            report.disagreements.push(format!("{}: {check}", label()));
            continue;
        }
        report.validated += 1;
        let geodesic = match shortest_sequence(m, from, to, cap) {
            Ok(g) => g.len(),
            Err(e) => {
                report
                    .disagreements
                    .push(format!("{}: oracle error: {e}", label()));
                continue;
            }
        };
        if seq.len() < geodesic {
            report
                .disagreements
                .push(format!("{}: certificate shorter than geodesic", label()));
        }
        if from.degree() == 2 {
            let r = m.rank();
            let common = (from.0[0] & to.0[0]).len();
            let bound = r.min(r - common + 1);
            if geodesic > bound {
                report
                    .bound_violations
                    .push(format!("{}: geodesic {geodesic} > {bound}", label()));
            }
        }
        report.total_length += seq.len();
        report.total_geodesic += geodesic;
    }
    report
}

/// Every ordered pair of tuples within every fiber of degree `degree`.
pub fn all_pairs(m: &Matroid, degree: usize, cap: usize) -> Result<Vec<(BasisTuple, BasisTuple)>> {
    let mut out = Vec::new();
    for u in fiber_unions(m, degree) {
        let fiber = enumerate_fiber(m, &u, degree, cap)?;
        for a in &fiber {
            for b in &fiber {
                out.push((BasisTuple(a.clone()), BasisTuple(b.clone())));
            }
        }
    }
    Ok(out)
}

/// A random pair of tuples with equal union: the first tuple is a uniform
/// choice of bases, the second a uniform element of its fiber.
pub fn sample_pair<R: Rng>(
    m: &Matroid,
    degree: usize,
    rng: &mut R,
    cap: usize,
) -> Result<(BasisTuple, BasisTuple)> {
    let from: Vec<ElementSet> = (0..degree)
        .map(|_| *m.bases().choose(rng).expect("matroid has bases"))
        .collect();
    let fiber = enumerate_fiber(m, &Multiset::of(&from), degree, cap)?;
    let to = fiber.choose(rng).expect("fiber contains the start").clone();
    Ok((BasisTuple(from), BasisTuple(to)))
}

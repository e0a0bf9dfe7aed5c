//! Explicit-basis matroids: rank, closure, circuits, hyperplanes, minors and
//! constructors.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::set::{binomial, ElementSet, MAX_ELEMENTS};

/// A matroid given by its full list of bases.
///
/// The basis list is kept sorted by bit pattern; membership goes through a
/// hash set. Two matroids are equal iff they have the same ground-set size,
/// rank and basis list (no isomorphism testing).
#[derive(Clone)]
pub struct Matroid {
    n: usize,
    r: usize,
    bases: Vec<ElementSet>,
    lookup: HashSet<ElementSet>,
    fingerprint: u64,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("bases", &self.bases.len())
            .finish()
    }
}

/// Outcome of [`Matroid::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Ok,
    /// No `b ∈ B \ A` repairs `A - a`.
    Violation {
        a_basis: ElementSet,
        b_basis: ElementSet,
        element: usize,
    },
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

impl Matroid {
    /// Builds a matroid from a basis family. Checks cardinalities and ground
    /// set membership only; the exchange axiom is checked by [`validate`].
    ///
    /// [`validate`]: Matroid::validate
    pub fn from_bases<I>(n: usize, r: usize, bases: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementSet>,
    {
        if n > MAX_ELEMENTS {
            return Err(Error::precondition(format!(
                "ground set of {n} elements exceeds the {MAX_ELEMENTS}-element limit"
            )));
        }
        if r == 0 || r > n {
            return Err(Error::precondition(format!("rank {r} must lie in 1..={n}")));
        }
        let mut list: Vec<ElementSet> = bases.into_iter().collect();
        for b in &list {
            if b.len() != r {
                return Err(Error::precondition(format!(
                    "basis {{{b}}} has {} elements, expected {r}",
                    b.len()
                )));
            }
            if !b.is_within(n) {
                return Err(Error::precondition(format!(
                    "basis {{{b}}} leaves the ground set 0..{n}"
                )));
            }
        }
        list.sort();
        list.dedup();
        if list.is_empty() {
            return Err(Error::precondition("a matroid needs at least one basis"));
        }
        let lookup = list.iter().copied().collect();
        let mut hasher = DefaultHasher::new();
        n.hash(&mut hasher);
        r.hash(&mut hasher);
        list.hash(&mut hasher);
        Ok(Matroid {
            n,
            r,
            bases: list,
            lookup,
            fingerprint: hasher.finish(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    /// Hash of `(n, r, bases)`; stable across runs.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_basis(&self, s: ElementSet) -> bool {
        self.lookup.contains(&s)
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() == binomial(self.n, self.r)
    }

    pub fn is_independent(&self, s: ElementSet) -> bool {
        s.len() <= self.r && self.bases.iter().any(|&b| s.is_subset(b))
    }

    /// One-sided exchange axiom: for all bases `A ≠ B` and `a ∈ A \ B` some
    /// `b ∈ B \ A` has `A - a + b` a basis. Reports the first failure in
    /// basis order.
    pub fn validate(&self) -> Validation {
        for &a_basis in &self.bases {
            for &b_basis in &self.bases {
                if a_basis == b_basis {
                    continue;
                }
                let only_b = b_basis - a_basis;
                for a in (a_basis - b_basis).iter() {
                    let repaired = only_b.iter().any(|b| self.is_basis(a_basis.swap(a, b)));
                    if !repaired {
                        return Validation::Violation {
                            a_basis,
                            b_basis,
                            element: a,
                        };
                    }
                }
            }
        }
        Validation::Ok
    }

    /// Symmetric exchange check: both `A - a + b` and `B - b + a` must be
    /// bases for some `b`. Independent of [`validate`](Matroid::validate) and
    /// equivalent to it for genuine matroids.
    pub fn validate_symmetric(&self) -> Validation {
        for (idx, &a_basis) in self.bases.iter().enumerate() {
            for &b_basis in &self.bases[idx + 1..] {
                for a in (a_basis - b_basis).iter() {
                    let ok = (b_basis - a_basis).iter().any(|b| {
                        self.is_basis(a_basis.swap(a, b)) && self.is_basis(b_basis.swap(b, a))
                    });
                    if !ok {
                        return Validation::Violation {
                            a_basis,
                            b_basis,
                            element: a,
                        };
                    }
                }
            }
        }
        Validation::Ok
    }

    /// Rank of `s`, by greedily growing an independent subset of `s`.
    pub fn rank_of(&self, s: ElementSet) -> usize {
        let mut indep = ElementSet::EMPTY;
        for e in s.iter() {
            let grown = indep.plus(e);
            if self.is_independent(grown) {
                indep = grown;
                if indep.len() == self.r {
                    break;
                }
            }
        }
        indep.len()
    }

    pub fn closure(&self, s: ElementSet) -> ElementSet {
        let base_rank = self.rank_of(s);
        (self.ground() - s)
            .iter()
            .filter(|&e| self.rank_of(s.plus(e)) == base_rank)
            .fold(s, |acc, e| acc.plus(e))
    }

    /// The unique circuit inside `basis + e`.
    pub fn fundamental_circuit(&self, basis: ElementSet, e: usize) -> Result<ElementSet> {
        if !self.is_basis(basis) {
            return Err(Error::precondition(format!("{{{basis}}} is not a basis")));
        }
        if e >= self.n || basis.contains(e) {
            return Err(Error::precondition(format!(
                "element {e} must be a ground element outside {{{basis}}}"
            )));
        }
        Ok(basis
            .iter()
            .filter(|&c| self.is_basis(basis.swap(c, e)))
            .fold(ElementSet::singleton(e), |acc, c| acc.plus(c)))
    }

    pub fn is_circuit(&self, s: ElementSet) -> bool {
        !s.is_empty()
            && !self.is_independent(s)
            && s.iter().all(|e| self.is_independent(s.minus(e)))
    }

    /// Every `(r-1)`-subset of the ground set is independent.
    pub fn is_paving(&self) -> bool {
        let k = self.r - 1;
        let mut shadow: HashSet<ElementSet> = HashSet::new();
        for &b in &self.bases {
            for e in b.iter() {
                shadow.insert(b.minus(e));
            }
        }
        let covered = if k == 0 { 1 } else { shadow.len() };
        covered == binomial(self.n, k)
    }

    /// All flats of rank `r - 1`, sorted by bit pattern.
    pub fn hyperplanes(&self) -> Vec<ElementSet> {
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut starts: HashSet<ElementSet> = HashSet::new();
        for &b in &self.bases {
            for e in b.iter() {
                starts.insert(b.minus(e));
            }
        }
        let mut out = Vec::new();
        let mut starts: Vec<_> = starts.into_iter().collect();
        starts.sort();
        for s in starts {
            let h = self.closure(s);
            if seen.insert(h) {
                out.push(h);
            }
        }
        out.sort();
        out
    }

    pub fn is_hyperplane(&self, h: ElementSet) -> bool {
        h.is_within(self.n) && self.rank_of(h) + 1 == self.r && self.closure(h) == h
    }

    /// `M \ d`. Requires the remaining elements to span.
    pub fn delete(&self, d: ElementSet) -> Result<(Matroid, MinorMap)> {
        self.minor(self.ground() - d, ElementSet::EMPTY)
    }

    /// `M / c`. Requires `c` independent and not itself a basis.
    pub fn contract(&self, c: ElementSet) -> Result<(Matroid, MinorMap)> {
        self.minor(self.ground(), c)
    }

    /// Restrict to `keep`, then contract `contracted ⊆ keep`, re-indexing the
    /// surviving elements `keep \ contracted` in increasing order.
    pub fn minor(&self, keep: ElementSet, contracted: ElementSet) -> Result<(Matroid, MinorMap)> {
        let keep = keep & self.ground();
        if !contracted.is_subset(keep) {
            return Err(Error::precondition(
                "contracted elements must be kept by the restriction",
            ));
        }
        if !self.is_independent(contracted) {
            return Err(Error::precondition(format!(
                "contraction set {{{contracted}}} is dependent"
            )));
        }
        if contracted.len() == self.r {
            return Err(Error::precondition(
                "contracting a basis leaves a rank-0 matroid",
            ));
        }
        let map = MinorMap::new(self.n, keep, contracted);
        let bases: Vec<ElementSet> = self
            .bases
            .iter()
            .filter(|b| contracted.is_subset(**b) && b.is_subset(keep))
            .map(|&b| map.project(b))
            .collect();
        if bases.is_empty() {
            return Err(Error::precondition(format!(
                "deleting {{{}}} drops the rank",
                self.ground() - keep
            )));
        }
        let m = Matroid::from_bases(map.kept.len(), self.r - contracted.len(), bases)?;
        Ok((m, map))
    }

    /// Text form: a `matroid n=.. r=..` header, then one basis per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("matroid n={} r={}\n", self.n, self.r);
        for b in &self.bases {
            out.push_str(&b.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut bases = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            match header {
                None => {
                    let fields = parse_header(line, "matroid", &["n", "r"]).map_err(|message| {
                        Error::Parse {
                            line: line_no,
                            message,
                        }
                    })?;
                    header = Some((fields[0], fields[1]));
                }
                Some((n, r)) => {
                    let b: ElementSet = line.parse().map_err(|e: Error| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                    let problem = if b.len() != r {
                        Some(format!(
                            "basis {{{b}}} has {} elements, expected {r}",
                            b.len()
                        ))
                    } else if !b.is_within(n) {
                        Some(format!("basis {{{b}}} is not inside 0..{n}"))
                    } else {
                        None
                    };
                    if let Some(message) = problem {
                        return Err(Error::Parse {
                            line: line_no,
                            message,
                        });
                    }
                    bases.push(b);
                }
            }
        }
        let (n, r) = header.ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing `matroid n=<int> r=<int>` header".into(),
        })?;
        Matroid::from_bases(n, r, bases)
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => line[..pos].trim(),
        None => line.trim(),
    }
}

/// Parses `keyword k1=<int> k2=<int> …` with the keys in the given order.
pub(crate) fn parse_header(line: &str, keyword: &str, keys: &[&str]) -> Result<Vec<usize>, String> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(format!("expected `{keyword}` header"));
    }
    let mut values = Vec::with_capacity(keys.len());
    for key in keys {
        let part = parts
            .next()
            .ok_or_else(|| format!("missing `{key}=<int>` in header"))?;
        let value = part
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=<int>`, found `{part}`"))?;
        values.push(
            value
                .parse()
                .map_err(|_| format!("invalid integer `{value}` for `{key}`"))?,
        );
    }
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected `{extra}` in header"));
    }
    Ok(values)
}

/// Relates the ground set of a minor to that of the original matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorMap {
    /// Original index of each minor element.
    pub kept: Vec<usize>,
    pub contracted: ElementSet,
    pub deleted: ElementSet,
}

impl MinorMap {
    fn new(n: usize, keep: ElementSet, contracted: ElementSet) -> Self {
        MinorMap {
            kept: (keep - contracted).iter().collect(),
            contracted,
            deleted: ElementSet::full(n) - keep,
        }
    }

    pub fn lift_element(&self, e: usize) -> usize {
        self.kept[e]
    }

    pub fn project_element(&self, e: usize) -> Option<usize> {
        self.kept.iter().position(|&k| k == e)
    }

    /// Minor set → original set, adding back the contracted elements.
    pub fn lift(&self, s: ElementSet) -> ElementSet {
        s.iter()
            .map(|e| self.kept[e])
            .fold(self.contracted, |acc, e| acc.plus(e))
    }

    /// Original set → minor set, dropping contracted and deleted elements.
    pub fn project(&self, s: ElementSet) -> ElementSet {
        self.kept
            .iter()
            .enumerate()
            .filter(|(_, &orig)| s.contains(orig))
            .map(|(i, _)| i)
            .collect()
    }
}

/// `U_{r,n}`.
pub fn make_uniform(n: usize, r: usize) -> Result<Matroid> {
    if n > MAX_ELEMENTS {
        return Err(Error::precondition(format!(
            "n = {n} exceeds {MAX_ELEMENTS}"
        )));
    }
    Matroid::from_bases(n, r, ElementSet::full(n).subsets_of_size(r))
}

/// The paving matroid whose non-trivial hyperplanes are `hyperplanes`: bases
/// are the `r`-sets inside none of them. Requires `|H| ≥ r` and pairwise
/// intersections of at most `r - 2` elements.
pub fn make_paving_from_hyperplanes(
    n: usize,
    r: usize,
    hyperplanes: &[ElementSet],
) -> Result<Matroid> {
    if n > MAX_ELEMENTS {
        return Err(Error::precondition(format!(
            "n = {n} exceeds {MAX_ELEMENTS}"
        )));
    }
    if r == 0 || r > n {
        return Err(Error::precondition(format!("rank {r} must lie in 1..={n}")));
    }
    for h in hyperplanes {
        if !h.is_within(n) {
            return Err(Error::precondition(format!(
                "hyperplane {{{h}}} leaves the ground set"
            )));
        }
        if h.len() < r {
            return Err(Error::precondition(format!(
                "hyperplane {{{h}}} has fewer than r = {r} elements"
            )));
        }
    }
    for (i, &h) in hyperplanes.iter().enumerate() {
        for &g in &hyperplanes[i + 1..] {
            if (h & g).len() + 2 > r {
                return Err(Error::precondition(format!(
                    "hyperplanes {{{h}}} and {{{g}}} share {} elements, more than r - 2",
                    (h & g).len()
                )));
            }
        }
    }
    let bases = ElementSet::full(n)
        .subsets_of_size(r)
        .filter(|s| !hyperplanes.iter().any(|h| s.is_subset(*h)));
    Matroid::from_bases(n, r, bases)
}

/// Draws `k` hyperplanes of size `r..=min(r + 2, n - 1)` from a seeded PRNG,
/// rejecting draws that break the pairwise intersection bound, and builds the
/// paving matroid they define. Gives up after a fixed retry budget.
pub fn make_random_paving(n: usize, r: usize, k: usize, seed: u64) -> Result<Matroid> {
    const RETRY_BUDGET: usize = 10_000;
    if r < 2 || r >= n {
        return Err(Error::precondition(format!(
            "random paving matroids need 2 <= r < n, got r = {r}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<usize> = (0..n).collect();
    let mut chosen: Vec<ElementSet> = Vec::with_capacity(k);
    let mut attempts = 0;
    while chosen.len() < k {
        attempts += 1;
        if attempts > RETRY_BUDGET {
            return Err(Error::precondition(format!(
                "could not place {k} hyperplanes for n = {n}, r = {r} within {RETRY_BUDGET} draws"
            )));
        }
        let size = rng.gen_range(r..=(r + 2).min(n - 1));
        let h: ElementSet = elements.choose_multiple(&mut rng, size).copied().collect();
        if chosen.iter().all(|&g| (h & g).len() + 2 <= r) {
            chosen.push(h);
        }
    }
    chosen.sort();
    make_paving_from_hyperplanes(n, r, &chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn set(s: &str) -> ElementSet {
        s.parse().unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(catalog::uniform(2, 4).validate().is_ok());
        assert!(catalog::m1().validate().is_ok());
        let broken = Matroid::from_bases(4, 2, [set("0,1"), set("2,3")]).unwrap();
        assert_eq!(
            broken.validate(),
            Validation::Violation {
                a_basis: set("0,1"),
                b_basis: set("2,3"),
                element: 0
            }
        );
        assert!(!broken.validate_symmetric().is_ok());
    }

    #[test]
    fn rank_examples() {
        let u24 = catalog::uniform(2, 4);
        let m1 = catalog::m1();
        assert_eq!(u24.rank_of(set("0")), 1);
        assert_eq!(m1.rank_of(set("0,1")), 1);
        assert_eq!(m1.rank_of(set("0,1,2")), 2);
        assert_eq!(m1.rank_of(ElementSet::EMPTY), 0);
    }

    #[test]
    fn closure_examples() {
        assert_eq!(catalog::m2().closure(set("0,1")), set("0,1,2,3"));
        assert_eq!(catalog::uniform(2, 4).closure(set("0")), set("0"));
        assert_eq!(catalog::m1().closure(set("0")), set("0,1"));
    }

    #[test]
    fn fundamental_circuit_examples() {
        let m1 = catalog::m1();
        assert_eq!(m1.fundamental_circuit(set("0,2"), 1).unwrap(), set("0,1"));
        assert_eq!(
            catalog::uniform(2, 4)
                .fundamental_circuit(set("0,1"), 2)
                .unwrap(),
            set("0,1,2")
        );
        assert_eq!(
            catalog::m2().fundamental_circuit(set("0,1,4"), 2).unwrap(),
            set("0,1,2")
        );
        assert!(m1.fundamental_circuit(set("0,1"), 2).is_err());
        assert!(m1.fundamental_circuit(set("0,2"), 2).is_err());
    }

    #[test]
    fn paving_examples() {
        assert!(catalog::fano().is_paving());
        assert!(catalog::uniform(2, 4).is_paving());
        let non_paving = Matroid::from_bases(3, 2, [set("0,1")]).unwrap();
        assert!(non_paving.validate().is_ok());
        assert!(!non_paving.is_paving());
    }

    #[test]
    fn hyperplane_examples() {
        assert_eq!(
            catalog::m1().hyperplanes(),
            vec![set("0,1"), set("2"), set("3")]
        );
        assert_eq!(
            catalog::uniform(2, 4).hyperplanes(),
            vec![set("0"), set("1"), set("2"), set("3")]
        );
        let mut lines = catalog::fano_lines();
        lines.sort();
        assert_eq!(catalog::fano().hyperplanes(), lines);
    }

    #[test]
    fn minor_examples() {
        let (c, map) = catalog::m2().contract(set("0")).unwrap();
        assert_eq!(c.n(), 5);
        assert_eq!(c.rank(), 2);
        // elements 1,2,3 of M2 become 0,1,2 of the contraction
        let expected = make_paving_from_hyperplanes(5, 2, &[set("0,1,2")]).unwrap();
        assert_eq!(c, expected);
        assert_eq!(map.kept, vec![1, 2, 3, 4, 5]);
        assert_eq!(map.lift(set("0,3")), set("0,1,4"));

        let (d, _) = catalog::uniform(2, 4).delete(set("3")).unwrap();
        assert_eq!(d, catalog::uniform(2, 3));

        assert!(catalog::m1().delete(set("2,3")).is_err());
        assert!(catalog::m1().contract(set("0,1")).is_err());
    }

    #[test]
    fn fano_minors_are_paving() {
        let fano = catalog::fano();
        for e in 0..7 {
            let (d, _) = fano.delete(ElementSet::singleton(e)).unwrap();
            assert!(d.validate().is_ok() && d.is_paving());
            let (c, _) = fano.contract(ElementSet::singleton(e)).unwrap();
            assert!(c.validate().is_ok() && c.is_paving());
        }
    }

    #[test]
    fn generator_examples() {
        let m2 = make_paving_from_hyperplanes(6, 3, &[set("0,1,2,3")]).unwrap();
        assert_eq!(m2.num_bases(), 16);
        let fano = make_paving_from_hyperplanes(7, 3, &catalog::fano_lines()).unwrap();
        assert_eq!(fano.num_bases(), 28);
        assert!(make_paving_from_hyperplanes(4, 2, &[set("0,1"), set("0,2")]).is_err());
        assert!(make_paving_from_hyperplanes(4, 2, &[set("0")]).is_err());
    }

    #[test]
    fn random_paving_is_reproducible() {
        let a = make_random_paving(8, 3, 3, 7).unwrap();
        let b = make_random_paving(8, 3, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_ok() && a.is_paving());
        assert!(make_random_paving(5, 3, 50, 1).is_err());
    }

    #[test]
    fn text_round_trip() {
        let fano = catalog::fano();
        let text = fano.to_text();
        assert!(text.starts_with("matroid n=7 r=3\n0,1,3\n"));
        assert_eq!(Matroid::parse(&text).unwrap(), fano);
        let commented = "# U24\n\nmatroid n=4 r=2\n0,1 # first\n0,2\n0,3\n1,2\n1,3\n2,3\n";
        assert_eq!(Matroid::parse(commented).unwrap(), catalog::uniform(2, 4));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Matroid::parse("matroid n=4 r=2\n0,1\n0,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(
            Matroid::parse("matroid n=4\n0,1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(Matroid::parse("matroid n=4 r=2\n0,1,2\n").is_err());
    }
}

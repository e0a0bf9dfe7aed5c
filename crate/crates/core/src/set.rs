//! Fixed-width subsets of a ground set with at most 64 elements.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use crate::error::Error;

/// Largest supported ground-set size.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, …, 63}` stored as a bit mask.
///
/// Ordering is by raw bit pattern, which is the canonical order used for
/// basis lists, hyperplane lists and every "smallest" choice in the crate.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        debug_assert!(e < MAX_ELEMENTS);
        ElementSet(1u64 << e)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements.into_iter().fold(Self::EMPTY, |s, e| s.plus(e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_ELEMENTS && self.0 & (1u64 << e) != 0
    }

    /// `self + e`.
    #[must_use]
    pub fn plus(self, e: usize) -> Self {
        ElementSet(self.0 | (1u64 << e))
    }

    /// `self - e`.
    #[must_use]
    pub fn minus(self, e: usize) -> Self {
        ElementSet(self.0 & !(1u64 << e))
    }

    /// `self - out + inn`, the shape of every exchange in the crate.
    #[must_use]
    pub fn swap(self, out: usize, inn: usize) -> Self {
        self.minus(out).plus(inn)
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_within(self, n: usize) -> bool {
        self.is_subset(Self::full(n))
    }

    /// Smallest element.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// The single element of a one-element set.
    pub fn single(self) -> Option<usize> {
        if self.len() == 1 {
            self.first()
        } else {
            None
        }
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self` with exactly `k` elements, in increasing bit order.
    pub fn subsets_of_size(self, k: usize) -> Subsets {
        Subsets::new(self, k)
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_elements(iter)
    }
}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Elements;
    fn into_iter(self) -> Elements {
        self.iter()
    }
}

/// Ascending iterator over the elements of an [`ElementSet`].
#[derive(Clone, Debug)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// k-subsets of a fixed set, enumerated as index combinations over its
/// sorted element list.
#[derive(Clone, Debug)]
pub struct Subsets {
    elements: Vec<usize>,
    indices: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(set: ElementSet, k: usize) -> Self {
        let elements: Vec<usize> = set.iter().collect();
        let done = k > elements.len();
        Subsets {
            elements,
            indices: (0..k).collect(),
            done,
        }
    }
}

impl Iterator for Subsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        if self.done {
            return None;
        }
        let current: ElementSet = self.indices.iter().map(|&i| self.elements[i]).collect();
        let k = self.indices.len();
        let n = self.elements.len();
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.indices[i] < n - k + i {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

impl fmt::Display for ElementSet {
    /// Comma-separated ascending element list, e.g. `0,2,5`. The empty set
    /// prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl std::str::FromStr for ElementSet {
    type Err = Error;

    /// Parses a comma-separated element list. Whitespace around entries is
    /// ignored; an empty string is the empty set.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(ElementSet::EMPTY);
        }
        let mut set = ElementSet::EMPTY;
        for part in s.split(',') {
            let part = part.trim();
            let e: usize = part
                .parse()
                .map_err(|_| Error::Format(format!("invalid element `{part}`")))?;
            if e >= MAX_ELEMENTS {
                return Err(Error::Format(format!(
                    "element {e} outside the supported range 0..{MAX_ELEMENTS}"
                )));
            }
            if set.contains(e) {
                return Err(Error::Format(format!("element {e} listed twice")));
            }
            set = set.plus(e);
        }
        Ok(set)
    }
}

/// Binomial coefficient, exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a: ElementSet = "0,1,4".parse().unwrap();
        let b: ElementSet = "1,2".parse().unwrap();
        assert_eq!(a | b, "0,1,2,4".parse().unwrap());
        assert_eq!(a & b, ElementSet::singleton(1));
        assert_eq!(a - b, "0,4".parse().unwrap());
        assert_eq!(a.swap(4, 3), "0,1,3".parse().unwrap());
        assert_eq!(a.len(), 3);
        assert_eq!(a.first(), Some(0));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 1, 4]);
        assert_eq!(a.to_string(), "0,1,4");
        assert_eq!(format!("{:?}", ElementSet::EMPTY), "{}");
    }

    #[test]
    fn full_ground_set() {
        assert_eq!(ElementSet::full(0), ElementSet::EMPTY);
        assert_eq!(ElementSet::full(64).len(), 64);
        assert!(ElementSet::singleton(63).is_within(64));
        assert!(!ElementSet::singleton(5).is_within(5));
    }

    #[test]
    fn parse_errors() {
        assert!("0,x".parse::<ElementSet>().is_err());
        assert!("1,1".parse::<ElementSet>().is_err());
        assert!("64".parse::<ElementSet>().is_err());
        assert_eq!("".parse::<ElementSet>().unwrap(), ElementSet::EMPTY);
    }

    #[test]
    fn subset_enumeration_counts() {
        let s = ElementSet::full(7);
        for k in 0..=8 {
            let subs: Vec<_> = s.subsets_of_size(k).collect();
            assert_eq!(subs.len(), binomial(7, k));
            assert!(subs.iter().all(|x| x.len() == k && x.is_subset(s)));
            let mut sorted = subs.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), subs.len());
        }
        let sparse: ElementSet = "1,5,9".parse().unwrap();
        let pairs: Vec<_> = sparse.subsets_of_size(2).map(|s| s.to_string()).collect();
        assert_eq!(pairs, vec!["1,5", "1,9", "5,9"]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(9, 0), 1);
    }
}

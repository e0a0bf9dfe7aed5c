//! Tuples of bases, symmetric exchange steps, and certificates.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::matroid::{parse_header, strip_comment, Matroid};
use crate::set::ElementSet;

/// An ordered tuple of equal-size sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisTuple(pub Vec<ElementSet>);

impl BasisTuple {
    pub fn new(entries: Vec<ElementSet>) -> Self {
        BasisTuple(entries)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[ElementSet] {
        &self.0
    }

    pub fn multiset_union(&self) -> Multiset {
        Multiset::of(&self.0)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tuple degree={}\n", self.degree());
        for b in &self.0 {
            let _ = writeln!(out, "{b}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let line_no = idx + 1;
            match degree {
                None => {
                    let v = parse_header(line, "tuple", &["degree"]).map_err(|message| {
                        Error::Parse {
                            line: line_no,
                            message,
                        }
                    })?;
                    degree = Some(v[0]);
                }
                Some(_) => entries.push(parse_set(line, line_no)?),
            }
        }
        let degree = degree.ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing `tuple degree=<int>` header".into(),
        })?;
        if entries.len() != degree {
            return Err(Error::Format(format!(
                "tuple declares degree {degree} but lists {} sets",
                entries.len()
            )));
        }
        Ok(BasisTuple(entries))
    }
}

impl fmt::Debug for BasisTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b:?}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<ElementSet>> for BasisTuple {
    fn from(v: Vec<ElementSet>) -> Self {
        BasisTuple(v)
    }
}

fn parse_set(line: &str, line_no: usize) -> Result<ElementSet> {
    line.parse().map_err(|e: Error| Error::Parse {
        line: line_no,
        message: e.to_string(),
    })
}

/// Multiset union of a tuple, as a sorted element list with repetition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset(pub Vec<usize>);

impl Multiset {
    pub fn of(sets: &[ElementSet]) -> Self {
        let mut v: Vec<usize> = sets.iter().flat_map(|s| s.iter()).collect();
        v.sort_unstable();
        Multiset(v)
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// One symmetric exchange: `x` leaves position `i` and enters position `j`,
/// `y` leaves position `j` and enters position `i`. `x == y` is a no-op.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeStep {
    pub i: usize,
    pub j: usize,
    pub x: usize,
    pub y: usize,
}

impl ExchangeStep {
    pub fn new(i: usize, j: usize, x: usize, y: usize) -> Self {
        ExchangeStep { i, j, x, y }
    }

    pub fn is_noop(&self) -> bool {
        self.x == self.y
    }

    /// The step undoing this one.
    pub fn reversed(&self) -> Self {
        ExchangeStep::new(self.i, self.j, self.y, self.x)
    }

    /// Structural application without any basis check.
    pub fn apply_to(&self, entries: &mut [ElementSet]) -> Result<(), Fault> {
        if self.is_noop() {
            return Ok(());
        }
        let d = entries.len();
        if self.i == self.j || self.i >= d || self.j >= d {
            return Err(Fault::Malformed(format!(
                "positions {} and {} invalid for degree {d}",
                self.i, self.j
            )));
        }
        let (bi, bj) = (entries[self.i], entries[self.j]);
        if !bi.contains(self.x) || bj.contains(self.x) {
            return Err(Fault::Malformed(format!(
                "element {} is not in B{} \\ B{}",
                self.x, self.i, self.j
            )));
        }
        if !bj.contains(self.y) || bi.contains(self.y) {
            return Err(Fault::Malformed(format!(
                "element {} is not in B{} \\ B{}",
                self.y, self.j, self.i
            )));
        }
        entries[self.i] = bi.swap(self.x, self.y);
        entries[self.j] = bj.swap(self.y, self.x);
        Ok(())
    }
}

impl fmt::Display for ExchangeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step i={} j={} x={} y={}",
            self.i, self.j, self.x, self.y
        )
    }
}

/// Why a step or a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fault {
    Malformed(String),
    NonBasis { position: usize, set: ElementSet },
    UnionDrift,
    DegreeMismatch,
    EndpointMismatch,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::Malformed(msg) => write!(f, "malformed step: {msg}"),
            Fault::NonBasis { position, set } => {
                write!(f, "position {position} holds {{{set}}}, not a basis")
            }
            Fault::UnionDrift => f.write_str("multiset union changed"),
            Fault::DegreeMismatch => f.write_str("tuple degrees differ"),
            Fault::EndpointMismatch => f.write_str("final tuple differs from the expected end"),
        }
    }
}

/// Applies `step` and checks both changed entries with `is_basis`.
pub fn apply_step(
    tuple: &BasisTuple,
    step: &ExchangeStep,
    is_basis: impl Fn(ElementSet) -> bool,
) -> Result<BasisTuple, Fault> {
    let mut entries = tuple.0.clone();
    step.apply_to(&mut entries)?;
    if !step.is_noop() {
        for pos in [step.i, step.j] {
            if !is_basis(entries[pos]) {
                return Err(Fault::NonBasis {
                    position: pos,
                    set: entries[pos],
                });
            }
        }
    }
    Ok(BasisTuple(entries))
}

/// A start tuple and the steps applied to it in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeSequence {
    pub start: BasisTuple,
    pub steps: Vec<ExchangeStep>,
}

/// Where a certificate check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Start,
    /// Zero-based index into `steps`.
    Step(usize),
    End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceReport {
    Ok,
    Failed { location: Location, fault: Fault },
}

impl SequenceReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, SequenceReport::Ok)
    }
}

impl fmt::Display for SequenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceReport::Ok => f.write_str("ok"),
            SequenceReport::Failed { location, fault } => {
                match location {
                    Location::Start => f.write_str("start tuple: ")?,
                    Location::Step(k) => write!(f, "step {k}: ")?,
                    Location::End => f.write_str("end: ")?,
                }
                write!(f, "{fault}")
            }
        }
    }
}

impl ExchangeSequence {
    pub fn empty(start: BasisTuple) -> Self {
        ExchangeSequence {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every tuple along the sequence, start included.
    pub fn states(&self) -> Result<Vec<Vec<ElementSet>>, Fault> {
        let mut current = self.start.0.clone();
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(current.clone());
        for step in &self.steps {
            step.apply_to(&mut current)?;
            out.push(current.clone());
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<BasisTuple, Fault> {
        let mut current = self.start.0.clone();
        for step in &self.steps {
            step.apply_to(&mut current)?;
        }
        Ok(BasisTuple(current))
    }

    /// Rebuilds a sequence from consecutive tuples differing by one exchange
    /// (or not at all; repeated tuples contribute no step).
    pub fn from_states(states: &[Vec<ElementSet>]) -> Result<Self> {
        let start = states
            .first()
            .cloned()
            .ok_or_else(|| Error::internal("sequence needs at least one tuple"))?;
        let mut steps = Vec::with_capacity(states.len());
        for pair in states.windows(2) {
            if let Some(step) = step_between(&pair[0], &pair[1])? {
                steps.push(step);
            }
        }
        Ok(ExchangeSequence {
            start: BasisTuple(start),
            steps,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sequence degree={}\n", self.start.degree());
        for b in &self.start.0 {
            let _ = writeln!(out, "{b}");
        }
        for step in &self.steps {
            let _ = writeln!(out, "{step}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut degree: Option<usize> = None;
        let mut start = Vec::new();
        let mut steps = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let line_no = idx + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match degree {
                None => degree = Some(parse_header(line, "sequence", &["degree"]).map_err(err)?[0]),
                Some(d) if start.len() < d => start.push(parse_set(line, line_no)?),
                Some(_) => {
                    let v = parse_header(line, "step", &["i", "j", "x", "y"]).map_err(err)?;
                    steps.push(ExchangeStep::new(v[0], v[1], v[2], v[3]));
                }
            }
        }
        let degree = degree.ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing `sequence degree=<int>` header".into(),
        })?;
        if start.len() != degree {
            return Err(Error::Format(format!(
                "sequence declares degree {degree} but lists {} start sets",
                start.len()
            )));
        }
        Ok(ExchangeSequence {
            start: BasisTuple(start),
            steps,
        })
    }
}

/// The single exchange turning `a` into `b`, `None` when they are equal.
pub fn step_between(a: &[ElementSet], b: &[ElementSet]) -> Result<Option<ExchangeStep>> {
    if a.len() != b.len() {
        return Err(Error::internal("tuples of different degree"));
    }
    let changed: Vec<usize> = (0..a.len()).filter(|&p| a[p] != b[p]).collect();
    match changed.as_slice() {
        [] => Ok(None),
        &[i, j] => {
            let x = (a[i] - b[i]).single();
            let y = (b[i] - a[i]).single();
            match (x, y) {
                (Some(x), Some(y))
                    if b[j] == a[j].swap(y, x) && a[j].contains(y) && !a[j].contains(x) =>
                {
                    Ok(Some(ExchangeStep::new(i, j, x, y)))
                }
                _ => Err(Error::internal(format!(
                    "{a:?} -> {b:?} is not a single symmetric exchange"
                ))),
            }
        }
        _ => Err(Error::internal(format!(
            "{a:?} -> {b:?} changes {} positions",
            changed.len()
        ))),
    }
}

/// Checks a certificate against `m`: every tuple consists of bases, the
/// multiset union never changes, and the last tuple equals `expected_end`.
pub fn validate_sequence(
    m: &Matroid,
    seq: &ExchangeSequence,
    expected_end: &BasisTuple,
) -> SequenceReport {
    validate_with(|s| m.is_basis(s), seq, expected_end)
}

/// [`validate_sequence`] against an arbitrary basis predicate.
pub fn validate_with(
    is_basis: impl Fn(ElementSet) -> bool,
    seq: &ExchangeSequence,
    expected_end: &BasisTuple,
) -> SequenceReport {
    let fail = |location, fault| SequenceReport::Failed { location, fault };
    if seq.start.degree() != expected_end.degree() {
        return fail(Location::Start, Fault::DegreeMismatch);
    }
    for (position, &set) in seq.start.0.iter().enumerate() {
        if !is_basis(set) {
            return fail(Location::Start, Fault::NonBasis { position, set });
        }
    }
    let union = seq.start.multiset_union();
    let mut current = seq.start.clone();
    for (k, step) in seq.steps.iter().enumerate() {
        match apply_step(&current, step, &is_basis) {
            Ok(next) => current = next,
            Err(fault) => return fail(Location::Step(k), fault),
        }
        if current.multiset_union() != union {
            return fail(Location::Step(k), Fault::UnionDrift);
        }
    }
    if &current != expected_end {
        return fail(Location::End, Fault::EndpointMismatch);
    }
    SequenceReport::Ok
}

/// Drops no-op steps and erases loops: whenever a tuple recurs, the segment
/// between its occurrences is cut out. Endpoints are unchanged.
pub fn normalize_sequence(seq: &ExchangeSequence) -> Result<ExchangeSequence> {
    let states = seq
        .states()
        .map_err(|f| Error::precondition(format!("cannot normalize: {f}")))?;
    ExchangeSequence::from_states(&erase_loops(states))
}

/// Loop erasure over a list of tuples; consecutive duplicates collapse too.
pub fn erase_loops(states: Vec<Vec<ElementSet>>) -> Vec<Vec<ElementSet>> {
    let mut kept: Vec<Vec<ElementSet>> = Vec::with_capacity(states.len());
    let mut index: HashMap<Vec<ElementSet>, usize> = HashMap::new();
    for state in states {
        if let Some(&pos) = index.get(&state) {
            for dropped in kept.drain(pos + 1..) {
                index.remove(&dropped);
            }
        } else {
            index.insert(state.clone(), kept.len());
            kept.push(state);
        }
    }
    kept
}

//! The exchange-sequence solver.
//!
//! A non-uniform paving matroid is relaxed at its first stressed hyperplane,
//! the problem is solved in the relaxation, and the resulting sequence is
//! lifted back. Lifting replaces every tuple that uses a new basis of the
//! relaxation (a subset of the hyperplane) by a detour through bases of the
//! original matroid.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lemmas::{align, check_same_union, pick_type02};
use crate::matroid::Matroid;
use crate::relaxation::{first_stressed_hyperplane, is_stressed, relax, type_of};
use crate::sequence::{
    erase_loops, step_between, validate_sequence, validate_with, BasisTuple, ExchangeSequence,
};
use crate::set::ElementSet;
use crate::star::{changed_rows, pair_repair, repair_isolated, resolve_window, xbb};
use crate::walk::{embed, project, State, Walk};

/// Cached first relaxation of an interned matroid; `None` once known uniform.
type Relaxed = Option<(ElementSet, Arc<Matroid>)>;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Cap on nested degree-3 repairs.
    pub max_depth: usize,
    /// Number of provenance lines kept.
    pub log_limit: usize,
    /// Splice budget for a single lift.
    pub max_splices: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_depth: 64,
            log_limit: 100_000,
            max_splices: 1_000_000,
        }
    }
}

/// Relaxation-tree solver. Reusing one instance across calls shares the
/// relaxation cache and the memo of solved subproblems.
#[derive(Debug, Default)]
pub struct Solver {
    config: SolverConfig,
    counters: BTreeMap<&'static str, u64>,
    log: Vec<String>,
    matroids: HashMap<u64, Vec<(usize, Arc<Matroid>)>>,
    relaxations: Vec<Option<Relaxed>>,
    memo: HashMap<(usize, State, State), Vec<State>>,
}

/// A sequence of tuples together with the hyperplane it is lifted across.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftState {
    pub hyperplane: ElementSet,
    pub states: Vec<Vec<ElementSet>>,
}

impl LiftState {
    /// Indices `j` where entry `i` lies inside the hyperplane.
    pub fn h_set(&self, i: usize) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&j| self.states[j][i].is_subset(self.hyperplane))
            .collect()
    }

    /// Positions with at least one entry inside the hyperplane.
    pub fn r_set(&self) -> Vec<usize> {
        let degree = self.states.first().map_or(0, |s| s.len());
        (0..degree).filter(|&i| !self.h_set(i).is_empty()).collect()
    }
}

impl Solver {
    pub fn new() -> Self {
        Self::with_config(SolverConfig::default())
    }

    pub fn with_config(config: SolverConfig) -> Self {
        Solver {
            config,
            ..Default::default()
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub(crate) fn max_depth(&self) -> usize {
        self.config.max_depth
    }

    /// How often each case of the construction fired.
    pub fn counters(&self) -> &BTreeMap<&'static str, u64> {
        &self.counters
    }

    pub fn counter(&self, label: &str) -> u64 {
        self.counters.get(label).copied().unwrap_or(0)
    }

    /// One line per splice, `apply <case> at step <l>`.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    pub fn clear_log(&mut self) {
        self.log.clear();
    }

    pub(crate) fn count(&mut self, label: &'static str) {
        *self.counters.entry(label).or_insert(0) += 1;
    }

    fn note(&mut self, label: &'static str, step: usize) {
        self.count(label);
        if self.log.len() < self.config.log_limit {
            self.log.push(format!("apply {label} at step {step}"));
        }
    }

    /// Exchange sequence in the paving matroid `m` from `from` to `to`.
    pub fn solve(
        &mut self,
        m: &Matroid,
        from: &BasisTuple,
        to: &BasisTuple,
    ) -> Result<ExchangeSequence> {
        if !m.is_paving() {
            return Err(Error::precondition("matroid is not paving"));
        }
        check_bases(m, from)?;
        check_bases(m, to)?;
        check_same_union(from, to)?;
        let states = erase_loops(self.solve_states(m, &from.0, &to.0)?);
        let seq = ExchangeSequence::from_states(&states)?;
        let report = validate_sequence(m, &seq, to);
        if !report.is_ok() {
            return Err(Error::internal(format!(
                "solver output failed validation: {report}"
            )));
        }
        Ok(seq)
    }

    /// Exchange sequence in the relaxation of `m` at `h` between tuples of
    /// its bases, built from a solution in `m` itself.
    pub fn lower_to_relaxation(
        &mut self,
        m: &Matroid,
        h: ElementSet,
        from: &BasisTuple,
        to: &BasisTuple,
    ) -> Result<ExchangeSequence> {
        let relaxed = checked_relax(m, h)?;
        check_bases(&relaxed, from)?;
        check_bases(&relaxed, to)?;
        check_same_union(from, to)?;
        let prefix = to_single_case(m, h, &from.0)?;
        let suffix = to_single_case(m, h, &to.0)?;
        let (left, right) = (prefix.last().unwrap(), suffix.last().unwrap());
        let middle = if left.iter().all(|b| type_of(*b, h) >= 1) {
            self.count("lower/bases");
            self.solve_states(m, left, right)?
        } else {
            self.count("lower/type-le1");
            align(h, left, right)?
        };
        let mut walk = Walk::new(from.0.clone());
        walk.extend(&prefix)?;
        walk.extend(&middle)?;
        walk.extend(&suffix.into_iter().rev().collect::<Vec<_>>())?;
        let seq = walk.into_sequence()?;
        let report = validate_with(|b| relaxed.is_basis(b), &seq, to);
        if !report.is_ok() {
            return Err(Error::internal(format!(
                "relaxation sequence failed validation: {report}"
            )));
        }
        Ok(seq)
    }

    /// Degree-2 solve in `m`, going through the relaxation at `h`.
    pub fn solve_degree2(
        &mut self,
        m: &Matroid,
        h: ElementSet,
        from: &BasisTuple,
        to: &BasisTuple,
    ) -> Result<ExchangeSequence> {
        if from.degree() != 2 {
            return Err(Error::precondition("degree-2 solve needs pairs"));
        }
        let relaxed = checked_relax(m, h)?;
        check_bases(m, from)?;
        check_bases(m, to)?;
        check_same_union(from, to)?;
        let inner = self.solve_states(&relaxed, &from.0, &to.0)?;
        let states = self.lift_degree2(m, h, inner)?;
        finish_solution(m, to, states)
    }

    /// Turns a sequence valid in the relaxation of `m` at `h` into one valid
    /// in `m` with the same endpoints.
    pub fn lift_sequence(
        &mut self,
        m: &Matroid,
        h: ElementSet,
        seq: &ExchangeSequence,
    ) -> Result<ExchangeSequence> {
        let relaxed = checked_relax(m, h)?;
        let end = seq
            .end()
            .map_err(|f| Error::precondition(format!("malformed sequence: {f}")))?;
        let report = validate_with(|b| relaxed.is_basis(b), seq, &end);
        if !report.is_ok() {
            return Err(Error::precondition(format!(
                "not a sequence of the relaxation: {report}"
            )));
        }
        check_bases(m, &seq.start)?;
        check_bases(m, &end)?;
        let states = seq.states().map_err(|f| Error::internal(f.to_string()))?;
        let lifted = if seq.start.degree() == 2 {
            self.lift_degree2(m, h, states)?
        } else {
            self.lift(m, h, states)?
        };
        finish_solution(m, &end, lifted)
    }

    /// Core recursion: relax, solve, lift. Returns the visited tuples.
    pub(crate) fn solve_states(
        &mut self,
        m: &Matroid,
        from: &State,
        to: &State,
    ) -> Result<Vec<State>> {
        if from == to {
            return Ok(vec![from.clone()]);
        }
        let (id, m_arc) = self.intern(m);
        let key = (id, from.clone(), to.clone());
        if let Some(hit) = self.memo.get(&key).cloned() {
            self.count("memo/hit");
            return Ok(hit);
        }
        let states = if m.is_uniform() {
            align(m.ground(), from, to)?
        } else {
            let (h, relaxed) = self.relaxation(id, &m_arc)?;
            let inner = self.solve_states(&relaxed, from, to)?;
            if from.len() == 2 {
                self.lift_degree2(m, h, inner)?
            } else {
                self.lift(m, h, inner)?
            }
        };
        check_walk(m, &states, from, to)?;
        self.memo.insert(key, states.clone());
        Ok(states)
    }

    /// Solves in the minor that keeps `keep` and contracts `contract`, then
    /// lifts the result back.
    pub(crate) fn minor_solve(
        &mut self,
        m: &Matroid,
        keep: ElementSet,
        contract: ElementSet,
        from: &State,
        to: &State,
    ) -> Result<Vec<State>> {
        let (minor, map) = m
            .minor(keep, contract)
            .map_err(|e| Error::internal(format!("minor reduction: {e}")))?;
        if minor.n() >= m.n() {
            return Err(Error::internal(
                "minor reduction did not shrink the ground set",
            ));
        }
        let down = |s: &State| -> State { s.iter().map(|b| map.project(*b)).collect() };
        let inner = self.solve_states(&minor, &down(from), &down(to))?;
        Ok(inner
            .iter()
            .map(|s| s.iter().map(|b| map.lift(*b)).collect())
            .collect())
    }

    fn intern(&mut self, m: &Matroid) -> (usize, Arc<Matroid>) {
        let next = self.relaxations.len();
        let bucket = self.matroids.entry(m.fingerprint()).or_default();
        if let Some((id, arc)) = bucket.iter().find(|(_, arc)| **arc == *m) {
            return (*id, arc.clone());
        }
        let arc = Arc::new(m.clone());
        bucket.push((next, arc.clone()));
        self.relaxations.push(None);
        (next, arc)
    }

    fn relaxation(&mut self, id: usize, m: &Matroid) -> Result<(ElementSet, Arc<Matroid>)> {
        if self.relaxations[id].is_none() {
            let found = match first_stressed_hyperplane(m) {
                Some(h) => Some((h, Arc::new(relax(m, h)?))),
                None => None,
            };
            self.relaxations[id] = Some(found);
        }
        match &self.relaxations[id] {
            Some(Some((h, r))) => Ok((*h, r.clone())),
            _ => Err(Error::precondition(
                "non-uniform matroid without a stressed hyperplane of size >= r; it is not paving",
            )),
        }
    }

    // -----------------------------------------------------------------------
    // degree 2

    fn lift_degree2(
        &mut self,
        m: &Matroid,
        h: ElementSet,
        states: Vec<State>,
    ) -> Result<Vec<State>> {
        let states = erase_loops(states);
        let mut walk = Walk::new(states[0].clone());
        for l in 0..states.len() - 1 {
            let (before, after) = (&states[l], &states[l + 1]);
            let row = (0..2).find(|&r| before[r].is_subset(h) && after[r].is_subset(h));
            match row {
                Some(r) => {
                    let rows = [r, 1 - r];
                    let out = pair_repair(m, h, &project(before, &rows), &project(after, &rows))?;
                    self.note("degree2/pair-repair", l);
                    walk.extend(&embed(&out, &rows, before))?;
                }
                None => walk.goto(after.clone())?,
            }
        }
        let spliced = walk.into_states();
        for (l, st) in spliced.iter().enumerate() {
            if st.iter().any(|b| b.is_subset(h)) {
                self.note("degree2/star", l);
            }
        }
        repair_isolated(self, m, &spliced, 0)
    }

    // -----------------------------------------------------------------------
    // degree 3 and up

    fn lift(&mut self, m: &Matroid, h: ElementSet, states: Vec<State>) -> Result<Vec<State>> {
        let mut lift = LiftState {
            hyperplane: h,
            states: erase_loops(states),
        };
        let mut allowed = lift.r_set();
        while let Some(&i) = allowed.first() {
            if lift.h_set(i).is_empty() {
                allowed.remove(0);
                continue;
            }
            self.reduce_consecutive(m, &mut lift, i)?;
            self.eliminate_h1(m, &mut lift, i)?;
            allowed.remove(0);
            let now = lift.r_set();
            if let Some(bad) = now.iter().find(|r| !allowed.contains(r)) {
                return Err(Error::internal(format!(
                    "lifting row {i} left row {bad} with a new basis of the relaxation"
                )));
            }
        }
        Ok(lift.states)
    }

    /// Splits runs of consecutive type-0 entries in row `i` until none remain.
    pub fn reduce_consecutive(
        &mut self,
        m: &Matroid,
        lift: &mut LiftState,
        i: usize,
    ) -> Result<()> {
        let h = lift.hyperplane;
        let before_rows = lift.r_set();
        let mut splices = 0usize;
        let mut from = 0usize;
        loop {
            let states = &lift.states;
            let Some(l) = (from..states.len().saturating_sub(1))
                .find(|&l| states[l][i].is_subset(h) && states[l + 1][i].is_subset(h))
            else {
                break;
            };
            splices += 1;
            if splices > self.config.max_splices {
                return Err(Error::internal(
                    "splice budget exhausted while separating type-0 runs",
                ));
            }
            let (before, after) = (states[l].clone(), states[l + 1].clone());
            let out = self.reduce_step(m, h, i, &before, &after, l)?;
            if out.len() < 3 {
                return Err(Error::internal(format!("no detour produced for step {l}")));
            }
            lift.states.splice(l..l + 2, out);
            from = l;
        }
        lift.states = erase_loops(std::mem::take(&mut lift.states));
        if let Some(bad) = lift.r_set().iter().find(|r| !before_rows.contains(r)) {
            return Err(Error::internal(format!(
                "separating runs in row {i} added row {bad}"
            )));
        }
        Ok(())
    }

    /// Replaces one step whose both ends hold a type-0 set in row `i`.
    fn reduce_step(
        &mut self,
        m: &Matroid,
        h: ElementSet,
        i: usize,
        before: &State,
        after: &State,
        at: usize,
    ) -> Result<Vec<State>> {
        let rows = changed_rows(before, after);
        if rows.len() != 2 {
            return Err(Error::internal("step does not touch two rows"));
        }
        let x = before[i];
        let mut walk = Walk::new(before.clone());
        if rows.contains(&i) {
            let k = if rows[0] == i { rows[1] } else { rows[0] };
            let y = before[k];
            let (s, t) = diff(x, after[i])?;
            if type_of(y, h) >= 2 {
                self.note("consecutive/I(a)", at);
                let rs = [i, k];
                let out = pair_repair(m, h, &project(before, &rs), &project(after, &rs))?;
                return Ok(embed(&out, &rs, before));
            }
            self.note("consecutive/I(b)", at);
            let k2 = (0..before.len())
                .find(|&r| r != i && r != k && type_of(before[r], h) >= 2)
                .ok_or_else(|| Error::internal("no row of type >= 2 beside a type-0 exchange"))?;
            let z = before[k2];
            let q = (z - h).first().expect("type >= 2 row");
            let p = pick_type02(m, h, x, z, q)?;
            if p != s {
                walk.exchange(i, k2, p, q)?;
                walk.exchange(i, k, s, t)?;
                walk.exchange(i, k2, q, p)?;
                return Ok(walk.into_states());
            }
            let p2 = pick_type02(m, h, after[i], z, q)?;
            if p2 != t {
                let mut back = Walk::new(after.clone());
                back.exchange(i, k2, p2, q)?;
                back.exchange(i, k, t, s)?;
                back.exchange(i, k2, q, p2)?;
                let mut out = back.into_states();
                out.reverse();
                return Ok(out);
            }
            walk.exchange(i, k2, s, q)?;
            walk.exchange(k, k2, t, s)?;
            walk.exchange(i, k2, q, t)?;
            return Ok(walk.into_states());
        }

        let (mut k, mut k2) = (rows[0], rows[1]);
        if type_of(before[k], h) + type_of(before[k2], h) < 3 {
            self.note("consecutive/II(a)", at);
            let w = (0..before.len())
                .find(|&r| r != i && r != k && r != k2 && type_of(before[r], h) >= 2)
                .ok_or_else(|| Error::internal("no row of type >= 2 for the detour"))?;
            let q = (before[w] - h).first().expect("type >= 2 row");
            let p = pick_type02(m, h, x, before[w], q)?;
            walk.exchange(i, w, p, q)?;
            let mut mid = after.clone();
            mid[i] = x.swap(p, q);
            mid[w] = before[w].swap(q, p);
            walk.goto(mid)?;
            walk.exchange(i, w, q, p)?;
            return Ok(walk.into_states());
        }
        if type_of(before[k], h) > type_of(before[k2], h) {
            std::mem::swap(&mut k, &mut k2);
        }
        let rs = [i, k, k2];
        let small = (project(before, &rs), project(after, &rs));
        let out = match (type_of(before[k], h), type_of(after[k], h)) {
            (ty, ty2) if ty >= 1 && ty2 >= 1 => {
                self.note("consecutive/II(b)", at);
                xbb(self, m, h, &small.0, &small.1)?
            }
            (0, 1) => {
                self.note("consecutive/II(c)", at);
                type0_to_type1(m, h, &small.0, &small.1)?
            }
            (1, 0) => {
                self.note("consecutive/II(c)", at);
                let mut out = type0_to_type1(m, h, &small.1, &small.0)?;
                out.reverse();
                out
            }
            (0, 0) => {
                self.note("consecutive/II(d)", at);
                let pairs = pair_repair(m, h, &small.0[1..].to_vec(), &small.1[1..].to_vec())?;
                let full: Vec<State> = pairs.iter().map(|p| vec![small.0[0], p[0], p[1]]).collect();
                let mut sub = Walk::new(small.0.clone());
                for pair in full.windows(2) {
                    let piece = self.reduce_step(m, h, 0, &pair[0], &pair[1], at)?;
                    sub.extend(&piece)?;
                }
                sub.into_states()
            }
            _ => return Err(Error::internal("exchange changed a type by more than one")),
        };
        Ok(embed(&out, &rs, before))
    }

    /// Removes every type-0 entry of row `i`. Each one must already sit
    /// between entries that are bases of `m`.
    pub fn eliminate_h1(&mut self, m: &Matroid, lift: &mut LiftState, i: usize) -> Result<()> {
        let h = lift.hyperplane;
        let states = std::mem::take(&mut lift.states);
        let mut walk = Walk::new(states[0].clone());
        let mut j = 1;
        while j < states.len() {
            if !states[j][i].is_subset(h) {
                walk.goto(states[j].clone())?;
                j += 1;
                continue;
            }
            if j + 1 >= states.len()
                || states[j - 1][i].is_subset(h)
                || states[j + 1][i].is_subset(h)
            {
                return Err(Error::internal(format!(
                    "type-0 entry of row {i} at step {j} is not isolated"
                )));
            }
            let window = [
                states[j - 1].clone(),
                states[j].clone(),
                states[j + 1].clone(),
            ];
            let out = self.eliminate_at(m, h, i, &window, j)?;
            if let Some(st) = out[1..out.len() - 1].iter().find(|st| !m.is_basis(st[i])) {
                return Err(Error::internal(format!(
                    "rewrite at step {j} keeps {{{}}} in row {i}",
                    st[i]
                )));
            }
            walk.extend(&out)?;
            j += 2;
        }
        lift.states = erase_loops(walk.into_states());
        Ok(())
    }

    fn eliminate_at(
        &mut self,
        m: &Matroid,
        h: ElementSet,
        i: usize,
        w: &[State; 3],
        at: usize,
    ) -> Result<Vec<State>> {
        let r1 = changed_rows(&w[0], &w[1]);
        let r2 = changed_rows(&w[1], &w[2]);
        if !r1.contains(&i) || !r2.contains(&i) {
            return Err(Error::internal(
                "type-0 entry is not produced by its own row",
            ));
        }
        let other = |rows: &[usize]| if rows[0] == i { rows[1] } else { rows[0] };
        let (k, k2) = (other(&r1), other(&r2));
        if k == k2 {
            if m.is_basis(w[0][k]) && m.is_basis(w[2][k]) {
                self.note("eliminate/I-star2", at);
                return resolve_window(self, m, w, 0);
            }
            self.note("eliminate/I-merge", at);
            let mut walk = Walk::new(w[0].clone());
            walk.goto(w[2].clone())?;
            return Ok(walk.into_states());
        }
        let partners = [w[0][k], w[1][k], w[1][k2], w[2][k2]];
        if partners.iter().all(|b| m.is_basis(*b)) {
            self.note("eliminate/II-star3", at);
            return resolve_window(self, m, w, 0);
        }
        let rs = [i, k, k2];
        let small: Vec<State> = w.iter().map(|s| project(s, &rs)).collect();
        let y0 = small[0][1].is_subset(h);
        let z1 = small[2][2].is_subset(h);
        let out = match (y0, z1) {
            (true, false) => {
                self.note("eliminate/II(a)", at);
                eliminate_two_a(m, &small)?
            }
            (false, true) => {
                self.note("eliminate/II(a)", at);
                let flipped: Vec<State> =
                    small.iter().rev().map(|s| vec![s[0], s[2], s[1]]).collect();
                let out = eliminate_two_a(m, &flipped)?;
                out.iter().rev().map(|s| vec![s[0], s[2], s[1]]).collect()
            }
            (true, true) => {
                self.note("eliminate/II(b)", at);
                eliminate_two_b(&small)?
            }
            (false, false) => {
                return Err(Error::internal(
                    "partner rows hold a new basis in the middle",
                ))
            }
        };
        Ok(embed(&out, &rs, &w[0]))
    }
}

fn diff(before: ElementSet, after: ElementSet) -> Result<(usize, usize)> {
    match ((before - after).single(), (after - before).single()) {
        (Some(o), Some(i)) => Ok((o, i)),
        _ => Err(Error::internal("rows differ by more than one exchange")),
    }
}

fn check_bases(m: &Matroid, t: &BasisTuple) -> Result<()> {
    if t.degree() == 0 {
        return Err(Error::precondition("empty tuple"));
    }
    match t.entries().iter().find(|b| !m.is_basis(**b)) {
        Some(b) => Err(Error::precondition(format!("{{{b}}} is not a basis"))),
        None => Ok(()),
    }
}

fn checked_relax(m: &Matroid, h: ElementSet) -> Result<Matroid> {
    if h.len() < m.rank() || !is_stressed(m, h)? {
        return Err(Error::precondition(format!(
            "{{{h}}} is not a stressed hyperplane of size >= r"
        )));
    }
    relax(m, h)
}

/// Every tuple consists of bases, consecutive tuples differ by one
/// exchange, and the endpoints match.
fn check_walk(m: &Matroid, states: &[State], from: &State, to: &State) -> Result<()> {
    if states.first() != Some(from) || states.last() != Some(to) {
        return Err(Error::internal("lifted sequence has the wrong endpoints"));
    }
    for (k, st) in states.iter().enumerate() {
        if let Some(b) = st.iter().find(|b| !m.is_basis(**b)) {
            return Err(Error::internal(format!(
                "tuple {k} holds non-basis {{{b}}}"
            )));
        }
    }
    for pair in states.windows(2) {
        step_between(&pair[0], &pair[1])?;
    }
    Ok(())
}

fn finish_solution(m: &Matroid, to: &BasisTuple, states: Vec<State>) -> Result<ExchangeSequence> {
    let seq = ExchangeSequence::from_states(&erase_loops(states))?;
    let report = validate_sequence(m, &seq, to);
    if !report.is_ok() {
        return Err(Error::internal(format!(
            "lifted sequence failed validation: {report}"
        )));
    }
    Ok(seq)
}

/// Moves type-0/type-≥2 pairs to type-1 pairs until one of the two kinds
/// is gone. Returns the visited tuples.
fn to_single_case(m: &Matroid, h: ElementSet, start: &State) -> Result<Vec<State>> {
    let mut walk = Walk::new(start.clone());
    loop {
        let cur = walk.current().clone();
        let zero = cur.iter().position(|b| type_of(*b, h) == 0);
        let high = cur.iter().position(|b| type_of(*b, h) >= 2);
        let (Some(i), Some(j)) = (zero, high) else {
            return Ok(walk.into_states());
        };
        let a = (cur[j] - h).first().expect("type >= 2 entry");
        let s = pick_type02(m, h, cur[i], cur[j], a)?;
        walk.exchange(i, j, s, a)?;
    }
}

/// Rows `(X, Y, Z)` with `X`, `Y` of type 0 and `Y'` of type 1; rows 1 and
/// 2 exchange while `X` stays put. Interior entries of row 0 are bases.
fn type0_to_type1(m: &Matroid, h: ElementSet, before: &State, after: &State) -> Result<Vec<State>> {
    let (x, y, z) = (before[0], before[1], before[2]);
    let y2 = after[1];
    let (s, t) = diff(y, y2)?;
    let p = pick_type02(m, h, x, z, t)?;
    let mut walk = Walk::new(before.clone());
    if !y2.contains(p) {
        walk.exchange(0, 2, p, t)?;
        walk.exchange(1, 2, s, p)?;
        walk.exchange(0, 1, t, p)?;
        return Ok(walk.into_states());
    }
    let q = (x - y2)
        .iter()
        .find(|&q| m.is_basis(x.swap(q, t)))
        .ok_or_else(|| Error::internal("no exchange partner for t between X and Y'"))?;
    walk.exchange(0, 2, p, t)?;
    if q == s {
        walk.exchange(0, 2, s, p)?;
        walk.exchange(0, 1, t, s)?;
    } else {
        walk.exchange(0, 1, q, p)?;
        walk.exchange(1, 2, s, p)?;
        walk.exchange(0, 1, t, q)?;
    }
    Ok(walk.into_states())
}

/// Window `(X,Y,Z)`: `X` trades `a` for `s` with `Y`, then `t` for `b` with
/// `Z`; `Y` has type 0 and `Z'` does not.
fn eliminate_two_a(m: &Matroid, w: &[State]) -> Result<Vec<State>> {
    let (x, y) = (w[0][0], w[0][1]);
    let (a, s) = diff(x, w[1][0])?;
    let (t, b) = diff(w[1][0], w[2][0])?;
    let (x_end, y_mid) = (w[2][0], w[1][1]);
    let mut walk = Walk::new(w[0].clone());
    if s == t {
        walk.exchange(1, 2, s, b)?;
        walk.exchange(0, 1, a, b)?;
    } else if !y.contains(t) {
        walk.exchange(0, 1, t, s)?;
        walk.exchange(1, 2, t, b)?;
        walk.exchange(0, 1, a, b)?;
    } else {
        let xa = x_end.swap(b, a);
        let ya = y_mid.swap(a, b);
        let q = (xa - ya)
            .iter()
            .find(|&q| m.is_basis(xa.swap(q, t)) && m.is_basis(ya.swap(t, q)))
            .ok_or_else(|| {
                Error::internal("no exchange partner for t between X'-b+a and Y'-a+b")
            })?;
        walk.exchange(0, 1, q, s)?;
        walk.exchange(1, 2, t, b)?;
        walk.exchange(0, 1, t, q)?;
        walk.exchange(0, 1, a, b)?;
    }
    Ok(walk.into_states())
}

/// As [`eliminate_two_a`] with both `Y` and `Z'` of type 0.
fn eliminate_two_b(w: &[State]) -> Result<Vec<State>> {
    let (a, s) = diff(w[0][0], w[1][0])?;
    let (t, b) = diff(w[1][0], w[2][0])?;
    let z_end = w[2][2];
    let mut walk = Walk::new(w[0].clone());
    walk.exchange(0, 2, a, b)?;
    if !z_end.contains(s) {
        walk.exchange(1, 2, s, a)?;
        walk.exchange(0, 2, t, s)?;
    } else {
        walk.exchange(0, 2, t, s)?;
        walk.exchange(1, 2, s, a)?;
    }
    Ok(walk.into_states())
}

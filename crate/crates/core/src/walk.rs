//! Internal builder for sequences expressed as lists of tuples.

use crate::error::{Error, Result};
use crate::sequence::{step_between, ExchangeSequence, ExchangeStep};
use crate::set::ElementSet;

pub(crate) type State = Vec<ElementSet>;

#[derive(Clone, Debug)]
pub(crate) struct Walk {
    pub states: Vec<State>,
}

impl Walk {
    pub fn new(start: State) -> Self {
        Walk {
            states: vec![start],
        }
    }

    pub fn current(&self) -> &State {
        self.states.last().expect("walk is never empty")
    }

    /// `x` leaves row `i` for row `j`, `y` leaves row `j` for row `i`.
    /// Equal elements are a no-op.
    pub fn exchange(&mut self, i: usize, j: usize, x: usize, y: usize) -> Result<()> {
        if x == y {
            return Ok(());
        }
        let mut next = self.current().clone();
        ExchangeStep::new(i, j, x, y)
            .apply_to(&mut next)
            .map_err(|f| Error::internal(format!("in {:?}: {f}", self.current())))?;
        self.states.push(next);
        Ok(())
    }

    /// Moves to `state`, which must be one exchange away (or equal).
    pub fn goto(&mut self, state: State) -> Result<()> {
        if step_between(self.current(), &state)?.is_some() {
            self.states.push(state);
        }
        Ok(())
    }

    /// Appends a run of states whose first element equals the current one.
    pub fn extend(&mut self, states: &[State]) -> Result<()> {
        match states.first() {
            Some(first) if first == self.current() => {}
            Some(first) => {
                return Err(Error::internal(format!(
                    "walk at {:?} cannot continue from {first:?}",
                    self.current()
                )))
            }
            None => return Ok(()),
        }
        for s in &states[1..] {
            self.goto(s.clone())?;
        }
        Ok(())
    }

    pub fn into_states(self) -> Vec<State> {
        self.states
    }

    pub fn into_sequence(self) -> Result<ExchangeSequence> {
        ExchangeSequence::from_states(&self.states)
    }
}

/// Writes each small state into `rows` of a copy of `base`.
pub(crate) fn embed(small: &[State], rows: &[usize], base: &[ElementSet]) -> Vec<State> {
    small
        .iter()
        .map(|s| {
            let mut full = base.to_vec();
            for (k, &row) in rows.iter().enumerate() {
                full[row] = s[k];
            }
            full
        })
        .collect()
}

/// Picks `rows` out of `state`.
pub(crate) fn project(state: &[ElementSet], rows: &[usize]) -> State {
    rows.iter().map(|&r| state[r]).collect()
}

//! Finite-window verification: operator identities, span probes, submodule
//! closure and isomorphism witnesses. Windows truncate infinite-dimensional
//! modules, so probe results are evidence about the truncation only.

use std::collections::BTreeMap;

use crate::dmodule::{BasisToken, ModuleVector};
use crate::{Error, Result};

mod operators;
mod probe;
mod witness;

pub use crate::functor::{module_axiom_check, module_axiom_check_with};
pub use operators::{apply_word, q_operator, q_operator_check, t_operator, t_operator_check};
pub use probe::{default_specialization, random_specialization, span_probe, submodule_check, ProbeSpecialization};
pub use witness::{iso_witness_check, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub gen_bound: i64,
    pub token_bound: usize,
    pub word_length: usize,
}

impl Window {
    pub fn new(gen_bound: i64, token_bound: usize, word_length: usize) -> Result<Self> {
        if gen_bound < 1 || token_bound < 1 || word_length < 1 {
            return Err(Error::InvalidWindow(format!(
                "bounds must be at least 1, got ({gen_bound}, {token_bound}, {word_length})"
            )));
        }
        Ok(Window {
            gen_bound,
            token_bound,
            word_length,
        })
    }

    /// Parses `G,T` or `G,T,W`; a missing word length defaults to 1.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || Error::InvalidWindow(format!("expected G,T[,W], got {text:?}"));
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let g = parts[0].parse().map_err(|_| bad())?;
        let t = parts[1].parse().map_err(|_| bad())?;
        let w = match parts.get(2) {
            Some(w) => w.parse().map_err(|_| bad())?,
            None => 1,
        };
        Window::new(g, t, w)
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.gen_bound as usize, self.token_bound, self.word_length]
    }
}

/// Row-echelon basis keyed by pivot, the first token of each row.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<BasisToken, ModuleVector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after elimination against the basis.
    pub fn reduce(&self, v: &ModuleVector) -> ModuleVector {
        let mut v = v.clone();
        let mut cursor: Option<BasisToken> = None;
        loop {
            // rows only add tokens after their pivot, so one ascending sweep suffices
            let next = v
                .tokens()
                .find(|t| cursor.map_or(true, |c| **t > c) && self.rows.contains_key(t))
                .copied();
            let Some(p) = next else { break };
            let c = v.coefficient(&p);
            v.add_scaled(&self.rows[&p], &-&c);
            cursor = Some(p);
        }
        v
    }

    pub fn contains(&self, v: &ModuleVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &ModuleVector) -> bool {
        let r = self.reduce(v);
        let Some(&pivot) = r.tokens().next() else {
            return false;
        };
        let lead = r.coefficient(&pivot);
        let row = r.scale(&lead.recip().expect("pivot is nonzero"));
        self.rows.insert(pivot, row);
        true
    }
}

#[cfg(test)]
mod tests;

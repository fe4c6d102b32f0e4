//! Sequence reports: an ordered chain of subquotient maps together with
//! per-position exactness verdicts and a step trace ("dotted path"
//! certificates).

use serde::Serialize;
use std::fmt;

use crate::exactlin::{exact_at_middle, Subquotient, SubquotientMap};
use crate::grid::Position;

#[derive(Debug, Clone, Serialize)]
pub struct SequenceTerm {
    pub label: String,
    pub position: Option<Position>,
    pub dim: usize,
    #[serde(skip)]
    pub value: Subquotient,
}

impl SequenceTerm {
    pub fn new(label: impl Into<String>, position: Option<Position>, value: Subquotient) -> Self {
        SequenceTerm {
            label: label.into(),
            position,
            dim: value.dim(),
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceReport {
    pub name: String,
    pub terms: Vec<SequenceTerm>,
    #[serde(skip)]
    pub maps: Vec<SubquotientMap>,
    /// Exactness verdict at each interior term (index k covers terms[k+1]).
    pub verdicts: Vec<bool>,
    /// Human-readable construction trace, one entry per map.
    pub trace: Vec<String>,
}

impl SequenceReport {
    /// Assemble a report from consecutive terms and maps; computes the
    /// interior exactness verdicts.
    pub fn assemble(
        name: impl Into<String>,
        terms: Vec<SequenceTerm>,
        maps: Vec<SubquotientMap>,
        trace: Vec<String>,
    ) -> SequenceReport {
        assert_eq!(maps.len() + 1, terms.len().max(1));
        let mut verdicts = Vec::new();
        for k in 0..maps.len().saturating_sub(1) {
            verdicts.push(exact_at_middle(&maps[k], &maps[k + 1]));
        }
        SequenceReport {
            name: name.into(),
            terms,
            maps,
            verdicts,
            trace,
        }
    }

    pub fn all_exact(&self) -> bool {
        self.verdicts.iter().all(|&b| b)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim).collect()
    }
}

impl fmt::Display for SequenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.name)?;
        let chain: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}[{}]", t.label, t.dim))
            .collect();
        writeln!(f, "  {}", chain.join(" -> "))?;
        for (k, v) in self.verdicts.iter().enumerate() {
            writeln!(
                f,
                "  exact at {}: {}",
                self.terms[k + 1].label,
                if *v { "yes" } else { "NO" }
            )?;
        }
        Ok(())
    }
}

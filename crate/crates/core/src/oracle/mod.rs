//! Brute-force reference checks for the graph contract, the pools, the
//! transparency-log contraction, and label computation.
//!
//! Nothing here reuses the memoized label evaluators of `hashcore`; labels
//! are recomputed in topological order from the hash primitive alone.

mod contract;
mod discrepancy;
mod mutants;
mod relabel;

use std::fmt;

use crate::vertex::VertexId;

pub use contract::{check_pools, check_tpag_contract, ct_contraction_check};
pub use discrepancy::{
    antimonotone_discrepancies, closed_form_size, Discrepancy, DiscrepancyReport,
};
pub use mutants::{Mutant, Mutation};
pub use relabel::{determines_by_enumeration, full_relabel, maximal_paths};

/// One failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub n: u64,
    /// The prefix length for checks over pairs.
    pub prefix: Option<u64>,
    pub witness: Vec<VertexId>,
}

/// Outcome of a batch of checks over a range of lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub scheme: String,
    pub n_range: (u64, u64),
    pub violations: Vec<Violation>,
}

impl OracleReport {
    pub fn new(scheme: impl Into<String>, lo: u64, hi: u64) -> Self {
        OracleReport {
            scheme: scheme.into(),
            n_range: (lo, hi),
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(
        &mut self,
        invariant: &'static str,
        n: u64,
        prefix: Option<u64>,
        witness: Vec<VertexId>,
    ) {
        self.violations.push(Violation {
            invariant,
            n,
            prefix,
            witness,
        });
    }

    pub fn merge(&mut self, other: OracleReport) {
        self.violations.extend(other.violations);
    }

    pub fn count(&self, invariant: &str) -> usize {
        self.violations
            .iter()
            .filter(|v| v.invariant == invariant)
            .count()
    }

    /// Machine-readable rows: `invariant,scheme,n,prefix,witness` with the
    /// witness as space-separated vertex names.
    pub fn rows(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| {
                let witness: Vec<String> = v.witness.iter().map(|w| w.to_string()).collect();
                format!(
                    "{},{},{},{},{}",
                    v.invariant,
                    self.scheme,
                    v.n,
                    v.prefix.map(|p| p.to_string()).unwrap_or_default(),
                    witness.join(" ")
                )
            })
            .collect()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.n_range;
        if self.passed() {
            return writeln!(f, "{} n={lo}..={hi}: ok", self.scheme);
        }
        writeln!(
            f,
            "{} n={lo}..={hi}: {} violation(s)",
            self.scheme,
            self.violations.len()
        )?;
        for v in &self.violations {
            let at = match v.prefix {
                Some(p) => format!("({p}, {})", v.n),
                None => v.n.to_string(),
            };
            writeln!(f, "  {} at {at}: {:?}", v.invariant, v.witness)?;
        }
        Ok(())
    }
}

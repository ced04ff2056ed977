//! The Jones-polynomial attack on a ciphertext.
//!
//! The attacker is handed the composite diagram behind every record, which
//! is more than the wire carries. For each record it computes the Jones
//! polynomial and keeps every public table knot whose polynomial divides
//! it exactly. Mutant pairs share a polynomial, so they always survive
//! together and the attack cannot tell which one was used.

use std::collections::BTreeMap;
use std::fmt;

use super::cipher::Ciphertext;
use super::ProtocolError;
use crate::codes::extract_dt;
use crate::diagram::Diagram;
use crate::invariants::{jones, InvariantError, JonesPolynomial};
use crate::par::{self, Parallelism};
use crate::table::KnotTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordOutcome {
    /// Table knots whose Jones polynomial divides the record's, in table
    /// order, and the groups among them that share one polynomial.
    Survivors {
        candidates: Vec<String>,
        indistinguishable: Vec<Vec<String>>,
    },
    /// The composite is beyond the bracket engine.
    TooLarge { crossings: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordReport {
    pub record: usize,
    pub outcome: RecordOutcome,
}

impl RecordReport {
    pub fn candidates(&self) -> &[String] {
        match &self.outcome {
            RecordOutcome::Survivors { candidates, .. } => candidates,
            RecordOutcome::TooLarge { .. } => &[],
        }
    }

    /// Whether a surviving candidate shares its polynomial with another.
    pub fn is_ambiguous(&self) -> bool {
        matches!(&self.outcome, RecordOutcome::Survivors { indistinguishable, .. } if !indistinguishable.is_empty())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttackReport {
    pub records: Vec<RecordReport>,
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            match &r.outcome {
                RecordOutcome::Survivors {
                    candidates,
                    indistinguishable,
                } => {
                    write!(f, "record {}: candidates {}", r.record, candidates.join(","))?;
                    for g in indistinguishable {
                        write!(f, "; indistinguishable {}", g.join("="))?;
                    }
                    writeln!(f)?;
                }
                RecordOutcome::TooLarge { crossings, limit } => {
                    writeln!(f, "record {}: too large to attack ({crossings} crossings, limit {limit})", r.record)?;
                }
            }
        }
        Ok(())
    }
}

/// Runs the divisibility attack. `granted[i]` must be the composite behind
/// record `i`.
pub fn attack_invariant_demo(
    c: &Ciphertext,
    table: &KnotTable,
    granted: &[Diagram],
) -> Result<AttackReport, ProtocolError> {
    if granted.len() != c.len() {
        return Err(ProtocolError::AttackInput(format!(
            "{} diagrams granted for {} records",
            granted.len(),
            c.len()
        )));
    }
    for (record, (d, code)) in granted.iter().zip(c.records()).enumerate() {
        if &extract_dt(d)? != code {
            return Err(ProtocolError::AttackInput(format!(
                "diagram {record} does not match its record"
            )));
        }
    }
    if c.is_empty() {
        return Ok(AttackReport::default());
    }
    let table_jones: Vec<JonesPolynomial> = par::map(table.entries(), Parallelism::default(), |e| jones(&e.pd))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let records = par::map(granted, Parallelism::default(), jones);
    let mut out = Vec::with_capacity(records.len());
    for (record, j) in records.into_iter().enumerate() {
        let outcome = match j {
            Err(InvariantError::TooLarge { crossings, limit }) => RecordOutcome::TooLarge { crossings, limit },
            Err(e) => return Err(e.into()),
            Ok(j) => survivors(&j, table, &table_jones),
        };
        out.push(RecordReport { record, outcome });
    }
    Ok(AttackReport { records: out })
}

fn survivors(j: &JonesPolynomial, table: &KnotTable, table_jones: &[JonesPolynomial]) -> RecordOutcome {
    let mut candidates = Vec::new();
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (e, tj) in table.entries().iter().zip(table_jones) {
        if j.divide_exact(tj).is_ok() {
            candidates.push(e.name.clone());
            groups.entry(tj.to_string()).or_default().push(e.name.clone());
        }
    }
    let indistinguishable = groups.into_values().filter(|g| g.len() >= 2).collect();
    RecordOutcome::Survivors {
        candidates,
        indistinguishable,
    }
}

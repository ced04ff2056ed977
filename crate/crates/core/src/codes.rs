//! Dowker–Thistlethwaite codes.
//!
//! Passages are labeled `1..=2n` along the traversal from the basepoint.
//! Every crossing receives one odd and one even label; entry `i` of the code
//! is the even partner of the odd label `2i - 1`, negated when the even
//! passage runs under the crossing.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("not a permutation of even labels: {0}")]
    NotPermutation(String),
    #[error("non-realizable labeling at crossing {crossing}")]
    NonRealizable { crossing: usize },
    #[error("suffix mismatch")]
    SuffixMismatch,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A signed DT sequence. The empty code is the unknot.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DtCode(Vec<i32>);

impl DtCode {
    pub fn new(entries: Vec<i32>) -> Result<Self, CodeError> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let m = e.unsigned_abs() as usize;
            if m == 0 || !m.is_multiple_of(2) || m > 2 * n {
                return Err(CodeError::NotPermutation(format!(
                    "entry {e} outside the even labels 2..={}",
                    2 * n
                )));
            }
            if seen[m / 2] {
                return Err(CodeError::NotPermutation(format!("duplicate magnitude {m}")));
            }
            seen[m / 2] = true;
        }
        Ok(DtCode(entries))
    }

    pub fn empty() -> Self {
        DtCode(Vec::new())
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_positive(&self) -> bool {
        self.0.iter().all(|&e| e > 0)
    }

    fn shifted(&self, by: i32) -> impl Iterator<Item = i32> + '_ {
        self.0.iter().map(move |&e| if e > 0 { e + by } else { e - by })
    }

    /// Whether `self` is the leading block of `other` under offset-concat.
    pub fn is_prefix_of(&self, other: &DtCode) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Drops the first `k` entries of a code whose first `k` entries form a
    /// closed block, shifting the rest back down.
    pub(crate) fn drop_block(&self, k: usize) -> Result<DtCode, CodeError> {
        let by = 2 * k as i32;
        DtCode::new(
            self.0[k..]
                .iter()
                .map(|&e| if e > 0 { e - by } else { e + by })
                .collect(),
        )
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for DtCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_dt(s)
    }
}

/// Parses `signed integers separated by single spaces`.
pub fn parse_dt(text: &str) -> Result<DtCode, CodeError> {
    if text.is_empty() {
        return Ok(DtCode::empty());
    }
    let mut entries = Vec::new();
    let mut pos = 0;
    for tok in text.split(' ') {
        if tok.is_empty() {
            return Err(CodeError::Syntax {
                position: pos,
                message: "expected a signed integer".into(),
            });
        }
        let v: i32 = tok.parse().map_err(|_| CodeError::Syntax {
            position: pos,
            message: format!("bad integer {tok:?}"),
        })?;
        entries.push(v);
        pos += tok.len() + 1;
    }
    DtCode::new(entries)
}

pub fn format_dt(code: &DtCode) -> String {
    code.to_string()
}

/// Builds a code from a passage sequence given as `(crossing, under)` pairs.
fn code_from_sequence(seq: &[(usize, bool)]) -> Result<DtCode, CodeError> {
    let n = seq.len() / 2;
    // Position of each crossing's two passages.
    let mut first = vec![usize::MAX; n];
    let mut partner = vec![0usize; seq.len()];
    for (i, &(c, _)) in seq.iter().enumerate() {
        if first[c] == usize::MAX {
            first[c] = i;
        } else {
            partner[i] = first[c];
            partner[first[c]] = i;
        }
    }
    let mut entries = Vec::with_capacity(n);
    for i in (0..seq.len()).step_by(2) {
        let j = partner[i];
        if j.is_multiple_of(2) {
            return Err(CodeError::NonRealizable { crossing: seq[i].0 });
        }
        let label = (j + 1) as i32;
        entries.push(if seq[j].1 { -label } else { label });
    }
    DtCode::new(entries)
}

fn passage_sequence(d: &Diagram) -> Result<Vec<(usize, bool)>, CodeError> {
    Ok(d.traversal()?
        .into_iter()
        .map(|p| (p.crossing, p.is_under()))
        .collect())
}

/// The presentation code of `d` from its own basepoint.
pub fn extract_dt(d: &Diagram) -> Result<DtCode, CodeError> {
    code_from_sequence(&passage_sequence(d)?)
}

fn code_order(a: &DtCode, b: &DtCode) -> Ordering {
    let mag = |c: &DtCode| c.0.iter().map(|e| e.unsigned_abs()).collect::<Vec<_>>();
    let sign = |c: &DtCode| c.0.iter().map(|&e| e < 0).collect::<Vec<_>>();
    mag(a).cmp(&mag(b)).then_with(|| sign(a).cmp(&sign(b)))
}

/// Least code over every starting passage and both directions of `d`.
/// Magnitudes are compared first, then signs with positive before negative,
/// so an alternating diagram canonicalizes to an all-positive code.
pub fn canonical_dt(d: &Diagram) -> Result<DtCode, CodeError> {
    let seq = passage_sequence(d)?;
    if seq.is_empty() {
        return Ok(DtCode::empty());
    }
    let mut reversed = seq.clone();
    reversed.reverse();
    let mut best: Option<DtCode> = None;
    for base in [&seq, &reversed] {
        for r in 0..base.len() {
            let rotated: Vec<(usize, bool)> =
                base[r..].iter().chain(&base[..r]).copied().collect();
            let code = code_from_sequence(&rotated)?;
            if best
                .as_ref()
                .is_none_or(|b| code_order(&code, b) == Ordering::Less)
            {
                best = Some(code);
            }
        }
    }
    Ok(best.unwrap_or_default())
}

/// `a` followed by `b` with magnitudes raised by `2 * a.len()`.
pub fn dt_connected_sum(a: &DtCode, b: &DtCode) -> DtCode {
    let by = 2 * a.len() as i32;
    DtCode(a.0.iter().copied().chain(b.shifted(by)).collect())
}

/// Inverse of [`dt_connected_sum`] in its second argument.
pub fn strip_suffix(composite: &DtCode, known: &DtCode) -> Result<DtCode, CodeError> {
    let n = composite.len();
    let k = known.len();
    if k > n {
        return Err(CodeError::SuffixMismatch);
    }
    let by = 2 * (n - k) as i32;
    if !composite.0[n - k..].iter().copied().eq(known.shifted(by)) {
        return Err(CodeError::SuffixMismatch);
    }
    // A matching tail is a closed block, so the head is a valid code.
    DtCode::new(composite.0[..n - k].to_vec())
        .map_err(|_| CodeError::SuffixMismatch)
}

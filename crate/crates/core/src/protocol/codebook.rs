//! Public map from 4-bit symbols to table knots.

use super::ProtocolError;
use crate::codes::{dt_connected_sum, DtCode};
use crate::diagram::Diagram;
use crate::table::KnotTable;

pub const SYMBOLS: usize = 16;

/// Sixteen distinct table knots. A byte is sent as the connected sum of the
/// knot for its high nibble and the knot for its low nibble.
#[derive(Clone, Debug)]
pub struct Codebook {
    names: Vec<String>,
    diagrams: Vec<Diagram>,
    codes: Vec<DtCode>,
}

impl Codebook {
    /// Resolves `names` in `table` and checks that every one of the 256
    /// two-symbol codes decodes back to its own pair.
    pub fn new(names: Vec<String>, table: &KnotTable) -> Result<Self, ProtocolError> {
        if names.len() != SYMBOLS {
            return Err(ProtocolError::Codebook(format!("expected {SYMBOLS} names, got {}", names.len())));
        }
        let mut diagrams = Vec::with_capacity(SYMBOLS);
        let mut codes = Vec::with_capacity(SYMBOLS);
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(ProtocolError::Codebook(format!("{name} appears twice")));
            }
            let e = table.get(name).ok_or_else(|| ProtocolError::UnknownKnot(name.clone()))?;
            if e.dt.is_empty() {
                return Err(ProtocolError::Codebook(format!("{name} has an empty code")));
            }
            diagrams.push(e.pd.clone());
            codes.push(e.dt.clone());
        }
        let book = Codebook { names, diagrams, codes };
        for hi in 0..SYMBOLS as u8 {
            for lo in 0..SYMBOLS as u8 {
                let joined = dt_connected_sum(book.code(hi), book.code(lo));
                if book.decode(&joined) != Some(hi << 4 | lo) {
                    return Err(ProtocolError::Codebook(format!(
                        "symbols ({hi}, {lo}) do not decode uniquely"
                    )));
                }
            }
        }
        Ok(book)
    }

    /// The first sixteen table entries in table order.
    pub fn default_for(table: &KnotTable) -> Result<Self, ProtocolError> {
        let names: Vec<String> = table.entries().iter().take(SYMBOLS).map(|e| e.name.clone()).collect();
        Codebook::new(names, table)
    }

    /// Comma-separated names, as accepted on the command line.
    pub fn parse(spec: &str, table: &KnotTable) -> Result<Self, ProtocolError> {
        Codebook::new(spec.split(',').map(|s| s.trim().to_string()).collect(), table)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn diagram(&self, symbol: u8) -> &Diagram {
        &self.diagrams[usize::from(symbol)]
    }

    pub fn code(&self, symbol: u8) -> &DtCode {
        &self.codes[usize::from(symbol)]
    }

    /// Largest crossing number among the entries.
    pub fn max_crossings(&self) -> usize {
        self.diagrams.iter().map(Diagram::crossing_count).max().unwrap_or(0)
    }

    /// The byte whose two-symbol code is exactly `code`, if exactly one is.
    pub fn decode(&self, code: &DtCode) -> Option<u8> {
        let mut found = None;
        for (hi, head) in self.codes.iter().enumerate() {
            if !head.is_prefix_of(code) || head.len() == code.len() {
                continue;
            }
            let Ok(rest) = code.drop_block(head.len()) else {
                continue;
            };
            for (lo, tail) in self.codes.iter().enumerate() {
                if *tail == rest {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((hi as u8) << 4 | lo as u8);
                }
            }
        }
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_codebook() {
        let t = KnotTable::bundled();
        let cb = Codebook::default_for(&t).unwrap();
        assert_eq!(cb.names()[0], "3_1");
        assert_eq!(cb.names()[15], "8_2");
        assert_eq!(cb.max_crossings(), 8);
        let zero = dt_connected_sum(cb.code(0), cb.code(0));
        assert_eq!(zero.entries(), &[4, 6, 2, 10, 12, 8]);
        assert_eq!(cb.decode(&zero), Some(0));
        assert_eq!(cb.decode(cb.code(3)), None);
    }

    #[test]
    fn rejects_bad_books() {
        let t = KnotTable::bundled();
        let mut names: Vec<String> = t.entries().iter().take(16).map(|e| e.name.clone()).collect();
        assert!(Codebook::new(names[..15].to_vec(), &t).is_err());
        names[15] = "3_1".into();
        assert!(Codebook::new(names.clone(), &t).is_err());
        names[15] = "nope".into();
        assert_eq!(
            Codebook::new(names, &t).unwrap_err(),
            ProtocolError::UnknownKnot("nope".into())
        );
    }
}

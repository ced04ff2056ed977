//! Message encoding, encryption and decryption.

use std::fmt;
use std::str::FromStr;

use super::codebook::Codebook;
use super::keys::KeyKnot;
use super::ProtocolError;
use crate::codes::{extract_dt, parse_dt, strip_suffix, DtCode};
use crate::diagram::{connected_sum, Diagram};
use crate::par::{self, Parallelism};

const HEADER: &str = "KNOTCRYPT/1";

/// One presentation code per message byte.
///
/// Text form: a header line `KNOTCRYPT/1 <byte-count>`, then one code per
/// line, each line ending in `\n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    records: Vec<DtCode>,
}

impl Ciphertext {
    pub fn new(records: Vec<DtCode>) -> Self {
        Ciphertext { records }
    }

    pub fn records(&self) -> &[DtCode] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Size of the text form in bytes.
    pub fn serialized_len(&self) -> usize {
        self.to_string().len()
    }
}

impl fmt::Display for Ciphertext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{HEADER} {}", self.records.len())?;
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for Ciphertext {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| ProtocolError::CiphertextFormat { line, message };
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let count = header
            .strip_prefix(HEADER)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| err(1, format!("expected `{HEADER} <byte-count>`")))?;
        let count: usize = count
            .parse()
            .map_err(|_| err(1, format!("bad byte count {count:?}")))?;
        let records = lines
            .enumerate()
            .map(|(i, l)| parse_dt(l).map_err(|e| err(i + 2, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if records.len() != count {
            return Err(err(1, format!("header says {count} records, found {}", records.len())));
        }
        Ok(Ciphertext { records })
    }
}

fn encode_byte(b: u8, codebook: &Codebook) -> Result<Diagram, ProtocolError> {
    Ok(connected_sum(codebook.diagram(b >> 4), codebook.diagram(b & 0x0f))?)
}

/// One composite diagram per byte: high-nibble knot # low-nibble knot.
pub fn encode_message(bytes: &[u8], codebook: &Codebook) -> Result<Vec<Diagram>, ProtocolError> {
    bytes.iter().map(|&b| encode_byte(b, codebook)).collect()
}

/// Reads bytes back off composite diagrams built by [`encode_message`].
pub fn decode_message(diagrams: &[Diagram], codebook: &Codebook) -> Result<Vec<u8>, ProtocolError> {
    diagrams
        .iter()
        .enumerate()
        .map(|(record, d)| {
            codebook
                .decode(&extract_dt(d)?)
                .ok_or(ProtocolError::DecodeFailure { record })
        })
        .collect()
}

/// Encrypts and also returns the composite diagram behind each record.
/// Record `i` uses key knot `i mod keys.len()`.
pub fn encrypt_detailed(
    bytes: &[u8],
    keys: &[KeyKnot],
    codebook: &Codebook,
) -> Result<(Ciphertext, Vec<Diagram>), ProtocolError> {
    if keys.is_empty() {
        return Err(ProtocolError::EmptyPackage);
    }
    let indexed: Vec<(usize, u8)> = bytes.iter().copied().enumerate().collect();
    let out = par::map(&indexed, Parallelism::default(), |&(i, b)| {
        let plain = encode_byte(b, codebook)?;
        let composite = connected_sum(&plain, &keys[i % keys.len()].diagram)?;
        let code = extract_dt(&composite)?;
        Ok::<_, ProtocolError>((code, composite))
    });
    let (records, diagrams) = out.into_iter().collect::<Result<(Vec<_>, Vec<_>), _>>()?;
    Ok((Ciphertext { records }, diagrams))
}

pub fn encrypt_message(bytes: &[u8], keys: &[KeyKnot], codebook: &Codebook) -> Result<Ciphertext, ProtocolError> {
    encrypt_detailed(bytes, keys, codebook).map(|(c, _)| c)
}

/// Strips each record's key suffix and decodes the remaining two-symbol
/// code. Any failure aborts with the index of the first bad record.
pub fn decrypt_message(c: &Ciphertext, keys: &[KeyKnot], codebook: &Codebook) -> Result<Vec<u8>, ProtocolError> {
    if keys.is_empty() {
        return Err(ProtocolError::EmptyPackage);
    }
    let indexed: Vec<(usize, &DtCode)> = c.records.iter().enumerate().collect();
    par::map(&indexed, Parallelism::default(), |&(record, code)| {
        let key = &keys[record % keys.len()].dt;
        let head = strip_suffix(code, key).map_err(|_| ProtocolError::SuffixMismatch { record })?;
        codebook.decode(&head).ok_or(ProtocolError::DecodeFailure { record })
    })
    .into_iter()
    .collect()
}

//! Key packages: which table knots to use and how to mutate each, plus the
//! RSA transport that carries them.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, RngCore};

use super::rsa::{RsaKeyPair, RsaPublicKey};
use super::ProtocolError;
use crate::codes::{extract_dt, DtCode};
use crate::diagram::Diagram;
use crate::par::{self, Parallelism};
use crate::table::KnotTable;
use crate::tangle::{mutate, RotationKind};

/// An ordered list of (table name, rotation) pairs and a session number.
///
/// The clear form lists the pairs only, as `name:rotation` joined by commas
/// (`3_1:I,11n42:V`). The binary form is the session as a big-endian u64,
/// the pair count as a big-endian u16, then per pair a length byte, the name
/// bytes and the rotation letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPackage {
    session: u64,
    entries: Vec<(String, RotationKind)>,
}

impl KeyPackage {
    pub fn new(session: u64, entries: Vec<(String, RotationKind)>) -> Result<Self, ProtocolError> {
        if entries.is_empty() {
            return Err(ProtocolError::EmptyPackage);
        }
        if entries.len() > usize::from(u16::MAX) {
            return Err(ProtocolError::KeyFormat(format!("{} entries exceed 65535", entries.len())));
        }
        for (name, _) in &entries {
            if name.is_empty() || name.len() > 255 || !name.bytes().all(|b| b.is_ascii_graphic()) {
                return Err(ProtocolError::KeyFormat(format!("bad knot name {name:?}")));
            }
            if name.contains([',', ':']) {
                return Err(ProtocolError::KeyFormat(format!("knot name {name:?} contains a separator")));
            }
        }
        Ok(KeyPackage { session, entries })
    }

    pub fn session(&self) -> u64 {
        self.session
    }

    pub fn entries(&self) -> &[(String, RotationKind)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that every name resolves in `table`.
    pub fn validate(&self, table: &KnotTable) -> Result<(), ProtocolError> {
        match self.entries.iter().find(|(n, _)| table.get(n).is_none()) {
            Some((n, _)) => Err(ProtocolError::UnknownKnot(n.clone())),
            None => Ok(()),
        }
    }

    pub fn to_clear(&self) -> String {
        self.to_string()
    }

    pub fn from_clear(session: u64, text: &str) -> Result<Self, ProtocolError> {
        let mut entries = Vec::new();
        for item in text.trim().split(',') {
            let (name, rot) = item
                .split_once(':')
                .ok_or_else(|| ProtocolError::KeyFormat(format!("expected name:rotation, got {item:?}")))?;
            let rot = rot
                .parse::<RotationKind>()
                .map_err(|e| ProtocolError::KeyFormat(e.to_string()))?;
            entries.push((name.to_string(), rot));
        }
        KeyPackage::new(session, entries)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(10 + self.entries.len() * 8);
        out.extend_from_slice(&self.session.to_be_bytes());
        out.extend_from_slice(&(self.entries.len() as u16).to_be_bytes());
        for (name, rot) in &self.entries {
            out.push(name.len() as u8);
            out.extend_from_slice(name.as_bytes());
            out.push(rot.letter() as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ProtocolError> {
        let short = || ProtocolError::KeyFormat("truncated package".into());
        let session = u64::from_be_bytes(bytes.get(..8).ok_or_else(short)?.try_into().unwrap());
        let count = u16::from_be_bytes(bytes.get(8..10).ok_or_else(short)?.try_into().unwrap());
        let mut pos = 10;
        let mut entries = Vec::with_capacity(usize::from(count));
        for _ in 0..count {
            let len = usize::from(*bytes.get(pos).ok_or_else(short)?);
            let name = bytes.get(pos + 1..pos + 1 + len).ok_or_else(short)?;
            let name = std::str::from_utf8(name)
                .map_err(|_| ProtocolError::KeyFormat("name is not UTF-8".into()))?;
            let letter = *bytes.get(pos + 1 + len).ok_or_else(short)?;
            let rot = RotationKind::from_letter(char::from(letter))
                .ok_or_else(|| ProtocolError::KeyFormat(format!("bad rotation byte {letter:#04x}")))?;
            entries.push((name.to_string(), rot));
            pos += len + 2;
        }
        if pos != bytes.len() {
            return Err(ProtocolError::KeyFormat(format!("{} trailing bytes", bytes.len() - pos)));
        }
        KeyPackage::new(session, entries)
    }
}

impl fmt::Display for KeyPackage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, rot)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}:{rot}")?;
        }
        Ok(())
    }
}

/// `n` independent uniform choices of table entry and rotation. The
/// identity rotation is one of the four choices, so some knots go unmutated.
pub fn make_key_package<R: RngCore>(
    table: &KnotTable,
    n: usize,
    rng: &mut R,
) -> Result<KeyPackage, ProtocolError> {
    if table.is_empty() {
        return Err(ProtocolError::EmptyTable);
    }
    let session = rng.next_u64();
    let entries = (0..n)
        .map(|_| {
            let e = &table.entries()[rng.gen_range(0..table.len())];
            let r = RotationKind::ALL[rng.gen_range(0..4)];
            (e.name.clone(), r)
        })
        .collect();
    KeyPackage::new(session, entries)
}

/// RSA-encrypts a package. The binary form is prefixed with its length as
/// a big-endian u32, cut into blocks of `block_len` bytes (the last one
/// zero-padded) and each block encrypted as a big-endian integer.
pub fn send_key_package(pkg: &KeyPackage, key: &RsaPublicKey) -> Result<Vec<BigUint>, ProtocolError> {
    let body = pkg.to_bytes();
    let mut framed = Vec::with_capacity(body.len() + 4);
    framed.extend_from_slice(&(body.len() as u32).to_be_bytes());
    framed.extend_from_slice(&body);
    let k = key.block_len();
    framed
        .chunks(k)
        .map(|chunk| {
            let mut block = chunk.to_vec();
            block.resize(k, 0);
            key.encrypt(&BigUint::from_bytes_be(&block))
        })
        .collect()
}

/// Inverse of [`send_key_package`].
pub fn receive_key_package(blocks: &[BigUint], key: &RsaKeyPair) -> Result<KeyPackage, ProtocolError> {
    let k = key.public().block_len();
    let mut framed = Vec::with_capacity(blocks.len() * k);
    for c in blocks {
        let m = key.decrypt(c)?.to_bytes_be();
        if m.len() > k {
            return Err(ProtocolError::KeyFormat("block wider than the block length".into()));
        }
        framed.resize(framed.len() + k - m.len(), 0);
        framed.extend_from_slice(&m);
    }
    let len = framed
        .get(..4)
        .map(|b| u32::from_be_bytes(b.try_into().unwrap()) as usize)
        .ok_or_else(|| ProtocolError::KeyFormat("missing length prefix".into()))?;
    let body = framed
        .get(4..4 + len)
        .ok_or_else(|| ProtocolError::KeyFormat("length prefix exceeds payload".into()))?;
    if framed[4 + len..].iter().any(|&b| b != 0) {
        return Err(ProtocolError::KeyFormat("nonzero padding".into()));
    }
    KeyPackage::from_bytes(body)
}

/// A key knot: the mutated closure named by one package entry and its
/// presentation code.
#[derive(Clone, Debug)]
pub struct KeyKnot {
    pub name: String,
    pub rotation: RotationKind,
    pub diagram: Diagram,
    pub dt: DtCode,
}

/// Both parties run this on the same package and get identical key knots.
pub fn derive_key_knots(pkg: &KeyPackage, table: &KnotTable) -> Result<Vec<KeyKnot>, ProtocolError> {
    pkg.validate(table)?;
    par::map(pkg.entries(), Parallelism::default(), |(name, r)| {
        let entry = table.get(name).ok_or_else(|| ProtocolError::UnknownKnot(name.clone()))?;
        let diagram = mutate(&entry.tangle, *r)?.with_name(format!("{name}^{r}"));
        let dt = extract_dt(&diagram)?;
        Ok(KeyKnot {
            name: name.clone(),
            rotation: *r,
            diagram,
            dt,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::parse_dt;
    use crate::protocol::rsa::rsa_keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn pkg() -> KeyPackage {
        KeyPackage::new(
            0x0102_0304_0506_0708,
            vec![("3_1".into(), RotationKind::None), ("11n42".into(), RotationKind::FlipVertical)],
        )
        .unwrap()
    }

    #[test]
    fn clear_and_binary_forms() {
        let p = pkg();
        assert_eq!(p.to_clear(), "3_1:I,11n42:V");
        assert_eq!(KeyPackage::from_clear(p.session(), "3_1:I,11n42:V").unwrap(), p);
        let bytes = p.to_bytes();
        assert_eq!(&bytes[..10], &[1, 2, 3, 4, 5, 6, 7, 8, 0, 2]);
        assert_eq!(&bytes[10..15], &[3, b'3', b'_', b'1', b'I']);
        assert_eq!(KeyPackage::from_bytes(&bytes).unwrap(), p);
        assert!(KeyPackage::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(KeyPackage::from_clear(0, "3_1:Q").is_err());
        assert!(KeyPackage::from_clear(0, "").is_err());
        assert_eq!(KeyPackage::new(0, vec![]), Err(ProtocolError::EmptyPackage));
    }

    #[test]
    fn rsa_transport_round_trip() {
        let p = pkg();
        for bits in [16, 24, 64, 512] {
            let key = rsa_keygen(bits, &mut ChaCha20Rng::seed_from_u64(11)).unwrap();
            let blocks = send_key_package(&p, &key.public()).unwrap();
            assert_eq!(receive_key_package(&blocks, &key).unwrap(), p);
        }
    }

    #[test]
    fn packages_are_seeded() {
        let t = KnotTable::bundled();
        let a = make_key_package(&t, 4, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let b = make_key_package(&t, 4, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        a.validate(&t).unwrap();
    }

    #[test]
    fn key_knots() {
        let t = KnotTable::bundled();
        let keys = derive_key_knots(&pkg(), &t).unwrap();
        assert_eq!(keys[0].dt, parse_dt("4 6 2").unwrap());
        assert_eq!(keys[1].dt, t.get("11n34").unwrap().dt);
        assert_ne!(keys[1].dt, t.get("11n42").unwrap().dt);
        let bad = KeyPackage::new(0, vec![("9_99".into(), RotationKind::None)]).unwrap();
        assert_eq!(
            derive_key_knots(&bad, &t).unwrap_err(),
            ProtocolError::UnknownKnot("9_99".into())
        );
    }
}

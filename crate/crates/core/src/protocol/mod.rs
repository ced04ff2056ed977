//! The hybrid cryptosystem: RSA carries a package naming table knots and
//! mutations; both sides turn it into key knots; each message byte becomes
//! a two-factor composite knot, summed with a key knot and sent as a DT code.
//! Decryption strips the known key suffix and decodes what remains.
//!
//! Nothing here is secure in a practical sense. RSA is textbook RSA without
//! padding and keys cycle when the message outgrows the package.

mod attack;
mod cipher;
mod codebook;
mod keys;
pub mod rsa;

use thiserror::Error;

use crate::codes::CodeError;
use crate::diagram::DiagramError;
use crate::invariants::InvariantError;
use crate::table::TableError;
use crate::tangle::TangleError;

pub use attack::{attack_invariant_demo, AttackReport, RecordOutcome, RecordReport};
pub use cipher::{
    decode_message, decrypt_message, encode_message, encrypt_detailed, encrypt_message, Ciphertext,
};
pub use codebook::Codebook;
pub use keys::{derive_key_knots, make_key_package, receive_key_package, send_key_package, KeyKnot, KeyPackage};
pub use rsa::{rsa_keygen, RsaKeyPair, RsaPublicKey};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("rsa: {0}")]
    Rsa(String),
    #[error("value out of range for the modulus")]
    OutOfRange,
    #[error("prime search gave up after bounded attempts")]
    PrimeSearch,
    #[error("table is empty")]
    EmptyTable,
    #[error("key package is empty")]
    EmptyPackage,
    #[error("unknown knot {0:?}")]
    UnknownKnot(String),
    #[error("malformed key package: {0}")]
    KeyFormat(String),
    #[error("invalid codebook: {0}")]
    Codebook(String),
    #[error("malformed ciphertext at line {line}: {message}")]
    CiphertextFormat { line: usize, message: String },
    #[error("suffix mismatch at record {record}")]
    SuffixMismatch { record: usize },
    #[error("codebook decode failure at record {record}")]
    DecodeFailure { record: usize },
    #[error("attack input: {0}")]
    AttackInput(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

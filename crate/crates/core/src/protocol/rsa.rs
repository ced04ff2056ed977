//! Textbook RSA used to carry the key package. No padding: this is the
//! protocol shape for experiments, not a secure transport.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

use super::ProtocolError;

/// Smallest accepted modulus size.
pub const MIN_BITS: u32 = 16;
const MAX_ATTEMPTS: usize = 100_000;
/// Witnesses that make Miller–Rabin exact below 3.3 * 10^24.
const SMALL_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const RANDOM_ROUNDS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsaPublicKey {
    pub n: BigUint,
    pub e: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsaKeyPair {
    pub n: BigUint,
    pub e: BigUint,
    pub d: BigUint,
    pub p: BigUint,
    pub q: BigUint,
}

impl RsaPublicKey {
    /// Bytes per plaintext block; every block value stays below `n`.
    pub fn block_len(&self) -> usize {
        ((self.n.bits() - 1) / 8) as usize
    }

    pub fn encrypt(&self, m: &BigUint) -> Result<BigUint, ProtocolError> {
        if m >= &self.n {
            return Err(ProtocolError::OutOfRange);
        }
        Ok(m.modpow(&self.e, &self.n))
    }
}

impl RsaKeyPair {
    /// Builds a key pair from two distinct primes and a public exponent.
    /// The private exponent is the inverse of `e` modulo `(p-1)(q-1)`.
    pub fn from_primes(p: BigUint, q: BigUint, e: BigUint) -> Result<Self, ProtocolError> {
        if p == q || !is_probable_prime_fixed(&p) || !is_probable_prime_fixed(&q) {
            return Err(ProtocolError::Rsa("p and q must be distinct primes".into()));
        }
        let one = BigUint::one();
        let phi = (&p - &one) * (&q - &one);
        let d = e
            .modinv(&phi)
            .ok_or_else(|| ProtocolError::Rsa("e is not invertible modulo (p-1)(q-1)".into()))?;
        Ok(RsaKeyPair {
            n: &p * &q,
            e,
            d,
            p,
            q,
        })
    }

    pub fn public(&self) -> RsaPublicKey {
        RsaPublicKey {
            n: self.n.clone(),
            e: self.e.clone(),
        }
    }

    /// lcm(p-1, q-1), the exponent of the multiplicative group mod `n`.
    pub fn carmichael(&self) -> BigUint {
        let one = BigUint::one();
        (&self.p - &one).lcm(&(&self.q - &one))
    }

    pub fn encrypt(&self, m: &BigUint) -> Result<BigUint, ProtocolError> {
        self.public().encrypt(m)
    }

    pub fn decrypt(&self, c: &BigUint) -> Result<BigUint, ProtocolError> {
        if c >= &self.n {
            return Err(ProtocolError::OutOfRange);
        }
        Ok(c.modpow(&self.d, &self.n))
    }
}

/// Generates a key pair whose modulus has exactly `bits` bits. All
/// randomness comes from `rng`, so a seeded generator gives a reproducible
/// key.
pub fn rsa_keygen<R: RngCore>(bits: u32, rng: &mut R) -> Result<RsaKeyPair, ProtocolError> {
    if bits < MIN_BITS {
        return Err(ProtocolError::Rsa(format!(
            "bit length {bits} is below the minimum of {MIN_BITS}"
        )));
    }
    let p_bits = bits.div_ceil(2);
    let q_bits = bits / 2;
    for _ in 0..MAX_ATTEMPTS {
        let p = random_prime(p_bits, rng)?;
        let q = random_prime(q_bits, rng)?;
        if p == q {
            continue;
        }
        let one = BigUint::one();
        let phi = (&p - &one) * (&q - &one);
        let Some(e) = choose_exponent(&phi) else {
            continue;
        };
        let pair = RsaKeyPair::from_primes(p, q, e)?;
        debug_assert_eq!(pair.n.bits(), u64::from(bits));
        return Ok(pair);
    }
    Err(ProtocolError::PrimeSearch)
}

/// 65537 when it fits, else the smallest odd exponent coprime to `phi`.
fn choose_exponent(phi: &BigUint) -> Option<BigUint> {
    let f4 = BigUint::from(65_537u32);
    if &f4 < phi && f4.gcd(phi).is_one() {
        return Some(f4);
    }
    let mut e = BigUint::from(3u32);
    while &e < phi {
        if e.gcd(phi).is_one() {
            return Some(e);
        }
        e += 2u32;
    }
    None
}

/// A prime with exactly `bits` bits and its top two bits set, so that the
/// product of two such primes has exactly the sum of their sizes.
fn random_prime<R: RngCore>(bits: u32, rng: &mut R) -> Result<BigUint, ProtocolError> {
    let bytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; bytes];
    for _ in 0..MAX_ATTEMPTS {
        rng.fill_bytes(&mut buf);
        let mut c = BigUint::from_bytes_be(&buf);
        c &= (BigUint::one() << bits) - 1u32;
        c |= BigUint::from(3u32) << (bits - 2);
        c |= BigUint::one();
        if is_probable_prime(&c, rng) {
            return Ok(c);
        }
    }
    Err(ProtocolError::PrimeSearch)
}

fn miller_rabin_round(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let mut x = a.modpow(d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = x.modpow(&BigUint::from(2u32), n);
        if x == n1 {
            return true;
        }
    }
    false
}

fn decompose(n: &BigUint) -> (BigUint, u64) {
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    (&n1 >> s, s)
}

fn small_prime_check(n: &BigUint) -> Option<bool> {
    if n < &BigUint::from(2u32) {
        return Some(false);
    }
    for &b in &SMALL_BASES {
        let b = BigUint::from(b);
        if n == &b {
            return Some(true);
        }
        if (n % &b).is_zero() {
            return Some(false);
        }
    }
    None
}

/// Miller–Rabin with the fixed small bases only.
pub fn is_probable_prime_fixed(n: &BigUint) -> bool {
    if let Some(answer) = small_prime_check(n) {
        return answer;
    }
    let (d, s) = decompose(n);
    SMALL_BASES
        .iter()
        .all(|&b| miller_rabin_round(n, &d, s, &BigUint::from(b)))
}

/// Miller–Rabin with the fixed bases plus random ones drawn from `rng`.
pub fn is_probable_prime<R: RngCore>(n: &BigUint, rng: &mut R) -> bool {
    if !is_probable_prime_fixed(n) {
        return false;
    }
    if n.bits() <= 64 {
        return true;
    }
    let (d, s) = decompose(n);
    let span = n - 3u32;
    let bytes = n.bits().div_ceil(8) as usize;
    let mut buf = vec![0u8; bytes];
    (0..RANDOM_ROUNDS).all(|_| {
        rng.fill_bytes(&mut buf);
        let a = BigUint::from_bytes_be(&buf) % &span + 2u32;
        miller_rabin_round(n, &d, s, &a)
    })
}

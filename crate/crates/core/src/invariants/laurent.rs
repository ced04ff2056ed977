//! Sparse Laurent polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("coefficient overflow")]
    Overflow,
    #[error("cannot parse polynomial at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Exponent → nonzero coefficient. Zero coefficients are never stored, so
/// derived equality is exact term-wise equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Substitutes `x -> x^k`.
    pub fn scale_exponents(&self, k: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Substitutes `x -> 1/x`.
    pub fn invert_variable(&self) -> Self {
        self.scale_exponents(-1)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                let c = c1.checked_mul(c2).ok_or(PolyError::Overflow)?;
                let entry = out.terms.entry(e1 + e2).or_insert(0);
                *entry = entry.checked_add(c).ok_or(PolyError::Overflow)?;
            }
        }
        out.terms.retain(|_, c| *c != 0);
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact quotient in the Laurent ring, if one exists.
    pub fn divide_exact(&self, rhs: &Self) -> Result<Self, PolyError> {
        let (Some(lead_exp), Some(low_exp)) = (rhs.max_exp(), rhs.min_exp()) else {
            return Err(PolyError::DivisionByZero);
        };
        let lead = rhs.coeff(lead_exp);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        // Units x^k are invertible, so long division runs from the top term
        // until the remainder is shorter than the divisor's span.
        while let (Some(top), Some(bottom)) = (rem.max_exp(), rem.min_exp()) {
            if top - bottom < lead_exp - low_exp {
                return Err(PolyError::NotDivisible);
            }
            let c = rem.coeff(top);
            if c % lead != 0 {
                return Err(PolyError::NotDivisible);
            }
            let q = Self::monomial(c / lead, top - lead_exp);
            rem = &rem - &q.checked_mul(rhs)?;
            quot = &quot + &q;
        }
        Ok(quot)
    }

    /// Formats in the given variable name.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let abs = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            match e {
                0 => out.push_str(&abs.to_string()),
                1 => out.push_str(&format!("{abs}*{var}")),
                _ => out.push_str(&format!("{abs}*{var}^{e}")),
            }
        }
        out
    }

    /// Parses the output of [`display_in`](Self::display_in).
    pub fn parse_in(text: &str, var: &str) -> Result<Self, PolyError> {
        let err = |position: usize, message: &str| PolyError::Parse {
            position,
            message: message.to_string(),
        };
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let mut rest = text;
        let mut sign = 1i64;
        let mut first = true;
        loop {
            let pos = text.len() - rest.len();
            if first {
                if let Some(r) = rest.strip_prefix('-') {
                    sign = -1;
                    rest = r;
                }
            }
            let end = rest.find(" + ").into_iter().chain(rest.find(" - ")).min();
            let (term, tail) = match end {
                Some(i) => (&rest[..i], Some(&rest[i..])),
                None => (rest, None),
            };
            let (coeff, exp) = match term.split_once('*') {
                None => (term, 0),
                Some((c, v)) => {
                    let e = match v.strip_prefix(var) {
                        Some("") => 1,
                        Some(p) => p
                            .strip_prefix('^')
                            .and_then(|p| p.parse::<i32>().ok())
                            .ok_or_else(|| err(pos, "bad exponent"))?,
                        None => return Err(err(pos, "unexpected variable")),
                    };
                    (c, e)
                }
            };
            let coeff: i64 = coeff
                .parse()
                .ok()
                .filter(|&c: &i64| c > 0)
                .ok_or_else(|| err(pos, "expected a positive coefficient"))?;
            if out.coeff(exp) != 0 || out.max_exp().is_some_and(|m| m >= exp) {
                return Err(err(pos, "exponents must be strictly ascending"));
            }
            out.add_term(exp, sign * coeff);
            first = false;
            match tail {
                None => return Ok(out),
                Some(t) => {
                    sign = if t.starts_with(" - ") { -1 } else { 1 };
                    rest = &t[3..];
                }
            }
        }
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("A"))
    }
}

impl FromStr for LaurentPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_in(s, "A")
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: Self) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: Self) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    /// Panics on `i64` coefficient overflow; see [`LaurentPolynomial::checked_mul`].
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        self.checked_mul(rhs).expect("coefficient overflow")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;

            fn $m(self, rhs: Self) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A Jones polynomial: a Laurent polynomial in `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JonesPolynomial(pub LaurentPolynomial);

impl JonesPolynomial {
    pub fn one() -> Self {
        JonesPolynomial(LaurentPolynomial::one())
    }

    pub fn poly(&self) -> &LaurentPolynomial {
        &self.0
    }

    /// `J(1/t)`, the Jones polynomial of the mirror image.
    pub fn mirrored(&self) -> Self {
        JonesPolynomial(self.0.invert_variable())
    }

    pub fn divide_exact(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.0.divide_exact(&rhs.0).map(JonesPolynomial)
    }
}

impl Mul for &JonesPolynomial {
    type Output = JonesPolynomial;

    fn mul(self, rhs: Self) -> JonesPolynomial {
        JonesPolynomial(&self.0 * &rhs.0)
    }
}

impl fmt::Display for JonesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.display_in("t"))
    }
}

impl FromStr for JonesPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LaurentPolynomial::parse_in(s, "t").map(JonesPolynomial)
    }
}

//! Writhe, Kauffman bracket and Jones polynomial.
//!
//! The bracket lives in the variable `A` with loop value δ = -A² - A⁻².
//! The Jones polynomial is `(-A³)^(-w) ⟨D⟩` rewritten in `t = A⁻⁴`.

mod bracket;
pub mod laurent;

use thiserror::Error;

pub use laurent::{JonesPolynomial, LaurentPolynomial, PolyError};

use crate::diagram::{walk, Diagram, DiagramError, Endpoint};
use crate::par::{self, Parallelism};

/// Largest diagram the default (contraction) engine accepts.
pub const BRACKET_LIMIT: usize = 30;
/// Largest diagram the full `2^n` enumeration accepts.
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("diagram has {crossings} crossings, limit is {limit}")]
    TooLarge { crossings: usize, limit: usize },
    #[error("non-integral exponent: A^{exponent} is not a power of t")]
    NonIntegralExponent { exponent: i32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// How to evaluate the bracket state sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BracketEngine {
    /// Frontier contraction along the traversal; handles up to
    /// [`BRACKET_LIMIT`] crossings.
    #[default]
    Contraction,
    /// Every one of the `2^n` states; up to [`ENUMERATION_LIMIT`] crossings.
    Enumeration(Parallelism),
}

/// Sum of crossing signs. A crossing is positive when its over-strand
/// enters through slot 3, i.e. runs from right to left across the
/// under-strand.
pub fn writhe(d: &Diagram) -> Result<i32, InvariantError> {
    d.check()?;
    if d.crossing_count() == 0 {
        return Ok(0);
    }
    let seq = walk(d.crossings(), &d.incidence(), Endpoint::new(0, 0));
    Ok(seq
        .iter()
        .map(|p| match p.slot {
            3 => 1,
            1 => -1,
            _ => 0,
        })
        .sum())
}

pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPolynomial, InvariantError> {
    kauffman_bracket_with(d, BracketEngine::default())
}

pub fn kauffman_bracket_with(
    d: &Diagram,
    engine: BracketEngine,
) -> Result<LaurentPolynomial, InvariantError> {
    d.check()?;
    let n = d.crossing_count();
    match engine {
        BracketEngine::Contraction => {
            if n > BRACKET_LIMIT {
                return Err(InvariantError::TooLarge {
                    crossings: n,
                    limit: BRACKET_LIMIT,
                });
            }
            let mut order = Vec::with_capacity(n);
            let mut seen = vec![false; n];
            for p in d.traversal_unchecked() {
                if !seen[p.crossing] {
                    seen[p.crossing] = true;
                    order.push(p.crossing);
                }
            }
            Ok(bracket::contract(d.crossings(), &order)?)
        }
        BracketEngine::Enumeration(mode) => {
            if n > ENUMERATION_LIMIT {
                return Err(InvariantError::TooLarge {
                    crossings: n,
                    limit: ENUMERATION_LIMIT,
                });
            }
            Ok(bracket::enumerate(d.crossings(), mode)?)
        }
    }
}

/// Normalizes a bracket by the writhe and changes variable to `t`.
pub fn jones_from_bracket(
    bracket: &LaurentPolynomial,
    writhe: i32,
) -> Result<JonesPolynomial, InvariantError> {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * writhe);
    let mut out = LaurentPolynomial::zero();
    for (e, c) in normalized.terms() {
        if e % 4 != 0 {
            return Err(InvariantError::NonIntegralExponent { exponent: e });
        }
        out.add_term(-e / 4, sign * c);
    }
    Ok(JonesPolynomial(out))
}

pub fn jones(d: &Diagram) -> Result<JonesPolynomial, InvariantError> {
    jones_with(d, BracketEngine::default())
}

pub fn jones_with(d: &Diagram, engine: BracketEngine) -> Result<JonesPolynomial, InvariantError> {
    let b = kauffman_bracket_with(d, engine)?;
    jones_from_bracket(&b, writhe(d)?)
}

/// Jones polynomials of many diagrams, one task per diagram.
pub fn jones_batch(
    ds: &[Diagram],
    mode: Parallelism,
) -> Vec<Result<JonesPolynomial, InvariantError>> {
    par::map(ds, mode, jones)
}

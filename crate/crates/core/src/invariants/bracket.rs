//! Two evaluations of the Kauffman bracket state sum.
//!
//! `contract` adds crossings one at a time in traversal order and keeps, for
//! each way of smoothing the crossings seen so far, only how the still-open
//! arc ends are joined up. States with the same joining are merged, so the
//! work depends on the width of that frontier rather than on `2^n`.
//!
//! `enumerate` visits all `2^n` smoothings directly and counts loops with a
//! union-find. It is the reference the faster engine is checked against.

use std::collections::HashMap;

use super::laurent::{LaurentPolynomial, PolyError};
use crate::diagram::{ArcId, Crossing};
use crate::par::{self, Parallelism};

/// Arc pairs joined by the A-smoothing and by the B-smoothing of a crossing.
pub(crate) fn smoothing_pairs(x: &Crossing) -> [[(ArcId, ArcId); 2]; 2] {
    let [a, b, c, d] = x.0;
    [[(a, b), (c, d)], [(a, d), (b, c)]]
}

pub(crate) fn delta() -> LaurentPolynomial {
    LaurentPolynomial::from_terms([(2, -1), (-2, -1)])
}

/// Open arc ends and the arc each one is currently joined to, as sorted
/// `(end, partner)` pairs with `end < partner`.
type Frontier = Vec<(ArcId, ArcId)>;

fn join(frontier: &Frontier, pairs: &[(ArcId, ArcId); 2]) -> (Frontier, u32) {
    let mut partner: HashMap<ArcId, ArcId> = HashMap::with_capacity(frontier.len() * 2 + 4);
    for &(x, y) in frontier {
        partner.insert(x, y);
        partner.insert(y, x);
    }
    let mut loops = 0;
    for &(x, y) in pairs {
        if x == y {
            // Both ends of the arc meet at this smoothing.
            loops += 1;
            continue;
        }
        let px = partner.remove(&x);
        let py = partner.remove(&y);
        if px == Some(y) {
            loops += 1;
            continue;
        }
        let fx = match px {
            Some(p) => p,
            None => x,
        };
        let fy = match py {
            Some(p) => p,
            None => y,
        };
        partner.insert(fx, fy);
        partner.insert(fy, fx);
    }
    let mut out: Frontier = partner.into_iter().filter(|(x, y)| x < y).collect();
    out.sort_unstable();
    (out, loops)
}

/// Unnormalized bracket by frontier contraction. `order` lists crossings in
/// the order they are absorbed.
pub(crate) fn contract(crossings: &[Crossing], order: &[usize]) -> Result<LaurentPolynomial, PolyError> {
    if crossings.is_empty() {
        return Ok(LaurentPolynomial::one());
    }
    let d = delta();
    let mut states: HashMap<Frontier, LaurentPolynomial> = HashMap::new();
    states.insert(Vec::new(), LaurentPolynomial::one());
    for &c in order {
        let options = smoothing_pairs(&crossings[c]);
        let mut next: HashMap<Frontier, LaurentPolynomial> = HashMap::with_capacity(states.len() * 2);
        for (frontier, poly) in &states {
            for (k, pairs) in options.iter().enumerate() {
                let (f, loops) = join(frontier, pairs);
                let mut term = poly.shift(if k == 0 { 1 } else { -1 });
                for _ in 0..loops {
                    term = term.checked_mul(&d)?;
                }
                let slot = next.entry(f).or_default();
                *slot = &*slot + &term;
            }
        }
        next.retain(|_, p| !p.is_zero());
        states = next;
    }
    let total = states.remove(&Vec::new()).unwrap_or_default();
    // The state sum counts every loop; the bracket counts all but one.
    total.divide_exact(&d)
}

/// Histogram of states by (number of A-smoothings, number of loops).
type Histogram = Vec<Vec<u64>>;

/// Per crossing, the A- and B-smoothing joins as dense arc indices.
type Joins = Vec<[[(usize, usize); 2]; 2]>;

fn loop_count(joins: &Joins, state: u64, parent: &mut [usize]) -> usize {
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, v) in parent.iter_mut().enumerate() {
        *v = i;
    }
    let mut components = parent.len();
    for (c, options) in joins.iter().enumerate() {
        for &(a, b) in &options[((state >> c) & 1) as usize] {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
    }
    components
}

/// Unnormalized bracket by visiting all `2^n` states. Bit `c` of a state
/// selects the B-smoothing at crossing `c`.
pub(crate) fn enumerate(crossings: &[Crossing], mode: Parallelism) -> Result<LaurentPolynomial, PolyError> {
    let n = crossings.len();
    if n == 0 {
        return Ok(LaurentPolynomial::one());
    }
    let mut index: HashMap<ArcId, usize> = HashMap::new();
    for x in crossings {
        for a in x.0 {
            let next = index.len();
            index.entry(a).or_insert(next);
        }
    }
    let arcs = index.len();
    let joins: Joins = crossings
        .iter()
        .map(|x| smoothing_pairs(x).map(|pairs| pairs.map(|(a, b)| (index[&a], index[&b]))))
        .collect();
    let identity: (Histogram, Vec<usize>) = (vec![vec![0u64; n + 2]; n + 1], vec![0; arcs]);
    let (hist, _) = par::fold_range(
        1u64 << n,
        mode,
        identity,
        |(hist, scratch), state| {
            let loops = loop_count(&joins, state, scratch);
            let b = state.count_ones() as usize;
            hist[n - b][loops] += 1;
        },
        |(mut h1, s), (h2, _)| {
            for (r1, r2) in h1.iter_mut().zip(h2) {
                for (x, y) in r1.iter_mut().zip(r2) {
                    *x += y;
                }
            }
            (h1, s)
        },
    );
    let d = delta();
    let mut total = LaurentPolynomial::zero();
    for (a_count, row) in hist.iter().enumerate() {
        let exp = a_count as i32 - (n - a_count) as i32;
        for (loops, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let count = i64::try_from(count).map_err(|_| PolyError::Overflow)?;
            // Each state contributes A^(a - b) δ^(loops - 1).
            let term = LaurentPolynomial::monomial(count, exp).checked_mul(&d.pow(loops as u32 - 1))?;
            total = &total + &term;
        }
    }
    Ok(total)
}

#![allow(dead_code)]

use knotcrypt::moves::applicable_moves;
use knotcrypt::table::KnotTable;
use knotcrypt::{apply_reidemeister, Diagram, MoveSpec};
use rand::seq::SliceRandom;
use rand::Rng;

/// Table entries with at most `max` crossings.
pub fn small_knots(table: &KnotTable, max: usize) -> Vec<Diagram> {
    table
        .entries()
        .iter()
        .filter(|e| e.crossing_number <= max)
        .map(|e| e.pd.clone())
        .collect()
}

fn kind(m: &MoveSpec) -> usize {
    match m {
        MoveSpec::R1Insert { .. } => 0,
        MoveSpec::R1Delete { .. } => 1,
        MoveSpec::R2Insert { .. } => 2,
        MoveSpec::R2Delete { .. } => 3,
        MoveSpec::R3Slide { .. } => 4,
    }
}

/// Picks a move kind uniformly among those available, then a move of that
/// kind, so that rare kinds (deletions, R3) are not drowned out by the many
/// possible insertions. Insertions are skipped once the diagram reaches
/// `cap` crossings.
pub fn random_move<R: Rng>(d: &Diagram, cap: usize, rng: &mut R) -> Option<MoveSpec> {
    let mut by_kind: [Vec<MoveSpec>; 5] = Default::default();
    for m in applicable_moves(d) {
        if d.crossing_count() as i32 + m.crossing_delta() > cap as i32 {
            continue;
        }
        by_kind[kind(&m)].push(m);
    }
    let kinds: Vec<usize> = (0..5).filter(|&k| !by_kind[k].is_empty()).collect();
    let k = *kinds.choose(rng)?;
    by_kind[k].choose(rng).cloned()
}

/// A random walk of `len` moves from `d`, returning every intermediate
/// diagram together with the move that produced it.
pub fn random_walk<R: Rng>(d: &Diagram, len: usize, cap: usize, rng: &mut R) -> Vec<(MoveSpec, Diagram)> {
    let mut cur = d.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let Some(m) = random_move(&cur, cap, rng) else { break };
        let next = apply_reidemeister(&cur, &m).expect("listed moves apply");
        out.push((m, next.clone()));
        cur = next;
    }
    out
}

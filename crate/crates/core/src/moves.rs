//! Reidemeister moves on PD diagrams.
//!
//! Locations are given by arc labels. Sides are taken relative to the
//! diagram's orientation (the one making slot 0 incoming everywhere). Arcs
//! created by a move get fresh labels `max + 1`, `max + 2`, ... in a fixed
//! order documented on each variant, so callers can name them in follow-up
//! moves.

use std::collections::HashMap;
use std::fmt;

use crate::diagram::{
    faces, orient_crossings, ArcId, Basepoint, Crossing, Diagram, DiagramError, Endpoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strand {
    Under,
    Over,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MoveSpec {
    /// Adds a kink on `arc`. The loop lies on `side` of the arc and `first`
    /// says whether the strand passes under or over on its first visit.
    /// New labels: the loop, then the arc after the kink.
    R1Insert {
        arc: ArcId,
        side: Side,
        first: Strand,
    },
    /// Removes the kink whose loop is `arc`.
    R1Delete { arc: ArcId },
    /// Pushes a finger of `over` across `under` through the face on `side`
    /// of `over`. New labels: middle and far piece of `over`, then middle
    /// and far piece of `under`.
    R2Insert {
        over: ArcId,
        under: ArcId,
        side: Side,
    },
    /// Removes the bigon bounded by the two arcs.
    R2Delete { arcs: [ArcId; 2] },
    /// Slides a strand across the crossing opposite the triangle bounded by
    /// the three arcs.
    R3Slide { arcs: [ArcId; 3] },
}

impl MoveSpec {
    /// Change in crossing count.
    pub fn crossing_delta(&self) -> i32 {
        match self {
            MoveSpec::R1Insert { .. } => 1,
            MoveSpec::R1Delete { .. } => -1,
            MoveSpec::R2Insert { .. } => 2,
            MoveSpec::R2Delete { .. } => -2,
            MoveSpec::R3Slide { .. } => 0,
        }
    }

    pub fn is_r1(&self) -> bool {
        matches!(self, MoveSpec::R1Insert { .. } | MoveSpec::R1Delete { .. })
    }
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveSpec::R1Insert { arc, side, first } => {
                write!(f, "R1+ arc {arc} {side:?} {first:?}-first")
            }
            MoveSpec::R1Delete { arc } => write!(f, "R1- loop {arc}"),
            MoveSpec::R2Insert { over, under, side } => {
                write!(f, "R2+ {over} over {under} on {side:?}")
            }
            MoveSpec::R2Delete { arcs } => write!(f, "R2- bigon {} {}", arcs[0], arcs[1]),
            MoveSpec::R3Slide { arcs } => {
                write!(f, "R3 triangle {} {} {}", arcs[0], arcs[1], arcs[2])
            }
        }
    }
}

/// Two crossings bounding a bigon and the outer arcs of its strands.
type Bigon = (usize, usize, [(ArcId, ArcId); 2]);

fn fail<T>(msg: impl Into<String>) -> Result<T, DiagramError> {
    Err(DiagramError::Precondition(msg.into()))
}

pub fn apply_reidemeister(d: &Diagram, m: &MoveSpec) -> Result<Diagram, DiagramError> {
    apply_with_inverse(d, m).map(|(out, _)| out)
}

/// Applies `m` and returns a move undoing it, up to relabeling. Deletions
/// report no inverse.
pub fn apply_with_inverse(
    d: &Diagram,
    m: &MoveSpec,
) -> Result<(Diagram, Option<MoveSpec>), DiagramError> {
    d.check()?;
    let ctx = Context::new(d);
    let out = match *m {
        MoveSpec::R1Insert { arc, side, first } => {
            let (out, loop_arc) = ctx.r1_insert(arc, side, first)?;
            (out, Some(MoveSpec::R1Delete { arc: loop_arc }))
        }
        MoveSpec::R1Delete { arc } => (ctx.r1_delete(arc)?, None),
        MoveSpec::R2Insert { over, under, side } => {
            let (out, arcs) = ctx.r2_insert(over, under, side)?;
            (out, Some(MoveSpec::R2Delete { arcs }))
        }
        MoveSpec::R2Delete { arcs } => (ctx.r2_delete(arcs)?, None),
        MoveSpec::R3Slide { arcs } => (ctx.r3_slide(arcs)?, Some(m.clone())),
    };
    out.0.check()?;
    Ok(out)
}

/// Every move applicable to `d`, in a deterministic order.
pub fn applicable_moves(d: &Diagram) -> Vec<MoveSpec> {
    let mut out = Vec::new();
    if d.check().is_err() {
        return out;
    }
    let ctx = Context::new(d);
    let arcs = d.arcs();
    for &arc in &arcs {
        for side in [Side::Left, Side::Right] {
            for first in [Strand::Under, Strand::Over] {
                out.push(MoveSpec::R1Insert { arc, side, first });
            }
        }
    }
    for &arc in &arcs {
        if ctx.kink_of(arc).is_ok() {
            out.push(MoveSpec::R1Delete { arc });
        }
    }
    for &over in &arcs {
        for side in [Side::Left, Side::Right] {
            for &under in &arcs {
                if ctx.r2_insert_plan(over, under, side).is_ok() {
                    out.push(MoveSpec::R2Insert { over, under, side });
                }
            }
        }
    }
    for (i, &a) in arcs.iter().enumerate() {
        for &b in &arcs[i + 1..] {
            if ctx.bigon(a, b).is_ok() {
                out.push(MoveSpec::R2Delete { arcs: [a, b] });
            }
        }
    }
    for tri in ctx.triangles() {
        if ctx.triangle(tri).is_ok() {
            out.push(MoveSpec::R3Slide { arcs: tri });
        }
    }
    out
}

struct Context<'a> {
    d: &'a Diagram,
    crossings: &'a [Crossing],
    ends: HashMap<ArcId, [Endpoint; 2]>,
    heads: HashMap<ArcId, Endpoint>,
}

struct R2Plan {
    e_low_end: Endpoint,
    e_high_end: Endpoint,
    f_high_end: Endpoint,
    e_forward: bool,
}

impl<'a> Context<'a> {
    fn new(d: &'a Diagram) -> Self {
        let inc = d.incidence();
        let mut ends = HashMap::new();
        for arc in d.arcs() {
            if let [a, b] = inc.ends(arc) {
                ends.insert(arc, [*a, *b]);
            }
        }
        Context {
            d,
            crossings: d.crossings(),
            ends,
            heads: d.heads(),
        }
    }

    fn fresh(&self) -> ArcId {
        self.d.max_arc() + 1
    }

    fn endpoints(&self, arc: ArcId) -> Result<[Endpoint; 2], DiagramError> {
        self.ends
            .get(&arc)
            .copied()
            .map_or_else(|| fail(format!("arc {arc} is not in the diagram")), Ok)
    }

    /// (tail, head) of an arc under the diagram orientation.
    fn tail_head(&self, arc: ArcId) -> Result<(Endpoint, Endpoint), DiagramError> {
        let [a, b] = self.endpoints(arc)?;
        let head = self.heads[&arc];
        Ok(if head == a { (b, a) } else { (a, b) })
    }

    fn rebuild(&self, crossings: Vec<Crossing>, base: Basepoint) -> Diagram {
        let d = Diagram::new_unchecked(crossings, base);
        match self.d.name() {
            Some(n) => d.with_name(n),
            None => d,
        }
    }

    fn r1_insert(
        &self,
        arc: ArcId,
        side: Side,
        first: Strand,
    ) -> Result<(Diagram, ArcId), DiagramError> {
        let l = self.fresh();
        let mut crossings = self.crossings.to_vec();
        let (e, e2) = if crossings.is_empty() {
            if arc != self.d.basepoint().arc {
                return fail(format!("arc {arc} is not in the diagram"));
            }
            (arc, arc)
        } else {
            let (_, head) = self.tail_head(arc)?;
            crossings[head.crossing].0[head.slot] = l + 1;
            (arc, l + 1)
        };
        let x = match (first, side) {
            (Strand::Under, Side::Right) => Crossing::new(e, l, l, e2),
            (Strand::Under, Side::Left) => Crossing::new(e, e2, l, l),
            (Strand::Over, Side::Left) => Crossing::new(l, e, e2, l),
            (Strand::Over, Side::Right) => Crossing::new(l, l, e2, e),
        };
        crossings.push(x);
        Ok((self.rebuild(crossings, self.d.basepoint()), l))
    }

    /// The crossing holding `arc` as a kink loop, and the two other arcs
    /// there as (incoming, outgoing).
    fn kink_of(&self, arc: ArcId) -> Result<(usize, ArcId, ArcId), DiagramError> {
        let [a, b] = self.endpoints(arc)?;
        if a.crossing != b.crossing || (a.slot + 2) % 4 == b.slot {
            return fail(format!("arc {arc} is not a kink loop"));
        }
        let c = a.crossing;
        let others: Vec<usize> = (0..4).filter(|&s| s != a.slot && s != b.slot).collect();
        let (p, q) = (
            Endpoint::new(c, others[0]),
            Endpoint::new(c, others[1]),
        );
        let (pa, qa) = (self.crossings[c].arc(p.slot), self.crossings[c].arc(q.slot));
        if self.heads.get(&pa) == Some(&p) {
            Ok((c, pa, qa))
        } else {
            Ok((c, qa, pa))
        }
    }

    fn r1_delete(&self, arc: ArcId) -> Result<Diagram, DiagramError> {
        let (c, inn, out) = self.kink_of(arc)?;
        if inn == out {
            return Ok(Diagram::unknot());
        }
        let far = self
            .endpoints(out)?
            .into_iter()
            .find(|e| e.crossing != c);
        let mut crossings = self.crossings.to_vec();
        // The outgoing arc's far end now belongs to the incoming arc.
        if let Some(far) = far {
            crossings[far.crossing].0[far.slot] = inn;
        }
        crossings.remove(c);
        let mut base = self.d.basepoint();
        if base.arc == arc || base.arc == out {
            base.arc = inn;
        }
        Ok(self.rebuild(crossings, base))
    }

    fn r2_insert_plan(&self, over: ArcId, under: ArcId, side: Side) -> Result<R2Plan, DiagramError> {
        if over == under {
            return fail("R2 needs two different arcs");
        }
        if self.crossings.is_empty() {
            return fail("R2 needs two arcs");
        }
        let inc = self.d.incidence();
        let f = faces(self.crossings, &inc);
        let face = |e: Endpoint| f.of_dart[e.dart_index()];
        let (et, eh) = self.tail_head(over)?;
        let (ft, fh) = self.tail_head(under)?;
        if face(et) == face(eh) || face(ft) == face(fh) {
            return fail("arc borders the same face on both sides");
        }
        // Darts leaving the tail keep the face on their right.
        let (region, e_forward) = match side {
            Side::Right => (face(et), true),
            Side::Left => (face(eh), false),
        };
        let f_forward = if face(fh) == region {
            true
        } else if face(ft) == region {
            false
        } else {
            return fail(format!("arcs {over} and {under} do not share a face"));
        };
        let (e_low_end, e_high_end) = if e_forward { (et, eh) } else { (eh, et) };
        let f_high_end = if f_forward { fh } else { ft };
        Ok(R2Plan {
            e_low_end,
            e_high_end,
            f_high_end,
            e_forward,
        })
    }

    fn r2_insert(
        &self,
        over: ArcId,
        under: ArcId,
        side: Side,
    ) -> Result<(Diagram, [ArcId; 2]), DiagramError> {
        let plan = self.r2_insert_plan(over, under, side)?;
        let base_label = self.fresh();
        let (e_low, e_mid, e_high) = (over, base_label, base_label + 1);
        let (f_low, f_mid, f_high) = (under, base_label + 2, base_label + 3);
        let mut raw = self.crossings.to_vec();
        raw[plan.e_high_end.crossing].0[plan.e_high_end.slot] = e_high;
        raw[plan.f_high_end.crossing].0[plan.f_high_end.slot] = f_high;
        let p = raw.len();
        raw.push(Crossing::new(f_low, e_mid, f_mid, e_low));
        raw.push(Crossing::new(f_mid, e_mid, f_high, e_high));
        // e_low runs into P when the finger follows the orientation of the
        // over arc, otherwise it keeps the old head.
        let anchor = if plan.e_forward {
            Endpoint::new(p, 3)
        } else {
            plan.e_low_end
        };
        let oriented = orient_crossings(&raw, anchor)?;
        Ok((self.rebuild(oriented, self.d.basepoint()), [e_mid, f_mid]))
    }

    /// Crossings `(x, y)` of a removable bigon and the outer arcs of its two
    /// strands as `[(a1, b1), (a2, b2)]`.
    fn bigon(&self, m1: ArcId, m2: ArcId) -> Result<Bigon, DiagramError> {
        let e1 = self.endpoints(m1)?;
        let e2 = self.endpoints(m2)?;
        let (x, y) = (e1[0].crossing, e1[1].crossing);
        if x == y {
            return fail("bigon arcs must join two different crossings");
        }
        let at = |ends: [Endpoint; 2], c: usize| ends.iter().find(|e| e.crossing == c).copied();
        let (Some(m1x), Some(m1y), Some(m2x), Some(m2y)) = (at(e1, x), at(e1, y), at(e2, x), at(e2, y))
        else {
            return fail(format!("arcs {m1} and {m2} do not bound a bigon"));
        };
        let adjacent = |a: Endpoint, b: Endpoint| (a.slot + 2) % 4 != b.slot && a.slot != b.slot;
        if !adjacent(m1x, m2x) || !adjacent(m1y, m2y) {
            return fail(format!("arcs {m1} and {m2} do not bound a bigon"));
        }
        if m1x.is_under() != m1y.is_under() {
            return fail("bigon over/under is not coherent");
        }
        let outer = |e: Endpoint| self.crossings[e.crossing].arc(e.slot + 2);
        Ok((x, y, [(outer(m1x), outer(m1y)), (outer(m2x), outer(m2y))]))
    }

    fn r2_delete(&self, arcs: [ArcId; 2]) -> Result<Diagram, DiagramError> {
        let (x, y, strands) = self.bigon(arcs[0], arcs[1])?;
        let mut rename: HashMap<ArcId, ArcId> = HashMap::new();
        let root = |rename: &HashMap<ArcId, ArcId>, mut a: ArcId| {
            while let Some(&b) = rename.get(&a) {
                a = b;
            }
            a
        };
        for (a, b) in strands {
            let (ra, rb) = (root(&rename, a), root(&rename, b));
            if ra != rb {
                rename.insert(ra.max(rb), ra.min(rb));
            }
        }
        let crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != x && c != y)
            .map(|(_, cx)| Crossing(cx.0.map(|a| root(&rename, a))))
            .collect();
        if crossings.is_empty() {
            return Ok(Diagram::unknot());
        }
        let mut base = self.d.basepoint();
        if base.arc == arcs[0] {
            base.arc = root(&rename, strands[0].0);
        } else if base.arc == arcs[1] {
            base.arc = root(&rename, strands[1].0);
        } else {
            base.arc = root(&rename, base.arc);
        }
        Ok(self.rebuild(crossings, base))
    }

    /// Arc triples bounding a three-sided face.
    fn triangles(&self) -> Vec<[ArcId; 3]> {
        let inc = self.d.incidence();
        let f = faces(self.crossings, &inc);
        let mut sides: Vec<Vec<ArcId>> = vec![Vec::new(); f.count];
        for (dart, &face) in f.of_dart.iter().enumerate() {
            sides[face].push(self.crossings[dart / 4].arc(dart % 4));
        }
        let mut out: Vec<[ArcId; 3]> = sides
            .into_iter()
            .filter(|s| s.len() == 3)
            .filter_map(|mut s| {
                s.sort_unstable();
                s.dedup();
                <[ArcId; 3]>::try_from(s).ok()
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// For each triangle arc: its two ends, ordered by crossing.
    fn triangle(&self, arcs: [ArcId; 3]) -> Result<Vec<[Endpoint; 2]>, DiagramError> {
        let mut sorted = arcs;
        sorted.sort_unstable();
        if !self.triangles().contains(&sorted) {
            return fail(format!(
                "arcs {} {} {} do not bound a triangle",
                arcs[0], arcs[1], arcs[2]
            ));
        }
        let ends: Vec<[Endpoint; 2]> = arcs
            .iter()
            .map(|&a| self.endpoints(a))
            .collect::<Result<_, _>>()?;
        let mut cs: Vec<usize> = ends.iter().flatten().map(|e| e.crossing).collect();
        cs.sort_unstable();
        cs.dedup();
        if cs.len() != 3 || ends.iter().any(|[a, b]| a.crossing == b.crossing) {
            return fail("triangle needs three distinct crossings");
        }
        let stacked = ends
            .iter()
            .any(|[a, b]| a.is_under() == b.is_under());
        if !stacked {
            return fail("triangle strands are cyclically stacked");
        }
        Ok(ends)
    }

    fn r3_slide(&self, arcs: [ArcId; 3]) -> Result<Diagram, DiagramError> {
        let ends = self.triangle(arcs)?;
        let old = self.crossings;
        let mut crossings = old.to_vec();
        for (&t, [a, b]) in arcs.iter().zip(&ends) {
            for (here, there) in [(a, b), (b, a)] {
                crossings[here.crossing].0[(here.slot + 2) % 4] = t;
                crossings[here.crossing].0[here.slot] = old[there.crossing].arc(there.slot + 2);
            }
        }
        Ok(self.rebuild(crossings, self.d.basepoint()))
    }
}

//! Four-ended tangles, the three mutation rotations, and closure of a
//! two-tangle presentation back into a knot diagram.
//!
//! A tangle is a set of crossings plus its four boundary arcs, listed in the
//! order NW, NE, SE, SW (clockwise around the tangle disk). Boundary arcs of
//! the inner and outer tangle share labels at the same compass point when
//! the gluing is the identity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{
    faces, orient_crossings, ArcId, Basepoint, Crossing, Diagram, DiagramError, Endpoint,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangleError {
    #[error("invalid tangle: {0}")]
    Invalid(String),
    #[error("multi-component closure")]
    MultiComponent,
    #[error("mutation needs at least one crossing in the inner tangle")]
    EmptyInner,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Compass {
    NW = 0,
    NE = 1,
    SE = 2,
    SW = 3,
}

impl Compass {
    pub const ALL: [Compass; 4] = [Compass::NW, Compass::NE, Compass::SE, Compass::SW];
}

/// The identity and the three π-rotations of a tangle disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RotationKind {
    /// Identity.
    None,
    /// Turn over about the horizontal axis: NW↔SW, NE↔SE.
    FlipHorizontal,
    /// Turn over about the vertical axis: NW↔NE, SW↔SE.
    FlipVertical,
    /// Half turn in the plane: NW↔SE, NE↔SW.
    HalfTurn,
}

impl RotationKind {
    pub const ALL: [RotationKind; 4] = [
        RotationKind::None,
        RotationKind::FlipHorizontal,
        RotationKind::FlipVertical,
        RotationKind::HalfTurn,
    ];

    /// Single-letter form: I, H, V, Z.
    pub fn letter(self) -> char {
        match self {
            RotationKind::None => 'I',
            RotationKind::FlipHorizontal => 'H',
            RotationKind::FlipVertical => 'V',
            RotationKind::HalfTurn => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(RotationKind::None),
            'H' => Some(RotationKind::FlipHorizontal),
            'V' => Some(RotationKind::FlipVertical),
            'Z' => Some(RotationKind::HalfTurn),
            _ => None,
        }
    }

    /// Where the endpoint at each compass point ends up.
    pub fn permutation(self) -> [usize; 4] {
        match self {
            RotationKind::None => [0, 1, 2, 3],
            RotationKind::FlipHorizontal => [3, 2, 1, 0],
            RotationKind::FlipVertical => [1, 0, 3, 2],
            RotationKind::HalfTurn => [2, 3, 0, 1],
        }
    }

    /// Whether the rotation turns the tangle over, exchanging over and under.
    pub fn turns_over(self) -> bool {
        matches!(self, RotationKind::FlipHorizontal | RotationKind::FlipVertical)
    }

    /// Group law of the Klein four-group formed by the rotations.
    pub fn compose(self, other: RotationKind) -> RotationKind {
        let index = |r: RotationKind| RotationKind::ALL.iter().position(|&k| k == r).unwrap();
        RotationKind::ALL[index(self) ^ index(other)]
    }
}

impl fmt::Display for RotationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for RotationKind {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => RotationKind::from_letter(c),
            _ => None,
        }
        .ok_or_else(|| TangleError::Invalid(format!("unknown rotation {s:?}, expected I, H, V or Z")))
    }
}

/// A tangle fragment: crossings in PD form plus the four boundary arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangle {
    crossings: Vec<Crossing>,
    boundary: [ArcId; 4],
}

impl Tangle {
    pub fn new(crossings: Vec<Crossing>, boundary: [ArcId; 4]) -> Result<Self, TangleError> {
        let mut count: BTreeMap<ArcId, usize> = BTreeMap::new();
        for x in &crossings {
            for a in x.0 {
                *count.entry(a).or_default() += 1;
            }
        }
        for a in boundary {
            *count.entry(a).or_default() += 1;
        }
        if let Some((a, n)) = count.iter().find(|&(_, &n)| n != 2) {
            return Err(TangleError::Invalid(format!(
                "arc {a} has {n} ends in the tangle, expected 2"
            )));
        }
        Ok(Tangle {
            crossings,
            boundary,
        })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn boundary(&self) -> [ArcId; 4] {
        self.boundary
    }

    pub fn boundary_at(&self, c: Compass) -> ArcId {
        self.boundary[c as usize]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }
}

/// Applies a rotation to a tangle. Flips also turn every crossing over;
/// strand orientations are left for closure to repair.
pub fn rotate_tangle(t: &Tangle, r: RotationKind) -> Tangle {
    let perm = r.permutation();
    let mut boundary = [0; 4];
    for p in 0..4 {
        boundary[perm[p]] = t.boundary[p];
    }
    let crossings = if r.turns_over() {
        t.crossings.iter().map(|x| x.flipped()).collect()
    } else {
        t.crossings.clone()
    };
    Tangle {
        crossings,
        boundary,
    }
}

/// A diagram cut into an outer tangle and an inner (mutation) tangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TanglePresentation {
    outer: Tangle,
    inner: Tangle,
    /// Outer compass point glued to each inner compass point.
    gluing: [usize; 4],
    base: Basepoint,
}

impl TanglePresentation {
    pub fn new(
        outer: Tangle,
        inner: Tangle,
        gluing: [Compass; 4],
        base: Basepoint,
    ) -> Result<Self, TangleError> {
        let gluing = gluing.map(|c| c as usize);
        let mut seen = [false; 4];
        for g in gluing {
            seen[g] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(TangleError::Invalid("gluing is not a bijection".into()));
        }
        let p = TanglePresentation {
            outer,
            inner,
            gluing,
            base,
        };
        let in_outer = p.outer.crossings.iter().any(|x| x.0.contains(&base.arc))
            || p.outer.boundary.contains(&base.arc);
        if !in_outer {
            return Err(TangleError::Invalid(format!(
                "basepoint arc {} is not in the outer tangle",
                base.arc
            )));
        }
        close_presentation(&p)?;
        Ok(p)
    }

    /// Splits `d` into the crossings listed in `inner` and the rest. The
    /// boundary compass points are read off the plane structure, with NW the
    /// smallest boundary label.
    pub fn from_split(d: &Diagram, inner: &[usize]) -> Result<Self, TangleError> {
        d.check()?;
        let n = d.crossing_count();
        let mut is_inner = vec![false; n];
        for &c in inner {
            if c >= n {
                return Err(TangleError::Invalid(format!("no crossing {c}")));
            }
            is_inner[c] = true;
        }
        let boundary = compass_order(d, &is_inner)?;
        let pick = |want: bool| -> Vec<Crossing> {
            d.crossings()
                .iter()
                .zip(&is_inner)
                .filter(|&(_, &i)| i == want)
                .map(|(x, _)| *x)
                .collect()
        };
        let outer = Tangle::new(pick(false), boundary)?;
        let inner = Tangle::new(pick(true), boundary)?;
        Self::new(outer, inner, Compass::ALL, d.basepoint())
    }

    pub fn outer(&self) -> &Tangle {
        &self.outer
    }

    pub fn inner(&self) -> &Tangle {
        &self.inner
    }

    pub fn basepoint(&self) -> Basepoint {
        self.base
    }

    pub fn crossing_count(&self) -> usize {
        self.outer.crossing_count() + self.inner.crossing_count()
    }

    fn with_inner(&self, inner: Tangle) -> TanglePresentation {
        TanglePresentation {
            inner,
            ..self.clone()
        }
    }
}

/// Boundary arcs of the inner region in NW, NE, SE, SW order.
fn compass_order(d: &Diagram, is_inner: &[bool]) -> Result<[ArcId; 4], TangleError> {
    let inc = d.incidence();
    let f = faces(d.crossings(), &inc);
    // (arc, face right of the cut leaving the inner side, face to its left)
    let mut cuts = Vec::new();
    for arc in d.arcs() {
        let ends = inc.ends(arc);
        let (ie, oe) = match (is_inner[ends[0].crossing], is_inner[ends[1].crossing]) {
            (true, false) => (ends[0], ends[1]),
            (false, true) => (ends[1], ends[0]),
            _ => continue,
        };
        cuts.push((arc, f.of_dart[ie.dart_index()], f.of_dart[oe.dart_index()]));
    }
    if cuts.len() != 4 {
        return Err(TangleError::Invalid(format!(
            "split has {} boundary strands, expected 4",
            cuts.len()
        )));
    }
    let next = |i: usize| -> Result<usize, TangleError> {
        let succ: Vec<usize> = (0..4).filter(|&j| cuts[j].1 == cuts[i].2).collect();
        match succ[..] {
            [j] => Ok(j),
            _ => Err(TangleError::Invalid("split region is not a disk".into())),
        }
    };
    let start = (0..4).min_by_key(|&i| cuts[i].0).unwrap_or(0);
    let mut ccw = vec![start];
    while ccw.len() < 4 {
        ccw.push(next(*ccw.last().unwrap())?);
    }
    if next(ccw[3])? != start {
        return Err(TangleError::Invalid("split region is not a disk".into()));
    }
    let [nw, sw, se, ne] = [ccw[0], ccw[1], ccw[2], ccw[3]].map(|i| cuts[i].0);
    Ok([nw, ne, se, sw])
}

const INNER: u64 = 1 << 32;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Glues the two tangles, returning raw crossings (outer first, inner
/// crossings as stored) and the merged label of every outer arc.
fn glue(p: &TanglePresentation) -> Result<(Vec<Crossing>, HashMap<ArcId, ArcId>), TangleError> {
    let mut keys: Vec<u64> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut key = |k: u64, keys: &mut Vec<u64>| -> usize {
        *index.entry(k).or_insert_with(|| {
            keys.push(k);
            keys.len() - 1
        })
    };
    let outer_ids: Vec<[usize; 4]> = p
        .outer
        .crossings
        .iter()
        .map(|x| x.0.map(|a| key(a as u64, &mut keys)))
        .collect();
    let inner_ids: Vec<[usize; 4]> = p
        .inner
        .crossings
        .iter()
        .map(|x| x.0.map(|a| key(INNER | a as u64, &mut keys)))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..4)
        .map(|q| {
            (
                key(INNER | p.inner.boundary[q] as u64, &mut keys),
                key(p.outer.boundary[p.gluing[q]] as u64, &mut keys),
            )
        })
        .collect();
    let mut uf = UnionFind((0..keys.len()).collect());
    for (a, b) in pairs {
        uf.union(a, b);
    }
    // Every merged arc must meet some crossing, else it is a separate circle.
    let mut label: HashMap<usize, ArcId> = HashMap::new();
    let mut crossings = Vec::with_capacity(outer_ids.len() + inner_ids.len());
    for ids in outer_ids.iter().chain(&inner_ids) {
        let x = ids.map(|i| {
            let root = uf.find(i);
            let next = label.len() as ArcId + 1;
            *label.entry(root).or_insert(next)
        });
        crossings.push(Crossing(x));
    }
    let mut outer_label = HashMap::new();
    for (i, &k) in keys.iter().enumerate() {
        let root = uf.find(i);
        let Some(&l) = label.get(&root) else {
            return Err(TangleError::MultiComponent);
        };
        if k & INNER == 0 {
            outer_label.insert(k as ArcId, l);
        }
    }
    Ok((crossings, outer_label))
}

/// Closes a presentation into a diagram, canonically relabeled.
pub fn close_presentation(p: &TanglePresentation) -> Result<Diagram, TangleError> {
    close_rotated(p, RotationKind::None)
}

/// Closure of `p` with its inner tangle rotated by `r`.
pub fn mutate(p: &TanglePresentation, r: RotationKind) -> Result<Diagram, TangleError> {
    if p.inner.crossings.is_empty() {
        return Err(TangleError::EmptyInner);
    }
    close_rotated(p, r)
}

fn close_rotated(p: &TanglePresentation, r: RotationKind) -> Result<Diagram, TangleError> {
    let rotated = p.with_inner(rotate_tangle(&p.inner, r));
    let (crossings, labels) = glue(&rotated)?;
    if crossings.is_empty() {
        return Ok(Diagram::unknot());
    }
    let base_arc = labels[&p.base.arc];
    // Outer crossings keep their stored slots, so an anchor found in the
    // unrotated closure is valid here and keeps the base arc's direction.
    let anchor = if p.outer.crossing_count() > 0 {
        reference_anchor(p)?
    } else {
        Endpoint::new(0, 0)
    };
    let oriented =
        orient_crossings(&crossings, anchor).map_err(|_| TangleError::MultiComponent)?;
    let d = Diagram::new(
        oriented,
        Basepoint {
            arc: base_arc,
            direction: p.base.direction,
        },
    )?;
    Ok(d.relabeled())
}

/// An endpoint of an outer crossing that the base arc's strand enters, in
/// the orientation of the unrotated closure.
fn reference_anchor(p: &TanglePresentation) -> Result<Endpoint, TangleError> {
    let n_outer = p.outer.crossing_count();
    let (crossings, labels) = glue(p)?;
    let base = labels[&p.base.arc];
    // Outer crossing 0 is oriented as stored.
    let oriented = orient_crossings(&crossings, Endpoint::new(0, 0))
        .map_err(|_| TangleError::MultiComponent)?;
    let d = Diagram::new_unchecked(oriented, Basepoint::forward(base));
    let head = d.heads()[&base];
    if head.crossing < n_outer {
        return Ok(head);
    }
    let tail = d
        .incidence()
        .other_end(base, head)
        .ok_or(TangleError::MultiComponent)?;
    if tail.crossing < n_outer {
        // The base arc leaves this outer crossing; anchor on the passage
        // that feeds it.
        return Ok(Endpoint::new(tail.crossing, tail.slot + 2));
    }
    Err(TangleError::Invalid(
        "basepoint arc must touch an outer crossing".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{canonical_dt, extract_dt};

    fn kink_presentation() -> TanglePresentation {
        // One crossing X(1,2,3,4): counterclockwise around the disk the
        // boundary reads NW, SW, SE, NE.
        let inner = Tangle::new(vec![Crossing::new(1, 2, 3, 4)], [1, 4, 3, 2]).unwrap();
        let outer = Tangle::new(Vec::new(), [7, 7, 8, 8]).unwrap();
        TanglePresentation::new(outer, inner, Compass::ALL, Basepoint::forward(7)).unwrap()
    }

    fn trefoil() -> Diagram {
        "X(1,5,2,4) X(5,3,6,2) X(3,1,4,6) BASE 1 +".parse().unwrap()
    }

    #[test]
    fn rotations_form_klein_group() {
        for a in RotationKind::ALL {
            assert_eq!(a.compose(a), RotationKind::None);
            for b in RotationKind::ALL {
                let perm_ab: Vec<usize> = (0..4).map(|p| b.permutation()[a.permutation()[p]]).collect();
                assert_eq!(perm_ab, a.compose(b).permutation());
                assert_eq!(a.compose(b).turns_over(), a.turns_over() != b.turns_over());
            }
        }
        assert_eq!(
            RotationKind::FlipHorizontal.compose(RotationKind::FlipVertical),
            RotationKind::HalfTurn
        );
    }

    #[test]
    fn rotate_tangle_laws() {
        let t = kink_presentation().inner().clone();
        assert_eq!(rotate_tangle(&t, RotationKind::None), t);
        for r in RotationKind::ALL {
            assert_eq!(rotate_tangle(&rotate_tangle(&t, r), r), t);
        }
        let hv = rotate_tangle(
            &rotate_tangle(&t, RotationKind::FlipHorizontal),
            RotationKind::FlipVertical,
        );
        assert_eq!(hv, rotate_tangle(&t, RotationKind::HalfTurn));
    }

    #[test]
    fn kink_closure() {
        let p = kink_presentation();
        let d = close_presentation(&p).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert!(d.validate().is_ok());
        let z = mutate(&p, RotationKind::HalfTurn).unwrap();
        assert!(z.is_isomorphic_unbased(&d));
        for r in RotationKind::ALL {
            assert!(mutate(&p, r).unwrap().validate().is_ok());
        }
    }

    #[test]
    fn split_trefoil_closes_back() {
        let t = trefoil();
        let p = TanglePresentation::from_split(&t, &[1]).unwrap();
        assert_eq!(p.inner().boundary(), [2, 6, 3, 5]);
        let closed = close_presentation(&p).unwrap();
        assert!(closed.is_isomorphic(&t));
        assert_eq!(mutate(&p, RotationKind::None).unwrap(), closed);
        for r in RotationKind::ALL {
            let m = mutate(&p, r).unwrap();
            assert_eq!(m.crossing_count(), 3);
            assert_eq!(canonical_dt(&m).unwrap(), canonical_dt(&t).unwrap());
        }
        assert_eq!(extract_dt(&closed).unwrap().to_string(), "4 6 2");
    }

    #[test]
    fn empty_inner_cannot_mutate() {
        let outer = Tangle::new(vec![Crossing::new(1, 2, 2, 1)], [3, 1, 3, 1]);
        assert!(outer.is_err());
        let p = kink_presentation();
        let swapped = TanglePresentation {
            outer: p.inner.clone(),
            inner: p.outer.clone(),
            gluing: p.gluing,
            base: Basepoint::forward(1),
        };
        assert_eq!(mutate(&swapped, RotationKind::None), Err(TangleError::EmptyInner));
    }

    #[test]
    fn bad_gluing_and_rotation_text() {
        let p = kink_presentation();
        let err = TanglePresentation::new(
            p.outer().clone(),
            p.inner().clone(),
            [Compass::NW; 4],
            Basepoint::forward(7),
        );
        assert!(matches!(err, Err(TangleError::Invalid(_))));
        assert_eq!("V".parse::<RotationKind>().unwrap(), RotationKind::FlipVertical);
        assert!("X".parse::<RotationKind>().is_err());
        assert!("HV".parse::<RotationKind>().is_err());
    }

    #[test]
    fn closure_into_two_circles_is_rejected() {
        // Outer arcs NW-SW and NE-SE beside a crossing-free inner tangle
        // make two circles.
        let inner = Tangle::new(Vec::new(), [1, 2, 2, 1]).unwrap();
        let outer = Tangle::new(Vec::new(), [7, 8, 8, 7]).unwrap();
        let p = TanglePresentation {
            outer,
            inner,
            gluing: [0, 1, 2, 3],
            base: Basepoint::forward(7),
        };
        assert_eq!(close_presentation(&p), Err(TangleError::MultiComponent));
    }
}

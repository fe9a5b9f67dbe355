//! The cube of resolutions.
//!
//! Smoothing a crossing joins two of its four corner faces. The regions of a
//! resolved diagram are therefore classes of the diagram's regions, and the
//! circles and regions form a tree rooted at the outer region. A circle
//! encloses the punctures on its far side from the root.

use std::fmt;

use rayon::prelude::*;

use crate::diagram::{Diagram, VertexKind};
use crate::error::{Error, Result};
use crate::surface::{PlanarSurface, PlaneMap};
use crate::uf::UnionFind;

/// A set of punctures, by index into the surface's puncture list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PunctureSet(pub u64);

impl PunctureSet {
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, p: usize) -> bool {
        self.0 >> p & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&p| self.contains(p))
    }

    pub fn names(self, surface: &PlanarSurface) -> Vec<String> {
        self.iter().map(|p| surface.punctures()[p].clone()).collect()
    }
}

/// A vertex of the cube: one smoothing choice per crossing, in crossing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionVector {
    bits: Vec<bool>,
}

impl ResolutionVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(k: usize) -> Self {
        Self { bits: vec![false; k] }
    }

    /// The state at position `index` in lexicographic order (v_1 most significant).
    pub fn from_index(k: usize, index: usize) -> Self {
        Self {
            bits: (0..k).map(|i| index >> (k - 1 - i) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn with(&self, i: usize, value: bool) -> Self {
        let mut bits = self.bits.clone();
        bits[i] = value;
        Self { bits }
    }
}

impl fmt::Display for ResolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Contractible,
    /// Keyed by the enclosed punctures; equal keys mean parallel circles.
    Essential(PunctureSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    /// Darts of the diagram along the circle, in traversal order.
    pub darts: Vec<usize>,
    pub enclosed: PunctureSet,
    /// Label of the minimal dart on the circle.
    pub canonical_id: i64,
}

impl Circle {
    pub fn classification(&self) -> Classification {
        classify(self)
    }
}

pub fn classify(circle: &Circle) -> Classification {
    if circle.enclosed.is_empty() {
        Classification::Contractible
    } else {
        Classification::Essential(circle.enclosed)
    }
}

pub fn enclosed_punctures(state: &ResolvedState, circle: usize) -> PunctureSet {
    state.circles[circle].enclosed
}

#[derive(Clone, Debug)]
pub struct ResolvedState {
    pub v: ResolutionVector,
    pub circles: Vec<Circle>,
    pub resolved_map: PlaneMap,
    circle_of: Vec<usize>,
}

impl ResolvedState {
    pub fn circle_of_dart(&self, d: usize) -> usize {
        self.circle_of[d]
    }

    pub fn num_circles(&self) -> usize {
        self.circles.len()
    }
}

/// Strand pairing at every vertex for state `v`.
fn smoothing_pairs(d: &Diagram, v: &ResolutionVector) -> Vec<usize> {
    let map = d.map();
    let mut pair = vec![usize::MAX; map.num_darts()];
    let mut crossing = 0;
    for vid in 0..map.num_vertices() {
        let r = map.rotation(vid);
        match d.vertex_kind(vid) {
            VertexKind::Loop => {
                pair[r[0]] = r[1];
                pair[r[1]] = r[0];
            }
            VertexKind::Crossing => {
                let joins = if v.get(crossing) {
                    [(r[0], r[3]), (r[1], r[2])]
                } else {
                    [(r[0], r[1]), (r[2], r[3])]
                };
                for (a, b) in joins {
                    pair[a] = b;
                    pair[b] = a;
                }
                crossing += 1;
            }
        }
    }
    pair
}

/// Region classes of the smoothed diagram: the diagram's regions with the
/// corner faces joined by each smoothing.
fn resolved_regions(d: &Diagram, v: &ResolutionVector) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(d.num_regions());
    for i in 0..d.crossing_count() {
        let r = d.crossing_darts(i);
        let (a, b) = if v.get(i) { (r[1], r[3]) } else { (r[0], r[2]) };
        uf.union(d.region_of_dart(a), d.region_of_dart(b));
    }
    uf.classes()
}

/// Smooths every crossing of `d` according to `v` and classifies the circles.
pub fn resolve(d: &Diagram, v: &ResolutionVector) -> Result<ResolvedState> {
    if v.len() != d.crossing_count() {
        return Err(Error::InvalidDiagram(vec![format!(
            "resolution vector has length {} but the diagram has {} crossings",
            v.len(),
            d.crossing_count()
        )]));
    }
    let map = d.map();
    let n = map.num_darts();
    let pair = smoothing_pairs(d, v);

    let mut circle_of = vec![usize::MAX; n];
    let mut circles = Vec::new();
    for start in 0..n {
        if circle_of[start] != usize::MAX {
            continue;
        }
        let id = circles.len();
        let mut darts = Vec::new();
        let mut x = start;
        loop {
            let y = map.alpha(x);
            circle_of[x] = id;
            circle_of[y] = id;
            darts.push(x);
            darts.push(y);
            x = pair[y];
            if x == start {
                break;
            }
        }
        circles.push(Circle {
            darts,
            enclosed: PunctureSet::default(),
            canonical_id: map.label(start),
        });
    }

    let (class, num_regions) = resolved_regions(d, v);
    if num_regions != circles.len() + 1 {
        return Err(Error::InconsistentComplex(format!(
            "state {v}: {} circles but {num_regions} complementary regions",
            circles.len()
        )));
    }
    // region-circle tree rooted at the outer region
    let sides: Vec<[usize; 2]> = circles
        .iter()
        .map(|c| {
            let x = c.darts[0];
            [class[d.region_of_dart(x)], class[d.region_of_dart(map.alpha(x))]]
        })
        .collect();
    let mut region_circles = vec![Vec::new(); num_regions];
    for (c, s) in sides.iter().enumerate() {
        if s[0] == s[1] {
            return Err(Error::InconsistentComplex(format!(
                "state {v}: circle {} has the same region on both sides",
                circles[c].canonical_id
            )));
        }
        region_circles[s[0]].push(c);
        region_circles[s[1]].push(c);
    }
    let root = class[d.outer_region()];
    let mut order = vec![root];
    let mut seen = vec![false; num_regions];
    seen[root] = true;
    let mut inner_side = vec![usize::MAX; circles.len()];
    let mut i = 0;
    while i < order.len() {
        let r = order[i];
        i += 1;
        for &c in &region_circles[r] {
            let other = if sides[c][0] == r { sides[c][1] } else { sides[c][0] };
            if !seen[other] {
                seen[other] = true;
                inner_side[c] = other;
                order.push(other);
            }
        }
    }
    if order.len() != num_regions {
        return Err(Error::InconsistentComplex(format!("state {v}: regions are not nested")));
    }
    let mut mask = vec![0u64; num_regions];
    for p in 0..d.surface().num_punctures() {
        mask[class[d.puncture_region(p)]] |= 1 << p;
    }
    // children precede parents when walking the breadth-first order backwards
    let mut parent_circle = vec![usize::MAX; num_regions];
    for (c, &r) in inner_side.iter().enumerate() {
        parent_circle[r] = c;
    }
    for &r in order.iter().rev() {
        let c = parent_circle[r];
        if c != usize::MAX {
            circles[c].enclosed = PunctureSet(mask[r]);
            let outer = if sides[c][0] == r { sides[c][1] } else { sides[c][0] };
            mask[outer] |= mask[r];
        }
    }

    let resolved_map = smoothed_map(map, &pair)?;
    Ok(ResolvedState {
        v: v.clone(),
        circles,
        resolved_map,
        circle_of,
    })
}

/// The diagram map with every crossing replaced by two bivalent vertices.
fn smoothed_map(map: &PlaneMap, pair: &[usize]) -> Result<PlaneMap> {
    let mut rotations = Vec::new();
    for (d, &p) in pair.iter().enumerate() {
        if d < p {
            rotations.push(vec![d, p]);
        }
    }
    let alpha = (0..map.num_darts()).map(|d| map.alpha(d)).collect();
    PlaneMap::from_parts(map.labels().to_vec(), alpha, rotations)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Merge,
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDescriptor {
    pub from: ResolutionVector,
    pub to: ResolutionVector,
    pub crossing: usize,
    pub kind: EdgeKind,
    /// Circles of `from` (then `to`) that meet the crossing.
    pub active_from: Vec<usize>,
    pub active_to: Vec<usize>,
    /// Untouched circles, as (index in `from`, index in `to`).
    pub passive: Vec<(usize, usize)>,
}

/// All resolved states of a diagram, in lexicographic order.
#[derive(Clone, Debug)]
pub struct Cube {
    pub states: Vec<ResolvedState>,
    crossing_darts: Vec<[usize; 4]>,
}

impl Cube {
    pub fn new(d: &Diagram) -> Result<Self> {
        let k = d.crossing_count();
        assert!(k < usize::BITS as usize - 1, "too many crossings for a cube");
        let states = (0..1usize << k)
            .into_par_iter()
            .map(|idx| resolve(d, &ResolutionVector::from_index(k, idx)))
            .collect::<Result<Vec<_>>>()?;
        let crossing_darts = (0..k).map(|i| d.crossing_darts(i)).collect();
        Ok(Self { states, crossing_darts })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_darts.len()
    }

    pub fn state(&self, v: &ResolutionVector) -> &ResolvedState {
        &self.states[v.index()]
    }

    pub fn edge(&self, from: usize, crossing: usize) -> EdgeDescriptor {
        let k = self.crossing_count();
        let to = from | 1 << (k - 1 - crossing);
        debug_assert_ne!(from, to);
        let (sv, su) = (&self.states[from], &self.states[to]);
        let darts = self.crossing_darts[crossing];
        let active = |s: &ResolvedState| {
            let mut a: Vec<usize> = darts.iter().map(|&x| s.circle_of_dart(x)).collect();
            a.sort_unstable();
            a.dedup();
            a
        };
        let (active_from, active_to) = (active(sv), active(su));
        let passive = (0..sv.num_circles())
            .filter(|c| !active_from.contains(c))
            .map(|c| (c, su.circle_of_dart(sv.circles[c].darts[0])))
            .collect();
        let kind = if active_from.len() == 2 {
            EdgeKind::Merge
        } else {
            EdgeKind::Split
        };
        EdgeDescriptor {
            from: sv.v.clone(),
            to: su.v.clone(),
            crossing,
            kind,
            active_from,
            active_to,
            passive,
        }
    }

    /// Every cube edge, ordered by source state then crossing.
    pub fn edges(&self) -> impl Iterator<Item = EdgeDescriptor> + '_ {
        let k = self.crossing_count();
        (0..self.states.len()).flat_map(move |from| {
            let v = from;
            (0..k)
                .filter(move |&i| v >> (k - 1 - i) & 1 == 0)
                .map(move |i| self.edge(from, i))
        })
    }
}

/// Every cube edge of `d`, ordered by source state then crossing.
pub fn cube_edges(d: &Diagram) -> Result<Vec<EdgeDescriptor>> {
    let cube = Cube::new(d)?;
    Ok(cube.edges().collect())
}

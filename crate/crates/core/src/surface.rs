//! Plane combinatorial maps and the genus-zero surface they are drawn on.
//!
//! A map is a set of darts (half-edges) with two permutations: the edge
//! involution `alpha` and the vertex rotation `sigma`, which cycles the darts
//! around each vertex counter-clockwise. Faces are the orbits of
//! `phi = sigma . alpha`; the face of a dart `d` is the region on the right of
//! the edge when it is traversed starting from `d`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A disk with `punctures.len()` holes. The outer boundary is implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanarSurface {
    punctures: Vec<String>,
}

impl PlanarSurface {
    pub fn new(punctures: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &punctures {
            if !seen.insert(p.as_str()) {
                return Err(Error::Schema {
                    path: "surface.punctures".into(),
                    message: format!("duplicate puncture identifier {p:?}"),
                });
            }
        }
        if punctures.len() > crate::MAX_PUNCTURES {
            return Err(Error::Schema {
                path: "surface.punctures".into(),
                message: format!("at most {} punctures are supported", crate::MAX_PUNCTURES),
            });
        }
        Ok(Self { punctures })
    }

    pub fn disk() -> Self {
        Self::default()
    }

    pub fn punctures(&self) -> &[String] {
        &self.punctures
    }

    pub fn num_punctures(&self) -> usize {
        self.punctures.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.punctures.iter().position(|p| p == name)
    }
}

/// One face: the cyclic dart sequence of a `phi`-orbit, starting at its minimal dart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<usize>,
}

impl Face {
    pub fn min_dart(&self) -> usize {
        self.darts[0]
    }
}

/// An invariant violation found by [`PlaneMap::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapViolation {
    FixedPointDart(i64),
    UnassignedDart(i64),
    EulerFailure {
        component_min_dart: i64,
        vertices: usize,
        edges: usize,
        faces: usize,
    },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::FixedPointDart(d) => write!(f, "fixed-point dart d{d}"),
            MapViolation::UnassignedDart(d) => write!(f, "dart d{d} belongs to no vertex"),
            MapViolation::EulerFailure {
                component_min_dart,
                vertices,
                edges,
                faces,
            } => write!(
                f,
                "component of d{component_min_dart} violates V - E + F = 2 ({vertices} - {edges} + {faces})"
            ),
        }
    }
}

/// A rotation system. Darts are dense indices `0..n`; `labels` keeps the
/// external identifiers, strictly increasing so index order equals label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMap {
    labels: Vec<i64>,
    alpha: Vec<usize>,
    rotations: Vec<Vec<usize>>,
    // (vertex, position in rotation); usize::MAX when unassigned
    place: Vec<(usize, usize)>,
}

const UNASSIGNED: (usize, usize) = (usize::MAX, usize::MAX);

impl PlaneMap {
    /// Builds a map from raw parts. `alpha[d] == d` encodes an unpaired dart;
    /// darts missing from every rotation are left unassigned. Both conditions
    /// are reported by [`PlaneMap::validate`] rather than rejected here.
    pub fn from_parts(labels: Vec<i64>, alpha: Vec<usize>, rotations: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if alpha.len() != n {
            return Err(Error::MalformedMap("involution length differs from dart count".into()));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedMap("dart labels must be strictly increasing".into()));
        }
        let mut place = vec![UNASSIGNED; n];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= n {
                    return Err(Error::MalformedMap(format!("vertex {v} references unknown dart index {d}")));
                }
                if place[d] != UNASSIGNED {
                    return Err(Error::MalformedMap(format!("dart d{} appears in two rotations", labels[d])));
                }
                place[d] = (v, i);
            }
        }
        for (d, &a) in alpha.iter().enumerate() {
            if a >= n || alpha[a] != d {
                return Err(Error::MalformedMap(format!("alpha is not an involution at d{}", labels[d])));
            }
        }
        Ok(Self {
            labels,
            alpha,
            rotations,
            place,
        })
    }

    pub fn num_darts(&self) -> usize {
        self.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, d: usize) -> i64 {
        self.labels[d]
    }

    pub fn index_of(&self, label: i64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d]
    }

    /// Counter-clockwise successor of `d` around its vertex.
    pub fn sigma(&self, d: usize) -> usize {
        let (v, i) = self.place[d];
        let rot = &self.rotations[v];
        rot[(i + 1) % rot.len()]
    }

    /// Counter-clockwise predecessor of `d` around its vertex.
    pub fn sigma_inv(&self, d: usize) -> usize {
        let (v, i) = self.place[d];
        let rot = &self.rotations[v];
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// The face-walk successor.
    pub fn phi(&self, d: usize) -> usize {
        self.sigma(self.alpha[d])
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.place[d].0
    }

    pub fn position_in_vertex(&self, d: usize) -> usize {
        self.place[d].1
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn num_edges(&self) -> usize {
        self.alpha.iter().enumerate().filter(|&(d, &a)| d < a).count()
    }

    /// Edges as dart pairs `(d, alpha(d))` with `d < alpha(d)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.alpha
            .iter()
            .enumerate()
            .filter(|&(d, &a)| d < a)
            .map(|(d, &a)| (d, a))
    }

    /// Every invariant violation, in dart order. Empty means the map is valid.
    pub fn validate(&self) -> Vec<MapViolation> {
        let mut out = Vec::new();
        for d in 0..self.num_darts() {
            if self.alpha[d] == d {
                out.push(MapViolation::FixedPointDart(self.labels[d]));
            }
        }
        for d in 0..self.num_darts() {
            if self.place[d] == UNASSIGNED {
                out.push(MapViolation::UnassignedDart(self.labels[d]));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let faces = self.trace_faces_unchecked();
        let comp = self.dart_components();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut v = vec![0usize; ncomp];
        let mut e = vec![0usize; ncomp];
        let mut f = vec![0usize; ncomp];
        let mut min_dart = vec![usize::MAX; ncomp];
        for rot in &self.rotations {
            if let Some(&d) = rot.first() {
                v[comp[d]] += 1;
            }
        }
        for (d, _) in self.edges() {
            e[comp[d]] += 1;
        }
        for face in &faces {
            f[comp[face.min_dart()]] += 1;
        }
        for d in 0..self.num_darts() {
            min_dart[comp[d]] = min_dart[comp[d]].min(d);
        }
        for c in 0..ncomp {
            if v[c] + f[c] != e[c] + 2 {
                out.push(MapViolation::EulerFailure {
                    component_min_dart: self.labels[min_dart[c]],
                    vertices: v[c],
                    edges: e[c],
                    faces: f[c],
                });
            }
        }
        out
    }

    /// Faces of the map, ordered by minimal dart.
    pub fn trace_faces(&self) -> Result<Vec<Face>> {
        for d in 0..self.num_darts() {
            if self.alpha[d] == d {
                return Err(Error::MalformedMap(format!("fixed-point dart d{}", self.labels[d])));
            }
            if self.place[d] == UNASSIGNED {
                return Err(Error::MalformedMap(format!("dart d{} belongs to no vertex", self.labels[d])));
            }
        }
        Ok(self.trace_faces_unchecked())
    }

    fn trace_faces_unchecked(&self) -> Vec<Face> {
        let n = self.num_darts();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                darts.push(d);
                d = self.phi(d);
            }
            faces.push(Face { darts });
        }
        faces
    }

    /// `face_of[d]` = index (into [`PlaneMap::trace_faces`]) of the face containing `d`.
    pub fn face_index(&self, faces: &[Face]) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.num_darts()];
        for (i, f) in faces.iter().enumerate() {
            for &d in &f.darts {
                out[d] = i;
            }
        }
        out
    }

    /// Connected component id of every dart, numbered by minimal dart.
    pub fn dart_components(&self) -> Vec<usize> {
        let n = self.num_darts();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            stack.push(start);
            while let Some(d) = stack.pop() {
                let push = |x: usize, comp: &mut Vec<usize>, stack: &mut Vec<usize>| {
                    if x < n && comp[x] == usize::MAX {
                        comp[x] = next;
                        stack.push(x);
                    }
                };
                push(self.alpha[d], &mut comp, &mut stack);
                if self.place[d] != UNASSIGNED {
                    let v = self.place[d].0;
                    for &x in &self.rotations[v] {
                        push(x, &mut comp, &mut stack);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

//! Link diagrams on a punctured disk.
//!
//! A [`Diagram`] is a plane map whose vertices are either 4-valent crossings
//! or bivalent loop markers, together with the placement of the punctures in
//! the plane regions cut out by the map. For a disconnected map a plane region
//! may consist of several faces (one per boundary component); `region_links`
//! records which faces share a region.
//!
//! Crossing rotations are stored counter-clockwise starting from the incoming
//! under-strand. The 0-smoothing joins positions 0-1 and 2-3, the 1-smoothing
//! joins 0-3 and 1-2.

mod io;
mod iso;
mod moves;
mod pd;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::surface::{Face, PlanarSurface, PlaneMap};
use crate::uf::UnionFind;

pub use io::{parse_diagram, DiagramDocument, VertexDocument, DIAGRAM_FORMAT};
pub use iso::is_isomorphic;
pub use moves::{KinkSide, MoveKind, MoveSite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Crossing,
    Loop,
}

/// Unvalidated diagram data keyed by dart labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramParts {
    pub punctures: Vec<String>,
    pub edges: Vec<(i64, i64)>,
    /// `(kind, rotation)`; for crossings `rotation[0]` is the incoming under-strand.
    pub vertices: Vec<(VertexKind, Vec<i64>)>,
    /// A dart of the outer face; `None` only for the empty diagram.
    pub outer: Option<i64>,
    /// A dart of the face holding each puncture; `None` means the outer region
    /// of an empty diagram.
    pub puncture_anchor: Vec<Option<i64>>,
    /// Pairs of darts whose faces lie in the same plane region.
    pub region_links: Vec<(i64, i64)>,
    /// One departure dart per link component, if given explicitly.
    pub orientation: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Topology {
    faces: Vec<Face>,
    face_of: Vec<usize>,
    region_of_face: Vec<usize>,
    num_regions: usize,
    outer_region: usize,
    puncture_region: Vec<usize>,
    component_of: Vec<usize>,
    num_components: usize,
    departure: Vec<bool>,
    n_minus: usize,
}

/// A validated link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    surface: PlanarSurface,
    map: PlaneMap,
    kinds: Vec<VertexKind>,
    crossings: Vec<usize>,
    outer: Option<usize>,
    puncture_anchor: Vec<Option<usize>>,
    region_links: Vec<(usize, usize)>,
    orientation: Vec<usize>,
    explicit_orientation: bool,
    topo: Topology,
}

/// Continuation of the strand entering a vertex at `d`.
pub(crate) fn strand_partner(map: &PlaneMap, kinds: &[VertexKind], d: usize) -> usize {
    let v = map.vertex_of(d);
    let rot = map.rotation(v);
    match kinds[v] {
        VertexKind::Crossing => rot[(map.position_in_vertex(d) + 2) % 4],
        VertexKind::Loop => rot[1 - map.position_in_vertex(d)],
    }
}

impl Diagram {
    /// Builds and validates a diagram. All violations are reported at once.
    pub fn from_parts(parts: DiagramParts) -> Result<Self> {
        let (map, kinds) = build_map(&parts)?;
        let mut violations: Vec<String> = map.validate().iter().map(|v| v.to_string()).collect();
        for (v, kind) in kinds.iter().enumerate() {
            let deg = map.rotation(v).len();
            let want = match kind {
                VertexKind::Crossing => 4,
                VertexKind::Loop => 2,
            };
            if deg != want {
                let what = match kind {
                    VertexKind::Crossing => "crossing",
                    VertexKind::Loop => "loop marker",
                };
                violations.push(format!(
                    "vertex {v} is {deg}-valent but a {what} must be {want}-valent"
                ));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidDiagram(violations));
        }
        let surface = PlanarSurface::new(parts.punctures.clone())?;
        let lookup = |label: i64, what: &str| -> std::result::Result<usize, String> {
            map.index_of(label)
                .ok_or_else(|| format!("{what} references unknown dart d{label}"))
        };
        let mut violations = Vec::new();
        let outer = match parts.outer {
            Some(l) => match lookup(l, "outer face") {
                Ok(d) => Some(d),
                Err(e) => {
                    violations.push(e);
                    None
                }
            },
            None => {
                if map.num_darts() > 0 {
                    violations.push("outer face missing".into());
                }
                None
            }
        };
        if parts.puncture_anchor.len() != surface.num_punctures() {
            violations.push("every puncture needs exactly one face".into());
        }
        let mut puncture_anchor = Vec::new();
        for (i, a) in parts.puncture_anchor.iter().enumerate() {
            match a {
                Some(l) => match lookup(*l, "puncture placement") {
                    Ok(d) => puncture_anchor.push(Some(d)),
                    Err(e) => violations.push(e),
                },
                None if map.num_darts() == 0 => puncture_anchor.push(None),
                None => violations.push(format!(
                    "puncture {} is not placed in any face",
                    surface.punctures().get(i).map(String::as_str).unwrap_or("?")
                )),
            }
        }
        let mut region_links = Vec::new();
        for &(a, b) in &parts.region_links {
            match (lookup(a, "region"), lookup(b, "region")) {
                (Ok(x), Ok(y)) => region_links.push((x, y)),
                (Err(e), _) | (_, Err(e)) => violations.push(e),
            }
        }
        let orientation = match &parts.orientation {
            Some(list) => {
                let mut out = Vec::new();
                for &l in list {
                    match lookup(l, "orientation") {
                        Ok(d) => out.push(d),
                        Err(e) => violations.push(e),
                    }
                }
                Some(out)
            }
            None => None,
        };
        if !violations.is_empty() {
            return Err(Error::InvalidDiagram(violations));
        }
        let explicit_orientation = orientation.is_some();
        let (topo, orientation, violations) = compute_topology(
            &map,
            &kinds,
            outer,
            &puncture_anchor,
            &region_links,
            orientation,
        );
        if !violations.is_empty() {
            return Err(Error::InvalidDiagram(violations));
        }
        let crossings = kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == VertexKind::Crossing)
            .map(|(v, _)| v)
            .collect();
        // canonical anchors: minimal dart of the face
        let canon = |d: usize| topo.faces[topo.face_of[d]].min_dart();
        let outer = outer.map(canon);
        let puncture_anchor = puncture_anchor.iter().map(|a| a.map(canon)).collect();
        let region_links = canonical_region_links(&topo);
        Ok(Self {
            surface,
            map,
            kinds,
            crossings,
            outer,
            puncture_anchor,
            region_links,
            orientation,
            explicit_orientation,
            topo,
        })
    }

    /// The diagram of the empty link on `surface`.
    pub fn empty(surface: PlanarSurface) -> Self {
        let n = surface.num_punctures();
        Self::from_parts(DiagramParts {
            punctures: surface.punctures().to_vec(),
            puncture_anchor: vec![None; n],
            ..Default::default()
        })
        .expect("empty diagram is valid")
    }

    pub fn to_parts(&self) -> DiagramParts {
        let l = |d: usize| self.map.label(d);
        DiagramParts {
            punctures: self.surface.punctures().to_vec(),
            edges: self.map.edges().map(|(a, b)| (l(a), l(b))).collect(),
            vertices: self
                .kinds
                .iter()
                .enumerate()
                .map(|(v, k)| (*k, self.map.rotation(v).iter().map(|&d| l(d)).collect()))
                .collect(),
            outer: self.outer.map(l),
            puncture_anchor: self.puncture_anchor.iter().map(|a| a.map(l)).collect(),
            region_links: self.region_links.iter().map(|&(a, b)| (l(a), l(b))).collect(),
            orientation: self
                .explicit_orientation
                .then(|| self.orientation.iter().map(|&d| l(d)).collect()),
        }
    }

    /// Re-checks every diagram invariant. A constructed diagram always passes;
    /// this exists so callers holding a `Diagram` can assert it.
    pub fn validate(&self) -> Vec<String> {
        match Diagram::from_parts(self.to_parts()) {
            Ok(_) => Vec::new(),
            Err(Error::InvalidDiagram(v)) => v,
            Err(e) => vec![e.to_string()],
        }
    }

    pub fn surface(&self) -> &PlanarSurface {
        &self.surface
    }

    pub fn map(&self) -> &PlaneMap {
        &self.map
    }

    pub fn vertex_kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.num_darts() == 0
    }

    /// Vertex index of the `i`-th crossing in the crossing order.
    pub fn crossing_vertex(&self, i: usize) -> usize {
        self.crossings[i]
    }

    /// Darts of the `i`-th crossing, counter-clockwise from the incoming under-strand.
    pub fn crossing_darts(&self, i: usize) -> [usize; 4] {
        let r = self.map.rotation(self.crossings[i]);
        [r[0], r[1], r[2], r[3]]
    }

    pub fn faces(&self) -> &[Face] {
        &self.topo.faces
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.topo.face_of[d]
    }

    pub fn num_regions(&self) -> usize {
        self.topo.num_regions
    }

    pub fn region_of_face(&self, f: usize) -> usize {
        self.topo.region_of_face[f]
    }

    pub fn region_of_dart(&self, d: usize) -> usize {
        self.topo.region_of_face[self.topo.face_of[d]]
    }

    pub fn outer_region(&self) -> usize {
        self.topo.outer_region
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer.map(|d| self.topo.face_of[d])
    }

    /// Plane region holding puncture `p`.
    pub fn puncture_region(&self, p: usize) -> usize {
        self.topo.puncture_region[p]
    }

    /// Face holding puncture `p` (`None` for the empty diagram).
    pub fn puncture_face(&self, p: usize) -> Option<usize> {
        self.puncture_anchor[p].map(|d| self.topo.face_of[d])
    }

    /// Number of link components.
    pub fn num_components(&self) -> usize {
        self.topo.num_components
    }

    pub fn component_of(&self, d: usize) -> usize {
        self.topo.component_of[d]
    }

    /// Departure dart of each component under the diagram's orientation.
    pub fn orientation(&self) -> &[usize] {
        &self.orientation
    }

    pub fn has_explicit_orientation(&self) -> bool {
        self.explicit_orientation
    }

    /// Whether the oriented strand leaves its vertex along `d`.
    pub fn is_departure(&self, d: usize) -> bool {
        self.topo.departure[d]
    }

    /// Count of negative crossings under the diagram's orientation.
    pub fn n_minus(&self) -> usize {
        self.topo.n_minus
    }

    pub fn n_plus(&self) -> usize {
        self.crossing_count() - self.topo.n_minus
    }

    /// Sign (+1 / -1) of crossing `i`.
    pub fn crossing_sign(&self, i: usize) -> i32 {
        crossing_sign(&self.map, self.crossings[i], &self.topo.departure)
    }

    /// Continuation of the strand entering a vertex at `d`.
    pub fn strand_partner(&self, d: usize) -> usize {
        strand_partner(&self.map, &self.kinds, d)
    }

    /// Reorders crossings so the new `j`-th crossing is the old `perm[j]`-th.
    /// Indices are 0-based.
    pub fn reorder_crossings(&self, perm: &[usize]) -> Result<Diagram> {
        let k = self.crossing_count();
        if perm.len() != k {
            return Err(Error::BadPermutation(format!(
                "expected {k} entries, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; k];
        for &p in perm {
            if p >= k || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadPermutation(format!("{perm:?} is not a bijection on 0..{k}")));
            }
        }
        let mut parts = self.to_parts();
        let old: Vec<(VertexKind, Vec<i64>)> = self
            .crossings
            .iter()
            .map(|&v| parts.vertices[v].clone())
            .collect();
        for (j, &v) in self.crossings.iter().enumerate() {
            parts.vertices[v] = old[perm[j]].clone();
        }
        Diagram::from_parts(parts)
    }

    /// Switches over- and under-strand at crossing `i`. This changes the link.
    pub fn flip_crossing(&self, i: usize) -> Diagram {
        let mut parts = self.to_parts();
        let v = self.crossings[i];
        parts.vertices[v].1.rotate_left(1);
        Diagram::from_parts(parts).expect("crossing flip preserves validity")
    }

    /// Same diagram with the outer face moved to the face of dart label `outer`.
    pub fn with_outer(&self, outer: i64) -> Result<Diagram> {
        let mut parts = self.to_parts();
        parts.outer = Some(outer);
        Diagram::from_parts(parts)
    }

    /// Same diagram on a new surface, with each puncture placed in the face of
    /// the given dart label.
    pub fn with_punctures(&self, punctures: Vec<(String, i64)>) -> Result<Diagram> {
        let mut parts = self.to_parts();
        parts.punctures = punctures.iter().map(|(p, _)| p.clone()).collect();
        parts.puncture_anchor = punctures.iter().map(|&(_, d)| Some(d)).collect();
        Diagram::from_parts(parts)
    }

    /// Same diagram with an explicit orientation (one departure dart label per component).
    pub fn with_orientation(&self, departures: Vec<i64>) -> Result<Diagram> {
        let mut parts = self.to_parts();
        parts.orientation = Some(departures);
        Diagram::from_parts(parts)
    }
}

fn crossing_sign(map: &PlaneMap, v: usize, departure: &[bool]) -> i32 {
    let r = map.rotation(v);
    let iu = if departure[r[0]] { 2 } else { 0 };
    let io = if departure[r[1]] { 3 } else { 1 };
    if io == (iu + 3) % 4 {
        1
    } else {
        -1
    }
}

fn build_map(parts: &DiagramParts) -> Result<(PlaneMap, Vec<VertexKind>)> {
    let mut labels: BTreeSet<i64> = BTreeSet::new();
    for (_, rot) in &parts.vertices {
        labels.extend(rot.iter().copied());
    }
    for &(a, b) in &parts.edges {
        labels.insert(a);
        labels.insert(b);
    }
    let labels: Vec<i64> = labels.into_iter().collect();
    let idx = |l: i64| labels.binary_search(&l).unwrap();
    let n = labels.len();
    let mut alpha: Vec<usize> = (0..n).collect();
    let mut paired = vec![false; n];
    for &(a, b) in &parts.edges {
        let (x, y) = (idx(a), idx(b));
        if paired[x] || paired[y] {
            return Err(Error::MalformedMap(format!("dart in more than one edge ({a}, {b})")));
        }
        if x != y {
            paired[x] = true;
            paired[y] = true;
            alpha[x] = y;
            alpha[y] = x;
        }
    }
    let rotations = parts
        .vertices
        .iter()
        .map(|(_, rot)| rot.iter().map(|&l| idx(l)).collect())
        .collect();
    let kinds = parts.vertices.iter().map(|(k, _)| *k).collect();
    Ok((PlaneMap::from_parts(labels, alpha, rotations)?, kinds))
}

fn compute_topology(
    map: &PlaneMap,
    kinds: &[VertexKind],
    outer: Option<usize>,
    puncture_anchor: &[Option<usize>],
    region_links: &[(usize, usize)],
    orientation: Option<Vec<usize>>,
) -> (Topology, Vec<usize>, Vec<String>) {
    let mut violations = Vec::new();
    let faces = map.trace_faces().expect("map validated");
    let face_of = map.face_index(&faces);
    let map_comp = map.dart_components();
    let n_map_comp = map_comp.iter().copied().max().map_or(0, |m| m + 1);

    let mut uf = UnionFind::new(faces.len());
    for &(a, b) in region_links {
        uf.union(face_of[a], face_of[b]);
    }
    let (region_of_face, num_regions) = if faces.is_empty() {
        (Vec::new(), 1)
    } else {
        uf.classes()
    };
    // faces and map components form a tree when the regions are realizable
    if !faces.is_empty() {
        let mut tree = UnionFind::new(n_map_comp + num_regions);
        let mut cyclic = false;
        for f in &faces {
            let c = map_comp[f.min_dart()];
            let r = region_of_face[face_of[f.min_dart()]];
            if !tree.union(c, n_map_comp + r) {
                cyclic = true;
            }
        }
        if cyclic || tree.classes().1 != 1 {
            violations.push(format!(
                "regions do not describe a plane arrangement of the {n_map_comp} map component(s); \
                 a disconnected map needs each component's outer face linked to the face it sits in"
            ));
        }
    }
    let outer_region = outer.map_or(0, |d| region_of_face[face_of[d]]);
    let puncture_region: Vec<usize> = puncture_anchor
        .iter()
        .map(|a| a.map_or(0, |d| region_of_face[face_of[d]]))
        .collect();

    // link components
    let n = map.num_darts();
    let mut component_of = vec![usize::MAX; n];
    let mut num_components = 0;
    for start in 0..n {
        if component_of[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        loop {
            component_of[d] = num_components;
            let a = map.alpha(d);
            component_of[a] = num_components;
            d = strand_partner(map, kinds, a);
            if d == start {
                break;
            }
        }
        num_components += 1;
    }
    let mut min_dart = vec![usize::MAX; num_components];
    for d in 0..n {
        let c = component_of[d];
        min_dart[c] = min_dart[c].min(d);
    }
    let orientation = match orientation {
        Some(list) => {
            let mut seen = vec![false; num_components];
            for &d in &list {
                if std::mem::replace(&mut seen[component_of[d]], true) {
                    violations.push(format!(
                        "orientation lists two darts on the component of d{}",
                        map.label(d)
                    ));
                }
            }
            if seen.iter().any(|s| !s) {
                violations.push("orientation must give one departure dart per component".into());
            }
            list
        }
        None => min_dart.clone(),
    };
    let mut departure = vec![false; n];
    for &start in &orientation {
        let mut d = start;
        loop {
            departure[d] = true;
            d = strand_partner(map, kinds, map.alpha(d));
            if d == start || departure[d] {
                break;
            }
        }
    }
    let n_minus = if violations.is_empty() {
        (0..kinds.len())
            .filter(|&v| kinds[v] == VertexKind::Crossing && crossing_sign(map, v, &departure) < 0)
            .count()
    } else {
        0
    };
    let topo = Topology {
        faces,
        face_of,
        region_of_face,
        num_regions,
        outer_region,
        puncture_region,
        component_of,
        num_components,
        departure,
        n_minus,
    };
    (topo, orientation, violations)
}

fn canonical_region_links(topo: &Topology) -> Vec<(usize, usize)> {
    let mut first: Vec<Option<usize>> = vec![None; topo.num_regions];
    let mut links = Vec::new();
    for (f, face) in topo.faces.iter().enumerate() {
        let r = topo.region_of_face[f];
        match first[r] {
            None => first[r] = Some(face.min_dart()),
            Some(a) => links.push((a, face.min_dart())),
        }
    }
    links
}

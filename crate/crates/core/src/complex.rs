//! The chain complex of a diagram: one tensor factor per circle, merge and
//! split maps along cube edges, and the cube edge signs.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::linalg::{GradedMatrices, Ring, SparseIntegerMatrix};
use crate::resolution::{Classification, Cube, EdgeKind, PunctureSet, ResolutionVector, ResolvedState};

pub const COMPLEX_FORMAT: &str = "aps-complex/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Basis label of one circle. Contractible circles carry `Vplus`/`Vminus`,
/// essential ones an orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleLabel {
    Vplus,
    Vminus,
    W(Orientation),
}

impl CircleLabel {
    /// The label with basis bit `bit` (0 first) for a circle of class `class`.
    pub fn from_bit(class: Classification, bit: bool) -> Self {
        Self::from_bit_swapped(class, bit, false)
    }

    /// As [`CircleLabel::from_bit`], with the two orientations exchanged when `swap` is set.
    pub fn from_bit_swapped(class: Classification, bit: bool, swap: bool) -> Self {
        let bit = bit ^ (swap && matches!(class, Classification::Essential(_)));
        match (class, bit) {
            (Classification::Contractible, false) => CircleLabel::Vplus,
            (Classification::Contractible, true) => CircleLabel::Vminus,
            (Classification::Essential(_), false) => CircleLabel::W(Orientation::Ccw),
            (Classification::Essential(_), true) => CircleLabel::W(Orientation::Cw),
        }
    }

    pub fn bit(self) -> bool {
        self.bit_swapped(false)
    }

    pub fn bit_swapped(self, swap: bool) -> bool {
        match self {
            CircleLabel::Vplus => false,
            CircleLabel::Vminus => true,
            CircleLabel::W(o) => (o == Orientation::Cw) ^ swap,
        }
    }

    pub fn fits(self, class: Classification) -> bool {
        matches!(
            (self, class),
            (CircleLabel::Vplus | CircleLabel::Vminus, Classification::Contractible)
                | (CircleLabel::W(_), Classification::Essential(_))
        )
    }

    pub fn winding(self) -> i64 {
        match self {
            CircleLabel::Vplus | CircleLabel::Vminus => 0,
            CircleLabel::W(Orientation::Ccw) => 1,
            CircleLabel::W(Orientation::Cw) => -1,
        }
    }
}

impl fmt::Display for CircleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircleLabel::Vplus => "v+",
            CircleLabel::Vminus => "v-",
            CircleLabel::W(Orientation::Ccw) => "w_ccw",
            CircleLabel::W(Orientation::Cw) => "w_cw",
        })
    }
}

/// One element of the tensor basis of a resolved state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub state: ResolutionVector,
    pub labels: Vec<CircleLabel>,
}

pub fn winding_grade(g: &Generator) -> i64 {
    g.labels.iter().map(|l| l.winding()).sum()
}

/// The tensor basis of a state: labels in circle order, the first circle
/// varying slowest, `Vplus < Vminus` and `Ccw < Cw`.
pub fn generator_basis(state: &ResolvedState) -> Vec<Generator> {
    let c = state.num_circles();
    (0..1usize << c)
        .map(|idx| Generator {
            state: state.v.clone(),
            labels: (0..c)
                .map(|j| CircleLabel::from_bit(state.circles[j].classification(), idx >> (c - 1 - j) & 1 == 1))
                .collect(),
        })
        .collect()
}

fn mask(class: Classification) -> PunctureSet {
    match class {
        Classification::Contractible => PunctureSet(0),
        Classification::Essential(s) => s,
    }
}

/// Which of the four cases an edge falls in. A simple closed curve system
/// keeps, for every puncture, the parity of the number of circles around
/// it; realizable triples are exactly those respecting that.
fn case(pair: (Classification, Classification), single: Classification) -> Result<u8> {
    use Classification::*;
    if PunctureSet(mask(pair.0).0 ^ mask(pair.1).0) != mask(single) {
        return Err(Error::UnrealizableCase(format!(
            "circles {pair:?} cannot be joined into {single:?}"
        )));
    }
    Ok(match (pair.0, pair.1, single) {
        (Contractible, Contractible, _) => 1,
        (Contractible, Essential(_), _) | (Essential(_), Contractible, _) => 2,
        (Essential(_), Essential(_), Contractible) => 3,
        (Essential(_), Essential(_), Essential(_)) => 4,
    })
}

fn check_label(l: CircleLabel, class: Classification) -> Result<()> {
    if l.fits(class) {
        Ok(())
    } else {
        Err(Error::UnrealizableCase(format!("label {l} on a circle of class {class:?}")))
    }
}

/// The merge map on one pair of labels.
pub fn local_merge(
    class1: Classification,
    class2: Classification,
    class_result: Classification,
    labels: (CircleLabel, CircleLabel),
) -> Result<Vec<(CircleLabel, i64)>> {
    use CircleLabel::*;
    check_label(labels.0, class1)?;
    check_label(labels.1, class2)?;
    let out = match case((class1, class2), class_result)? {
        1 => match labels {
            (Vplus, Vplus) => Some(Vplus),
            (Vplus, Vminus) | (Vminus, Vplus) => Some(Vminus),
            _ => None,
        },
        2 => match labels {
            (Vplus, w @ W(_)) | (w @ W(_), Vplus) => Some(w),
            _ => None,
        },
        3 => (labels.0 != labels.1).then_some(Vminus),
        _ => None,
    };
    Ok(out.map(|l| (l, 1)).into_iter().collect())
}

/// The split map on one label.
pub fn local_split(
    class_in: Classification,
    class1: Classification,
    class2: Classification,
    label: CircleLabel,
) -> Result<Vec<((CircleLabel, CircleLabel), i64)>> {
    use CircleLabel::*;
    use Orientation::*;
    check_label(label, class_in)?;
    let out = match case((class1, class2), class_in)? {
        1 => match label {
            Vplus => vec![(Vplus, Vminus), (Vminus, Vplus)],
            _ => vec![(Vminus, Vminus)],
        },
        2 => match (class1, label) {
            (Classification::Contractible, w) => vec![(Vminus, w)],
            (_, w) => vec![(w, Vminus)],
        },
        3 => match label {
            Vplus => vec![(W(Ccw), W(Cw)), (W(Cw), W(Ccw))],
            _ => vec![],
        },
        _ => vec![],
    };
    Ok(out.into_iter().map(|p| (p, 1)).collect())
}

/// (−1) to the number of ones of `v` after position `i`.
pub fn edge_sign(v: &ResolutionVector, i: usize) -> i64 {
    if v.bits()[i + 1..].iter().filter(|&&b| b).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The complex of a diagram, graded by |v| − n₋.
#[derive(Clone, Debug)]
pub struct ApsComplex {
    pub ring: Ring,
    pub n_minus: usize,
    pub matrices: GradedMatrices,
    /// Whether essential circles list `Cw` before `Ccw` in the basis.
    pub swapped_orientations: bool,
    cube: Cube,
    /// Offset of each state's block inside its degree.
    offsets: Vec<usize>,
    /// States of each degree, in lexicographic order.
    states_by_degree: Vec<Vec<usize>>,
}

impl ApsComplex {
    pub fn cube(&self) -> &Cube {
        &self.cube
    }

    pub fn min_degree(&self) -> i64 {
        self.matrices.min_degree
    }

    pub fn dims(&self) -> &[usize] {
        &self.matrices.dims
    }

    pub fn total_dim(&self) -> usize {
        self.matrices.dims.iter().sum()
    }

    pub fn differential(&self, degree: i64) -> Option<&SparseIntegerMatrix> {
        usize::try_from(degree - self.min_degree())
            .ok()
            .and_then(|i| self.matrices.differentials.get(i))
    }

    /// Basis element `index` of `degree`.
    pub fn generator(&self, degree: i64, index: usize) -> Generator {
        let h = (degree - self.min_degree()) as usize;
        let states = &self.states_by_degree[h];
        let pos = states.partition_point(|&s| self.offsets[s] <= index) - 1;
        let s = &self.cube.states[states[pos]];
        let local = index - self.offsets[states[pos]];
        let c = s.num_circles();
        Generator {
            state: s.v.clone(),
            labels: (0..c)
                .map(|j| {
                    let bit = local >> (c - 1 - j) & 1 == 1;
                    CircleLabel::from_bit_swapped(s.circles[j].classification(), bit, self.swapped_orientations)
                })
                .collect(),
        }
    }

    /// Differential entries joining generators of different winding grade.
    pub fn winding_violations(&self) -> usize {
        let mut bad = 0;
        for (i, d) in self.matrices.differentials.iter().enumerate() {
            let h = self.min_degree() + i as i64;
            for &(r, c, _) in d.entries() {
                if winding_grade(&self.generator(h, c)) != winding_grade(&self.generator(h + 1, r)) {
                    bad += 1;
                }
            }
        }
        bad
    }

    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            format: COMPLEX_FORMAT.into(),
            min_degree: self.min_degree(),
            dims: self.dims().to_vec(),
            differentials: self
                .matrices
                .differentials
                .iter()
                .enumerate()
                .map(|(i, d)| MatrixDocument {
                    degree: self.min_degree() + i as i64,
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: d.entries().iter().map(|&(r, c, x)| (r, c, x)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub degree: i64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

/// The `aps-complex/1` dump: chain dimensions and sparse differentials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub format: String,
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub differentials: Vec<MatrixDocument>,
}

impl ComplexDocument {
    pub fn to_matrices(&self) -> Result<GradedMatrices> {
        if self.format != COMPLEX_FORMAT {
            return Err(Error::Schema {
                path: "format".into(),
                message: format!("expected {COMPLEX_FORMAT:?}, found {:?}", self.format),
            });
        }
        let mut differentials = Vec::new();
        for (i, m) in self.differentials.iter().enumerate() {
            if m.degree != self.min_degree + i as i64
                || m.entries.iter().any(|&(r, c, _)| r >= m.rows || c >= m.cols)
            {
                return Err(Error::Schema {
                    path: format!("differentials[{i}]"),
                    message: "degree out of sequence or entry outside the matrix".into(),
                });
            }
            differentials.push(SparseIntegerMatrix::new(m.rows, m.cols, m.entries.iter().copied()));
        }
        Ok(GradedMatrices {
            min_degree: self.min_degree,
            dims: self.dims.clone(),
            differentials,
        })
    }
}

/// Builds the complex of `d`, checking D² = 0 over the integers.
pub fn assemble(d: &Diagram, ring: Ring) -> Result<ApsComplex> {
    assemble_with(d, ring, false)
}

/// As [`assemble`]; `swap_orientations` orders the basis of every essential
/// circle as `Cw` before `Ccw`.
pub fn assemble_with(d: &Diagram, ring: Ring, swap_orientations: bool) -> Result<ApsComplex> {
    let c = assemble_unchecked(d, ring, swap_orientations)?;
    c.matrices.check()?;
    Ok(c)
}

/// As [`assemble_with`] without the D² = 0 check.
pub(crate) fn assemble_unchecked(d: &Diagram, ring: Ring, swap_orientations: bool) -> Result<ApsComplex> {
    let cube = Cube::new(d)?;
    let k = d.crossing_count();
    let n_minus = d.n_minus();
    let mut states_by_degree = vec![Vec::new(); k + 1];
    let mut offsets = vec![0; cube.states.len()];
    let mut dims = vec![0usize; k + 1];
    for (s, st) in cube.states.iter().enumerate() {
        let w = st.v.weight();
        offsets[s] = dims[w];
        dims[w] += 1 << st.num_circles();
        states_by_degree[w].push(s);
    }

    // entries of d out of each state, as (row, col, value) within the degree blocks
    let per_state: Vec<Vec<(usize, usize, i64)>> = (0..cube.states.len())
        .into_par_iter()
        .map(|s| state_entries(&cube, &offsets, s, swap_orientations))
        .collect::<Result<_>>()?;
    let mut differentials = Vec::with_capacity(k);
    for w in 0..k {
        let triplets: Vec<(usize, usize, i64)> = states_by_degree[w]
            .iter()
            .flat_map(|&s| per_state[s].iter().copied())
            .collect();
        differentials.push(SparseIntegerMatrix::new(dims[w + 1], dims[w], triplets));
    }
    let matrices = GradedMatrices {
        min_degree: -(n_minus as i64),
        dims,
        differentials,
    };
    Ok(ApsComplex {
        ring,
        n_minus,
        matrices,
        swapped_orientations: swap_orientations,
        cube,
        offsets,
        states_by_degree,
    })
}

fn state_entries(cube: &Cube, offsets: &[usize], s: usize, swap: bool) -> Result<Vec<(usize, usize, i64)>> {
    let k = cube.crossing_count();
    let from = &cube.states[s];
    let cf = from.num_circles();
    let mut out = Vec::new();
    for i in 0..k {
        if s >> (k - 1 - i) & 1 == 1 {
            continue;
        }
        let e = cube.edge(s, i);
        let t = e.to.index();
        let to = &cube.states[t];
        let ct = to.num_circles();
        let sign = edge_sign(&from.v, i);
        let class_f = |c: usize| from.circles[c].classification();
        let class_t = |c: usize| to.circles[c].classification();
        let bit_f = |g: usize, c: usize| g >> (cf - 1 - c) & 1 == 1;
        let put = |c: usize, b: bool| if b { 1usize << (ct - 1 - c) } else { 0 };
        let label_f = |g: usize, c: usize| CircleLabel::from_bit_swapped(class_f(c), bit_f(g, c), swap);
        for g in 0..1usize << cf {
            let mut base = 0;
            for &(pf, pt) in &e.passive {
                base |= put(pt, bit_f(g, pf));
            }
            match e.kind {
                EdgeKind::Merge => {
                    let (a, b) = (e.active_from[0], e.active_from[1]);
                    let r = e.active_to[0];
                    let labels = (label_f(g, a), label_f(g, b));
                    for (l, x) in local_merge(class_f(a), class_f(b), class_t(r), labels)? {
                        out.push((offsets[t] + (base | put(r, l.bit_swapped(swap))), offsets[s] + g, sign * x));
                    }
                }
                EdgeKind::Split => {
                    let a = e.active_from[0];
                    let (r1, r2) = (e.active_to[0], e.active_to[1]);
                    for ((l1, l2), x) in local_split(class_f(a), class_t(r1), class_t(r2), label_f(g, a))? {
                        let row = base | put(r1, l1.bit_swapped(swap)) | put(r2, l2.bit_swapped(swap));
                        out.push((offsets[t] + row, offsets[s] + g, sign * x));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{DiagramParts, VertexKind};
    use Classification::*;
    use CircleLabel::*;
    use Orientation::*;

    const P1: Classification = Essential(PunctureSet(1));

    #[test]
    fn merge_table() {
        assert_eq!(local_merge(Contractible, Contractible, Contractible, (Vplus, Vminus)).unwrap(), vec![(Vminus, 1)]);
        assert!(local_merge(Contractible, Contractible, Contractible, (Vminus, Vminus)).unwrap().is_empty());
        assert_eq!(local_merge(P1, Contractible, P1, (W(Cw), Vplus)).unwrap(), vec![(W(Cw), 1)]);
        assert!(local_merge(Contractible, P1, P1, (Vminus, W(Ccw))).unwrap().is_empty());
        assert_eq!(local_merge(P1, P1, Contractible, (W(Ccw), W(Cw))).unwrap(), vec![(Vminus, 1)]);
        assert_eq!(local_merge(P1, P1, Contractible, (W(Cw), W(Ccw))).unwrap(), vec![(Vminus, 1)]);
        assert!(local_merge(P1, P1, Contractible, (W(Cw), W(Cw))).unwrap().is_empty());
        let p2 = Essential(PunctureSet(2));
        let p12 = Essential(PunctureSet(3));
        assert!(local_merge(P1, p2, p12, (W(Ccw), W(Ccw))).unwrap().is_empty());
        assert!(matches!(
            local_merge(Contractible, Contractible, P1, (Vplus, Vplus)),
            Err(Error::UnrealizableCase(_))
        ));
    }

    #[test]
    fn split_table() {
        assert_eq!(
            local_split(Contractible, Contractible, Contractible, Vplus).unwrap(),
            vec![((Vplus, Vminus), 1), ((Vminus, Vplus), 1)]
        );
        assert_eq!(local_split(P1, Contractible, P1, W(Ccw)).unwrap(), vec![((Vminus, W(Ccw)), 1)]);
        assert_eq!(local_split(P1, P1, Contractible, W(Cw)).unwrap(), vec![((W(Cw), Vminus), 1)]);
        assert_eq!(
            local_split(Contractible, P1, P1, Vplus).unwrap(),
            vec![((W(Ccw), W(Cw)), 1), ((W(Cw), W(Ccw)), 1)]
        );
        assert!(local_split(Contractible, P1, P1, Vminus).unwrap().is_empty());
    }

    #[test]
    fn edge_signs() {
        let v = |b: &[u8]| ResolutionVector::new(b.iter().map(|&x| x == 1).collect());
        assert_eq!(edge_sign(&v(&[0, 0, 0]), 0), 1);
        assert_eq!(edge_sign(&v(&[1, 0, 1]), 1), -1);
        assert_eq!(edge_sign(&v(&[1, 1, 0]), 2), 1);
    }

    #[test]
    fn winding_grades() {
        let g = |labels: Vec<CircleLabel>| Generator {
            state: ResolutionVector::zeros(0),
            labels,
        };
        assert_eq!(winding_grade(&g(vec![Vplus, Vminus])), 0);
        assert_eq!(winding_grade(&g(vec![W(Ccw), W(Cw)])), 0);
        assert_eq!(winding_grade(&g(vec![W(Ccw), W(Ccw)])), 2);
    }

    #[test]
    fn essential_loop_complex() {
        let d = Diagram::from_parts(DiagramParts {
            punctures: vec!["p1".into()],
            edges: vec![(0, 1)],
            vertices: vec![(VertexKind::Loop, vec![0, 1])],
            outer: Some(0),
            puncture_anchor: vec![Some(1)],
            ..Default::default()
        })
        .unwrap();
        let c = assemble(&d, Ring::F2).unwrap();
        assert_eq!(c.dims(), &[2]);
        assert!(c.matrices.differentials.is_empty());
        let s = &c.cube().states[0];
        let basis = generator_basis(s);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].labels, vec![W(Ccw)]);
    }

    #[test]
    fn hopf_complex() {
        let d = Diagram::from_pd(&[[4, 1, 3, 2], [2, 3, 1, 4]]).unwrap();
        let c = assemble(&d, Ring::Integers).unwrap();
        assert_eq!(c.dims(), &[4, 4, 4]);
        assert_eq!(c.winding_violations(), 0);
        let doc = c.to_document();
        assert_eq!(doc.to_matrices().unwrap(), c.matrices);
    }
}

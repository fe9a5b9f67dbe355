//! The rank-two criterion for knots embedded in the surface, and the
//! drivers that test invariance of the homology.

use serde::{Deserialize, Serialize};

use crate::complex::assemble;
use crate::diagram::{Diagram, MoveSite};
use crate::error::Result;
use crate::linalg::{homology, HomologyReport, Ring};
use crate::resolution::Cube;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Rank one: the empty link.
    EmptyLink,
    /// Rank two, the rank of a knot isotopic into a level surface. Only the
    /// rank is computed, not the isotopy.
    EmbeddedKnotCandidate,
    NotEmbeddedKnot,
}

impl Verdict {
    pub fn from_rank(rank: usize) -> Self {
        match rank {
            0 | 1 => Verdict::EmptyLink,
            2 => Verdict::EmbeddedKnotCandidate,
            _ => Verdict::NotEmbeddedKnot,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    pub total_rank_mod2: usize,
    pub verdict: Verdict,
    pub witness: HomologyReport,
}

/// Homology of the diagram's complex over `ring`.
pub fn compute_homology(d: &Diagram, ring: Ring) -> Result<HomologyReport> {
    homology(&assemble(d, ring)?.matrices, ring)
}

pub fn detect(d: &Diagram) -> Result<DetectionVerdict> {
    let witness = compute_homology(d, Ring::F2)?;
    Ok(DetectionVerdict {
        total_rank_mod2: witness.total_rank,
        verdict: Verdict::from_rank(witness.total_rank),
        witness,
    })
}

/// Σ_v (−1)^{|v|−n₋} 2^{#circles(v)}, from circle counts alone.
pub fn state_sum_euler(d: &Diagram) -> Result<i64> {
    let cube = Cube::new(d)?;
    let n_minus = d.n_minus();
    Ok(cube
        .states
        .iter()
        .map(|s| {
            let sign = if (s.v.weight() + n_minus) % 2 == 0 { 1 } else { -1 };
            sign << s.num_circles()
        })
        .sum())
}

/// One step of an invariance chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep {
    Move(MoveSite),
    /// New crossing order: position `i` takes the old crossing `perm[i]`.
    Reorder(Vec<usize>),
}

/// Per-degree Betti numbers and torsion over the integers.
pub type Profile = Vec<(i64, usize, Vec<String>)>;

pub fn profile(report: &HomologyReport) -> Profile {
    report
        .degrees
        .iter()
        .filter(|d| d.betti > 0 || !d.torsion.is_empty())
        .map(|d| (d.degree, d.betti, d.torsion.iter().map(|t| t.to_string()).collect()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    /// Integer profile of the starting diagram and after each step.
    pub profiles: Vec<Profile>,
    /// First step whose result differs from the starting profile.
    pub first_divergence: Option<usize>,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Applies `steps` in turn and compares integer homology along the chain.
pub fn invariance_suite(d: &Diagram, steps: &[ChainStep]) -> Result<InvarianceReport> {
    let mut current = d.clone();
    let mut profiles = vec![profile(&compute_homology(&current, Ring::Integers)?)];
    let mut first_divergence = None;
    for (i, step) in steps.iter().enumerate() {
        current = match step {
            ChainStep::Move(site) => current.apply_move(*site)?,
            ChainStep::Reorder(perm) => current.reorder_crossings(perm)?,
        };
        let p = profile(&compute_homology(&current, Ring::Integers)?);
        if first_divergence.is_none() && p != profiles[0] {
            first_divergence = Some(i);
        }
        profiles.push(p);
    }
    Ok(InvarianceReport {
        profiles,
        first_divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{DiagramParts, KinkSide, VertexKind};
    use crate::surface::PlanarSurface;

    fn loops(n: usize, punctures: Vec<(&str, i64)>) -> Diagram {
        let e: Vec<(i64, i64)> = (0..n as i64).map(|i| (2 * i, 2 * i + 1)).collect();
        Diagram::from_parts(DiagramParts {
            punctures: punctures.iter().map(|p| p.0.to_string()).collect(),
            edges: e.clone(),
            vertices: e.iter().map(|&(a, b)| (VertexKind::Loop, vec![a, b])).collect(),
            outer: Some(0),
            puncture_anchor: punctures.iter().map(|p| Some(p.1)).collect(),
            region_links: (1..n as i64).map(|i| (0, 2 * i)).collect(),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn essential_loop_is_a_candidate() {
        let v = detect(&loops(1, vec![("p1", 1)])).unwrap();
        assert_eq!(v.total_rank_mod2, 2);
        assert_eq!(v.verdict, Verdict::EmbeddedKnotCandidate);
    }

    #[test]
    fn unlink_is_not_a_knot() {
        let v = detect(&loops(2, vec![])).unwrap();
        assert_eq!(v.total_rank_mod2, 4);
        assert_eq!(v.verdict, Verdict::NotEmbeddedKnot);
    }

    #[test]
    fn empty_link() {
        let d = Diagram::empty(PlanarSurface::new(vec!["p1".into()]).unwrap());
        assert_eq!(detect(&d).unwrap().verdict, Verdict::EmptyLink);
        assert_eq!(state_sum_euler(&d).unwrap(), 1);
    }

    #[test]
    fn state_sums() {
        assert_eq!(state_sum_euler(&loops(1, vec![])).unwrap(), 2);
        let hopf = Diagram::from_pd(&[[4, 1, 3, 2], [2, 3, 1, 4]]).unwrap();
        let chi = state_sum_euler(&hopf).unwrap();
        assert_eq!(chi.abs(), 4);
        assert_eq!(compute_homology(&hopf, Ring::Rationals).unwrap().euler_characteristic, chi);
    }

    #[test]
    fn invariance_examples() {
        let d = loops(1, vec![("p1", 1)]);
        let r1 = MoveSite::R1 {
            dart: 0,
            side: KinkSide::Right,
            under_first: false,
        };
        assert!(invariance_suite(&d, &[ChainStep::Move(r1)]).unwrap().holds());
        let hopf = Diagram::from_pd(&[[4, 1, 3, 2], [2, 3, 1, 4]]).unwrap();
        assert!(invariance_suite(&hopf, &[ChainStep::Reorder(vec![1, 0])]).unwrap().holds());
    }
}

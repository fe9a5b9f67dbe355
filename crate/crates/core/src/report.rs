//! The `aps-report/1` document and the property suite behind `verify`.

use serde::{Deserialize, Serialize};

use crate::complex::{assemble, assemble_unchecked};
use crate::detect::{state_sum_euler, DetectionVerdict, Verdict};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::linalg::{homology, uct_consistent, GradedMatrices, HomologyReport, Ring};
use crate::resolution::{Cube, EdgeKind};

pub const REPORT_FORMAT: &str = "aps-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSummary {
    pub crossings: usize,
    pub punctures: Vec<String>,
    pub components: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl DiagramSummary {
    pub fn of(d: &Diagram) -> Self {
        Self {
            crossings: d.crossing_count(),
            punctures: d.surface().punctures().to_vec(),
            components: d.num_components(),
            n_plus: d.n_plus(),
            n_minus: d.n_minus(),
        }
    }
}

/// Homology of one diagram over the requested rings. `total_rank` repeats
/// the mod-2 rank when it was computed, else the rank over the first ring.
/// No timings, so equal inputs give equal bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub total_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub diagram: DiagramSummary,
    pub min_degree: i64,
    pub chain_dims: Vec<usize>,
    pub homology: Vec<HomologyReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn compute_report(d: &Diagram, rings: &[Ring]) -> Result<Report> {
    assert!(!rings.is_empty(), "at least one ring");
    let c = assemble(d, rings[0])?;
    let homology = rings
        .iter()
        .map(|&r| homology(&c.matrices, r))
        .collect::<Result<Vec<_>>>()?;
    let f2 = homology.iter().find(|h| h.ring == Ring::F2);
    Ok(Report {
        format: REPORT_FORMAT.into(),
        diagram: DiagramSummary::of(d),
        min_degree: c.min_degree(),
        chain_dims: c.dims().to_vec(),
        total_rank: f2.unwrap_or(&homology[0]).total_rank,
        verdict: f2.map(|h| Verdict::from_rank(h.total_rank)),
        homology,
    })
}

pub fn detection_report(v: &DetectionVerdict, d: &Diagram) -> Report {
    Report {
        format: REPORT_FORMAT.into(),
        diagram: DiagramSummary::of(d),
        min_degree: v.witness.degrees.first().map_or(0, |x| x.degree),
        chain_dims: v.witness.degrees.iter().map(|x| x.chain_dim).collect(),
        total_rank: v.total_rank_mod2,
        verdict: Some(v.verdict),
        homology: vec![v.witness.clone()],
    }
}

/// Outcome of each property; `None` where a property does not apply
/// (a bare complex has no state sum or winding grading).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub d_squared_zero: bool,
    pub euler_identity: Option<bool>,
    pub winding_homogeneous: Option<bool>,
    pub uct_consistent: Option<bool>,
    pub rank_at_least_two: Option<bool>,
}

impl PropertyReport {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.d_squared_zero {
            out.push("d_squared_zero");
        }
        for (name, v) in [
            ("euler_identity", self.euler_identity),
            ("winding_homogeneous", self.winding_homogeneous),
            ("uct_consistent", self.uct_consistent),
            ("rank_at_least_two", self.rank_at_least_two),
        ] {
            if v == Some(false) {
                out.push(name);
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Homology over all three rings, or `None` if the complex is not one.
fn all_rings(m: &GradedMatrices) -> Result<Option<[HomologyReport; 3]>> {
    if let Err(e) = m.check() {
        return match e {
            Error::InconsistentComplex(_) => Ok(None),
            e => Err(e),
        };
    }
    let [z, q, f] = Ring::ALL.map(|r| homology(m, r));
    Ok(Some([z?, q?, f?]))
}

/// Runs the property suite on a diagram.
pub fn verify_diagram(d: &Diagram) -> Result<PropertyReport> {
    let c = assemble_unchecked(d, Ring::Integers, false)?;
    let Some([z, q, f2]) = all_rings(&c.matrices)? else {
        return Ok(PropertyReport {
            d_squared_zero: false,
            euler_identity: None,
            winding_homogeneous: Some(c.winding_violations() == 0),
            uct_consistent: None,
            rank_at_least_two: None,
        });
    };
    Ok(PropertyReport {
        d_squared_zero: true,
        euler_identity: Some(state_sum_euler(d)? == q.euler_characteristic),
        winding_homogeneous: Some(c.winding_violations() == 0),
        uct_consistent: Some(uct_consistent(&z, &q, &f2)),
        rank_at_least_two: (!d.is_empty()).then_some(f2.total_rank >= 2),
    })
}

/// Runs the applicable properties on a bare complex.
pub fn verify_complex(m: &GradedMatrices) -> Result<PropertyReport> {
    let rings = all_rings(m)?;
    Ok(PropertyReport {
        d_squared_zero: rings.is_some(),
        euler_identity: rings.as_ref().map(|[_, q, _]| q.euler_characteristic == m.chain_euler()),
        winding_homogeneous: None,
        uct_consistent: rings.as_ref().map(|[z, q, f]| uct_consistent(z, q, f)),
        rank_at_least_two: None,
    })
}

/// Sizes of the resolution cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeStats {
    pub format: String,
    pub diagram: DiagramSummary,
    pub states: usize,
    /// `circles[c]` counts the states with `c` circles.
    pub circles: Vec<usize>,
    pub essential_circles: usize,
    pub merges: usize,
    pub splits: usize,
}

pub fn cube_stats(d: &Diagram) -> Result<CubeStats> {
    let cube = Cube::new(d)?;
    let mut circles = Vec::new();
    let mut essential_circles = 0;
    for s in &cube.states {
        if circles.len() <= s.num_circles() {
            circles.resize(s.num_circles() + 1, 0);
        }
        circles[s.num_circles()] += 1;
        essential_circles += s.circles.iter().filter(|c| !c.enclosed.is_empty()).count();
    }
    let (mut merges, mut splits) = (0, 0);
    for e in cube.edges() {
        match e.kind {
            EdgeKind::Merge => merges += 1,
            EdgeKind::Split => splits += 1,
        }
    }
    Ok(CubeStats {
        format: REPORT_FORMAT.into(),
        diagram: DiagramSummary::of(d),
        states: cube.states.len(),
        circles,
        essential_circles,
        merges,
        splits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseIntegerMatrix;

    fn hopf() -> Diagram {
        Diagram::from_pd(&[[4, 1, 3, 2], [2, 3, 1, 4]]).unwrap()
    }

    #[test]
    fn hopf_report() {
        let r = compute_report(&hopf(), &Ring::ALL).unwrap();
        assert_eq!(r.total_rank, 4);
        assert_eq!(r.chain_dims, vec![4, 4, 4]);
        assert_eq!(r.verdict, Some(Verdict::NotEmbeddedKnot));
        assert_eq!(r.to_json(), compute_report(&hopf(), &Ring::ALL).unwrap().to_json());
    }

    #[test]
    fn hopf_passes() {
        let p = verify_diagram(&hopf()).unwrap();
        assert!(p.passed(), "{p:?}");
    }

    #[test]
    fn corrupted_complex_fails() {
        let one = SparseIntegerMatrix::from_dense(&[vec![1]]);
        let m = GradedMatrices {
            min_degree: 0,
            dims: vec![1, 1, 1],
            differentials: vec![one.clone(), one],
        };
        assert_eq!(verify_complex(&m).unwrap().failures(), vec!["d_squared_zero"]);
    }

    #[test]
    fn cube_counts() {
        let s = cube_stats(&hopf()).unwrap();
        assert_eq!(s.circles, vec![0, 2, 2]);
        assert_eq!((s.merges, s.splits), (2, 2));
    }
}

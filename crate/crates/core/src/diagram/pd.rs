use std::collections::BTreeMap;

use super::{Diagram, DiagramParts, VertexKind};
use crate::error::{Error, Result};

impl Diagram {
    /// Builds a disk diagram from a planar-diagram code: each crossing lists
    /// its four edge labels counter-clockwise from the incoming under-strand.
    ///
    /// Crossing `c` gets darts `4c..4c+4`. The outer face is the largest face
    /// (ties broken by minimal dart); use [`Diagram::with_outer`] to change it.
    pub fn from_pd(code: &[[u32; 4]]) -> Result<Diagram> {
        let mut ends: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
        let mut vertices = Vec::new();
        for (c, x) in code.iter().enumerate() {
            let rot: Vec<i64> = (0..4).map(|p| (4 * c + p) as i64).collect();
            for (p, &e) in x.iter().enumerate() {
                ends.entry(e).or_default().push(rot[p]);
            }
            vertices.push((VertexKind::Crossing, rot));
        }
        let mut edges = Vec::new();
        for (e, darts) in ends {
            match darts.as_slice() {
                &[a, b] => edges.push((a, b)),
                _ => {
                    return Err(Error::Schema {
                        path: format!("pd edge {e}"),
                        message: format!("edge label must occur exactly twice, found {}", darts.len()),
                    })
                }
            }
        }
        let mut parts = DiagramParts {
            edges,
            vertices,
            outer: if code.is_empty() { None } else { Some(0) },
            ..Default::default()
        };
        let d = Diagram::from_parts(parts.clone())?;
        if let Some(big) = d
            .faces()
            .iter()
            .enumerate()
            .max_by_key(|(i, f)| (f.darts.len(), std::cmp::Reverse(*i)))
        {
            parts.outer = Some(d.map().label(big.1.min_dart()));
            return Diagram::from_parts(parts);
        }
        Ok(d)
    }
}

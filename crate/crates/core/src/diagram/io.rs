use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{build_map, Diagram, DiagramParts, VertexKind};
use crate::error::{Error, Result};

pub const DIAGRAM_FORMAT: &str = "aps-diagram/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub punctures: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKindDocument {
    Crossing,
    Loop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDocument {
    pub kind: VertexKindDocument,
    pub rotation: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub under_in: Option<i64>,
}

/// The `aps-diagram/1` JSON document.
///
/// Faces are numbered by their minimal dart after tracing. `regions` lists
/// groups of faces that share one plane region; it is only needed when the
/// map is disconnected. `orientations` gives one departure dart per link
/// component; when absent each component leaves along its lowest dart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub format: String,
    pub surface: SurfaceDocument,
    pub darts: Vec<i64>,
    pub edges: Vec<[i64; 2]>,
    pub vertices: Vec<VertexDocument>,
    pub outer_face: usize,
    #[serde(default)]
    pub puncture_faces: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<Vec<i64>>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn from_serde(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        ),
        _ => Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// Parses an `aps-diagram/1` document and validates the diagram it describes.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let doc: DiagramDocument = serde_json::from_str(text).map_err(from_serde)?;
    doc.to_diagram()
}

impl DiagramDocument {
    pub fn to_diagram(&self) -> Result<Diagram> {
        if self.format != DIAGRAM_FORMAT {
            return Err(schema("format", format!("expected {DIAGRAM_FORMAT:?}, found {:?}", self.format)));
        }
        let mut darts = BTreeSet::new();
        for (i, &d) in self.darts.iter().enumerate() {
            if !darts.insert(d) {
                return Err(schema(format!("darts[{i}]"), format!("dart {d} listed twice")));
            }
        }
        let mut in_edge = BTreeSet::new();
        for (i, &[a, b]) in self.edges.iter().enumerate() {
            for (j, d) in [a, b].into_iter().enumerate() {
                if !darts.contains(&d) {
                    return Err(schema(format!("edges[{i}][{j}]"), format!("unknown dart {d}")));
                }
                if !in_edge.insert(d) {
                    return Err(schema(format!("edges[{i}][{j}]"), format!("dart {d} referenced twice in edges")));
                }
            }
        }
        let mut in_rotation = BTreeSet::new();
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            for (j, &d) in v.rotation.iter().enumerate() {
                if !darts.contains(&d) {
                    return Err(schema(format!("vertices[{i}].rotation[{j}]"), format!("unknown dart {d}")));
                }
                if !in_rotation.insert(d) {
                    return Err(schema(
                        format!("vertices[{i}].rotation[{j}]"),
                        format!("dart {d} referenced twice in rotations"),
                    ));
                }
            }
            let mut rotation = v.rotation.clone();
            let kind = match v.kind {
                VertexKindDocument::Crossing => {
                    let u = v
                        .under_in
                        .ok_or_else(|| schema(format!("vertices[{i}].under_in"), "missing for a crossing"))?;
                    let pos = rotation
                        .iter()
                        .position(|&d| d == u)
                        .ok_or_else(|| schema(format!("vertices[{i}].under_in"), "not in the rotation"))?;
                    rotation.rotate_left(pos);
                    VertexKind::Crossing
                }
                VertexKindDocument::Loop => {
                    if v.under_in.is_some() {
                        return Err(schema(format!("vertices[{i}].under_in"), "only crossings carry under_in"));
                    }
                    VertexKind::Loop
                }
            };
            vertices.push((kind, rotation));
        }
        let mut violations = Vec::new();
        for &d in &darts {
            if !in_edge.contains(&d) {
                violations.push(format!("fixed-point dart d{d}"));
            }
            if !in_rotation.contains(&d) {
                violations.push(format!("dart d{d} belongs to no vertex"));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidDiagram(violations));
        }

        let mut parts = DiagramParts {
            punctures: self.surface.punctures.clone(),
            edges: self.edges.iter().map(|&[a, b]| (a, b)).collect(),
            vertices,
            orientation: self.orientations.clone(),
            ..Default::default()
        };
        let (map, _) = build_map(&parts)?;
        let violations: Vec<String> = map.validate().iter().map(|v| v.to_string()).collect();
        if !violations.is_empty() {
            return Err(Error::InvalidDiagram(violations));
        }
        let faces = map.trace_faces()?;
        let face_dart = |f: usize, path: String| -> Result<Option<i64>> {
            if faces.is_empty() && f == 0 {
                Ok(None)
            } else if f < faces.len() {
                Ok(Some(map.label(faces[f].min_dart())))
            } else {
                Err(Error::InvalidDiagram(vec![format!(
                    "{path}: face {f} does not exist (the map has {} faces)",
                    faces.len()
                )]))
            }
        };
        parts.outer = face_dart(self.outer_face, "outer_face".into())?;
        for p in self.puncture_faces.keys() {
            if !parts.punctures.contains(p) {
                return Err(schema(format!("puncture_faces.{p}"), "unknown puncture"));
            }
        }
        for p in &self.surface.punctures {
            let f = *self
                .puncture_faces
                .get(p)
                .ok_or_else(|| schema(format!("puncture_faces.{p}"), "missing placement"))?;
            parts.puncture_anchor.push(face_dart(f, format!("puncture_faces.{p}"))?);
        }
        for (i, region) in self.regions.iter().enumerate() {
            let anchors: Vec<Option<i64>> = region
                .iter()
                .enumerate()
                .map(|(j, &f)| face_dart(f, format!("regions[{i}][{j}]")))
                .collect::<Result<_>>()?;
            for w in anchors.windows(2) {
                if let (Some(a), Some(b)) = (w[0], w[1]) {
                    parts.region_links.push((a, b));
                }
            }
        }
        Diagram::from_parts(parts)
    }
}

impl Diagram {
    pub fn to_document(&self) -> DiagramDocument {
        let map = self.map();
        let l = |d: usize| map.label(d);
        let vertices = (0..map.num_vertices())
            .map(|v| {
                let rotation: Vec<i64> = map.rotation(v).iter().map(|&d| l(d)).collect();
                match self.vertex_kind(v) {
                    VertexKind::Crossing => VertexDocument {
                        kind: VertexKindDocument::Crossing,
                        under_in: Some(rotation[0]),
                        rotation,
                    },
                    VertexKind::Loop => VertexDocument {
                        kind: VertexKindDocument::Loop,
                        rotation,
                        under_in: None,
                    },
                }
            })
            .collect();
        let puncture_faces = self
            .surface()
            .punctures()
            .iter()
            .enumerate()
            .map(|(p, name)| (name.clone(), self.puncture_face(p).unwrap_or(0)))
            .collect();
        let mut by_region: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in 0..self.faces().len() {
            by_region.entry(self.region_of_face(f)).or_default().push(f);
        }
        let mut regions: Vec<Vec<usize>> = by_region.into_values().filter(|r| r.len() > 1).collect();
        regions.sort();
        DiagramDocument {
            format: DIAGRAM_FORMAT.into(),
            surface: SurfaceDocument {
                punctures: self.surface().punctures().to_vec(),
            },
            darts: map.labels().to_vec(),
            edges: map.edges().map(|(a, b)| [l(a), l(b)]).collect(),
            vertices,
            outer_face: self.outer_face().unwrap_or(0),
            puncture_faces,
            regions,
            orientations: self
                .has_explicit_orientation()
                .then(|| self.orientation().iter().map(|&d| l(d)).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("diagram documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Diagram> {
        parse_diagram(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANNULUS_LOOP: &str = r#"{
        "format": "aps-diagram/1",
        "surface": {"punctures": ["p1"]},
        "darts": [0, 1],
        "edges": [[0, 1]],
        "vertices": [{"kind": "loop", "rotation": [0, 1]}],
        "outer_face": 0,
        "puncture_faces": {"p1": 1}
    }"#;

    #[test]
    fn parses_essential_loop() {
        let d = parse_diagram(ANNULUS_LOOP).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.num_components(), 1);
        assert_eq!(d.puncture_face(0), Some(1));
    }

    #[test]
    fn dart_twice_in_rotations_is_schema_error() {
        let text = ANNULUS_LOOP.replace(r#""rotation": [0, 1]"#, r#""rotation": [0, 0]"#);
        assert!(matches!(parse_diagram(&text), Err(Error::Schema { .. })));
    }

    #[test]
    fn missing_field_is_schema_error_and_garbage_is_parse_error() {
        let text = ANNULUS_LOOP.replace(r#""outer_face": 0,"#, "");
        assert!(matches!(parse_diagram(&text), Err(Error::Schema { .. })));
        assert!(matches!(parse_diagram("{ not json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn out_of_range_face_is_a_violation() {
        let text = ANNULUS_LOOP.replace(r#"{"p1": 1}"#, r#"{"p1": 5}"#);
        assert!(matches!(parse_diagram(&text), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn round_trip_is_lossless() {
        let d = parse_diagram(ANNULUS_LOOP).unwrap();
        let again = parse_diagram(&d.to_json()).unwrap();
        assert_eq!(d, again);
        assert!(again.validate().is_empty());
    }
}

//! JSON forms of surfaces and triangulations.
//!
//! ```json
//! {"surface": {"kind": "annulus", "p": 1, "q": 1},
//!  "arcs": [{"outer": 1, "inner": 1, "winding": 1}, "O1-I1@0"]}
//! ```
//!
//! Disk arcs are `[a, b]`; peripheral arcs are
//! `{"boundary": "outer", "start": 1, "span": 2}`. Any arc may also be
//! written in the compact text syntax. A missing `arcs` field means the
//! standard triangulation. Generic surfaces list their triangles by side
//! labels: `{"kind": "generic", "triangles": [["a","b","c"], ...],
//! "boundary": ["b", ...]}`.

use serde::{Deserialize, Serialize};

use super::{Boundary, Curve, GenericTriangulation, Surface, SurfaceError, Triangulation};
use crate::quiver::Quiver;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SurfaceSpec {
    Disk { m: u32 },
    Annulus { p: u32, q: u32 },
    Generic { triangles: Vec<[String; 3]>, boundary: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArcJson {
    Chord([u32; 2]),
    Bridge { outer: u32, inner: u32, winding: i64 },
    Peripheral { boundary: Boundary, start: u32, span: u64 },
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub surface: SurfaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<ArcJson>>,
}

impl ArcJson {
    pub fn to_curve(&self) -> Result<Curve, SurfaceError> {
        Ok(match self {
            ArcJson::Chord([a, b]) => Curve::Chord { a: *a.min(b), b: *a.max(b) },
            ArcJson::Bridge { outer, inner, winding } => Curve::Bridge { outer: *outer, inner: *inner, winding: *winding },
            ArcJson::Peripheral { boundary, start, span } => {
                Curve::Peripheral { boundary: *boundary, start: *start, span: *span }
            }
            ArcJson::Text(t) => t.parse()?,
        })
    }
}

impl From<&Curve> for ArcJson {
    fn from(c: &Curve) -> ArcJson {
        match *c {
            Curve::Chord { a, b } => ArcJson::Chord([a, b]),
            Curve::Bridge { outer, inner, winding } => ArcJson::Bridge { outer, inner, winding },
            Curve::Peripheral { boundary, start, span } => ArcJson::Peripheral { boundary, start, span },
            other => ArcJson::Text(other.to_string()),
        }
    }
}

/// A triangulation with or without a geometric model behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceModel {
    Geometric(Triangulation),
    Generic(GenericTriangulation),
}

impl SurfaceModel {
    pub fn quiver(&self) -> Quiver {
        match self {
            SurfaceModel::Geometric(t) => t.quiver(),
            SurfaceModel::Generic(g) => g.quiver(),
        }
    }

    pub fn arc_labels(&self) -> Vec<String> {
        match self {
            SurfaceModel::Geometric(t) => t.arcs().iter().map(Curve::to_string).collect(),
            SurfaceModel::Generic(g) => g.arcs().to_vec(),
        }
    }

    pub fn flip(&self, i: usize) -> Result<SurfaceModel, SurfaceError> {
        Ok(match self {
            SurfaceModel::Geometric(t) => SurfaceModel::Geometric(t.flip(i)?),
            SurfaceModel::Generic(g) => SurfaceModel::Generic(g.flip(i)?),
        })
    }

    /// Index of an arc given by its label or compact syntax.
    pub fn arc_index(&self, label: &str) -> Result<usize, SurfaceError> {
        let missing = || SurfaceError::ArcNotInTriangulation(label.to_string());
        match self {
            SurfaceModel::Geometric(t) => t.index_of(&label.parse()?).ok_or_else(missing),
            SurfaceModel::Generic(g) => g.arcs().iter().position(|a| a == label).ok_or_else(missing),
        }
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson::from(self)
    }
}

impl TryFrom<TriangulationJson> for SurfaceModel {
    type Error = SurfaceError;

    fn try_from(j: TriangulationJson) -> Result<SurfaceModel, SurfaceError> {
        let surface = match j.surface {
            SurfaceSpec::Generic { triangles, boundary } => {
                return Ok(SurfaceModel::Generic(GenericTriangulation::new(triangles, boundary)?))
            }
            SurfaceSpec::Disk { m } => Surface::disk(m)?,
            SurfaceSpec::Annulus { p, q } => Surface::annulus(p, q)?,
        };
        let t = match j.arcs {
            None => Triangulation::standard(surface),
            Some(arcs) => Triangulation::new(surface, arcs.iter().map(ArcJson::to_curve).collect::<Result<_, _>>()?)?,
        };
        Ok(SurfaceModel::Geometric(t))
    }
}

impl From<&SurfaceModel> for TriangulationJson {
    fn from(m: &SurfaceModel) -> TriangulationJson {
        match m {
            SurfaceModel::Geometric(t) => TriangulationJson {
                surface: match t.surface() {
                    Surface::Disk { m } => SurfaceSpec::Disk { m },
                    Surface::Annulus { p, q } => SurfaceSpec::Annulus { p, q },
                },
                arcs: Some(t.arcs().iter().map(ArcJson::from).collect()),
            },
            SurfaceModel::Generic(g) => TriangulationJson {
                surface: SurfaceSpec::Generic { triangles: g.triangles().to_vec(), boundary: g.boundary().to_vec() },
                arcs: None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(text: &str) -> SurfaceModel {
        serde_json::from_str::<TriangulationJson>(text).unwrap().try_into().unwrap()
    }

    #[test]
    fn parses_each_form() {
        let disk = model(r#"{"surface": {"kind": "disk", "m": 5}, "arcs": [[3, 1], "1-4"]}"#);
        assert_eq!(disk.quiver(), crate::quiver::presets::linear_a(2));
        let annulus = model(
            r#"{"surface": {"kind": "annulus", "p": 1, "q": 1},
                "arcs": [{"outer": 1, "inner": 1, "winding": 1}, "O1-I1@0"]}"#,
        );
        assert_eq!(annulus.quiver(), crate::quiver::presets::kronecker());
        let standard = model(r#"{"surface": {"kind": "annulus", "p": 2, "q": 1}}"#);
        assert_eq!(standard.arc_labels().len(), 3);
        let generic = model(
            r#"{"surface": {"kind": "generic", "triangles": [["u","v","o"],["v","i","u"]], "boundary": ["o","i"]}}"#,
        );
        assert_eq!(generic.arc_labels(), ["u", "v"]);
        assert_eq!(generic.arc_index("v").unwrap(), 1);
    }

    #[test]
    fn round_trip() {
        let m = model(r#"{"surface": {"kind": "annulus", "p": 2, "q": 2}}"#);
        let flipped = m.flip(1).unwrap();
        let text = serde_json::to_string(&flipped.to_json()).unwrap();
        assert_eq!(model(&text), flipped);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = serde_json::from_str::<TriangulationJson>(r#"{"surface": {"kind": "disk", "m": 5}, "arcs": [[1, 3], [2, 4]]}"#)
            .unwrap();
        assert!(SurfaceModel::try_from(bad).is_err());
        assert!(serde_json::from_str::<TriangulationJson>(r#"{"surface": {"kind": "torus"}}"#).is_err());
    }
}

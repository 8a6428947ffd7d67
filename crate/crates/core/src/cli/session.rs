//! Interactive state: a seed, optionally mirrored by a triangulation, with
//! an undo history. Vertices and arcs are numbered from 1 at this level.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::quiver::presets::{kronecker, linear_a, markov};
use crate::quiver::{Quiver, QuiverJson};
use crate::seeds::{explore_from, Limits, Seed, SeedError, SeedJson};
use crate::surface::{
    resolve_multicurve, ArcAlgebra, Curve, Multicurve, Surface, SurfaceError, SurfaceModel, Triangulation,
    TriangulationJson,
};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("nothing to undo")]
    EmptyHistory,
    #[error("this session has no {0}")]
    NoSurface(&'static str),
    #[error("flip and mutation disagree after {0}")]
    LockStep(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// How a session starts: a preset name, a triangulation, or a seed (a
/// quiver with an optional cluster). These are the contents of the files
/// accepted by `--quiver` and `--surface`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Preset { preset: String },
    Surface(TriangulationJson),
    Seed(SeedJson),
}

pub const PRESETS: &[&str] =
    &["A1", "A2", "A3", "A4", "kronecker", "markov", "square", "pentagon", "hexagon", "heptagon", "annulus11", "annulus21"];

fn preset(name: &str) -> Result<StartSpec, SessionError> {
    let quiver = |q: &Quiver| StartSpec::Seed(SeedJson { quiver: QuiverJson::from(q), cluster: None });
    let surface = |t: Triangulation| StartSpec::Surface(SurfaceModel::Geometric(t).to_json());
    let disk = |m| Surface::disk(m).map(Triangulation::standard);
    let annulus = |p, q| Surface::annulus(p, q).map(Triangulation::standard);
    Ok(match name.to_ascii_lowercase().as_str() {
        "a1" => quiver(&linear_a(1)),
        "a2" => quiver(&linear_a(2)),
        "a3" => quiver(&linear_a(3)),
        "a4" => quiver(&linear_a(4)),
        "kronecker" => quiver(&kronecker()),
        "markov" => quiver(&markov()),
        "square" => surface(disk(4)?),
        "pentagon" => surface(disk(5)?),
        "hexagon" => surface(disk(6)?),
        "heptagon" => surface(disk(7)?),
        "annulus11" => surface(annulus(1, 1)?),
        "annulus21" => surface(annulus(2, 1)?),
        _ => return Err(SessionError::UnknownPreset(name.to_string())),
    })
}

impl StartSpec {
    /// Resolves presets and builds the starting seed and surface.
    pub fn build(&self) -> Result<(Seed, Option<SurfaceModel>), SessionError> {
        match self {
            StartSpec::Preset { preset: name } => preset(name)?.build(),
            StartSpec::Seed(j) => Ok((Seed::try_from(j)?, None)),
            StartSpec::Surface(j) => {
                let model = SurfaceModel::try_from(j.clone())?;
                Ok((Seed::initial(&model.quiver()), Some(model)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Action {
    Mutate { vertex: usize },
    Flip { arc: String },
}

/// Enough to rebuild a session exactly: where it started and what was done.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub start: StartSpec,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub history: Vec<Action>,
}

#[derive(Clone, Debug)]
pub struct Session {
    start: StartSpec,
    limits: Limits,
    seed: Seed,
    surface: Option<SurfaceModel>,
    history: Vec<Action>,
    previous: Vec<(Seed, Option<SurfaceModel>)>,
}

impl Session {
    pub fn new(start: StartSpec, limits: Limits) -> Result<Session, SessionError> {
        let (seed, surface) = start.build()?;
        Ok(Session { start, limits, seed, surface, history: Vec::new(), previous: Vec::new() })
    }

    pub fn from_snapshot(s: &Snapshot) -> Result<Session, SessionError> {
        let mut session = Session::new(s.start.clone(), s.limits)?;
        for a in &s.history {
            session.apply(a)?;
        }
        Ok(session)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { start: self.start.clone(), limits: self.limits, history: self.history.clone() }
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn surface(&self) -> Option<&SurfaceModel> {
        self.surface.as_ref()
    }

    pub fn history(&self) -> &[Action] {
        &self.history
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn apply(&mut self, a: &Action) -> Result<(), SessionError> {
        match a {
            Action::Mutate { vertex } => self.mutate(*vertex),
            Action::Flip { arc } => self.flip(arc),
        }
    }

    fn step(&mut self, index: usize, action: Action) -> Result<(), SessionError> {
        let seed = self.seed.mutate(index)?;
        let surface = self.surface.as_ref().map(|m| m.flip(index)).transpose()?;
        if let Some(m) = &surface {
            if m.quiver() != *seed.quiver() {
                return Err(SessionError::LockStep(format!("{action:?}")));
            }
        }
        let old = (std::mem::replace(&mut self.seed, seed), std::mem::replace(&mut self.surface, surface));
        self.previous.push(old);
        self.history.push(action);
        Ok(())
    }

    /// Mutates at `vertex` (1-based), flipping the matching arc if there is
    /// a triangulation.
    pub fn mutate(&mut self, vertex: usize) -> Result<(), SessionError> {
        let n = self.seed.rank();
        if vertex == 0 || vertex > n {
            return Err(SessionError::VertexOutOfRange { vertex, n });
        }
        self.step(vertex - 1, Action::Mutate { vertex })
    }

    /// Flips the arc with this label (or compact syntax), mutating the seed
    /// at its position.
    pub fn flip(&mut self, arc: &str) -> Result<(), SessionError> {
        let model = self.surface.as_ref().ok_or(SessionError::NoSurface("triangulation"))?;
        let i = model.arc_index(arc)?;
        self.step(i, Action::Flip { arc: arc.to_string() })
    }

    pub fn undo(&mut self) -> Result<(), SessionError> {
        let (seed, surface) = self.previous.pop().ok_or(SessionError::EmptyHistory)?;
        self.history.pop();
        self.seed = seed;
        self.surface = surface;
        Ok(())
    }

    pub fn state(&self) -> Value {
        let mut v = json!({
            "rank": self.seed.rank(),
            "quiver": QuiverJson::from(self.seed.quiver()),
            "cluster": self.seed.cluster().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "history": self.history,
            "limits": self.limits,
        });
        if let Some(m) = &self.surface {
            v["surface"] = serde_json::to_value(m.to_json()).expect("triangulation serializes");
            v["arcs"] = json!(m.arc_labels());
        }
        v
    }

    /// The current cluster with, where available, the arc of each variable.
    pub fn variables(&self) -> Value {
        let labels = self.surface.as_ref().map(SurfaceModel::arc_labels);
        let items: Vec<Value> = self
            .seed
            .cluster()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut item = json!({
                    "vertex": i + 1,
                    "variable": x.to_string(),
                    "terms": x.num_terms(),
                    "positive": x.all_coefficients_positive(),
                });
                if let Some(l) = &labels {
                    item["arc"] = json!(l[i]);
                }
                item
            })
            .collect();
        json!({ "variables": items })
    }

    /// Seeds within `radius` mutations of the current one.
    pub fn exchange_graph(&self, radius: usize) -> Result<Value, SessionError> {
        let limits = Limits { max_depth: radius.min(self.limits.max_depth), ..self.limits };
        let g = explore_from(&self.seed, limits)?;
        let mut v = g.to_json();
        v["radius"] = json!(radius);
        Ok(v)
    }

    /// Smoothing of the first crossing of two arcs, with both sides
    /// evaluated and the full resolution into crossing-free multicurves.
    pub fn skein(&self, arc1: &str, arc2: &str) -> Result<Value, SessionError> {
        let Some(SurfaceModel::Geometric(_)) = &self.surface else {
            return Err(SessionError::NoSurface("disk or annulus triangulation"));
        };
        let Ok((_, Some(SurfaceModel::Geometric(initial)))) = self.start.build() else {
            return Err(SessionError::NoSurface("disk or annulus triangulation"));
        };
        let s = initial.surface();
        let (c1, c2): (Curve, Curve) = (arc1.parse()?, arc2.parse()?);
        let mut alg = ArcAlgebra::new(initial);
        let check = alg.skein_identity_check(&c1, &c2)?;
        let leaves = resolve_multicurve(&s, &Multicurve::new(vec![c1, c2]))?;
        Ok(json!({
            "arc1": c1,
            "arc2": c2,
            "crossings": s.arcs_cross(&c1, &c2)?,
            "smoothing": check,
            "resolution": leaves,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(name: &str) -> Session {
        Session::new(StartSpec::Preset { preset: name.into() }, Limits::default()).unwrap()
    }

    #[test]
    fn a2_mutation_and_undo() {
        let mut s = session("A2");
        let before = s.state();
        s.mutate(1).unwrap();
        assert_eq!(s.state()["cluster"], json!(["x1^-1 + x1^-1*x2", "x2"]));
        s.mutate(1).unwrap();
        assert_eq!(s.state()["cluster"], before["cluster"]);
        assert_eq!(s.history().len(), 2);
        s.undo().unwrap();
        s.undo().unwrap();
        assert_eq!(s.state(), before);
        assert!(matches!(s.undo(), Err(SessionError::EmptyHistory)));
        assert!(matches!(s.mutate(3), Err(SessionError::VertexOutOfRange { .. })));
    }

    #[test]
    fn hexagon_lock_step() {
        let mut s = session("hexagon");
        s.mutate(2).unwrap();
        let t = s.surface().unwrap();
        assert_eq!(t.quiver(), *s.seed().quiver());
        assert_eq!(t.arc_labels(), ["1-3", "3-5", "1-5"]);
        s.flip("3-5").unwrap();
        assert_eq!(s.surface().unwrap().arc_labels()[1], "1-4");
    }

    #[test]
    fn snapshot_replays_exactly() {
        let mut s = session("annulus11");
        for v in [1, 2, 1, 1, 2] {
            s.mutate(v).unwrap();
        }
        s.undo().unwrap();
        let text = serde_json::to_string(&s.snapshot()).unwrap();
        let back = Session::from_snapshot(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.state(), s.state());
    }

    #[test]
    fn skein_preview() {
        let s = session("hexagon");
        let v = s.skein("1-3", "2-6").unwrap();
        assert_eq!(v["crossings"], 1);
        assert_eq!(v["smoothing"]["signs"], json!([1, 1]));
        assert!(session("A2").skein("1-3", "2-4").is_err());
    }

    #[test]
    fn start_specs_parse() {
        let q: StartSpec = serde_json::from_str(r#"{"n": 2, "arrows": [[1, 2, 1]]}"#).unwrap();
        assert!(matches!(q, StartSpec::Seed(_)));
        let t: StartSpec = serde_json::from_str(r#"{"surface": {"kind": "disk", "m": 5}}"#).unwrap();
        assert!(matches!(t, StartSpec::Surface(_)));
        for name in PRESETS {
            Session::new(StartSpec::Preset { preset: (*name).into() }, Limits::default()).unwrap();
        }
        assert!(Session::new(StartSpec::Preset { preset: "torus".into() }, Limits::default()).is_err());
    }
}

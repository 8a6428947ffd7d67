//! Unpunctured marked surfaces: disks and annuli with a geometric curve
//! model, plus purely combinatorial triangulations of other surfaces.
//!
//! Curves on the annulus are handled in its universal cover, a horizontal
//! strip. With `p` outer and `q` inner marked points, the lifts of outer
//! points are `O_t` at abscissa `t*q` on the bottom edge and the lifts of
//! inner points are `I_s` at abscissa `s*p` on the top edge, so the deck
//! transformation shifts abscissae by `p*q`, `t` by `p` and `s` by `q`.
//! Increasing abscissa is the counterclockwise direction on the annulus.
//! An arc is determined up to isotopy by the endpoints of one lift, and two
//! lifts cross exactly when their endpoints interleave along the boundary
//! of the strip.

mod algebra;
mod basis;
mod generic;
mod json;
mod skein;
mod triangulation;

pub use algebra::{ArcAlgebra, SkeinCheck, DEFAULT_CONTRACTIBLE_LOOP, DEFAULT_FLIP_BUDGET};
pub use basis::{enumerate_basis, internal_arcs, expand_in_basis, BasisElement, BasisExpansion, ExpansionTerm, Flavor};
pub use generic::GenericTriangulation;
pub use json::{ArcJson, SurfaceModel, SurfaceSpec, TriangulationJson};
pub use skein::{resolve_multicurve, smooth_crossing, Crossing, Multicurve};
pub use triangulation::{enumerate_disk_triangulations, Side, Triangle, Triangulation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seeds::SeedError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("curve {0} does not belong to this surface")]
    SurfaceMismatch(String),
    #[error("{0} is not an internal arc")]
    NotAnArc(String),
    #[error("arcs {0} and {1} cross")]
    Crossing(String, String),
    #[error("arc {0} appears twice")]
    DuplicateArc(String),
    #[error("a triangulation of this surface has {expected} arcs, got {got}")]
    WrongArcCount { expected: usize, got: usize },
    #[error("arc {0} is not in the triangulation")]
    ArcNotInTriangulation(String),
    #[error("the curves do not cross")]
    NoSuchCrossing,
    #[error("no flip sequence within budget reaches {0}")]
    SearchLimitExceeded(String),
    #[error("the polynomial is not in the span of the truncated basis")]
    NotInSpan,
    #[error("the truncated basis is linearly dependent")]
    AmbiguousExpansion,
    #[error("triangulation is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Outer,
    Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    /// Disk with `m` marked points labeled `1..=m` counterclockwise.
    Disk { m: u32 },
    /// Annulus with `p` outer and `q` inner marked points, each labeled from
    /// 1 counterclockwise.
    Annulus { p: u32, q: u32 },
}

/// Homotopy class of a curve, in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    /// Chord of a disk with `a < b`; adjacent endpoints give a boundary segment.
    Chord { a: u32, b: u32 },
    /// Arc joining the two boundaries of an annulus. Its lift starting at
    /// `O_{outer-1}` ends at `I_{inner-1 + q*winding}`.
    Bridge { outer: u32, inner: u32, winding: i64 },
    /// Arc with both ends on one boundary of an annulus, lifting to the
    /// segment from the `start`-th point to the point `span` steps further
    /// counterclockwise. Span 0 is contractible, span 1 a boundary segment,
    /// and a span longer than the number of points on that boundary
    /// self-intersects.
    Peripheral { boundary: Boundary, start: u32, span: u64 },
    /// The `m`-fold concatenation of the essential loop of an annulus.
    Bracelet(u32),
    ContractibleLoop,
}

/// A marked point of the strip covering an annulus, or a marked point of a
/// disk (always `Outer`, with its 1-based label).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Outer(i64),
    Inner(i64),
}

pub(crate) fn as_text<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

impl Surface {
    pub fn disk(m: u32) -> Result<Surface, SurfaceError> {
        if m < 4 {
            return Err(SurfaceError::InvalidSurface(format!("a disk needs at least 4 marked points, got {m}")));
        }
        Ok(Surface::Disk { m })
    }

    pub fn annulus(p: u32, q: u32) -> Result<Surface, SurfaceError> {
        if p == 0 || q == 0 {
            return Err(SurfaceError::InvalidSurface("each boundary of an annulus needs a marked point".into()));
        }
        Ok(Surface::Annulus { p, q })
    }

    /// Number of arcs in a triangulation.
    pub fn rank(&self) -> usize {
        match *self {
            Surface::Disk { m } => m as usize - 3,
            Surface::Annulus { p, q } => (p + q) as usize,
        }
    }

    pub(crate) fn period(&self, b: Boundary) -> i64 {
        match (*self, b) {
            (Surface::Annulus { p, .. }, Boundary::Outer) => p as i64,
            (Surface::Annulus { q, .. }, Boundary::Inner) => q as i64,
            (Surface::Disk { m }, _) => m as i64,
        }
    }

    /// Checks that `c` is a curve of this surface in normal form.
    pub fn check_curve(&self, c: &Curve) -> Result<(), SurfaceError> {
        let ok = match (*self, *c) {
            (Surface::Disk { m }, Curve::Chord { a, b }) => 1 <= a && a < b && b <= m,
            (Surface::Annulus { p, q }, Curve::Bridge { outer, inner, .. }) => {
                (1..=p).contains(&outer) && (1..=q).contains(&inner)
            }
            (Surface::Annulus { .. }, Curve::Peripheral { boundary, start, .. }) => {
                start >= 1 && start as i64 <= self.period(boundary)
            }
            (Surface::Annulus { .. }, Curve::Bracelet(m)) => m >= 1,
            (_, Curve::ContractibleLoop) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(SurfaceError::SurfaceMismatch(c.to_string()))
        }
    }

    pub fn is_boundary(&self, c: &Curve) -> bool {
        match (*self, *c) {
            (Surface::Disk { m }, Curve::Chord { a, b }) => b - a == 1 || (a == 1 && b == m),
            (_, Curve::Peripheral { span, .. }) => span == 1,
            _ => false,
        }
    }

    pub fn is_contractible_arc(&self, c: &Curve) -> bool {
        matches!(c, Curve::Peripheral { span: 0, .. })
    }

    pub fn is_closed(c: &Curve) -> bool {
        matches!(c, Curve::Bracelet(_) | Curve::ContractibleLoop)
    }

    /// True for non-self-intersecting arcs that are neither boundary
    /// segments nor contractible.
    pub fn is_internal_arc(&self, c: &Curve) -> bool {
        match *c {
            Curve::Chord { .. } | Curve::Bridge { .. } => self.check_curve(c).is_ok() && !self.is_boundary(c),
            Curve::Peripheral { boundary, span, .. } => {
                self.check_curve(c).is_ok() && span >= 2 && span as i64 <= self.period(boundary)
            }
            _ => false,
        }
    }

    /// Boundary segments, in a fixed order.
    pub fn boundary_segments(&self) -> Vec<Curve> {
        match *self {
            Surface::Disk { m } => (1..=m)
                .map(|a| if a == m { Curve::Chord { a: 1, b: m } } else { Curve::Chord { a, b: a + 1 } })
                .collect(),
            Surface::Annulus { p, q } => (1..=p)
                .map(|s| Curve::Peripheral { boundary: Boundary::Outer, start: s, span: 1 })
                .chain((1..=q).map(|s| Curve::Peripheral { boundary: Boundary::Inner, start: s, span: 1 }))
                .collect(),
        }
    }

    /// Endpoints of the canonical lift of an arc.
    pub fn lift(&self, c: &Curve) -> Option<(Point, Point)> {
        match (*self, *c) {
            (Surface::Disk { .. }, Curve::Chord { a, b }) => Some((Point::Outer(a as i64), Point::Outer(b as i64))),
            (Surface::Annulus { q, .. }, Curve::Bridge { outer, inner, winding }) => Some((
                Point::Outer(outer as i64 - 1),
                Point::Inner(inner as i64 - 1 + q as i64 * winding),
            )),
            (Surface::Annulus { .. }, Curve::Peripheral { boundary, start, span }) => {
                let a = start as i64 - 1;
                let b = a + span as i64;
                Some(match boundary {
                    Boundary::Outer => (Point::Outer(a), Point::Outer(b)),
                    Boundary::Inner => (Point::Inner(a), Point::Inner(b)),
                })
            }
            _ => None,
        }
    }

    /// Image of a point of the cover under `k` deck transformations.
    pub fn deck(&self, pt: Point, k: i64) -> Point {
        match *self {
            Surface::Disk { .. } => pt,
            Surface::Annulus { p, q } => match pt {
                Point::Outer(t) => Point::Outer(t + k * p as i64),
                Point::Inner(s) => Point::Inner(s + k * q as i64),
            },
        }
    }

    /// `k` with `deck(from, k) == to`, if the two points lie over the same
    /// marked point.
    pub fn deck_offset(&self, from: Point, to: Point) -> Option<i64> {
        match *self {
            Surface::Disk { .. } => (from == to).then_some(0),
            Surface::Annulus { p, q } => {
                let (a, b, n) = match (from, to) {
                    (Point::Outer(a), Point::Outer(b)) => (a, b, p as i64),
                    (Point::Inner(a), Point::Inner(b)) => (a, b, q as i64),
                    _ => return None,
                };
                ((b - a) % n == 0).then_some((b - a) / n)
            }
        }
    }

    /// Position along the boundary circle of the cover, increasing
    /// counterclockwise: bottom edge left to right, then top edge right to left.
    pub fn position(&self, pt: Point) -> (u8, i64) {
        match (*self, pt) {
            (Surface::Disk { .. }, Point::Outer(a)) => (0, a),
            (Surface::Annulus { q, .. }, Point::Outer(t)) => (0, t * q as i64),
            (Surface::Annulus { p, .. }, Point::Inner(s)) => (1, -s * p as i64),
            (Surface::Disk { .. }, Point::Inner(_)) => unreachable!("disks have no inner boundary"),
        }
    }

    fn abscissa(&self, pt: Point) -> i64 {
        match (*self, pt) {
            (Surface::Annulus { q, .. }, Point::Outer(t)) => t * q as i64,
            (Surface::Annulus { p, .. }, Point::Inner(s)) => s * p as i64,
            (Surface::Disk { .. }, Point::Outer(a)) => a,
            (Surface::Disk { .. }, Point::Inner(_)) => unreachable!("disks have no inner boundary"),
        }
    }

    /// True when `a, b, c` are in counterclockwise order along the boundary.
    pub fn ccw(&self, a: Point, b: Point, c: Point) -> bool {
        let (a, b, c) = (self.position(a), self.position(b), self.position(c));
        (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
    }

    /// Normal form of the curve whose lift joins `a` and `b`.
    pub fn curve_between(&self, a: Point, b: Point) -> Curve {
        match *self {
            Surface::Disk { .. } => {
                let (Point::Outer(x), Point::Outer(y)) = (a, b) else {
                    unreachable!("disks have no inner boundary")
                };
                Curve::Chord { a: x.min(y) as u32, b: x.max(y) as u32 }
            }
            Surface::Annulus { p, q } => {
                let (p, q) = (p as i64, q as i64);
                match (a, b) {
                    (Point::Outer(t), Point::Inner(s)) | (Point::Inner(s), Point::Outer(t)) => {
                        let k = div_floor(t, p);
                        let s = s - k * q;
                        Curve::Bridge {
                            outer: (t - k * p + 1) as u32,
                            inner: (s.rem_euclid(q) + 1) as u32,
                            winding: div_floor(s, q),
                        }
                    }
                    (Point::Outer(x), Point::Outer(y)) => peripheral(Boundary::Outer, x, y, p),
                    (Point::Inner(x), Point::Inner(y)) => peripheral(Boundary::Inner, x, y, q),
                }
            }
        }
    }

    /// Translates `k` for which the lift of `c2` shifted by `k` may cross
    /// the lift of `c1`.
    fn translate_range(&self, l1: (Point, Point), l2: (Point, Point)) -> std::ops::RangeInclusive<i64> {
        match *self {
            Surface::Disk { .. } => 0..=0,
            Surface::Annulus { p, q } => {
                let d = (p * q) as i64;
                let (x1, y1) = (self.abscissa(l1.0), self.abscissa(l1.1));
                let (x2, y2) = (self.abscissa(l2.0), self.abscissa(l2.1));
                let lo = div_floor(x1.min(y1) - x2.max(y2), d) - 1;
                let hi = div_floor(x1.max(y1) - x2.min(y2), d) + 1;
                lo..=hi
            }
        }
    }

    fn interleave(&self, l1: (Point, Point), l2: (Point, Point)) -> bool {
        let (a, b) = (self.position(l1.0), self.position(l1.1));
        let (c, d) = (self.position(l2.0), self.position(l2.1));
        if a == c || a == d || b == c || b == d {
            return false;
        }
        let (a, b) = (a.min(b), a.max(b));
        let inside = |x| a < x && x < b;
        inside(c) != inside(d)
    }

    /// Deck translates `k` at which the lift of `c2` crosses the lift of `c1`.
    pub(crate) fn crossing_translates(&self, c1: &Curve, c2: &Curve) -> Vec<i64> {
        let (Some(l1), Some(l2)) = (self.lift(c1), self.lift(c2)) else {
            return Vec::new();
        };
        self.translate_range(l1, l2)
            .filter(|&k| self.interleave(l1, (self.deck(l2.0, k), self.deck(l2.1, k))))
            .collect()
    }

    /// Minimal number of crossings between two curves.
    pub fn arcs_cross(&self, c1: &Curve, c2: &Curve) -> Result<usize, SurfaceError> {
        self.check_curve(c1)?;
        self.check_curve(c2)?;
        Ok(match (*c1, *c2) {
            (Curve::Bracelet(m), Curve::Bridge { .. }) | (Curve::Bridge { .. }, Curve::Bracelet(m)) => m as usize,
            (Curve::Bracelet(_) | Curve::ContractibleLoop, _) | (_, Curve::Bracelet(_) | Curve::ContractibleLoop) => 0,
            _ => self.crossing_translates(c1, c2).len(),
        })
    }

    /// Number of self-intersections.
    pub fn self_crossings(&self, c: &Curve) -> usize {
        match *c {
            Curve::Bracelet(m) => m as usize - 1,
            Curve::ContractibleLoop => 0,
            _ => self.crossing_translates(c, c).len() / 2,
        }
    }
}

fn peripheral(boundary: Boundary, x: i64, y: i64, period: i64) -> Curve {
    let (lo, hi) = (x.min(y), x.max(y));
    Curve::Peripheral {
        boundary,
        start: (lo.rem_euclid(period) + 1) as u32,
        span: (hi - lo) as u64,
    }
}

impl std::fmt::Display for Curve {
    /// Compact syntax: `1-3` for chords, `O1-I2@w` for bridges, `O1+2` and
    /// `I1+2` for peripheral arcs, `L` or `L^m` for bracelets.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Curve::Chord { a, b } => write!(f, "{a}-{b}"),
            Curve::Bridge { outer, inner, winding } => write!(f, "O{outer}-I{inner}@{winding}"),
            Curve::Peripheral { boundary: Boundary::Outer, start, span } => write!(f, "O{start}+{span}"),
            Curve::Peripheral { boundary: Boundary::Inner, start, span } => write!(f, "I{start}+{span}"),
            Curve::Bracelet(1) => write!(f, "L"),
            Curve::Bracelet(m) => write!(f, "L^{m}"),
            Curve::ContractibleLoop => write!(f, "O"),
        }
    }
}

impl Serialize for Curve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Curve, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Curve {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Curve, SurfaceError> {
        let bad = || SurfaceError::NotAnArc(s.to_string());
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let s = s.trim();
        if s == "L" {
            return Ok(Curve::Bracelet(1));
        }
        if let Some(m) = s.strip_prefix("L^") {
            return Ok(Curve::Bracelet(num(m)?));
        }
        if let Some(rest) = s.strip_prefix('O').or_else(|| s.strip_prefix('I')) {
            let boundary = if s.starts_with('O') { Boundary::Outer } else { Boundary::Inner };
            if let Some((start, span)) = rest.split_once('+') {
                return Ok(Curve::Peripheral { boundary, start: num(start)?, span: num(span)? as u64 });
            }
            if boundary == Boundary::Outer {
                let (outer, rest) = rest.split_once("-I").ok_or_else(bad)?;
                let (inner, winding) = rest.split_once('@').unwrap_or((rest, "0"));
                return Ok(Curve::Bridge {
                    outer: num(outer)?,
                    inner: num(inner)?,
                    winding: winding.trim().parse().map_err(|_| bad())?,
                });
            }
            return Err(bad());
        }
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        let (a, b) = (num(a)?, num(b)?);
        if a == b {
            return Err(bad());
        }
        Ok(Curve::Chord { a: a.min(b), b: a.max(b) })
    }
}

use std::collections::{BTreeSet, VecDeque};

use super::{Curve, Point, Surface, SurfaceError};
use crate::quiver::Quiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Arc(usize),
    Boundary(Curve),
}

/// A triangle, given by one lift of its corners in counterclockwise order
/// and its sides in clockwise order starting from the side opposite the
/// second corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle {
    pub corners: [Point; 3],
    pub sides: [Side; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    surface: Surface,
    arcs: Vec<Curve>,
    triangles: Vec<Triangle>,
}

impl Triangulation {
    /// Builds a triangulation from its arcs. The order of `arcs` fixes the
    /// vertex numbering of the quiver.
    pub fn new(surface: Surface, arcs: Vec<Curve>) -> Result<Triangulation, SurfaceError> {
        if arcs.len() != surface.rank() {
            return Err(SurfaceError::WrongArcCount { expected: surface.rank(), got: arcs.len() });
        }
        for (i, c) in arcs.iter().enumerate() {
            surface.check_curve(c)?;
            if !surface.is_internal_arc(c) {
                return Err(SurfaceError::NotAnArc(c.to_string()));
            }
            for d in &arcs[..i] {
                if d == c {
                    return Err(SurfaceError::DuplicateArc(c.to_string()));
                }
                if surface.arcs_cross(c, d)? > 0 {
                    return Err(SurfaceError::Crossing(d.to_string(), c.to_string()));
                }
            }
        }
        let mut t = Triangulation { surface, arcs, triangles: Vec::new() };
        t.triangles = t.find_triangles()?;
        Ok(t)
    }

    /// Fan at marked point 1 for disks. For an annulus: every inner point
    /// joined to the first outer point, then every other outer point joined
    /// to the last inner point; for one marked point on each boundary this
    /// gives the bridges of winding 1 and 0, in that order.
    pub fn standard(surface: Surface) -> Triangulation {
        let arcs = match surface {
            Surface::Disk { m } => (3..m).map(|b| Curve::Chord { a: 1, b }).collect(),
            Surface::Annulus { p, q } => {
                let (p, q) = (p as i64, q as i64);
                let o0 = Point::Outer(0);
                let mut arcs: Vec<Curve> = (0..=q).rev().map(|s| surface.curve_between(o0, Point::Inner(s))).collect();
                arcs.extend((1..p).map(|t| surface.curve_between(Point::Outer(t), Point::Inner(q))));
                arcs
            }
        };
        Triangulation::new(surface, arcs).expect("standard triangulation is valid")
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn arcs(&self) -> &[Curve] {
        &self.arcs
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn index_of(&self, c: &Curve) -> Option<usize> {
        self.arcs.iter().position(|a| a == c)
    }

    /// Arc set, independent of numbering.
    pub fn key(&self) -> BTreeSet<Curve> {
        self.arcs.iter().copied().collect()
    }

    fn neighbors(&self, pt: Point) -> Vec<Point> {
        let s = self.surface;
        let mut out = match (s, pt) {
            (Surface::Disk { m }, Point::Outer(a)) => {
                let m = m as i64;
                vec![Point::Outer(a % m + 1), Point::Outer((a + m - 2) % m + 1)]
            }
            (_, Point::Outer(t)) => vec![Point::Outer(t - 1), Point::Outer(t + 1)],
            (_, Point::Inner(t)) => vec![Point::Inner(t - 1), Point::Inner(t + 1)],
        };
        for c in &self.arcs {
            let (e1, e2) = s.lift(c).expect("arcs have lifts");
            if let Some(k) = s.deck_offset(e1, pt) {
                out.push(s.deck(e2, k));
            }
            if let Some(k) = s.deck_offset(e2, pt) {
                out.push(s.deck(e1, k));
            }
        }
        out
    }

    /// Third corners of the triangles on either side of the lift `a`-`b`:
    /// first the one making a counterclockwise triangle.
    fn apexes(&self, a: Point, b: Point) -> Result<(Point, Point), SurfaceError> {
        let nb = self.neighbors(b);
        let common: BTreeSet<Point> = self.neighbors(a).into_iter().filter(|c| nb.contains(c)).collect();
        let (left, right): (Vec<Point>, Vec<Point>) = common.into_iter().partition(|&c| self.surface.ccw(a, b, c));
        match (left.as_slice(), right.as_slice()) {
            ([l], [r]) => Ok((*l, *r)),
            _ => Err(SurfaceError::Inconsistent(format!(
                "edge {} does not bound exactly two triangles",
                self.surface.curve_between(a, b)
            ))),
        }
    }

    fn side(&self, a: Point, b: Point) -> Side {
        let c = self.surface.curve_between(a, b);
        match self.index_of(&c) {
            Some(i) => Side::Arc(i),
            None => Side::Boundary(c),
        }
    }

    fn normalize(&self, corners: [Point; 3]) -> Triangle {
        let s = self.surface;
        let first = *corners.iter().min().unwrap();
        let k = match (s, first) {
            (Surface::Annulus { p, .. }, Point::Outer(t)) => t.div_euclid(p as i64),
            (Surface::Annulus { q, .. }, Point::Inner(t)) => t.div_euclid(q as i64),
            _ => 0,
        };
        let mut c = corners.map(|pt| s.deck(pt, -k));
        let lowest = *c.iter().min().unwrap();
        while c[0] != lowest {
            c.rotate_left(1);
        }
        let [p0, p1, p2] = c;
        Triangle { corners: c, sides: [self.side(p0, p2), self.side(p2, p1), self.side(p1, p0)] }
    }

    fn find_triangles(&self) -> Result<Vec<Triangle>, SurfaceError> {
        let mut found = BTreeSet::new();
        for c in &self.arcs {
            let (a, b) = self.surface.lift(c).unwrap();
            let (l, r) = self.apexes(a, b)?;
            found.insert(self.normalize([a, b, l]));
            found.insert(self.normalize([b, a, r]));
        }
        Ok(found.into_iter().collect())
    }

    /// Quiver with one arrow from each side of a triangle to the next
    /// side in clockwise order, for every pair of internal sides.
    pub fn quiver(&self) -> Quiver {
        let n = self.arcs.len();
        let mut b = vec![vec![0i32; n]; n];
        for t in &self.triangles {
            for r in 0..3 {
                if let (Side::Arc(i), Side::Arc(j)) = (t.sides[r], t.sides[(r + 1) % 3]) {
                    if i != j {
                        b[i][j] += 1;
                        b[j][i] -= 1;
                    }
                }
            }
        }
        Quiver::from_matrix(&b).expect("triangle arrows form a skew-symmetric matrix")
    }

    /// The arc that would replace arc `i` under a flip.
    pub fn flipped_arc(&self, i: usize) -> Result<Curve, SurfaceError> {
        let c = self
            .arcs
            .get(i)
            .ok_or_else(|| SurfaceError::ArcNotInTriangulation(format!("#{}", i + 1)))?;
        let (a, b) = self.surface.lift(c).unwrap();
        let (l, r) = self.apexes(a, b)?;
        Ok(self.surface.curve_between(l, r))
    }

    /// Replaces arc `i` by the other diagonal of its quadrilateral, keeping
    /// its position in the arc list.
    pub fn flip(&self, i: usize) -> Result<Triangulation, SurfaceError> {
        let fresh = self.flipped_arc(i)?;
        let mut arcs = self.arcs.clone();
        arcs[i] = fresh;
        Triangulation::new(self.surface, arcs)
    }

    pub fn flip_arc(&self, c: &Curve) -> Result<Triangulation, SurfaceError> {
        let i = self.index_of(c).ok_or_else(|| SurfaceError::ArcNotInTriangulation(c.to_string()))?;
        self.flip(i)
    }

    /// True when flipping arc `i` agrees with mutating the quiver at `i`.
    pub fn flip_mutation_compatibility(&self, i: usize) -> Result<bool, SurfaceError> {
        let flipped = self.flip(i)?.quiver();
        let mutated = self.quiver().mutate(i).map_err(crate::seeds::SeedError::from)?;
        Ok(flipped == mutated)
    }
}

/// All triangulations of a disk, each with its arcs sorted.
pub fn enumerate_disk_triangulations(m: u32) -> Result<Vec<Triangulation>, SurfaceError> {
    let surface = Surface::disk(m)?;
    let start = Triangulation::standard(surface);
    let mut seen = BTreeSet::from([start.key()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for i in 0..t.arcs.len() {
            let f = t.flip(i)?;
            if seen.insert(f.key()) {
                queue.push_back(f);
            }
        }
    }
    seen.into_iter()
        .map(|k| Triangulation::new(surface, k.into_iter().collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::presets::*;
    use crate::surface::Boundary;

    fn chord(a: u32, b: u32) -> Curve {
        Curve::Chord { a, b }
    }

    fn catalan(n: u64) -> u64 {
        (0..n).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
    }

    #[test]
    fn square_flip() {
        let t = Triangulation::new(Surface::disk(4).unwrap(), vec![chord(1, 3)]).unwrap();
        assert_eq!(t.quiver(), Quiver::empty(1));
        assert_eq!(t.flip(0).unwrap().arcs(), &[chord(2, 4)]);
    }

    #[test]
    fn pentagon_flip() {
        let t = Triangulation::new(Surface::disk(5).unwrap(), vec![chord(1, 3), chord(1, 4)]).unwrap();
        let f = t.flip(0).unwrap();
        assert_eq!(f.arcs(), &[chord(2, 4), chord(1, 4)]);
        assert_eq!(f.flip(0).unwrap(), t);
    }

    #[test]
    fn hexagon_fan_is_linear_a3() {
        let t = Triangulation::standard(Surface::disk(6).unwrap());
        assert_eq!(t.arcs(), &[chord(1, 3), chord(1, 4), chord(1, 5)]);
        assert_eq!(t.quiver(), linear_a(3));
        assert_eq!(t.triangles().len(), 4);
    }

    #[test]
    fn catalan_counts() {
        for m in 4..=8u32 {
            let all = enumerate_disk_triangulations(m).unwrap();
            assert_eq!(all.len() as u64, catalan(m as u64 - 2), "m = {m}");
            assert!(all.iter().all(|t| t.triangles().len() == m as usize - 2));
        }
    }

    #[test]
    fn disks_flip_like_mutation() {
        for m in 4..=7u32 {
            for t in enumerate_disk_triangulations(m).unwrap() {
                for i in 0..t.arcs().len() {
                    assert!(t.flip_mutation_compatibility(i).unwrap());
                    assert_eq!(t.flip(i).unwrap().flip(i).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn annulus_one_one_is_kronecker() {
        let s = Surface::annulus(1, 1).unwrap();
        let t = Triangulation::standard(s);
        assert_eq!(
            t.arcs(),
            &[
                Curve::Bridge { outer: 1, inner: 1, winding: 1 },
                Curve::Bridge { outer: 1, inner: 1, winding: 0 }
            ]
        );
        assert_eq!(t.quiver(), kronecker());
        assert_eq!(t.triangles().len(), 2);
        let mut cur = t;
        for step in 0..6 {
            let i = step % 2;
            assert!(cur.flip_mutation_compatibility(i).unwrap());
            cur = cur.flip(i).unwrap();
        }
        assert_eq!(
            cur.key(),
            [-6, -5].into_iter().map(|w| Curve::Bridge { outer: 1, inner: 1, winding: w }).collect()
        );
    }

    #[test]
    fn annuli_flip_like_mutation() {
        for (p, q) in [(2, 1), (1, 2), (2, 2), (3, 1)] {
            let s = Surface::annulus(p, q).unwrap();
            let start = Triangulation::standard(s);
            assert_eq!(start.triangles().len(), (p + q) as usize);
            let mut seen = BTreeSet::from([start.key()]);
            let mut queue = VecDeque::from([(start, 0)]);
            while let Some((t, d)) = queue.pop_front() {
                for i in 0..t.arcs().len() {
                    assert!(t.flip_mutation_compatibility(i).unwrap(), "({p},{q}) {:?} at {i}", t.arcs());
                    let f = t.flip(i).unwrap();
                    assert_eq!(f.flip(i).unwrap(), t);
                    if d < 3 && seen.insert(f.key()) {
                        queue.push_back((f, d + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn peripheral_arcs_appear() {
        let s = Surface::annulus(2, 1).unwrap();
        let t = Triangulation::standard(s);
        let has_peripheral = (0..3).any(|i| matches!(t.flipped_arc(i), Ok(Curve::Peripheral { .. })));
        assert!(has_peripheral);
        let per = Curve::Peripheral { boundary: Boundary::Outer, start: 1, span: 2 };
        let t = Triangulation::new(
            s,
            vec![per, Curve::Bridge { outer: 1, inner: 1, winding: 0 }, Curve::Bridge { outer: 1, inner: 1, winding: 1 }],
        )
        .unwrap();
        assert_eq!(t.triangles().len(), 3);
    }

    #[test]
    fn rejects_bad_arc_sets() {
        let d = Surface::disk(6).unwrap();
        assert!(matches!(
            Triangulation::new(d, vec![chord(1, 3), chord(2, 6), chord(1, 4)]),
            Err(SurfaceError::Crossing(..))
        ));
        assert!(matches!(Triangulation::new(d, vec![chord(1, 3)]), Err(SurfaceError::WrongArcCount { .. })));
        assert!(matches!(
            Triangulation::new(d, vec![chord(1, 2), chord(1, 3), chord(1, 4)]),
            Err(SurfaceError::NotAnArc(_))
        ));
    }
}

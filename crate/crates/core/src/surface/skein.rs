//! Smoothing of crossings and full resolution of multicurves.
//!
//! Two crossing arcs with lifts `A-B` and `C-D` (the latter translated to
//! the crossing) smooth into `{A-C, B-D}` and `{A-D, B-C}`. The essential
//! loop smooths against a bridge into the two bridges of neighbouring
//! winding. A peripheral arc running more than once around its boundary is
//! smoothed at its first self-crossing into the arc one turn shorter
//! together with the essential loop, and the arc two turns shorter. A
//! bracelet `L^m` smooths into `L^(m-1)` with `L`, and `L^(m-2)` (for
//! `m = 2`, a contractible loop).
//!
//! Signs follow the Chebyshev recursions: every smoothing carries `+`,
//! except the second term of a bracelet with `m >= 3`, and the second term
//! of a self-crossing arc when the shortened arc still runs forwards.

use serde::Serialize;

use super::{Curve, Surface, SurfaceError};

/// A multiset of curves with a sign and a count of contractible loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multicurve {
    curves: Vec<Curve>,
    pub sign: i8,
    pub contractible_loops: u32,
}

/// Location of a crossing inside a multicurve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    Between(usize, usize),
    SelfCrossing(usize),
}

const MAX_RESOLUTION_DEPTH: usize = 256;

impl Multicurve {
    pub fn new(mut curves: Vec<Curve>) -> Multicurve {
        curves.sort();
        Multicurve { curves, sign: 1, contractible_loops: 0 }
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    /// Number of curves with endpoints (boundary segments included).
    pub fn arc_count(&self) -> usize {
        self.curves.iter().filter(|c| !Surface::is_closed(c)).count()
    }

    pub fn closed_count(&self) -> usize {
        self.curves.iter().filter(|c| Surface::is_closed(c)).count() + self.contractible_loops as usize
    }

    fn replace(&self, drop: &[usize], add: &[Curve], sign: i8, loops: u32) -> Multicurve {
        let mut curves: Vec<Curve> = self
            .curves
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, c)| *c)
            .chain(add.iter().copied())
            .collect();
        curves.sort();
        Multicurve {
            curves,
            sign: self.sign * sign,
            contractible_loops: self.contractible_loops + loops,
        }
    }

    /// First crossing in a fixed scan order. Self-crossing arcs come first;
    /// a bracelet is only resolved once it meets another curve.
    pub fn find_crossing(&self, s: &Surface) -> Result<Option<Crossing>, SurfaceError> {
        for (i, c) in self.curves.iter().enumerate() {
            if !Surface::is_closed(c) && s.self_crossings(c) > 0 {
                return Ok(Some(Crossing::SelfCrossing(i)));
            }
        }
        for i in 0..self.curves.len() {
            for j in i + 1..self.curves.len() {
                let (a, b) = (&self.curves[i], &self.curves[j]);
                if a == b || s.arcs_cross(a, b)? == 0 {
                    continue;
                }
                for (k, c) in [(i, a), (j, b)] {
                    if matches!(c, Curve::Bracelet(m) if *m >= 2) {
                        return Ok(Some(Crossing::SelfCrossing(k)));
                    }
                }
                return Ok(Some(Crossing::Between(i, j)));
            }
        }
        Ok(None)
    }
}

impl std::fmt::Display for Multicurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        write!(f, "{{")?;
        for (i, c) in self.curves.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")?;
        if self.contractible_loops > 0 {
            write!(f, " with {} contractible loop(s)", self.contractible_loops)?;
        }
        Ok(())
    }
}

impl Serialize for Multicurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            curves: Vec<String>,
            sign: i8,
            contractible_loops: u32,
        }
        Repr {
            curves: self.curves.iter().map(ToString::to_string).collect(),
            sign: self.sign,
            contractible_loops: self.contractible_loops,
        }
        .serialize(s)
    }
}

/// The two smoothings of the given crossing.
pub fn smooth_crossing(
    s: &Surface,
    mc: &Multicurve,
    at: Crossing,
) -> Result<(Multicurve, Multicurve), SurfaceError> {
    match at {
        Crossing::Between(i, j) => {
            let (Some(&a), Some(&b)) = (mc.curves.get(i), mc.curves.get(j)) else {
                return Err(SurfaceError::NoSuchCrossing);
            };
            if i == j || s.arcs_cross(&a, &b)? == 0 {
                return Err(SurfaceError::NoSuchCrossing);
            }
            match (a, b) {
                (Curve::Bracelet(1), Curve::Bridge { outer, inner, winding })
                | (Curve::Bridge { outer, inner, winding }, Curve::Bracelet(1)) => {
                    let up = Curve::Bridge { outer, inner, winding: winding + 1 };
                    let down = Curve::Bridge { outer, inner, winding: winding - 1 };
                    Ok((mc.replace(&[i, j], &[up], 1, 0), mc.replace(&[i, j], &[down], 1, 0)))
                }
                (Curve::Bracelet(_), _) | (_, Curve::Bracelet(_)) => Err(SurfaceError::NoSuchCrossing),
                _ => {
                    let (pa, pb) = s.lift(&a).unwrap();
                    let (pc, pd) = s.lift(&b).unwrap();
                    let k = s.crossing_translates(&a, &b)[0];
                    let (pc, pd) = (s.deck(pc, k), s.deck(pd, k));
                    let m1 = [s.curve_between(pa, pc), s.curve_between(pb, pd)];
                    let m2 = [s.curve_between(pa, pd), s.curve_between(pb, pc)];
                    Ok((mc.replace(&[i, j], &m1, 1, 0), mc.replace(&[i, j], &m2, 1, 0)))
                }
            }
        }
        Crossing::SelfCrossing(i) => {
            let Some(&c) = mc.curves.get(i) else {
                return Err(SurfaceError::NoSuchCrossing);
            };
            match c {
                Curve::Bracelet(2) => Ok((
                    mc.replace(&[i], &[Curve::Bracelet(1), Curve::Bracelet(1)], 1, 0),
                    mc.replace(&[i], &[], 1, 1),
                )),
                Curve::Bracelet(m) if m >= 3 => Ok((
                    mc.replace(&[i], &[Curve::Bracelet(m - 1), Curve::Bracelet(1)], 1, 0),
                    mc.replace(&[i], &[Curve::Bracelet(m - 2)], -1, 0),
                )),
                Curve::Peripheral { boundary, span, .. } if s.self_crossings(&c) > 0 => {
                    let (pa, pb) = s.lift(&c).unwrap();
                    let shorter = s.curve_between(pa, s.deck(pb, -1));
                    let shortest = s.curve_between(pa, s.deck(pb, -2));
                    let forwards = span as i64 > 2 * s.period(boundary);
                    Ok((
                        mc.replace(&[i], &[shorter, Curve::Bracelet(1)], 1, 0),
                        mc.replace(&[i], &[shortest], if forwards { -1 } else { 1 }, 0),
                    ))
                }
                _ => Err(SurfaceError::NoSuchCrossing),
            }
        }
    }
}

/// Resolves every crossing, returning the signed crossing-free leaves of
/// the resolution tree in depth-first order (first smoothing first).
pub fn resolve_multicurve(s: &Surface, mc: &Multicurve) -> Result<Vec<Multicurve>, SurfaceError> {
    for c in &mc.curves {
        s.check_curve(c)?;
    }
    let mut leaves = Vec::new();
    let mut stack = vec![(mc.clone(), 0usize)];
    while let Some((cur, depth)) = stack.pop() {
        match cur.find_crossing(s)? {
            None => leaves.push(cur),
            Some(_) if depth >= MAX_RESOLUTION_DEPTH => {
                return Err(SurfaceError::Inconsistent("resolution does not terminate".into()))
            }
            Some(at) => {
                let (m1, m2) = smooth_crossing(s, &cur, at)?;
                stack.push((m2, depth + 1));
                stack.push((m1, depth + 1));
            }
        }
    }
    Ok(leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Boundary;

    fn chord(a: u32, b: u32) -> Curve {
        Curve::Chord { a, b }
    }

    #[test]
    fn square_smoothing() {
        let s = Surface::disk(4).unwrap();
        let mc = Multicurve::new(vec![chord(1, 3), chord(2, 4)]);
        let (m1, m2) = smooth_crossing(&s, &mc, Crossing::Between(0, 1)).unwrap();
        assert_eq!(m1.curves(), &[chord(1, 2), chord(3, 4)]);
        assert_eq!(m2.curves(), &[chord(1, 4), chord(2, 3)]);
        assert_eq!(resolve_multicurve(&s, &mc).unwrap(), vec![m1, m2]);
    }

    #[test]
    fn hexagon_smoothing() {
        let s = Surface::disk(6).unwrap();
        let mc = Multicurve::new(vec![chord(1, 3), chord(2, 6)]);
        let (m1, m2) = smooth_crossing(&s, &mc, Crossing::Between(0, 1)).unwrap();
        assert_eq!(m1.curves(), &[chord(1, 2), chord(3, 6)]);
        assert_eq!(m2.curves(), &[chord(1, 6), chord(2, 3)]);
    }

    #[test]
    fn non_crossing_input_is_a_leaf() {
        let s = Surface::disk(6).unwrap();
        let mc = Multicurve::new(vec![chord(1, 3), chord(1, 4)]);
        assert_eq!(resolve_multicurve(&s, &mc).unwrap(), vec![mc.clone()]);
        assert_eq!(smooth_crossing(&s, &mc, Crossing::Between(0, 1)), Err(SurfaceError::NoSuchCrossing));
    }

    #[test]
    fn bracelet_two_splits() {
        let s = Surface::annulus(1, 1).unwrap();
        let mc = Multicurve::new(vec![Curve::Bracelet(2)]);
        let (m1, m2) = smooth_crossing(&s, &mc, Crossing::SelfCrossing(0)).unwrap();
        assert_eq!(m1.curves(), &[Curve::Bracelet(1), Curve::Bracelet(1)]);
        assert!(m2.curves().is_empty());
        assert_eq!(m2.contractible_loops, 1);
    }

    #[test]
    fn loop_against_bridge() {
        let s = Surface::annulus(1, 1).unwrap();
        let b = Curve::Bridge { outer: 1, inner: 1, winding: 0 };
        let leaves = resolve_multicurve(&s, &Multicurve::new(vec![Curve::Bracelet(2), b])).unwrap();
        // L*L*B splits into four bridge leaves, the contractible loop keeps B
        assert_eq!(leaves.len(), 5);
        assert!(leaves.iter().all(|l| l.find_crossing(&s).unwrap().is_none()));
        assert_eq!(leaves.iter().filter(|l| l.contractible_loops == 1).count(), 1);
    }

    #[test]
    fn self_crossing_arc() {
        let s = Surface::annulus(1, 1).unwrap();
        let c = Curve::Peripheral { boundary: Boundary::Inner, start: 1, span: 2 };
        let leaves = resolve_multicurve(&s, &Multicurve::new(vec![c])).unwrap();
        let boundary = Curve::Peripheral { boundary: Boundary::Inner, start: 1, span: 1 };
        let contractible = Curve::Peripheral { boundary: Boundary::Inner, start: 1, span: 0 };
        assert_eq!(leaves[0].curves(), &[boundary, Curve::Bracelet(1)]);
        assert_eq!(leaves[1].curves(), &[contractible]);
    }

    #[test]
    fn bridges_two_apart_in_the_annulus() {
        let s = Surface::annulus(1, 1).unwrap();
        let mc = Multicurve::new(vec![
            Curve::Bridge { outer: 1, inner: 1, winding: 0 },
            Curve::Bridge { outer: 1, inner: 1, winding: 2 },
        ]);
        let leaves = resolve_multicurve(&s, &mc).unwrap();
        assert_eq!(leaves.len(), 2);
        assert_eq!(leaves.iter().map(|l| l.arc_count()).collect::<Vec<_>>(), vec![2, 2]);
    }
}

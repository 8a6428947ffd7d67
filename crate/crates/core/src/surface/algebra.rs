use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::skein::{resolve_multicurve, smooth_crossing, Crossing, Multicurve};
use super::{as_text, Curve, Surface, SurfaceError, Triangulation};
use crate::laurent::LaurentPolynomial;
use crate::seeds::{Seed, SeedError};

pub const DEFAULT_FLIP_BUDGET: usize = 64;
pub const DEFAULT_CONTRACTIBLE_LOOP: i64 = -2;
const DEFAULT_NODE_CAP: usize = 200_000;

/// Cluster variables of arcs relative to a fixed initial triangulation,
/// found by flipping outwards from it while mutating the matching seed.
#[derive(Clone, Debug)]
pub struct ArcAlgebra {
    initial: Triangulation,
    cache: HashMap<Curve, LaurentPolynomial>,
    seen: HashSet<BTreeSet<Curve>>,
    queue: VecDeque<(Triangulation, Seed, usize)>,
    flip_budget: usize,
    node_cap: usize,
    contractible_loop: i64,
    loop_value: Option<LaurentPolynomial>,
}

/// Outcome of [`ArcAlgebra::skein_identity_check`].
#[derive(Clone, Debug, Serialize)]
pub struct SkeinCheck {
    pub first: Multicurve,
    pub second: Multicurve,
    #[serde(serialize_with = "as_text")]
    pub product: LaurentPolynomial,
    #[serde(serialize_with = "as_text")]
    pub first_value: LaurentPolynomial,
    #[serde(serialize_with = "as_text")]
    pub second_value: LaurentPolynomial,
    /// Signs `(s1, s2)` with `product = s1*first + s2*second`, if any.
    pub signs: Option<(i8, i8)>,
}

impl SkeinCheck {
    pub fn holds(&self) -> bool {
        self.signs.is_some()
    }
}

impl ArcAlgebra {
    pub fn new(initial: Triangulation) -> ArcAlgebra {
        let n = initial.arcs().len();
        let seed = Seed::initial(&initial.quiver());
        let cache = initial
            .arcs()
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, LaurentPolynomial::variable(n, i)))
            .collect();
        ArcAlgebra {
            seen: HashSet::from([initial.key()]),
            queue: VecDeque::from([(initial.clone(), seed, 0)]),
            initial,
            cache,
            flip_budget: DEFAULT_FLIP_BUDGET,
            node_cap: DEFAULT_NODE_CAP,
            contractible_loop: DEFAULT_CONTRACTIBLE_LOOP,
            loop_value: None,
        }
    }

    pub fn with_flip_budget(mut self, budget: usize) -> ArcAlgebra {
        self.flip_budget = budget;
        self
    }

    pub fn with_node_cap(mut self, cap: usize) -> ArcAlgebra {
        self.node_cap = cap;
        self
    }

    /// Value given to contractible closed loops produced by smoothing.
    pub fn with_contractible_loop(mut self, value: i64) -> ArcAlgebra {
        self.contractible_loop = value;
        self
    }

    pub fn initial(&self) -> &Triangulation {
        &self.initial
    }

    pub fn surface(&self) -> Surface {
        self.initial.surface()
    }

    pub fn rank(&self) -> usize {
        self.initial.arcs().len()
    }

    fn expand_one(&mut self) -> Result<bool, SurfaceError> {
        let Some((t, seed, depth)) = self.queue.pop_front() else {
            return Ok(false);
        };
        if depth >= self.flip_budget {
            return Ok(true);
        }
        for i in 0..t.arcs().len() {
            let f = t.flip(i)?;
            if !self.seen.insert(f.key()) {
                continue;
            }
            let s = seed.mutate(i).map_err(SurfaceError::from)?;
            if f.quiver() != *s.quiver() {
                return Err(SurfaceError::Inconsistent(format!("flip of {} disagrees with mutation", t.arcs()[i])));
            }
            let fresh = f.arcs()[i];
            match self.cache.get(&fresh) {
                Some(v) if *v != s.cluster()[i] => {
                    return Err(SurfaceError::Inconsistent(format!("arc {fresh} reached with two values")))
                }
                Some(_) => {}
                None => {
                    self.cache.insert(fresh, s.cluster()[i].clone());
                }
            }
            self.queue.push_back((f, s, depth + 1));
        }
        Ok(true)
    }

    /// Cluster variable of an internal arc.
    pub fn arc_variable(&mut self, c: &Curve) -> Result<LaurentPolynomial, SurfaceError> {
        let s = self.surface();
        s.check_curve(c)?;
        if !s.is_internal_arc(c) {
            return Err(SurfaceError::NotAnArc(c.to_string()));
        }
        loop {
            if let Some(v) = self.cache.get(c) {
                return Ok(v.clone());
            }
            if self.seen.len() > self.node_cap || !self.expand_one()? {
                return Err(SurfaceError::SearchLimitExceeded(c.to_string()));
            }
        }
    }

    /// Seed attached to a triangulation reachable from the initial one: its
    /// cluster lists the variables of its arcs, its quiver is read off the
    /// triangles.
    pub fn seed_of(&mut self, t: &Triangulation) -> Result<Seed, SurfaceError> {
        let cluster = t.arcs().iter().map(|c| self.arc_variable(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Seed::new(cluster, t.quiver())?)
    }

    /// Value of any curve: arcs give cluster variables (self-crossing ones
    /// are resolved first), boundary segments 1, contractible arcs 0,
    /// bracelets their bracelet polynomial, contractible loops the
    /// configured constant.
    pub fn curve_value(&mut self, c: &Curve) -> Result<LaurentPolynomial, SurfaceError> {
        let s = self.surface();
        let n = self.rank();
        s.check_curve(c)?;
        match *c {
            Curve::Bracelet(m) => self.bracelet_polynomial(m),
            Curve::ContractibleLoop => Ok(LaurentPolynomial::constant(n, self.contractible_loop)),
            _ if s.is_boundary(c) => Ok(LaurentPolynomial::one(n)),
            _ if s.is_contractible_arc(c) => Ok(LaurentPolynomial::zero(n)),
            _ if s.is_internal_arc(c) => self.arc_variable(c),
            _ => {
                let (m1, m2) = smooth_crossing(&s, &Multicurve::new(vec![*c]), Crossing::SelfCrossing(0))?;
                let v1 = self.multicurve_value(&m1)?;
                let v2 = self.multicurve_value(&m2)?;
                Ok(&v1 + &v2)
            }
        }
    }

    pub fn multicurve_value(&mut self, mc: &Multicurve) -> Result<LaurentPolynomial, SurfaceError> {
        let n = self.rank();
        let mut acc = LaurentPolynomial::constant(n, mc.sign);
        if mc.contractible_loops > 0 {
            acc = &acc * &LaurentPolynomial::constant(n, self.contractible_loop).pow(mc.contractible_loops);
        }
        for c in mc.curves() {
            if acc.is_zero() {
                break;
            }
            acc = &acc * &self.curve_value(c)?;
        }
        Ok(acc)
    }

    /// Smooths the first crossing of `c1` and `c2` and looks for signs that
    /// make `x(c1) * x(c2) = s1 * x(M1) + s2 * x(M2)` hold exactly.
    pub fn skein_identity_check(&mut self, c1: &Curve, c2: &Curve) -> Result<SkeinCheck, SurfaceError> {
        let s = self.surface();
        let mc = Multicurve::new(vec![*c1, *c2]);
        if c1 == c2 || s.arcs_cross(c1, c2)? == 0 {
            return Err(SurfaceError::NoSuchCrossing);
        }
        let at = if mc.curves()[0] == mc.curves()[1] { Crossing::SelfCrossing(0) } else { Crossing::Between(0, 1) };
        let (first, second) = smooth_crossing(&s, &mc, at)?;
        let product = &self.curve_value(c1)? * &self.curve_value(c2)?;
        let first_value = self.multicurve_value(&first)?;
        let second_value = self.multicurve_value(&second)?;
        let signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)].into_iter().find(|&(a, b)| {
            let lhs = &first_value.scale(&a.into()) + &second_value.scale(&b.into());
            lhs == product
        });
        Ok(SkeinCheck { first, second, product, first_value, second_value, signs })
    }

    /// Solves for the essential loop from the resolution of two crossing
    /// bridges, when every resolved term contains the loop at most once.
    pub fn loop_from_pair(&mut self, c1: &Curve, c2: &Curve) -> Result<Option<LaurentPolynomial>, SurfaceError> {
        let s = self.surface();
        let n = self.rank();
        let leaves = resolve_multicurve(&s, &Multicurve::new(vec![*c1, *c2]))?;
        let mut constant = LaurentPolynomial::zero(n);
        let mut linear = LaurentPolynomial::zero(n);
        for leaf in &leaves {
            let loops = leaf.curves().iter().filter(|c| matches!(c, Curve::Bracelet(_))).count();
            if leaf.contractible_loops > 0 || leaf.curves().iter().any(|c| matches!(c, Curve::Bracelet(m) if *m > 1)) || loops > 1 {
                return Ok(None);
            }
            let mut v = LaurentPolynomial::constant(n, leaf.sign);
            for c in leaf.curves().iter().filter(|c| !Surface::is_closed(c)) {
                v = &v * &self.curve_value(c)?;
            }
            if loops == 1 {
                linear = &linear + &v;
            } else {
                constant = &constant + &v;
            }
        }
        if linear.is_zero() {
            return Ok(None);
        }
        let product = &self.arc_variable(c1)? * &self.arc_variable(c2)?;
        let rest = &product - &constant;
        Ok(Some(rest.divide_exact(&linear).map_err(|e| {
            SurfaceError::Seed(SeedError::NonExactDivision { vertex: 0, detail: e.to_string() })
        })?))
    }

    /// Crossing pairs of bridges with windings in `-max_winding..=max_winding`
    /// whose resolution determines the essential loop, with the value each
    /// one gives.
    pub fn loop_candidates(&mut self, max_winding: i64) -> Result<Vec<(Curve, Curve, LaurentPolynomial)>, SurfaceError> {
        let Surface::Annulus { p, q } = self.surface() else {
            return Err(SurfaceError::InvalidSurface("a disk has no essential loop".into()));
        };
        let s = self.surface();
        let mut bridges = Vec::new();
        for winding in -max_winding..=max_winding {
            for outer in 1..=p {
                for inner in 1..=q {
                    bridges.push(Curve::Bridge { outer, inner, winding });
                }
            }
        }
        let mut pairs = Vec::new();
        for (i, a) in bridges.iter().enumerate() {
            for b in &bridges[i + 1..] {
                let k = s.arcs_cross(a, b)?;
                if k > 0 {
                    pairs.push((k, *a, *b));
                }
            }
        }
        pairs.sort();
        let mut out = Vec::new();
        for (_, a, b) in pairs {
            if let Some(v) = self.loop_from_pair(&a, &b)? {
                out.push((a, b, v));
            }
        }
        Ok(out)
    }

    /// The essential loop `b_1`, extracted from the first suitable bridge pair.
    pub fn loop_polynomial(&mut self) -> Result<LaurentPolynomial, SurfaceError> {
        if let Some(v) = &self.loop_value {
            return Ok(v.clone());
        }
        let Surface::Annulus { p, q } = self.surface() else {
            return Err(SurfaceError::InvalidSurface("a disk has no essential loop".into()));
        };
        let bound = (p.max(q) as i64) + 3;
        let (_, _, v) = self
            .loop_candidates(bound)?
            .into_iter()
            .next()
            .ok_or_else(|| SurfaceError::SearchLimitExceeded("essential loop".into()))?;
        self.loop_value = Some(v.clone());
        Ok(v)
    }

    /// `b_0 = 2`, `b_1` the essential loop, `b_m = b_1 b_(m-1) - b_(m-2)`.
    pub fn bracelet_polynomial(&mut self, m: u32) -> Result<LaurentPolynomial, SurfaceError> {
        let n = self.rank();
        let b1 = self.loop_polynomial()?;
        let (mut prev, mut cur) = (LaurentPolynomial::constant(n, 2), b1.clone());
        if m == 0 {
            return Ok(prev);
        }
        for _ in 1..m {
            let next = &(&b1 * &cur) - &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use crate::surface::enumerate_disk_triangulations;

    fn lp(s: &str, n: usize) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, n).unwrap()
    }

    fn chord(a: u32, b: u32) -> Curve {
        Curve::Chord { a, b }
    }

    fn bridge(w: i64) -> Curve {
        Curve::Bridge { outer: 1, inner: 1, winding: w }
    }

    #[test]
    fn square_gives_two_over_x() {
        let t = Triangulation::new(Surface::disk(4).unwrap(), vec![chord(1, 3)]).unwrap();
        let mut alg = ArcAlgebra::new(t);
        assert_eq!(alg.arc_variable(&chord(1, 3)).unwrap(), lp("x1", 1));
        assert_eq!(alg.arc_variable(&chord(2, 4)).unwrap(), lp("2/x1", 1));
        let check = alg.skein_identity_check(&chord(1, 3), &chord(2, 4)).unwrap();
        assert_eq!(check.product, lp("2", 1));
        assert_eq!(check.signs, Some((1, 1)));
    }

    #[test]
    fn hexagon_flip_matches_mutation() {
        let t = Triangulation::standard(Surface::disk(6).unwrap());
        let seed = Seed::initial(&t.quiver()).mutate(0).unwrap();
        let mut alg = ArcAlgebra::new(t);
        assert_eq!(alg.arc_variable(&chord(2, 4)).unwrap(), seed.cluster()[0]);
        let check = alg.skein_identity_check(&chord(1, 3), &chord(2, 6)).unwrap();
        assert_eq!(check.signs, Some((1, 1)));
        assert_eq!(check.first_value, alg.arc_variable(&chord(3, 6)).unwrap());
        assert_eq!(check.second_value, lp("1", 3));
    }

    #[test]
    fn every_disk_arc_is_reached() {
        for m in 4..=7u32 {
            let t = Triangulation::standard(Surface::disk(m).unwrap());
            let mut alg = ArcAlgebra::new(t);
            let mut values = BTreeSet::new();
            for a in 1..=m {
                for b in a + 2..=m {
                    if a == 1 && b == m {
                        continue;
                    }
                    values.insert(alg.arc_variable(&chord(a, b)).unwrap().to_string());
                }
            }
            assert_eq!(values.len(), (m * (m - 3) / 2) as usize);
            assert!(alg.seen.len() <= enumerate_disk_triangulations(m).unwrap().len());
        }
    }

    #[test]
    fn kronecker_loop() {
        let t = Triangulation::standard(Surface::annulus(1, 1).unwrap());
        let mut alg = ArcAlgebra::new(t);
        let b1 = alg.loop_polynomial().unwrap();
        assert_eq!(b1, lp("(x1^2 + x2^2 + 1)/(x1*x2)", 2));
        let candidates = alg.loop_candidates(3).unwrap();
        assert!(candidates.len() >= 3);
        assert!(candidates.iter().all(|(_, _, v)| *v == b1));
        assert_eq!(alg.bracelet_polynomial(2).unwrap(), &b1.pow(2) - &lp("2", 2));
    }

    #[test]
    fn bridge_recursion() {
        let t = Triangulation::standard(Surface::annulus(1, 1).unwrap());
        assert_eq!(t.quiver(), crate::quiver::presets::kronecker());
        let mut alg = ArcAlgebra::new(t);
        let b1 = alg.loop_polynomial().unwrap();
        for w in -3..=3 {
            let lhs = &b1 * &alg.arc_variable(&bridge(w)).unwrap();
            let rhs = &alg.arc_variable(&bridge(w + 1)).unwrap() + &alg.arc_variable(&bridge(w - 1)).unwrap();
            assert_eq!(lhs, rhs, "w = {w}");
        }
    }

    #[test]
    fn disk_has_no_loop() {
        let mut alg = ArcAlgebra::new(Triangulation::standard(Surface::disk(5).unwrap()));
        assert!(matches!(alg.loop_polynomial(), Err(SurfaceError::InvalidSurface(_))));
        assert!(matches!(alg.arc_variable(&chord(1, 2)), Err(SurfaceError::NotAnArc(_))));
    }

    #[test]
    fn flip_budget_limits_search() {
        let t = Triangulation::standard(Surface::annulus(1, 1).unwrap());
        let mut alg = ArcAlgebra::new(t).with_flip_budget(4);
        assert!(alg.arc_variable(&bridge(4)).is_ok());
        assert!(matches!(alg.arc_variable(&bridge(7)), Err(SurfaceError::SearchLimitExceeded(_))));
        let _ = Quiver::empty(0);
    }
}

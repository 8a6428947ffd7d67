use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{as_text, ArcAlgebra, Curve, Surface, SurfaceError};
use crate::laurent::{LaurentPolynomial, Monomial};
use crate::linalg::{rational, row_reduce};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    /// Products of pairwise compatible arcs.
    B,
    /// Compatible arcs together with one bracelet.
    BPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub arcs: Vec<Curve>,
    pub bracelet: Option<u32>,
    pub flavor: Flavor,
    #[serde(serialize_with = "as_text")]
    pub value: LaurentPolynomial,
}

impl BasisElement {
    /// Number of arcs plus one for a bracelet.
    pub fn degree(&self) -> usize {
        self.arcs.len() + usize::from(self.bracelet.is_some())
    }

    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.arcs.iter().map(Curve::to_string).collect();
        if let Some(m) = self.bracelet {
            parts.push(Curve::Bracelet(m).to_string());
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    }
}

/// Internal arcs without self-crossings: every chord of a disk, or on an
/// annulus the bridges with `|winding| <= winding` and the peripheral arcs
/// running at most once around their boundary.
pub fn internal_arcs(s: Surface, winding: u32) -> Vec<Curve> {
    let w = i64::from(winding);
    let mut pool = Vec::new();
    match s {
        Surface::Disk { m } => {
            for a in 1..=m {
                for b in a + 1..=m {
                    pool.push(Curve::Chord { a, b });
                }
            }
        }
        Surface::Annulus { p, q } => {
            for winding in -w..=w {
                for outer in 1..=p {
                    for inner in 1..=q {
                        pool.push(Curve::Bridge { outer, inner, winding });
                    }
                }
            }
            for (boundary, n) in [(super::Boundary::Outer, p), (super::Boundary::Inner, q)] {
                for start in 1..=n {
                    for span in 2..=u64::from(n) {
                        pool.push(Curve::Peripheral { boundary, start, span });
                    }
                }
            }
        }
    }
    pool.retain(|c| s.is_internal_arc(c));
    pool.sort();
    pool.dedup();
    pool
}

/// Extends `current` by arcs from `pool[from..]` compatible with everything
/// chosen so far, recording every multiset of size at most `max`.
fn compatible_multisets(
    s: Surface,
    pool: &[Curve],
    compat: &[Vec<bool>],
    from: usize,
    max: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<Curve>>,
) {
    out.push(current.iter().map(|&i| pool[i]).collect());
    if current.len() == max {
        return;
    }
    for i in from..pool.len() {
        if current.iter().all(|&j| compat[i][j]) {
            current.push(i);
            compatible_multisets(s, pool, compat, i, max, current, out);
            current.pop();
        }
    }
}

/// Basis elements of total degree at most `degree` built from arcs of
/// winding at most `winding` and bracelets `Brac_m` with `m <= winding`.
/// The empty product 1 is included.
pub fn enumerate_basis(alg: &mut ArcAlgebra, degree: usize, winding: u32) -> Result<Vec<BasisElement>, SurfaceError> {
    let s = alg.surface();
    let pool = internal_arcs(s, winding);
    let mut compat = vec![vec![true; pool.len()]; pool.len()];
    for i in 0..pool.len() {
        for j in 0..i {
            let ok = s.arcs_cross(&pool[i], &pool[j])? == 0;
            compat[i][j] = ok;
            compat[j][i] = ok;
        }
    }
    let mut collections = Vec::new();
    compatible_multisets(s, &pool, &compat, 0, degree, &mut Vec::new(), &mut collections);

    let mut out = Vec::new();
    for arcs in &collections {
        let mut value = LaurentPolynomial::one(alg.rank());
        for c in arcs {
            value = &value * &alg.arc_variable(c)?;
        }
        out.push(BasisElement { arcs: arcs.clone(), bracelet: None, flavor: Flavor::B, value });
    }
    if let Surface::Annulus { .. } = s {
        for m in 1..=winding {
            for arcs in collections.iter().filter(|a| a.len() < degree) {
                let mut ok = true;
                for c in arcs {
                    ok &= s.arcs_cross(&Curve::Bracelet(m), c)? == 0;
                }
                if !ok {
                    continue;
                }
                let mut value = alg.bracelet_polynomial(m)?;
                for c in arcs {
                    value = &value * &alg.arc_variable(c)?;
                }
                out.push(BasisElement { arcs: arcs.clone(), bracelet: Some(m), flavor: Flavor::BPrime, value });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionTerm {
    /// Index into the basis passed to [`expand_in_basis`].
    pub index: usize,
    pub label: String,
    pub flavor: Flavor,
    #[serde(serialize_with = "as_text")]
    pub coefficient: BigRational,
}

/// Nonzero coefficients of a polynomial in a truncated basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisExpansion {
    pub terms: Vec<ExpansionTerm>,
}

impl BasisExpansion {
    /// Every coefficient is a nonnegative integer.
    pub fn is_natural(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient.is_integer() && !t.coefficient.is_negative())
    }

    pub fn part_sum(&self, flavor: Flavor) -> BigRational {
        self.terms.iter().filter(|t| t.flavor == flavor).map(|t| t.coefficient.clone()).sum()
    }

    pub fn coefficient_of(&self, label: &str) -> BigRational {
        self.terms.iter().find(|t| t.label == label).map_or_else(BigRational::zero, |t| t.coefficient.clone())
    }
}

/// Writes `p` as a rational combination of basis elements by solving the
/// coefficient system, then checks the answer by exact multiplication.
pub fn expand_in_basis(p: &LaurentPolynomial, basis: &[BasisElement]) -> Result<BasisExpansion, SurfaceError> {
    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    for m in basis.iter().flat_map(|b| b.value.terms()).chain(p.terms()).map(|(m, _)| m) {
        let next = monomials.len();
        monomials.entry(m.clone()).or_insert(next);
    }
    let cols = basis.len() + 1;
    let mut rows = vec![vec![BigRational::zero(); cols]; monomials.len()];
    for (j, b) in basis.iter().enumerate() {
        for (m, c) in b.value.terms() {
            rows[monomials[m]][j] = rational(c);
        }
    }
    for (m, c) in p.terms() {
        rows[monomials[m]][basis.len()] = rational(c);
    }
    let pivots = row_reduce(&mut rows);
    if pivots.last() == Some(&basis.len()) {
        return Err(SurfaceError::NotInSpan);
    }
    if pivots.len() < basis.len() {
        return Err(SurfaceError::AmbiguousExpansion);
    }
    let mut terms = Vec::new();
    for (r, &j) in pivots.iter().enumerate() {
        let c = rows[r][basis.len()].clone();
        if !c.is_zero() {
            terms.push(ExpansionTerm { index: j, label: basis[j].label(), flavor: basis[j].flavor, coefficient: c });
        }
    }

    let denom = terms.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.coefficient.denom()));
    let mut lhs = LaurentPolynomial::zero(p.rank());
    for t in &terms {
        let k = (&t.coefficient * BigRational::from_integer(denom.clone())).to_integer();
        lhs = &lhs + &basis[t.index].value.scale(&k);
    }
    if lhs != p.scale(&denom) {
        return Err(SurfaceError::Inconsistent("basis expansion does not reproduce the polynomial".into()));
    }
    Ok(BasisExpansion { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Triangulation;

    fn disk(m: u32) -> ArcAlgebra {
        ArcAlgebra::new(Triangulation::standard(Surface::disk(m).unwrap()))
    }

    fn labels(b: &[BasisElement], degree: usize) -> Vec<String> {
        let mut v: Vec<String> = b.iter().filter(|e| e.degree() <= degree).map(BasisElement::label).collect();
        v.sort();
        v
    }

    #[test]
    fn square_degree_one() {
        let mut alg = disk(4);
        let b = enumerate_basis(&mut alg, 1, 0).unwrap();
        assert_eq!(labels(&b, 1), ["1", "1-3", "2-4"]);
        assert!(b.iter().all(|e| e.flavor == Flavor::B));
    }

    #[test]
    fn pentagon_degree_two() {
        let mut alg = disk(5);
        let b = enumerate_basis(&mut alg, 2, 0).unwrap();
        // 1, five diagonals, and the ten compatible pairs (five squares, five fan pairs)
        assert_eq!(b.len(), 16);
    }

    #[test]
    fn kronecker_bracelet_part() {
        let mut alg = ArcAlgebra::new(Triangulation::standard(Surface::annulus(1, 1).unwrap()));
        let b = enumerate_basis(&mut alg, 2, 2).unwrap();
        let primes: Vec<String> = b.iter().filter(|e| e.flavor == Flavor::BPrime).map(BasisElement::label).collect();
        assert_eq!(primes, ["L", "L^2"]);
    }

    #[test]
    fn basis_element_expands_to_itself() {
        let mut alg = disk(6);
        let b = enumerate_basis(&mut alg, 2, 0).unwrap();
        for (i, e) in b.iter().enumerate().step_by(7) {
            let x = expand_in_basis(&e.value, &b).unwrap();
            assert_eq!(x.terms.len(), 1);
            assert_eq!(x.terms[0].index, i);
            assert!(x.terms[0].coefficient.is_one());
        }
    }

    #[test]
    fn hexagon_crossing_pair() {
        let mut alg = disk(6);
        let b = enumerate_basis(&mut alg, 2, 0).unwrap();
        let p = &alg.arc_variable(&Curve::Chord { a: 1, b: 3 }).unwrap()
            * &alg.arc_variable(&Curve::Chord { a: 2, b: 6 }).unwrap();
        let x = expand_in_basis(&p, &b).unwrap();
        let mut got: Vec<&str> = x.terms.iter().map(|t| t.label.as_str()).collect();
        got.sort();
        assert_eq!(got, ["1", "3-6"]);
        assert!(x.is_natural());
        assert!(x.part_sum(Flavor::BPrime).is_zero());
    }

    #[test]
    fn out_of_span() {
        let mut alg = disk(4);
        let b = enumerate_basis(&mut alg, 1, 0).unwrap();
        let p = LaurentPolynomial::parse("x1^3", 1).unwrap();
        assert_eq!(expand_in_basis(&p, &b), Err(SurfaceError::NotInSpan));
        let mut dup = b.clone();
        dup.push(b[1].clone());
        assert_eq!(expand_in_basis(&b[1].value, &dup), Err(SurfaceError::AmbiguousExpansion));
    }
}

//! Recognising cluster monomials.
//!
//! A candidate is tested against one cluster at a time. Cluster variables
//! with at least two terms are peeled off by exact division, and the number
//! of factors is bounded because the spread of exponents of a fixed variable
//! is additive under multiplication. What remains must be a single term, and
//! it is matched against the monomial cluster variables by solving a linear
//! system over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use super::{ExchangeGraph, SeedError};
use crate::laurent::{LaurentPolynomial, Shape};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterMonomialWitness {
    /// Node of the exchange graph whose cluster was used.
    pub node: usize,
    /// Variable indices of that cluster.
    pub variables: Vec<usize>,
    /// Exponent of each of those variables.
    pub exponents: Vec<u32>,
}

fn width(p: &LaurentPolynomial, j: usize) -> i32 {
    p.degree_bounds(j).map_or(0, |(lo, hi)| hi - lo)
}

/// Exponents `e` with `p = prod cluster[i]^e[i]`, if any.
pub fn decompose_in_cluster(p: &LaurentPolynomial, cluster: &[LaurentPolynomial]) -> Option<Vec<u32>> {
    if p.is_zero() {
        return None;
    }
    let spread: Vec<(usize, usize)> = cluster
        .iter()
        .enumerate()
        .filter(|(_, v)| v.num_terms() > 1)
        .map(|(i, v)| (i, (0..v.rank()).find(|&j| width(v, j) > 0).unwrap()))
        .collect();
    let mut exps = vec![0u32; cluster.len()];
    if peel(p.clone(), cluster, &spread, 0, &mut exps) {
        Some(exps)
    } else {
        None
    }
}

fn peel(
    rem: LaurentPolynomial,
    cluster: &[LaurentPolynomial],
    spread: &[(usize, usize)],
    at: usize,
    exps: &mut [u32],
) -> bool {
    let Some(&(i, j)) = spread.get(at) else {
        return match_monomial_part(&rem, cluster, exps);
    };
    let bound = width(&rem, j) / width(&cluster[i], j);
    let mut cur = rem;
    for e in 0..=bound {
        exps[i] = e as u32;
        if peel(cur.clone(), cluster, spread, at + 1, exps) {
            return true;
        }
        match cur.divide_exact(&cluster[i]) {
            Ok(q) => cur = q,
            Err(_) => break,
        }
    }
    exps[i] = 0;
    false
}

fn match_monomial_part(rem: &LaurentPolynomial, cluster: &[LaurentPolynomial], exps: &mut [u32]) -> bool {
    let Shape::Monomial { coefficient, monomial } = rem.classify() else {
        return false;
    };
    let singles: Vec<(usize, BigInt, Vec<i32>)> = cluster
        .iter()
        .enumerate()
        .filter_map(|(i, v)| match v.classify() {
            Shape::Monomial { coefficient, monomial } => Some((i, coefficient, monomial.exponents().to_vec())),
            _ => None,
        })
        .collect();
    let n = rem.rank();
    let k = singles.len();
    // Augmented system: columns are exponent vectors of the monomial variables.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> =
                singles.iter().map(|s| BigRational::from_integer(s.2[r].into())).collect();
            row.push(BigRational::from_integer(monomial.exponents()[r].into()));
            row
        })
        .collect();
    let pivots = linalg::row_reduce(&mut rows);
    if pivots.contains(&k) || pivots.len() < k {
        // Inconsistent, or the exponent vectors are dependent (which cannot
        // happen inside a genuine cluster).
        return false;
    }
    let mut product = BigInt::one();
    for (r, &c) in pivots.iter().enumerate() {
        let e = &rows[r][k];
        if !e.is_integer() || *e < BigRational::zero() {
            return false;
        }
        let Ok(e) = u32::try_from(e.to_integer()) else {
            return false;
        };
        exps[singles[c].0] = e;
        product *= Pow::pow(&singles[c].1, e);
    }
    product == coefficient
}

impl ExchangeGraph {
    /// Looks for a cluster in which `p` is a monomial. A negative answer on
    /// a truncated graph is inconclusive and reported as an error.
    pub fn cluster_monomial(&self, p: &LaurentPolynomial) -> Result<Option<ClusterMonomialWitness>, SeedError> {
        for (node, vars) in self.clusters.iter().enumerate() {
            let cluster: Vec<LaurentPolynomial> = vars.iter().map(|&v| self.variables[v].clone()).collect();
            if let Some(exponents) = decompose_in_cluster(p, &cluster) {
                return Ok(Some(ClusterMonomialWitness { node, variables: vars.clone(), exponents }));
            }
        }
        if self.truncated {
            Err(SeedError::TruncatedGraph)
        } else {
            Ok(None)
        }
    }

    pub fn is_cluster_monomial(&self, p: &LaurentPolynomial) -> Result<bool, SeedError> {
        self.cluster_monomial(p).map(|w| w.is_some())
    }
}

/// Cluster variables that are Laurent monomials with coefficient `±1` but
/// are not initial variables. An empty result is the expected outcome.
pub fn assert_monomial_lemma(g: &ExchangeGraph) -> Vec<String> {
    let initial = &g.nodes[g.initial].seed;
    g.variables
        .iter()
        .filter(|v| match v.classify() {
            Shape::Monomial { coefficient, .. } => {
                (coefficient == BigInt::one() || coefficient == -BigInt::one()) && !initial.cluster().contains(v)
            }
            _ => false,
        })
        .map(ToString::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{presets::*, Quiver};
    use crate::seeds::{explore, Limits, Seed};

    fn lp(s: &str, n: usize) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, n).unwrap()
    }

    #[test]
    fn a2_products() {
        let g = explore(&linear_a(2), Limits::default()).unwrap();
        assert!(g.is_cluster_monomial(&lp("x1^3*x2^2", 2)).unwrap());
        assert!(g.is_cluster_monomial(&lp("1", 2)).unwrap());
        let y = lp("(1 + x2)/x1", 2);
        assert!(g.is_cluster_monomial(&(&y * &y)).unwrap());
        assert!(g.is_cluster_monomial(&(&y * &lp("x2", 2))).unwrap());
        // x1 and (1 + x2)/x1 are exchanged, so their product is not a cluster monomial
        assert!(!g.is_cluster_monomial(&(&y * &lp("x1", 2))).unwrap());
        assert!(!g.is_cluster_monomial(&lp("2*x1", 2)).unwrap());
        assert!(!g.is_cluster_monomial(&lp("x1^-1", 2)).unwrap());
        assert!(!g.is_cluster_monomial(&lp("0", 2)).unwrap());
    }

    #[test]
    fn witness_reconstructs_the_product() {
        let g = explore(&linear_a(3), Limits::default()).unwrap();
        let s = Seed::initial(&linear_a(3)).mutate_sequence(&[0, 2, 1]).unwrap();
        let p = &(&s.cluster()[0].pow(2) * &s.cluster()[1]) * &s.cluster()[2].pow(3);
        let w = g.cluster_monomial(&p).unwrap().unwrap();
        let rebuilt = w
            .variables
            .iter()
            .zip(&w.exponents)
            .fold(LaurentPolynomial::one(3), |acc, (&v, &e)| &acc * &g.variables[v].pow(e));
        assert_eq!(rebuilt, p);
    }

    #[test]
    fn coefficient_two_variable() {
        let g = explore(&Quiver::empty(1), Limits::default()).unwrap();
        assert_eq!(g.num_variables(), 2);
        assert!(g.is_cluster_monomial(&lp("4*x1^-2", 1)).unwrap());
        assert!(!g.is_cluster_monomial(&lp("x1^-2", 1)).unwrap());
        assert!(!g.is_cluster_monomial(&lp("2", 1)).unwrap());
    }

    #[test]
    fn truncated_negative_is_inconclusive() {
        let g = explore(&kronecker(), Limits { max_depth: 2, ..Limits::default() }).unwrap();
        assert!(g.is_cluster_monomial(&lp("x1*x2", 2)).unwrap());
        assert_eq!(g.is_cluster_monomial(&lp("x1^-1", 2)), Err(SeedError::TruncatedGraph));
    }

    #[test]
    fn monomial_lemma_holds_on_small_types() {
        for q in [linear_a(2), linear_a(3), linear_a(1).disjoint_union(&linear_a(2))] {
            let g = explore(&q, Limits::default()).unwrap();
            assert!(assert_monomial_lemma(&g).is_empty());
        }
    }
}

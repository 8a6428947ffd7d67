//! Seeds and seed mutation.

mod explore;
mod monomials;

pub use explore::{explore, explore_from, reconstruct_exchange_graph, Edge, ExchangeGraph, Limits, SeedNode};
pub use monomials::{assert_monomial_lemma, ClusterMonomialWitness};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPolynomial, ParseError};
use crate::quiver::{Quiver, QuiverError, QuiverJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("exchange relation at vertex {vertex} is not exactly divisible: {detail}")]
    NonExactDivision { vertex: usize, detail: String },
    #[error("cluster has {cluster} entries but the quiver has {quiver} vertices")]
    RankMismatch { cluster: usize, quiver: usize },
    #[error("cluster variable {0} appears twice")]
    DuplicateVariable(String),
    #[error("cannot parse cluster variable {text:?}: {source}")]
    Parse { text: String, source: ParseError },
    #[error("exchange graph is truncated")]
    TruncatedGraph,
    #[error("clusters have different sizes")]
    RaggedInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    cluster: Vec<LaurentPolynomial>,
    quiver: Quiver,
}

/// Isomorphism-class key of a seed: cluster variables sorted by their
/// canonical text, and the quiver relabeled by the same sorting permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedKey {
    pub variables: Vec<String>,
    pub quiver: Quiver,
}

impl Seed {
    /// The seed `((x1, ..., xn), q)`.
    pub fn initial(quiver: &Quiver) -> Seed {
        let n = quiver.n();
        Seed {
            cluster: (0..n).map(|i| LaurentPolynomial::variable(n, i)).collect(),
            quiver: quiver.clone(),
        }
    }

    pub fn new(cluster: Vec<LaurentPolynomial>, quiver: Quiver) -> Result<Seed, SeedError> {
        if cluster.len() != quiver.n() {
            return Err(SeedError::RankMismatch { cluster: cluster.len(), quiver: quiver.n() });
        }
        for (i, v) in cluster.iter().enumerate() {
            if v.rank() != quiver.n() {
                return Err(SeedError::RankMismatch { cluster: v.rank(), quiver: quiver.n() });
            }
            if cluster[..i].contains(v) {
                return Err(SeedError::DuplicateVariable(v.to_string()));
            }
        }
        Ok(Seed { cluster, quiver })
    }

    pub fn rank(&self) -> usize {
        self.cluster.len()
    }

    pub fn cluster(&self) -> &[LaurentPolynomial] {
        &self.cluster
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Numerator of the exchange relation at `k`: the product over arrows
    /// into `k` plus the product over arrows out of `k`, an `m`-fold arrow
    /// contributing an `m`-th power.
    pub fn exchange_numerator(&self, k: usize) -> LaurentPolynomial {
        let n = self.rank();
        let mut incoming = LaurentPolynomial::one(n);
        let mut outgoing = LaurentPolynomial::one(n);
        for j in 0..n {
            let b = self.quiver.get(j, k);
            if b > 0 {
                incoming = &incoming * &self.cluster[j].pow(b as u32);
            } else if b < 0 {
                outgoing = &outgoing * &self.cluster[j].pow((-b) as u32);
            }
        }
        &incoming + &outgoing
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        let quiver = self.quiver.mutate(k)?;
        let numerator = self.exchange_numerator(k);
        let fresh = numerator
            .divide_exact(&self.cluster[k])
            .map_err(|e| SeedError::NonExactDivision { vertex: k, detail: e.to_string() })?;
        let mut cluster = self.cluster.clone();
        cluster[k] = fresh;
        Ok(Seed { cluster, quiver })
    }

    pub fn mutate_sequence(&self, vertices: &[usize]) -> Result<Seed, SeedError> {
        vertices.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }

    /// Permutation sorting the cluster by canonical text: `perm[new] = old`.
    pub fn sorting_permutation(&self) -> Vec<usize> {
        let names: Vec<String> = self.cluster.iter().map(ToString::to_string).collect();
        let mut perm: Vec<usize> = (0..self.rank()).collect();
        perm.sort_by(|&a, &b| names[a].cmp(&names[b]));
        perm
    }

    pub fn key(&self) -> SeedKey {
        let perm = self.sorting_permutation();
        SeedKey {
            variables: perm.iter().map(|&i| self.cluster[i].to_string()).collect(),
            quiver: self.quiver.permute(&perm),
        }
    }

    pub fn is_isomorphic(&self, other: &Seed) -> bool {
        self.key() == other.key()
    }

    /// Seed of the disjoint union: block-diagonal quiver, and both clusters
    /// re-expressed in the joint ambient ring (variables of `other` shifted
    /// past those of `self`).
    pub fn disjoint_union(&self, other: &Seed) -> Seed {
        let n = self.rank() + other.rank();
        let mut cluster: Vec<LaurentPolynomial> =
            self.cluster.iter().map(|v| v.embed(n, 0)).collect();
        cluster.extend(other.cluster.iter().map(|v| v.embed(n, self.rank())));
        Seed { cluster, quiver: self.quiver.disjoint_union(&other.quiver) }
    }
}

/// JSON seed: the quiver fields plus `"cluster": ["x1", "x2"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    #[serde(flatten)]
    pub quiver: QuiverJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<Vec<String>>,
}

impl TryFrom<&SeedJson> for Seed {
    type Error = SeedError;

    fn try_from(j: &SeedJson) -> Result<Seed, SeedError> {
        let quiver = Quiver::try_from(&j.quiver)?;
        match &j.cluster {
            None => Ok(Seed::initial(&quiver)),
            Some(texts) => {
                let cluster = texts
                    .iter()
                    .map(|t| {
                        LaurentPolynomial::parse(t, quiver.n())
                            .map_err(|source| SeedError::Parse { text: t.clone(), source })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Seed::new(cluster, quiver)
            }
        }
    }
}

impl From<&Seed> for SeedJson {
    fn from(s: &Seed) -> SeedJson {
        SeedJson {
            quiver: QuiverJson::from(&s.quiver),
            cluster: Some(s.cluster.iter().map(ToString::to_string).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::presets::*;

    fn lp(s: &str, n: usize) -> LaurentPolynomial {
        LaurentPolynomial::parse(s, n).unwrap()
    }

    #[test]
    fn initial_seeds() {
        let s = Seed::initial(&Quiver::empty(1));
        assert_eq!(s.cluster(), &[lp("x1", 1)]);
        let s = Seed::initial(&linear_a(2));
        assert_eq!(s.cluster(), &[lp("x1", 2), lp("x2", 2)]);
        assert_eq!(Seed::initial(&Quiver::empty(0)).rank(), 0);
    }

    #[test]
    fn rank_one_exchange() {
        let s = Seed::initial(&Quiver::empty(1)).mutate(0).unwrap();
        assert_eq!(s.cluster()[0], lp("2/x1", 1));
        assert_eq!(s.cluster()[0].to_string(), "2*x1^-1");
    }

    #[test]
    fn a2_exchange() {
        let s = Seed::initial(&linear_a(2)).mutate(0).unwrap();
        assert_eq!(s.cluster()[0], lp("(1 + x2)/x1", 2));
        assert_eq!(s.cluster()[1], lp("x2", 2));
    }

    #[test]
    fn kronecker_exchange_uses_multiplicity() {
        let s = Seed::initial(&kronecker()).mutate(0).unwrap();
        // (x2^2 + 1) / x1, expanded by hand
        let expected = LaurentPolynomial::from_terms(2, [(1, vec![-1, 0]), (1, vec![-1, 2])]);
        assert_eq!(s.cluster()[0], expected);
    }

    #[test]
    fn mutation_is_an_involution() {
        let s = Seed::initial(&markov()).mutate_sequence(&[0, 1, 2]).unwrap();
        for k in 0..3 {
            assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s);
        }
    }

    #[test]
    fn keys_ignore_ordering() {
        let s = Seed::initial(&linear_a(3)).mutate(1).unwrap();
        let perm = [2, 0, 1];
        let relabeled = Seed::new(
            perm.iter().map(|&i| s.cluster()[i].clone()).collect(),
            s.quiver().permute(&perm),
        )
        .unwrap();
        assert_eq!(s.key(), relabeled.key());
        assert_ne!(s.key(), Seed::initial(&linear_a(3)).key());
    }

    #[test]
    fn seed_validation() {
        let q = linear_a(2);
        assert!(matches!(
            Seed::new(vec![lp("x1", 2), lp("x1", 2)], q.clone()),
            Err(SeedError::DuplicateVariable(_))
        ));
        assert!(matches!(Seed::new(vec![lp("x1", 2)], q), Err(SeedError::RankMismatch { .. })));
    }

    #[test]
    fn disjoint_union_of_a1_and_a1() {
        let a1 = Seed::initial(&Quiver::empty(1));
        let u = a1.disjoint_union(&a1);
        assert_eq!(u.rank(), 2);
        assert_eq!(u.quiver().arrow_count(), 0);
        assert_eq!(u, Seed::initial(&Quiver::empty(2)));
    }

    #[test]
    fn seed_json_round_trip() {
        let j: SeedJson = serde_json::from_str(
            r#"{"n": 2, "arrows": [[2,1,1]], "cluster": ["(1 + x2)/x1", "x2"]}"#,
        )
        .unwrap();
        let s = Seed::try_from(&j).unwrap();
        assert_eq!(s, Seed::initial(&linear_a(2)).mutate(0).unwrap());
        let back = serde_json::to_string(&SeedJson::from(&s)).unwrap();
        assert_eq!(back, r#"{"n":2,"arrows":[[2,1,1]],"cluster":["x1^-1 + x1^-1*x2","x2"]}"#);
    }
}

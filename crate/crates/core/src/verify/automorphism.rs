use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{compatibility_relation, complete, VerifyError};
use crate::seeds::ExchangeGraph;

/// Above this many variables the brute-force group search refuses to run.
const MAX_SEARCH_VARIABLES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismCheck {
    pub holds: bool,
    /// The smallest cluster whose image is not a cluster, or the endpoints
    /// of an edge whose image is not an edge.
    pub witness: Option<Vec<usize>>,
}

/// Checks that `sigma` (variable `i` goes to `sigma[i]`) sends clusters to
/// clusters and mutation edges to mutation edges.
pub fn check_cluster_automorphism(g: &ExchangeGraph, sigma: &[usize]) -> Result<AutomorphismCheck, VerifyError> {
    complete(g)?;
    let n = g.num_variables();
    if sigma.len() != n {
        return Err(VerifyError::NotABijection(format!("{} images for {n} variables", sigma.len())));
    }
    let mut hit = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut hit[s], true) {
            return Err(VerifyError::NotABijection(format!("image {s} is out of range or repeated")));
        }
    }
    let clusters: std::collections::HashMap<&Vec<usize>, usize> = g.clusters.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let image = |c: &[usize]| {
        let mut v: Vec<usize> = c.iter().map(|&i| sigma[i]).collect();
        v.sort_unstable();
        v
    };
    if let Some(c) = g.distinct_clusters().into_iter().find(|c| !clusters.contains_key(&image(c))) {
        return Ok(AutomorphismCheck { holds: false, witness: Some(c) });
    }
    let node_image: Vec<usize> = g.clusters.iter().map(|c| clusters[&image(c)]).collect();
    let edges: HashSet<(usize, usize)> =
        g.edges.iter().map(|e| (e.source.min(e.target), e.source.max(e.target))).collect();
    for &(a, b) in &edges {
        let (x, y) = (node_image[a], node_image[b]);
        if !edges.contains(&(x.min(y), x.max(y))) {
            return Ok(AutomorphismCheck { holds: false, witness: Some(vec![a, b]) });
        }
    }
    Ok(AutomorphismCheck { holds: true, witness: None })
}

/// Every permutation of the cluster variables that passes
/// [`check_cluster_automorphism`], in lexicographic order. The search only
/// extends partial maps that keep compatible pairs compatible.
pub fn cluster_automorphisms(g: &ExchangeGraph) -> Result<Vec<Vec<usize>>, VerifyError> {
    let compat = compatibility_relation(g)?;
    let n = g.num_variables();
    if n > MAX_SEARCH_VARIABLES {
        return Err(VerifyError::LimitExceeded(format!("automorphism search over {n} variables")));
    }
    let mut out = Vec::new();
    let mut sigma = Vec::with_capacity(n);
    let mut used = BTreeSet::new();
    extend(g, &compat, &mut sigma, &mut used, &mut out)?;
    Ok(out)
}

fn extend(
    g: &ExchangeGraph,
    compat: &super::Compatibility,
    sigma: &mut Vec<usize>,
    used: &mut BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), VerifyError> {
    let n = g.num_variables();
    let i = sigma.len();
    if i == n {
        if check_cluster_automorphism(g, sigma)?.holds {
            out.push(sigma.clone());
        }
        return Ok(());
    }
    for t in 0..n {
        if used.contains(&t) || (0..i).any(|j| compat.compatible(i, j) != compat.compatible(t, sigma[j])) {
            continue;
        }
        sigma.push(t);
        used.insert(t);
        extend(g, compat, sigma, used, out)?;
        used.remove(&t);
        sigma.pop();
    }
    Ok(())
}

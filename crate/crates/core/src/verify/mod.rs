//! Mechanical checks of unistructurality on complete exchange graphs.
//!
//! Two cluster variables are *compatible* when some cluster contains both.
//! The checks here confirm, for a finite exchange graph, that the clusters
//! are exactly the maximal compatible sets, that a product of incompatible
//! variables is never a cluster monomial (and, on a surface, expands in the
//! bracelet basis with a nonzero arc part), that the exchange graph can be
//! rebuilt from the clusters alone, and that every other `n`-subset of
//! variables contains an incompatible pair.

mod automorphism;
mod report;

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use num_traits::{One, Signed};
use serde_json::json;
use thiserror::Error;

pub use automorphism::{check_cluster_automorphism, cluster_automorphisms, AutomorphismCheck};
pub use report::{Check, Status, VerificationReport};
use report::{finish, timed, Outcome};

use crate::laurent::{LaurentPolynomial, Shape};
use crate::quiver::Quiver;
use crate::seeds::{explore, reconstruct_exchange_graph, ExchangeGraph, Limits, SeedError};
use crate::surface::{
    enumerate_basis, expand_in_basis, internal_arcs, resolve_multicurve, ArcAlgebra, BasisElement, Curve, Flavor,
    Multicurve, Surface, SurfaceError, Triangulation,
};

/// Cap on the number of `n`-subsets screened by [`verify_unistructural_finite`].
pub const SUBSET_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("the exchange graph is truncated; the check needs every seed")]
    TruncatedGraph,
    #[error("not a bijection on cluster variables: {0}")]
    NotABijection(String),
    #[error("exploration limit exceeded for {0}")]
    LimitExceeded(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn complete(g: &ExchangeGraph) -> Result<(), VerifyError> {
    if g.truncated {
        Err(VerifyError::TruncatedGraph)
    } else {
        Ok(())
    }
}

/// Compatibility of cluster variables, indexed like `g.variables`.
/// Every variable is compatible with itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    matrix: Vec<Vec<bool>>,
}

impl Compatibility {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn compatible(&self, i: usize, j: usize) -> bool {
        self.matrix[i][j]
    }

    /// Pairs `i < j` that share no cluster.
    pub fn incompatible_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !self.matrix[i][j]).collect()
    }

    /// Maximal sets of pairwise compatible variables, each sorted.
    pub fn maximal_cliques(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let all: BTreeSet<usize> = (0..self.len()).collect();
        self.bron_kerbosch(&mut Vec::new(), all, BTreeSet::new(), &mut out);
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, p: BTreeSet<usize>, mut x: BTreeSet<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.insert(c);
            return;
        }
        let adjacent = |u: usize, v: usize| u != v && self.matrix[u][v];
        let pivot = p.iter().chain(&x).copied().max_by_key(|&u| p.iter().filter(|&&v| adjacent(u, v)).count());
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| pivot.is_none_or(|u| !adjacent(u, v))).collect();
        let mut p = p;
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adjacent(v, w)).collect();
            let nx = x.iter().copied().filter(|&w| adjacent(v, w)).collect();
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
}

pub fn compatibility_relation(g: &ExchangeGraph) -> Result<Compatibility, VerifyError> {
    complete(g)?;
    let n = g.num_variables();
    let mut matrix = vec![vec![false; n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = true;
    }
    for c in &g.clusters {
        for &u in c {
            for &v in c {
                matrix[u][v] = true;
            }
        }
    }
    Ok(Compatibility { matrix })
}

/// A surface behind an exchange graph: the arc algebra of the triangulation
/// whose quiver seeded the graph, a truncated basis, and the arc of each
/// graph variable where one was found.
#[derive(Clone, Debug)]
pub struct SurfaceContext {
    pub algebra: ArcAlgebra,
    pub basis: Vec<BasisElement>,
    pub arcs: Vec<Option<Curve>>,
}

impl SurfaceContext {
    /// `g` must have been explored from the quiver of `t`, with `t`'s arcs
    /// as the initial cluster. Arcs are matched up to winding `winding` on
    /// an annulus; the basis has degree 2.
    pub fn new(t: Triangulation, g: &ExchangeGraph, winding: u32) -> Result<SurfaceContext, VerifyError> {
        let s = t.surface();
        let mut algebra = ArcAlgebra::new(t);
        let basis = enumerate_basis(&mut algebra, 2, winding)?;
        let mut arcs = vec![None; g.num_variables()];
        for c in basis.iter().filter(|b| b.arcs.len() == 1 && b.bracelet.is_none()).map(|b| b.arcs[0]) {
            if let Some(i) = g.variable_index(&algebra.arc_variable(&c)?) {
                arcs[i] = Some(c);
            }
        }
        if let Surface::Disk { .. } = s {
            if let Some(i) = arcs.iter().position(Option::is_none) {
                return Err(SurfaceError::Inconsistent(format!("variable {} has no arc", g.variables[i])).into());
            }
        }
        Ok(SurfaceContext { algebra, basis, arcs })
    }
}

/// Result of expanding a product of two incompatible elements in the basis.
enum ProductVerdict {
    Good,
    Bad(String),
    OutOfRange,
}

fn check_product_expansion(p: &LaurentPolynomial, basis: &[BasisElement]) -> Result<ProductVerdict, SurfaceError> {
    match expand_in_basis(p, basis) {
        Ok(x) if !x.is_natural() => Ok(ProductVerdict::Bad("coefficient outside the naturals".into())),
        Ok(x) if !x.part_sum(Flavor::B).is_positive() => Ok(ProductVerdict::Bad("empty arc part".into())),
        Ok(_) => Ok(ProductVerdict::Good),
        Err(SurfaceError::NotInSpan) => Ok(ProductVerdict::OutOfRange),
        Err(e) => Err(e),
    }
}

/// Expands `x(a) * x(b)` for every crossing pair from `arcs` and checks
/// that all coefficients are natural numbers with a nonzero arc part.
pub fn verify_arc_products(alg: &mut ArcAlgebra, arcs: &[Curve], basis: &[BasisElement]) -> Result<Check, VerifyError> {
    let s = alg.surface();
    let mut pairs = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            if s.arcs_cross(a, b)? > 0 {
                pairs.push((*a, *b, &alg.arc_variable(a)? * &alg.arc_variable(b)?));
            }
        }
    }
    Ok(timed("arc_products", || {
        let mut skipped = 0;
        for (a, b, p) in &pairs {
            match check_product_expansion(p, basis) {
                Ok(ProductVerdict::Good) => {}
                Ok(ProductVerdict::OutOfRange) => skipped += 1,
                Ok(ProductVerdict::Bad(why)) => {
                    return Outcome::fail(format!("{a} * {b}: {why}"), json!([a.to_string(), b.to_string()]))
                }
                Err(e) => return Outcome::fail(e.to_string(), json!([a.to_string(), b.to_string()])),
            }
        }
        if skipped == pairs.len() && skipped > 0 {
            Outcome::skipped("no product lies in the span of the truncated basis")
        } else {
            Outcome::pass(format!("{} crossing pairs, {skipped} out of basis range", pairs.len()))
        }
    }))
}

/// Checks `x(a) x(b) = x(M1) + x(M2)` at the first crossing of every
/// crossing pair from `arcs`, and that the full resolution of the pair sums
/// to the same product.
pub fn verify_skein_identities(alg: &mut ArcAlgebra, arcs: &[Curve]) -> Result<Check, VerifyError> {
    let s = alg.surface();
    let start = Instant::now();
    let mut count = 0;
    let mut failure = None;
    'pairs: for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            if s.arcs_cross(a, b)? == 0 {
                continue;
            }
            count += 1;
            let check = alg.skein_identity_check(a, b)?;
            let mut total = LaurentPolynomial::zero(alg.rank());
            for leaf in resolve_multicurve(&s, &Multicurve::new(vec![*a, *b]))? {
                total = &total + &alg.multicurve_value(&leaf)?;
            }
            let why = match (check.signs, total == check.product) {
                (Some((1, 1)), true) => continue,
                (Some(signs), true) => format!("smoothing holds only with signs {signs:?}"),
                (None, _) => format!("no signs make {} = {} + {}", check.product, check.first_value, check.second_value),
                (_, false) => "full resolution does not sum to the product".to_string(),
            };
            failure = Some(Outcome::fail(format!("{a} * {b}: {why}"), json!([a.to_string(), b.to_string()])));
            break 'pairs;
        }
    }
    let o = failure.unwrap_or_else(|| Outcome::pass(format!("{count} crossing pairs")));
    Ok(finish("skein_identities", start, o))
}

/// The essential loop of an annulus agrees across every bridge pair that
/// determines it, and `L^1 .. L^max` are positive and satisfy
/// `b_1 b_m = b_(m+1) + b_(m-1)` with `b_0 = 2`.
pub fn verify_bracelets(alg: &mut ArcAlgebra, max: u32) -> Result<Check, VerifyError> {
    let start = Instant::now();
    let bound = 3 + match alg.surface() {
        Surface::Annulus { p, q } => i64::from(p.max(q)),
        Surface::Disk { .. } => return Ok(timed("bracelets", || Outcome::skipped("a disk has no essential loop"))),
    };
    let candidates = alg.loop_candidates(bound)?;
    let b1 = alg.loop_polynomial()?;
    let mut values = vec![alg.bracelet_polynomial(0)?];
    for m in 1..=max + 1 {
        values.push(alg.bracelet_polynomial(m)?);
    }
    let outcome = (|| {
        if let Some((a, b, v)) = candidates.iter().find(|(_, _, v)| *v != b1) {
            return Outcome::fail(format!("pair {a}, {b} gives {v} instead of {b1}"), json!([a.to_string(), b.to_string()]));
        }
        for m in 1..=max as usize {
            if !values[m].all_coefficients_positive() {
                return Outcome::fail(format!("L^{m} has a nonpositive coefficient"), json!(values[m].to_string()));
            }
            if &b1 * &values[m] != &values[m + 1] + &values[m - 1] {
                return Outcome::fail(format!("recurrence fails at m = {m}"), json!(m));
            }
        }
        Outcome::pass(format!("{} bridge pairs agree on L = {b1}; L^1..L^{max} positive", candidates.len()))
    })();
    Ok(finish("bracelets", start, outcome))
}

/// Skein identities and incompatible products on the arcs of winding at
/// most `winding`, plus bracelets on an annulus.
pub fn verify_surface(t: Triangulation, winding: u32) -> Result<VerificationReport, VerifyError> {
    let s = t.surface();
    let mut alg = ArcAlgebra::new(t);
    let arcs = internal_arcs(s, winding);
    let mut report = VerificationReport::new(format!("skein relations on {} arcs", arcs.len()));
    report.push(verify_skein_identities(&mut alg, &arcs)?);
    let basis = enumerate_basis(&mut alg, 2, winding)?;
    report.push(verify_arc_products(&mut alg, &arcs, &basis)?);
    if let Surface::Annulus { .. } = s {
        report.push(verify_bracelets(&mut alg, 4)?);
    }
    Ok(report)
}

/// Searches the mutation class of `q` (up to isomorphism, at most `cap`
/// quivers) for one with a multiple arrow. Finding one shows that the
/// cluster algebra has infinitely many seeds, since a skew-symmetric
/// quiver is of finite type exactly when no quiver in its class has a
/// multiple arrow. `None` means none was found within the cap.
pub fn multiple_arrow_in_class(q: &Quiver, cap: usize) -> Result<Option<Quiver>, VerifyError> {
    let has_multiple = |q: &Quiver| q.arrows().iter().any(|&(_, _, m)| m > 1);
    let mut seen = HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let start = q.canonical_form().map_err(SeedError::from)?.0;
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        if has_multiple(&cur) {
            return Ok(Some(cur));
        }
        for k in 0..cur.n() {
            let next = cur.mutate(k).map_err(SeedError::from)?.canonical_form().map_err(SeedError::from)?.0;
            if seen.len() < cap && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

pub fn verify_clusters_maximal(g: &ExchangeGraph) -> Result<VerificationReport, VerifyError> {
    let compat = compatibility_relation(g)?;
    let mut report = VerificationReport::new("clusters are the maximal compatible sets");
    report.push(timed("clusters_maximal", || clusters_maximal(g, &compat)));
    Ok(report)
}

fn names(g: &ExchangeGraph, set: &[usize]) -> serde_json::Value {
    json!(set.iter().map(|&i| g.variables[i].to_string()).collect::<Vec<_>>())
}

fn clusters_maximal(g: &ExchangeGraph, compat: &Compatibility) -> Outcome {
    let cliques = compat.maximal_cliques();
    let clusters: BTreeSet<Vec<usize>> = g.clusters.iter().cloned().collect();
    if let Some(c) = cliques.iter().find(|c| c.len() != g.rank || !clusters.contains(*c)) {
        return Outcome::fail(format!("maximal compatible set of size {} is not a cluster", c.len()), names(g, c));
    }
    if let Some(c) = clusters.iter().find(|c| !cliques.contains(*c)) {
        return Outcome::fail("cluster is not a maximal compatible set", names(g, c));
    }
    Outcome::pass(format!("{} maximal compatible sets, all clusters of size {}", cliques.len(), g.rank))
}

pub fn verify_incompatible_products(
    g: &ExchangeGraph,
    ctx: Option<&mut SurfaceContext>,
) -> Result<VerificationReport, VerifyError> {
    let compat = compatibility_relation(g)?;
    let mut report = VerificationReport::new("products of incompatible variables");
    report.push(timed("incompatible_products", || incompatible_products(g, &compat, ctx.as_deref())));
    if let Some(ctx) = ctx {
        report.push(timed("compatibility_matches_crossings", || compatibility_matches_crossings(g, &compat, ctx)));
    }
    Ok(report)
}

fn incompatible_products(g: &ExchangeGraph, compat: &Compatibility, ctx: Option<&SurfaceContext>) -> Outcome {
    let pairs = compat.incompatible_pairs();
    let mut out_of_range = 0;
    for &(i, j) in &pairs {
        let p = &g.variables[i] * &g.variables[j];
        let witness = || names(g, &[i, j]);
        // a unit monomial in the initial variables; a constant such as the
        // product 2 of the two variables of rank one is allowed
        if let Shape::Monomial { coefficient, .. } = p.classify() {
            if coefficient.magnitude().is_one() {
                return Outcome::fail("product is a Laurent monomial with coefficient 1 or -1", witness());
            }
        }
        match g.cluster_monomial(&p) {
            Ok(None) => {}
            Ok(Some(w)) => return Outcome::fail(format!("product is a cluster monomial in seed {}", w.node), witness()),
            Err(e) => return Outcome::fail(e.to_string(), witness()),
        }
        if let Some(ctx) = ctx {
            match check_product_expansion(&p, &ctx.basis) {
                Ok(ProductVerdict::Good) => {}
                Ok(ProductVerdict::OutOfRange) => out_of_range += 1,
                Ok(ProductVerdict::Bad(why)) => return Outcome::fail(why, witness()),
                Err(e) => return Outcome::fail(e.to_string(), witness()),
            }
        }
    }
    let basis = match ctx {
        Some(_) if out_of_range > 0 => format!("; {out_of_range} products beyond the truncated basis"),
        Some(_) => "; every basis expansion natural with nonzero arc part".into(),
        None => String::new(),
    };
    Outcome::pass(format!("{} incompatible pairs, none a cluster monomial{basis}", pairs.len()))
}

fn compatibility_matches_crossings(g: &ExchangeGraph, compat: &Compatibility, ctx: &SurfaceContext) -> Outcome {
    let s = ctx.algebra.surface();
    let mut compared = 0;
    for i in 0..compat.len() {
        for j in i + 1..compat.len() {
            let (Some(a), Some(b)) = (ctx.arcs[i], ctx.arcs[j]) else { continue };
            compared += 1;
            let crossing = s.arcs_cross(&a, &b).map(|k| k > 0).unwrap_or(true);
            if crossing == compat.compatible(i, j) {
                return Outcome::fail(format!("arcs {a} and {b} disagree with cluster co-occurrence"), names(g, &[i, j]));
            }
        }
    }
    Outcome::pass(format!("{compared} pairs agree"))
}

pub fn verify_exchange_graph_reconstruction(g: &ExchangeGraph) -> Result<VerificationReport, VerifyError> {
    complete(g)?;
    let mut report = VerificationReport::new("exchange graph from clusters");
    report.push(timed("exchange_graph_reconstruction", || reconstruction(g)));
    Ok(report)
}

fn reconstruction(g: &ExchangeGraph) -> Outcome {
    let distinct: HashSet<&Vec<usize>> = g.clusters.iter().collect();
    if distinct.len() != g.clusters.len() {
        let mut seen = HashSet::new();
        let dup = g.clusters.iter().find(|c| !seen.insert(*c)).expect("a repeated cluster");
        return Outcome::fail("a cluster appears in two seeds", names(g, dup));
    }
    let rebuilt: BTreeSet<(usize, usize)> = match reconstruct_exchange_graph(&g.clusters) {
        Ok(e) => e.into_iter().collect(),
        Err(e) => return Outcome::fail(e.to_string(), json!(null)),
    };
    let actual: BTreeSet<(usize, usize)> =
        g.edges.iter().map(|e| (e.source.min(e.target), e.source.max(e.target))).collect();
    if let Some(&(a, b)) = rebuilt.symmetric_difference(&actual).next() {
        let side = if actual.contains(&(a, b)) { "mutation edge missing from" } else { "extra edge in" };
        return Outcome::fail(
            format!("{side} the reconstructed graph"),
            json!({"seeds": [a, b], "clusters": [names(g, &g.clusters[a]), names(g, &g.clusters[b])]}),
        );
    }
    Outcome::pass(format!("{} seeds, {} edges recovered", g.num_seeds(), actual.len()))
}

/// Explores `q1`, `q2` and their disjoint union and checks that the union's
/// variables and clusters are exactly those built from the components.
pub fn verify_disjoint_union_property(q1: &Quiver, q2: &Quiver, limits: Limits) -> Result<VerificationReport, VerifyError> {
    let union = q1.disjoint_union(q2);
    let (g1, (g2, gu)) = rayon::join(|| explore(q1, limits), || rayon::join(|| explore(q2, limits), || explore(&union, limits)));
    let (g1, g2, gu) = (g1?, g2?, gu?);
    for (g, label) in [(&g1, "first component"), (&g2, "second component"), (&gu, "union")] {
        if g.truncated {
            return Err(VerifyError::LimitExceeded(label.into()));
        }
    }
    let (n1, n) = (q1.n(), union.n());
    let embedded = |g: &ExchangeGraph, offset: usize| -> Vec<String> {
        g.variables.iter().map(|v| v.embed(n, offset).to_string()).collect()
    };
    let (v1, v2) = (embedded(&g1, 0), embedded(&g2, n1));

    let mut report = VerificationReport::new(format!("disjoint union of quivers on {} and {} vertices", n1, q2.n()));
    report.push(timed("union_variables", || {
        let expected: BTreeSet<&String> = v1.iter().chain(&v2).collect();
        let actual: Vec<String> = gu.variables.iter().map(ToString::to_string).collect();
        if let Some(v) = gu.variables.iter().find(|v| !v.supported_in(0..n1) && !v.supported_in(n1..n)) {
            return Outcome::fail("variable mixes both blocks", json!(v.to_string()));
        }
        if let Some(v) = actual.iter().find(|v| !expected.contains(v)) {
            return Outcome::fail("variable of the union comes from neither component", json!(v));
        }
        if let Some(v) = expected.iter().find(|v| !actual.contains(v)) {
            return Outcome::fail("component variable missing from the union", json!(v));
        }
        Outcome::pass(format!("{} = {} + {} variables", actual.len(), v1.len(), v2.len()))
    }));
    report.push(timed("union_clusters", || {
        let as_text = |g: &ExchangeGraph, c: &[usize]| -> BTreeSet<String> {
            c.iter().map(|&i| g.variables[i].to_string()).collect()
        };
        let mut expected = BTreeSet::new();
        for c1 in g1.distinct_clusters() {
            for c2 in g2.distinct_clusters() {
                let set: BTreeSet<String> = c1.iter().map(|&i| v1[i].clone()).chain(c2.iter().map(|&i| v2[i].clone())).collect();
                expected.insert(set);
            }
        }
        let actual: BTreeSet<BTreeSet<String>> = gu.distinct_clusters().iter().map(|c| as_text(&gu, c)).collect();
        if let Some(c) = actual.symmetric_difference(&expected).next() {
            let which = if actual.contains(c) { "cluster of the union is not a concatenation" } else { "concatenation is not a cluster" };
            return Outcome::fail(which, json!(c));
        }
        Outcome::pass(format!("{} = {} x {} clusters", actual.len(), g1.distinct_clusters().len(), g2.distinct_clusters().len()))
    }));
    Ok(report)
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n) {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    if k > n {
        0
    } else {
        acc
    }
}

fn screen_subsets(g: &ExchangeGraph, compat: &Compatibility) -> Outcome {
    let (total, k) = (g.num_variables(), g.rank);
    let count = binomial(total, k);
    if count > SUBSET_CAP {
        return Outcome::skipped(format!("{count} subsets exceed the cap of {SUBSET_CAP}"));
    }
    let clusters: HashSet<&Vec<usize>> = g.clusters.iter().collect();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut screened = 0u64;
    loop {
        if !clusters.contains(&subset) {
            screened += 1;
            let has_incompatible = subset
                .iter()
                .enumerate()
                .any(|(a, &u)| subset[a + 1..].iter().any(|&v| !compat.compatible(u, v)));
            if !has_incompatible {
                return Outcome::fail("pairwise compatible subset that is not a cluster", names(g, &subset));
            }
        }
        // next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| subset[i] < total - k + i) else { break };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Outcome::pass(format!("{screened} non-cluster subsets each contain an incompatible pair"))
}

/// All checks together, run in parallel and merged by name.
pub fn verify_unistructural_finite(
    g: &ExchangeGraph,
    ctx: Option<&mut SurfaceContext>,
) -> Result<VerificationReport, VerifyError> {
    let compat = compatibility_relation(g)?;
    let ((maximal, subsets), (products, rebuilt)) = rayon::join(
        || rayon::join(|| timed("clusters_maximal", || clusters_maximal(g, &compat)), || timed("non_cluster_subsets", || screen_subsets(g, &compat))),
        || rayon::join(|| verify_incompatible_products(g, ctx), || verify_exchange_graph_reconstruction(g)),
    );
    let mut report = VerificationReport::new(format!(
        "unistructurality of a rank {} exchange graph with {} seeds and {} variables",
        g.rank,
        g.num_seeds(),
        g.num_variables()
    ));
    report.push(maximal);
    report.push(subsets);
    report.merge(products?);
    report.merge(rebuilt?);
    Ok(report)
}

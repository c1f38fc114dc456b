//! Degree of subsethood, implication and similarity.

use std::cmp::Ordering;

use super::combine::{fuzzy_intersection, unification, IntersectionPath};
use super::{common_projection, CommonProjection, RelationReport};
use crate::concept::Concept;
use crate::error::Result;
use crate::measure::{concept_size, contextual_size, MeasureContext};
use crate::metric::WeightSpec;
use crate::oracle;

/// Which concept supplies `c` and `W` when sizes are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContextMode {
    /// The second argument's parameters.
    #[default]
    Second,
    /// The first argument's parameters.
    First,
    /// The second argument's `c` with uniform weights.
    Uniform,
}

/// Numerator of the subsethood quotient when the two cores are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisjointFallback {
    /// Analytic measure of the fuzzified cuboid at the peak of `min(μ1, μ2)`.
    #[default]
    MaxMin,
    /// Monte-Carlo integral of `min(μ1, μ2)`.
    MonteCarloMin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsethoodOptions {
    pub context: ContextMode,
    pub fallback: DisjointFallback,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for SubsethoodOptions {
    fn default() -> Self {
        Self {
            context: ContextMode::Second,
            fallback: DisjointFallback::MaxMin,
            mc_samples: 1_000_000,
            seed: 0x5EED,
        }
    }
}

/// How `M(S̃1 ∪ S̃2)` is obtained for the Jaccard similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnionMode {
    /// Measure of the unified concept (both cores, `max μ0`).
    #[default]
    Unification,
    /// `M1 + M2 − M(∩)` under the shared parameters.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JaccardOptions {
    pub union: UnionMode,
}

fn context_for(p1: &Concept, p2: &Concept, mode: ContextMode) -> MeasureContext {
    let structure = p2.structure().clone();
    match mode {
        ContextMode::Second => MeasureContext::of(p2),
        ContextMode::First => MeasureContext {
            c: p1.c(),
            weights: p1.weights().clone(),
            structure,
        },
        ContextMode::Uniform => MeasureContext {
            c: p2.c(),
            weights: WeightSpec::uniform(&structure),
            structure,
        },
    }
}

/// `Sub(S̃1, S̃2) = M(S̃1 ∩ S̃2) / M(S̃1)` with the second concept's parameters.
pub fn subsethood_degree(s1: &Concept, s2: &Concept) -> Result<RelationReport> {
    subsethood_degree_with(s1, s2, &SubsethoodOptions::default())
}

pub fn subsethood_degree_with(
    s1: &Concept,
    s2: &Concept,
    opts: &SubsethoodOptions,
) -> Result<RelationReport> {
    let CommonProjection::Shared {
        structure,
        concepts,
    } = common_projection(&[s1, s2])?
    else {
        return Ok(RelationReport::disjoint());
    };
    let (p1, p2) = (&concepts[0], &concepts[1]);
    let ctx = context_for(p1, p2, opts.context);
    let inter = fuzzy_intersection(p1, p2, ctx.c, &ctx.weights)?;
    let (numerator, path) = match (inter.path, opts.fallback) {
        (IntersectionPath::Separated, DisjointFallback::MonteCarloMin) => {
            let est = oracle::mc_min_measure(p1, p2, &ctx, opts.mc_samples, opts.seed)?;
            (est.value, IntersectionPath::MonteCarlo)
        }
        _ => (concept_size(&inter.concept), inter.path),
    };
    let denominator = contextual_size(p1, &ctx)?;
    Ok(RelationReport {
        value: (numerator / denominator).clamp(0.0, 1.0),
        shared_domains: structure.domain_names().map(str::to_string).collect(),
        context: Some(ctx),
        path: Some(path),
        numerator,
        denominator,
    })
}

/// `Impl(S̃1, S̃2)`, the degree to which `S̃1` implies `S̃2`.
pub fn implication(s1: &Concept, s2: &Concept) -> Result<RelationReport> {
    subsethood_degree(s1, s2)
}

/// Asymmetric similarity: the degree of subsethood of `S̃1` in `S̃2`.
pub fn similarity_sub(s1: &Concept, s2: &Concept) -> Result<RelationReport> {
    subsethood_degree(s1, s2)
}

/// Jaccard similarity `M(S̃1 ∩ S̃2) / M(S̃1 ∪ S̃2)` with `c = min(c1, c2)` and
/// the mean of both weight sets.
pub fn similarity_jaccard(s1: &Concept, s2: &Concept) -> Result<RelationReport> {
    similarity_jaccard_with(s1, s2, &JaccardOptions::default())
}

pub fn similarity_jaccard_with(
    s1: &Concept,
    s2: &Concept,
    opts: &JaccardOptions,
) -> Result<RelationReport> {
    // Evaluate in a fixed argument order so the value is exactly symmetric.
    let (a, b) = if canonical_cmp(s1, s2) == Ordering::Greater {
        (s2, s1)
    } else {
        (s1, s2)
    };
    let CommonProjection::Shared {
        structure,
        concepts,
    } = common_projection(&[a, b])?
    else {
        return Ok(RelationReport::disjoint());
    };
    let (pa, pb) = (&concepts[0], &concepts[1]);
    let c = pa.c().min(pb.c());
    let weights = pa.weights().interpolate(pb.weights(), 0.5);
    let ctx = MeasureContext {
        c,
        weights: weights.clone(),
        structure: structure.clone(),
    };
    let inter = fuzzy_intersection(pa, pb, c, &weights)?;
    let numerator = concept_size(&inter.concept);
    let denominator = match opts.union {
        UnionMode::Unification => concept_size(&unification(pa, pb, c, &weights)?),
        UnionMode::Identity => contextual_size(pa, &ctx)? + contextual_size(pb, &ctx)? - numerator,
    };
    Ok(RelationReport {
        value: (numerator / denominator).clamp(0.0, 1.0),
        shared_domains: structure.domain_names().map(str::to_string).collect(),
        context: Some(ctx),
        path: Some(inter.path),
        numerator,
        denominator,
    })
}

/// A total order on concepts by their defining numbers.
fn canonical_cmp(a: &Concept, b: &Concept) -> Ordering {
    let names = |c: &Concept| -> Vec<String> {
        c.structure()
            .dimension_names()
            .map(str::to_string)
            .collect()
    };
    names(a)
        .cmp(&names(b))
        .then_with(|| cmp_slices(&canonical_key(a), &canonical_key(b)))
}

fn canonical_key(c: &Concept) -> Vec<f64> {
    let mut key = vec![c.mu0(), c.c()];
    key.extend_from_slice(c.weights().domain_weights());
    key.extend_from_slice(c.weights().dimension_weights());
    for cub in c.core().cuboids() {
        key.extend_from_slice(cub.lower());
        key.extend_from_slice(cub.upper());
    }
    key
}

fn cmp_slices(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

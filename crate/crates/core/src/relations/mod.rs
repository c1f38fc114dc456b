//! Relations between concepts: subsethood, implication, similarity and
//! betweenness.
//!
//! Every relation first projects its arguments onto the domains they share.
//! Sizes are then compared under a single sensitivity and weight set (the
//! measure context), since sizes measured with different metrics are not
//! comparable.

mod betweenness;
mod combine;
mod degree;

pub use betweenness::{
    betweenness, betweenness_crisp, betweenness_integral, betweenness_soft, BetweennessConfig,
    BetweennessPath, BetweennessReport, BetweennessWeights, CRISP_TOLERANCE,
};
pub use combine::{fuzzy_intersection, unification, Intersection, IntersectionPath};
pub use degree::{
    implication, similarity_jaccard, similarity_jaccard_with, similarity_sub, subsethood_degree,
    subsethood_degree_with, ContextMode, DisjointFallback, JaccardOptions, SubsethoodOptions,
    UnionMode,
};

use crate::concept::Concept;
use crate::error::Result;
use crate::measure::MeasureContext;
use crate::metric::DomainStructure;

/// Concepts projected onto their common domains.
#[derive(Debug, Clone, PartialEq)]
pub enum CommonProjection {
    /// Projected concepts, in argument order, all on `structure`.
    Shared {
        structure: DomainStructure,
        concepts: Vec<Concept>,
    },
    /// The concepts have no domain in common.
    Disjoint,
}

/// Projects every concept onto the domains all of them share. Coordinates
/// follow the first concept's ordering.
pub fn common_projection(concepts: &[&Concept]) -> Result<CommonProjection> {
    let Some(first) = concepts.first() else {
        return Ok(CommonProjection::Disjoint);
    };
    let mut shared: Vec<String> = first
        .structure()
        .domain_names()
        .map(str::to_string)
        .collect();
    for c in &concepts[1..] {
        let common = first.structure().shared_domains(c.structure());
        shared.retain(|d| common.contains(d));
    }
    if shared.is_empty() {
        return Ok(CommonProjection::Disjoint);
    }
    let head = first.project(&shared)?;
    let structure = head.structure().clone();
    let mut out = vec![head];
    for c in &concepts[1..] {
        out.push(c.project(&shared)?.align_to(&structure)?);
    }
    Ok(CommonProjection::Shared {
        structure,
        concepts: out,
    })
}

/// A relation value together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub value: f64,
    /// Domains the concepts were projected onto; empty when they share none.
    pub shared_domains: Vec<String>,
    /// Sensitivity and weights used for both sizes; `None` without shared
    /// domains.
    pub context: Option<MeasureContext>,
    /// How the intersection was built.
    pub path: Option<IntersectionPath>,
    /// Numerator and denominator of the quotient.
    pub numerator: f64,
    pub denominator: f64,
}

impl RelationReport {
    fn disjoint() -> Self {
        Self {
            value: 0.0,
            shared_domains: Vec::new(),
            context: None,
            path: None,
            numerator: 0.0,
            denominator: 0.0,
        }
    }
}

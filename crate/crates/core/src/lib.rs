//! Fuzzy star-shaped concepts in conceptual spaces.
//!
//! A conceptual space is a product of quality dimensions grouped into
//! domains. Distances combine a weighted Euclidean metric inside each domain
//! with a weighted Manhattan sum across domains. Concepts are fuzzy sets
//! whose core is a union of axis-parallel cuboids sharing a common central
//! region, and whose membership decays exponentially with the distance to
//! that core.
//!
//! The crate is organised bottom-up:
//!
//! - [`metric`]: domain structure, salience weights, the combined distance
//!   and point-level similarity/betweenness.
//! - [`concept`]: cuboids, star-shaped cores, fuzzy concepts, membership,
//!   projection and crisp subsethood.
//! - [`measure`]: closed-form hyperball volumes, α-cut volumes and concept
//!   size by inclusion-exclusion.
//! - [`relations`]: degree of subsethood, implication, similarity and
//!   betweenness of concepts.
//! - [`oracle`]: brute-force Monte-Carlo and quadrature ground truth used to
//!   audit every closed form.
//! - [`space`]: the JSON concept-space file format and a named registry.

pub mod concept;
pub mod error;
pub mod measure;
pub mod metric;
pub mod oracle;
pub mod relations;
pub mod space;

mod numeric;

pub use concept::{Concept, CoreRegion, Cuboid};
pub use error::{Error, Result};
pub use measure::MeasureContext;
pub use metric::{DomainStructure, Metric, Point, WeightSpec};
pub use space::{ConceptSpace, SpaceFile};

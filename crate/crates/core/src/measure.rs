//! Closed-form sizes: hyperballs of the combined metric, α-cuts of fuzzified
//! cuboids, and whole concepts by inclusion-exclusion.
//!
//! A fuzzified cuboid's α-cut is the cuboid grown by `ε(α)` under the
//! combined metric. Splitting it into products of cuboid faces and partial
//! hyperballs gives a sum over dimension subsets; integrating over α turns
//! every `ε^i` into `μ0 · i! / c^i`.

use crate::concept::{Concept, Cuboid};
use crate::error::{Error, Result};
use crate::metric::{DomainStructure, WeightSpec};
use crate::numeric::{domain_ball_factor, factorial, CompensatedSum};

/// Volume of `{x : d(x, 0) ≤ r}` under the combined metric.
pub fn hyperball_volume(r: f64, structure: &DomainStructure, weights: &WeightSpec) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Parameter(format!(
            "radius must be nonnegative, got {r}"
        )));
    }
    weights.check(structure)?;
    let stretch = weights.stretch(structure);
    let all: Vec<usize> = (0..structure.n_dims()).collect();
    Ok(subset_ball_volume(r, structure, &stretch, &all))
}

/// Hyperball volume in the subspace spanned by `dims`, using the unrenormalized
/// weights of the full structure.
fn subset_ball_volume(r: f64, structure: &DomainStructure, stretch: &[f64], dims: &[usize]) -> f64 {
    let i = dims.len() as u32;
    r.powi(i as i32) / factorial(i) * subset_shape_factor(structure, stretch, dims)
}

/// `∏_δ κ(n_δ) / ∏_d s_d` over the dimensions in `dims`.
fn subset_shape_factor(structure: &DomainStructure, stretch: &[f64], dims: &[usize]) -> f64 {
    let mut counts = vec![0u32; structure.n_domains()];
    let mut inv_stretch = 1.0;
    for &d in dims {
        counts[structure.domain_of(d)] += 1;
        inv_stretch /= stretch[d];
    }
    counts
        .into_iter()
        .filter(|&k| k > 0)
        .map(domain_ball_factor)
        .product::<f64>()
        * inv_stretch
}

fn subset_dims(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|d| mask >> d & 1 == 1).collect()
}

fn check_cuboid(cuboid: &Cuboid, structure: &DomainStructure) -> Result<()> {
    if cuboid.n_dims() != structure.n_dims() {
        return Err(Error::Structure(format!(
            "cuboid has {} dimensions, the structure has {}",
            cuboid.n_dims(),
            structure.n_dims()
        )));
    }
    Ok(())
}

fn check_height_and_rate(mu0: f64, c: f64) -> Result<()> {
    if !(mu0 > 0.0 && mu0 <= 1.0) {
        return Err(Error::Parameter(format!(
            "mu0 must lie in (0, 1], got {mu0}"
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Parameter(format!(
            "sensitivity c must be positive, got {c}"
        )));
    }
    Ok(())
}

/// Volume of the α-cut of a fuzzified cuboid. Zero when `α > μ0`.
pub fn alpha_cut_volume(
    cuboid: &Cuboid,
    alpha: f64,
    mu0: f64,
    c: f64,
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<f64> {
    check_height_and_rate(mu0, c)?;
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    check_cuboid(cuboid, structure)?;
    weights.check(structure)?;
    if alpha > mu0 {
        return Ok(0.0);
    }
    let eps = -(alpha / mu0).ln() / c;
    let stretch = weights.stretch(structure);
    let widths = cuboid.widths();
    let n = structure.n_dims();
    let total: CompensatedSum = (0u64..1 << n)
        .map(|mask| {
            let faces: f64 = (0..n)
                .filter(|d| mask >> d & 1 == 0)
                .map(|d| widths[d])
                .product();
            faces * subset_ball_volume(eps, structure, &stretch, &subset_dims(mask, n))
        })
        .collect();
    Ok(total.total())
}

/// `∫ μ` of a cuboid fuzzified with height `μ0`, sensitivity `c` and weights.
pub fn fuzzy_cuboid_measure(
    cuboid: &Cuboid,
    mu0: f64,
    c: f64,
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<f64> {
    check_height_and_rate(mu0, c)?;
    check_cuboid(cuboid, structure)?;
    weights.check(structure)?;
    let stretch = weights.stretch(structure);
    Ok(fuzzy_cuboid_measure_raw(
        cuboid, mu0, c, structure, &stretch,
    ))
}

pub(crate) fn fuzzy_cuboid_measure_raw(
    cuboid: &Cuboid,
    mu0: f64,
    c: f64,
    structure: &DomainStructure,
    stretch: &[f64],
) -> f64 {
    let n = structure.n_dims();
    let widths = cuboid.widths();
    let total: CompensatedSum = (0u64..1 << n)
        .map(|mask| {
            let dims = subset_dims(mask, n);
            let faces: f64 = (0..n)
                .filter(|d| mask >> d & 1 == 0)
                .map(|d| widths[d])
                .product();
            faces * subset_shape_factor(structure, stretch, &dims) / c.powi(dims.len() as i32)
        })
        .collect();
    mu0 * total.total()
}

/// Measure of a union of fuzzified cuboids sharing `μ0`, `c` and weights,
/// by inclusion-exclusion over crisp intersections. Subsets whose cuboids
/// do not intersect contribute nothing.
pub(crate) fn union_measure(
    cuboids: &[Cuboid],
    mu0: f64,
    c: f64,
    structure: &DomainStructure,
    stretch: &[f64],
) -> f64 {
    let m = cuboids.len();
    assert!(m < 64, "inclusion-exclusion over {m} cuboids");
    let mut acc = CompensatedSum::default();
    for mask in 1u64..1 << m {
        let mut members = (0..m).filter(|i| mask >> i & 1 == 1);
        let first = members.next().expect("mask is nonzero");
        let mut inter = Some(cuboids[first].clone());
        for i in members {
            inter = inter.and_then(|c| c.intersect(&cuboids[i]));
        }
        if let Some(box_) = inter {
            let sign = if mask.count_ones() % 2 == 1 {
                1.0
            } else {
                -1.0
            };
            acc.add(sign * fuzzy_cuboid_measure_raw(&box_, mu0, c, structure, stretch));
        }
    }
    acc.total()
}

/// `M(S̃)`: the integral of the concept's membership function over its own
/// domains, with multi-cuboid cores handled by inclusion-exclusion.
pub fn concept_size(concept: &Concept) -> f64 {
    union_measure(
        concept.core().cuboids(),
        concept.mu0(),
        concept.c(),
        concept.structure(),
        concept.metric().stretch(),
    )
}

/// A sensitivity and weights applied when comparing concept sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureContext {
    pub c: f64,
    pub weights: WeightSpec,
    pub structure: DomainStructure,
}

impl MeasureContext {
    pub fn new(c: f64, weights: WeightSpec, structure: DomainStructure) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Parameter(format!(
                "sensitivity c must be positive, got {c}"
            )));
        }
        weights.check(&structure)?;
        Ok(Self {
            c,
            weights,
            structure,
        })
    }

    /// The concept's own sensitivity and weights.
    pub fn of(concept: &Concept) -> Self {
        Self {
            c: concept.c(),
            weights: concept.weights().clone(),
            structure: concept.structure().clone(),
        }
    }
}

/// Concept size with `c` and `W` taken from `ctx` and `μ0` from the concept.
pub fn contextual_size(concept: &Concept, ctx: &MeasureContext) -> Result<f64> {
    if !concept.structure().same_domains(&ctx.structure) {
        return Err(Error::Structure(
            "measure context is defined on other domains than the concept".into(),
        ));
    }
    if concept.structure() != &ctx.structure {
        return Err(Error::Structure(
            "measure context orders its dimensions differently from the concept".into(),
        ));
    }
    Ok(concept_size(
        &concept.with_context(ctx.c, ctx.weights.clone())?,
    ))
}

/// `∫_0^1 ln(x)^n dx = (−1)^n · n!`.
pub fn log_power_integral(n: u32) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * factorial(n)
}

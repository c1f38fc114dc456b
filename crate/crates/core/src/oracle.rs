//! Brute-force reference values for auditing the closed forms.
//!
//! Everything here is slow and simple on purpose: uniform Monte-Carlo
//! sampling over a bounding box, hit counting, adaptive Simpson quadrature
//! and a denser re-run of the betweenness search.
//!
//! Random numbers come from ChaCha8 keyed by the caller's seed, one stream
//! per batch of samples, and batch results are added in batch order, so an
//! estimate depends only on `(seed, samples)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concept::Concept;
use crate::error::{Error, Result};
use crate::measure::{hyperball_volume, log_power_integral, MeasureContext};
use crate::metric::{DomainStructure, Metric, WeightSpec};
use crate::numeric::{domain_ball_factor, factorial, CompensatedSum};
use crate::relations::{betweenness, BetweennessConfig, BetweennessReport};

/// Membership level below which the integration region is truncated.
pub const TRUNCATION: f64 = 1e-6;

const BATCH: u64 = 1 << 16;

/// A Monte-Carlo estimate with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// One standard error of the sample mean, scaled to the region.
    pub std_error: f64,
    /// Upper bound on the integrand's mass outside the region.
    pub truncation_bound: f64,
}

impl Estimate {
    /// Whether `reference` lies within `k` standard errors plus truncation.
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        (self.value - reference).abs() <= k * self.std_error + self.truncation_bound
    }
}

/// A finite axis-parallel box to sample from.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationRegion {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Upper bound on the membership mass left outside the box.
    pub truncation_bound: f64,
}

impl IntegrationRegion {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Parameter("region bounds do not line up".into()));
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(l, u)| !(l.is_finite() && u.is_finite() && u > l))
        {
            return Err(Error::Parameter(
                "region has an empty or infinite side".into(),
            ));
        }
        Ok(Self {
            lower,
            upper,
            truncation_bound: 0.0,
        })
    }

    /// The bounding box of the concept's cuboids grown to the level where
    /// membership falls to `tau`.
    pub fn for_concept(concept: &Concept, tau: f64) -> Result<Self> {
        Self::covering(&[concept], tau)
    }

    /// Smallest box covering every concept's `tau`-cut; the truncation
    /// bound is the smallest of the concepts' tail masses, which bounds the
    /// mass of their pointwise minimum outside the box.
    pub fn covering(concepts: &[&Concept], tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Parameter(format!(
                "truncation must lie in (0, 1), got {tau}"
            )));
        }
        let Some(first) = concepts.first() else {
            return Err(Error::Parameter("no concept to integrate".into()));
        };
        let n = first.structure().n_dims();
        let mut lower = vec![f64::INFINITY; n];
        let mut upper = vec![f64::NEG_INFINITY; n];
        let mut tail = f64::INFINITY;
        for concept in concepts {
            if concept.structure() != first.structure() {
                return Err(Error::Structure(
                    "concepts live on different domains".into(),
                ));
            }
            let eps = concept.epsilon(tau).max(0.0);
            let stretch = concept.metric().stretch();
            for cub in concept.core().cuboids() {
                for d in 0..n {
                    lower[d] = lower[d].min(cub.lower()[d] - eps / stretch[d]);
                    upper[d] = upper[d].max(cub.upper()[d] + eps / stretch[d]);
                }
            }
            tail = tail.min(tail_mass(concept, eps));
        }
        let mut region = Self::new(lower, upper)?;
        region.truncation_bound = tail;
        Ok(region)
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .product()
    }
}

/// Mass of `μ` over `{x : d(x, S) > eps}`, bounded by summing over cuboids.
///
/// For one cuboid the cut volume is a polynomial `Σ a_i r^i` in the radius,
/// and `∫_eps^∞ μ0 e^{−c r} d(a_i r^i) = μ0 a_i i! c^{−i} e^{−u} Σ_{k<i} u^k/k!`
/// with `u = c · eps`.
fn tail_mass(concept: &Concept, eps: f64) -> f64 {
    let structure = concept.structure();
    let stretch = concept.metric().stretch();
    let c = concept.c();
    let u = c * eps;
    let n = structure.n_dims();
    let mut total = CompensatedSum::default();
    for cub in concept.core().cuboids() {
        let widths = cub.widths();
        for mask in 1u64..1 << n {
            let dims: Vec<usize> = (0..n).filter(|d| mask >> d & 1 == 1).collect();
            let i = dims.len() as u32;
            let faces: f64 = (0..n)
                .filter(|d| mask >> d & 1 == 0)
                .map(|d| widths[d])
                .product();
            // a_i · i! is the shape factor of the partial ball.
            let mut counts = vec![0u32; structure.n_domains()];
            let mut inv = 1.0;
            for &d in &dims {
                counts[structure.domain_of(d)] += 1;
                inv /= stretch[d];
            }
            let shape: f64 = counts
                .into_iter()
                .filter(|&k| k > 0)
                .map(domain_ball_factor)
                .product::<f64>()
                * inv;
            let mut series = 0.0;
            let mut term = 1.0;
            for k in 0..i {
                if k > 0 {
                    term *= u / f64::from(k);
                }
                series += term;
            }
            total.add(faces * shape / c.powi(i as i32) * (-u).exp() * series);
        }
    }
    concept.mu0() * total.total()
}

/// `∫ f` over the region by uniform sampling.
pub fn mc_measure<F>(f: F, region: &IntegrationRegion, samples: u64, seed: u64) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64,
{
    if samples == 0 {
        return Err(Error::Parameter("at least one sample is needed".into()));
    }
    let n = region.lower.len();
    let mut sum = CompensatedSum::default();
    let mut sum_sq = CompensatedSum::default();
    let mut point = vec![0.0; n];
    let batches = samples.div_ceil(BATCH);
    for batch in 0..batches {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        let count = BATCH.min(samples - batch * BATCH);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            for (d, p) in point.iter_mut().enumerate() {
                *p = region.lower[d] + rng.random::<f64>() * (region.upper[d] - region.lower[d]);
            }
            let v = f(&point);
            s += v;
            s2 += v * v;
        }
        sum.add(s);
        sum_sq.add(s2);
    }
    let m = samples as f64;
    let mean = sum.total() / m;
    let var = (sum_sq.total() / m - mean * mean).max(0.0);
    let vol = region.volume();
    Ok(Estimate {
        value: vol * mean,
        std_error: vol * (var / m).sqrt(),
        truncation_bound: region.truncation_bound,
    })
}

/// Monte-Carlo size of a concept over its own domains.
pub fn mc_concept_size(concept: &Concept, samples: u64, seed: u64) -> Result<Estimate> {
    let region = IntegrationRegion::for_concept(concept, TRUNCATION)?;
    mc_measure(|x| concept.membership(x), &region, samples, seed)
}

/// `∫ min(μ1, μ2)` with both concepts re-parameterized to `ctx`.
pub fn mc_min_measure(
    s1: &Concept,
    s2: &Concept,
    ctx: &MeasureContext,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if s1.structure() != &ctx.structure || s2.structure() != &ctx.structure {
        return Err(Error::Structure(
            "both concepts must live on the context's domains".into(),
        ));
    }
    let a = s1.with_context(ctx.c, ctx.weights.clone())?;
    let b = s2.with_context(ctx.c, ctx.weights.clone())?;
    let region = IntegrationRegion::covering(&[&a, &b], TRUNCATION)?;
    mc_measure(
        |x| a.membership(x).min(b.membership(x)),
        &region,
        samples,
        seed,
    )
}

/// Hyperball volume by counting hits in the enclosing box.
pub fn mc_hyperball_volume(
    r: f64,
    structure: &DomainStructure,
    weights: &WeightSpec,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Parameter(format!(
            "radius must be positive, got {r}"
        )));
    }
    let metric = Metric::new(structure.clone(), weights.clone())?;
    let stretch = metric.stretch().to_vec();
    let upper: Vec<f64> = stretch.iter().map(|s| r / s).collect();
    let lower: Vec<f64> = upper.iter().map(|u| -u).collect();
    let region = IntegrationRegion::new(lower, upper)?;
    let origin = vec![0.0; structure.n_dims()];
    mc_measure(
        |x| f64::from(u8::from(metric.distance(x, &origin) <= r)),
        &region,
        samples,
        seed,
    )
}

/// Betweenness re-evaluated with ten times the α levels and more
/// candidate points than `base`.
pub fn sampled_betweenness(
    s1: &Concept,
    s2: &Concept,
    s3: &Concept,
    base: &BetweennessConfig,
) -> Result<BetweennessReport> {
    betweenness(s1, s2, s3, &dense_config(base))
}

/// The configuration used by [`sampled_betweenness`].
pub fn dense_config(base: &BetweennessConfig) -> BetweennessConfig {
    BetweennessConfig {
        alpha_levels: base.alpha_levels * 10,
        tail_levels: base.tail_levels * 10,
        y_samples: base.y_samples * 4,
        xz_samples: base.xz_samples * 2,
        refine_iterations: base.refine_iterations * 2,
        worst_y: base.worst_y * 2,
        ..base.clone()
    }
}

/// One comparison of a hyperball volume against an independent value.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        let rel_error = ((computed - expected) / expected).abs();
        Self {
            name: name.into(),
            computed,
            expected,
            rel_error,
            tolerance,
            pass: rel_error <= tolerance,
        }
    }
}

/// Classic shapes, the stretch scaling law and hit counting for `n ≤ 4`.
///
/// Weights always sum to one inside a domain, so a multi-dimensional domain
/// is never unit-stretched; the classic shapes are compared after undoing
/// the stretch, `V · ∏ s_d`.
pub fn hyperball_identities(samples: u64, seed: u64) -> Result<Vec<IdentityCheck>> {
    use std::f64::consts::PI;
    const EXACT: f64 = 1e-12;
    let unstretched = |r: f64, s: &DomainStructure, w: &WeightSpec| -> Result<f64> {
        let prod: f64 = w.stretch(s).iter().product();
        Ok(hyperball_volume(r, s, w)? * prod)
    };
    let line = DomainStructure::new([("a", vec!["x"])])?;
    let disc = DomainStructure::new([("p", vec!["x", "y"])])?;
    let diamond = DomainStructure::new([("a", vec!["x"]), ("b", vec!["y"])])?;
    let cone = DomainStructure::new([("p", vec!["x", "y"]), ("h", vec!["z"])])?;
    let quad = DomainStructure::new([("p", vec!["x", "y"]), ("q", vec!["u", "v"])])?;

    let r = 1.3;
    let mut out = vec![
        IdentityCheck::new(
            "1-D interval 2r",
            unstretched(r, &line, &WeightSpec::uniform(&line))?,
            2.0 * r,
            EXACT,
        ),
        IdentityCheck::new(
            "2-D disc pi r^2",
            unstretched(r, &disc, &WeightSpec::uniform(&disc))?,
            PI * r * r,
            EXACT,
        ),
        IdentityCheck::new(
            "2-D diamond 2r^2",
            unstretched(r, &diamond, &WeightSpec::uniform(&diamond))?,
            2.0 * r * r,
            EXACT,
        ),
        IdentityCheck::new(
            "2+1 double cone 2 pi r^3 / 3",
            unstretched(r, &cone, &WeightSpec::uniform(&cone))?,
            2.0 * PI * r.powi(3) / 3.0,
            EXACT,
        ),
    ];

    // Scaling one dimension's stretch by k divides the volume by k.
    let base = WeightSpec::uniform(&diamond);
    let skewed = WeightSpec::new(&diamond, vec![0.4, 1.6], vec![1.0, 1.0])?;
    let (v0, v1) = (
        hyperball_volume(r, &diamond, &base)?,
        hyperball_volume(r, &diamond, &skewed)?,
    );
    out.push(IdentityCheck::new(
        "stretch scaling x0.4 x1.6",
        v1,
        v0 / (0.4 * 1.6),
        EXACT,
    ));
    let tilted = WeightSpec::new(&cone, vec![1.5, 0.5], vec![0.2, 0.8, 1.0])?;
    let ratio: f64 = WeightSpec::uniform(&cone)
        .stretch(&cone)
        .iter()
        .zip(tilted.stretch(&cone))
        .map(|(a, b)| b / a)
        .product();
    out.push(IdentityCheck::new(
        "stretch scaling on 2+1",
        hyperball_volume(r, &cone, &tilted)?,
        hyperball_volume(r, &cone, &WeightSpec::uniform(&cone))? / ratio,
        EXACT,
    ));

    let cases: [(&str, &DomainStructure, WeightSpec); 5] = [
        ("hit count n=1", &line, WeightSpec::uniform(&line)),
        (
            "hit count n=2 disc",
            &disc,
            WeightSpec::new(&disc, vec![1.0], vec![0.3, 0.7])?,
        ),
        ("hit count n=2 diamond", &diamond, skewed.clone()),
        ("hit count n=3", &cone, tilted.clone()),
        (
            "hit count n=4",
            &quad,
            WeightSpec::new(&quad, vec![0.8, 1.2], vec![0.5, 0.5, 0.1, 0.9])?,
        ),
    ];
    for (name, s, w) in cases {
        let est = mc_hyperball_volume(r, s, &w, samples, seed)?;
        out.push(IdentityCheck::new(
            name,
            est.value,
            hyperball_volume(r, s, &w)?,
            0.01,
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureCheck {
    pub n: u32,
    pub numeric: f64,
    pub exact: f64,
    pub rel_error: f64,
    pub pass: bool,
}

/// Compares adaptive quadrature of `∫_0^1 ln(x)^n dx` with `(−1)^n n!`.
///
/// The substitution `x = e^{−t}` turns the integrand into `(−t)^n e^{−t}`
/// on `[0, ∞)`, which is smooth; it is integrated over `[0, 80]`.
pub fn quadrature_check(n: u32) -> QuadratureCheck {
    let f = |t: f64| (-t).powi(n as i32) * (-t).exp();
    let numeric = adaptive_simpson(&f, 0.0, 80.0, 1e-12 * factorial(n).max(1.0), 50);
    let exact = log_power_integral(n);
    let rel_error = ((numeric - exact) / exact).abs();
    QuadratureCheck {
        n,
        numeric,
        exact,
        rel_error,
        pass: rel_error <= 1e-6,
    }
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concept::{CoreRegion, Cuboid};
    use crate::measure::concept_size;

    fn red() -> Concept {
        let s = DomainStructure::new([("color", vec!["hue"])]).unwrap();
        let core =
            CoreRegion::new(s.clone(), vec![Cuboid::new(vec![0.9], vec![1.0]).unwrap()]).unwrap();
        Concept::new(core, 1.0, 20.0, WeightSpec::uniform(&s)).unwrap()
    }

    #[test]
    fn quadrature_anchors() {
        for n in 0..=8 {
            let q = quadrature_check(n);
            assert!(q.pass, "{q:?}");
        }
        assert!((quadrature_check(5).numeric + 120.0).abs() < 1e-6);
    }

    #[test]
    fn zero_and_indicator() {
        let region = IntegrationRegion::new(vec![0.0, 0.0], vec![2.0, 3.0]).unwrap();
        let zero = mc_measure(|_| 0.0, &region, 1000, 1).unwrap();
        assert_eq!(zero.value, 0.0);
        let inside = |x: &[f64]| f64::from(u8::from(x.iter().all(|v| *v <= 1.0)));
        let box_ = mc_measure(inside, &region, 200_000, 3).unwrap();
        assert!(box_.agrees_with(1.0, 3.0), "{box_:?}");
        assert!(mc_measure(|_| 1.0, &region, 0, 1).is_err());
        assert!(IntegrationRegion::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn red_size_by_sampling() {
        let r = red();
        let est = mc_concept_size(&r, 1_000_000, 7).unwrap();
        assert!(est.agrees_with(concept_size(&r), 3.0), "{est:?}");
        assert!(est.agrees_with(0.2, 3.0), "{est:?}");
        assert!(est.truncation_bound < 1e-6);
    }

    #[test]
    fn hyperball_audit_passes() {
        for check in hyperball_identities(200_000, 3).unwrap() {
            assert!(check.pass, "{check:?}");
        }
    }

    #[test]
    fn same_seed_same_estimate() {
        let r = red();
        let a = mc_concept_size(&r, 150_000, 11).unwrap();
        let b = mc_concept_size(&r, 150_000, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn min_of_identical_concepts() {
        let r = red();
        let ctx = MeasureContext::of(&r);
        let a = mc_min_measure(&r, &r, &ctx, 100_000, 5).unwrap();
        let b = mc_concept_size(&r, 100_000, 5).unwrap();
        assert_eq!(a.value, b.value);
    }
}

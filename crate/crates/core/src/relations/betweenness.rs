//! Betweenness of concepts, decided α-cut by α-cut.
//!
//! For one level α the soft value is
//! `min_{y ∈ S̃2^α} max_{x ∈ S̃1^α, z ∈ S̃3^α} d(x,z) / (d(x,y) + d(y,z))`.
//! The α-cuts are continuous sets, so the min-max is approximated: each cut
//! is represented by cuboid corners, outward offsets of corners and face
//! centers, and shifted Halton samples. The inner maximization and the
//! worst `y` candidates are then refined by coordinate search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{common_projection, CommonProjection};
use crate::concept::{subsethood_conditions, Concept};
use crate::error::Result;
use crate::metric::{soft_from_distances, Metric, WeightSpec};
use crate::numeric::halton;

/// Offsets placing extra α levels just around every `μ0`.
const MU0_OFFSET: f64 = 1e-9;

/// Pairs tracked while moving `y` during refinement.
const TRACKED_PAIRS: usize = 16;

/// Per-α soft values at least this close to 1 count as crisp betweenness.
pub const CRISP_TOLERANCE: f64 = 1e-6;

/// Weights of the metric inside `d(x,z) / (d(x,y) + d(y,z))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetweennessWeights {
    /// `w_δ = 1`, `w_d = 1/|δ|`.
    #[default]
    Uniform,
    /// The middle concept's weights.
    Middle,
    /// The first concept's weights.
    First,
    /// The mean of all three concepts' weights.
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessConfig {
    /// Uniform levels `k/N`, `k = 1..=N`.
    pub alpha_levels: usize,
    /// Geometric levels between `1/N` and `tail_floor`. The soft value is an
    /// infimum over `α ∈ (0, 1]` and often keeps falling as α shrinks.
    pub tail_levels: usize,
    pub tail_floor: f64,
    /// Low-discrepancy samples of the middle concept's α-cut.
    pub y_samples: usize,
    /// Low-discrepancy samples of each outer concept's α-cut.
    pub xz_samples: usize,
    /// Coordinate-search iterations per refinement.
    pub refine_iterations: usize,
    /// Number of lowest-scoring `y` candidates refined per level.
    pub worst_y: usize,
    pub seed: u64,
    pub weights: BetweennessWeights,
}

impl Default for BetweennessConfig {
    fn default() -> Self {
        Self {
            alpha_levels: 101,
            tail_levels: 16,
            tail_floor: 1e-300,
            y_samples: 64,
            xz_samples: 64,
            refine_iterations: 50,
            worst_y: 4,
            seed: 0x5EED,
            weights: BetweennessWeights::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetweennessPath {
    /// The concepts are not all defined on the same domains.
    DomainMismatch,
    /// The middle concept is a fuzzy subset of an outer one.
    Subset,
    /// Evaluated level by level.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessReport {
    /// Minimum of the per-level values.
    pub soft: f64,
    /// Integral of the per-level values over α ∈ [0, 1].
    pub integral: f64,
    /// `(α, value)` in increasing α; empty unless the numeric path ran.
    pub per_alpha: Vec<(f64, f64)>,
    pub path: BetweennessPath,
}

impl BetweennessReport {
    fn constant(value: f64, path: BetweennessPath) -> Self {
        Self {
            soft: value,
            integral: value,
            per_alpha: Vec::new(),
            path,
        }
    }
}

/// Soft and integrated betweenness of `S̃2` between `S̃1` and `S̃3`.
pub fn betweenness(
    s1: &Concept,
    s2: &Concept,
    s3: &Concept,
    config: &BetweennessConfig,
) -> Result<BetweennessReport> {
    let same =
        s1.structure().same_domains(s2.structure()) && s3.structure().same_domains(s2.structure());
    if !same {
        return Ok(BetweennessReport::constant(
            0.0,
            BetweennessPath::DomainMismatch,
        ));
    }
    let CommonProjection::Shared { concepts, .. } = common_projection(&[s2, s1, s3])? else {
        return Ok(BetweennessReport::constant(
            0.0,
            BetweennessPath::DomainMismatch,
        ));
    };
    let (b, a, c) = (&concepts[0], &concepts[1], &concepts[2]);

    // With S2 inside S1 (or S3), x = y works at every level where the other
    // outer cut is nonempty.
    let inside_a = subsethood_conditions(b, a).holds() && c.mu0() >= b.mu0();
    let inside_c = subsethood_conditions(b, c).holds() && a.mu0() >= b.mu0();
    if inside_a || inside_c {
        return Ok(BetweennessReport::constant(1.0, BetweennessPath::Subset));
    }

    let weights = match config.weights {
        BetweennessWeights::Uniform => WeightSpec::uniform(b.structure()),
        BetweennessWeights::Middle => b.weights().clone(),
        BetweennessWeights::First => a.weights().clone(),
        BetweennessWeights::Mean => a
            .weights()
            .interpolate(c.weights(), 0.5)
            .interpolate(b.weights(), 1.0 / 3.0),
    };
    let metric = Metric::new(b.structure().clone(), weights)?;
    let eval = LevelEvaluator {
        a,
        b,
        c,
        metric: &metric,
        config,
    };
    let per_alpha: Vec<(f64, f64)> = alpha_grid(config, &[a.mu0(), b.mu0(), c.mu0()])
        .into_iter()
        .map(|alpha| (alpha, eval.level(alpha)))
        .collect();
    let soft = per_alpha.iter().map(|p| p.1).fold(1.0, f64::min);
    Ok(BetweennessReport {
        soft,
        integral: integrate(&per_alpha).min(1.0),
        per_alpha,
        path: BetweennessPath::Numeric,
    })
}

/// Whether `S̃2` lies between `S̃1` and `S̃3` on every α-cut.
pub fn betweenness_crisp(s1: &Concept, s2: &Concept, s3: &Concept) -> Result<bool> {
    let report = betweenness(s1, s2, s3, &BetweennessConfig::default())?;
    Ok(report.soft >= 1.0 - CRISP_TOLERANCE)
}

/// Minimum over α of the per-level soft betweenness.
pub fn betweenness_soft(s1: &Concept, s2: &Concept, s3: &Concept) -> Result<f64> {
    Ok(betweenness(s1, s2, s3, &BetweennessConfig::default())?.soft)
}

/// Integral over α of the per-level soft betweenness.
pub fn betweenness_integral(s1: &Concept, s2: &Concept, s3: &Concept) -> Result<f64> {
    Ok(betweenness(s1, s2, s3, &BetweennessConfig::default())?.integral)
}

fn alpha_grid(config: &BetweennessConfig, heights: &[f64]) -> Vec<f64> {
    let n = config.alpha_levels.max(1);
    let mut grid: Vec<f64> = (1..=n).map(|k| k as f64 / n as f64).collect();
    let top = 1.0 / n as f64;
    if config.tail_floor > 0.0 && config.tail_floor < top {
        let t = config.tail_levels;
        let ratio = config.tail_floor / top;
        grid.extend((1..=t).map(|k| top * ratio.powf(k as f64 / t as f64)));
    }
    for &mu in heights {
        for a in [mu - MU0_OFFSET, mu, mu + MU0_OFFSET] {
            if a > 0.0 && a <= 1.0 {
                grid.push(a);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Trapezoid rule on the grid, with the lowest level's value held on
/// `[0, α_min]`.
fn integrate(values: &[(f64, f64)]) -> f64 {
    let Some(&(a0, v0)) = values.first() else {
        return 1.0;
    };
    let mut total = a0 * v0;
    for w in values.windows(2) {
        total += 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1);
    }
    total
}

/// A concept's α-cut: the core grown by `eps`.
struct Cut<'a> {
    concept: &'a Concept,
    eps: f64,
}

impl Cut<'_> {
    fn contains(&self, p: &[f64]) -> bool {
        self.concept.distance_to_core(p) <= self.eps * (1.0 + 1e-12) + 1e-15
    }

    /// Moves `p` onto the cut along the ray from its nearest core point.
    fn project(&self, p: &mut [f64]) {
        let metric = self.concept.metric();
        let mut best = f64::INFINITY;
        let mut anchor = Vec::new();
        for cub in self.concept.core().cuboids() {
            let q = cub.clamp(p);
            let d = metric.distance(p, &q);
            if d < best {
                best = d;
                anchor = q;
            }
        }
        if best > self.eps {
            let t = self.eps / best;
            for (v, q) in p.iter_mut().zip(&anchor) {
                *v = q + (*v - q) * t;
            }
        }
    }

    fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let stretch = self.concept.metric().stretch();
        let cubs = self.concept.core().cuboids();
        let n = stretch.len();
        let lo = (0..n)
            .map(|d| {
                cubs.iter()
                    .map(|c| c.lower()[d])
                    .fold(f64::INFINITY, f64::min)
                    - self.eps / stretch[d]
            })
            .collect();
        let hi = (0..n)
            .map(|d| {
                cubs.iter()
                    .map(|c| c.upper()[d])
                    .fold(f64::NEG_INFINITY, f64::max)
                    + self.eps / stretch[d]
            })
            .collect();
        (lo, hi)
    }

    /// Largest side of the bounding box, the initial search step scale.
    fn extent(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max)
    }

    fn candidates(&self, samples: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let stretch = self.concept.metric().stretch();
        let n = stretch.len();
        let mut out: Vec<Vec<f64>> = Vec::new();
        for cub in self.concept.core().cuboids() {
            for (mask, corner) in cub.corners().enumerate() {
                for d in 0..n {
                    let mut p = corner.clone();
                    let sign = if mask >> d & 1 == 1 { 1.0 } else { -1.0 };
                    p[d] += sign * self.eps / stretch[d];
                    out.push(p);
                }
                out.push(corner);
            }
            let center = cub.center();
            for d in 0..n {
                let mut lo = center.clone();
                lo[d] = cub.lower()[d] - self.eps / stretch[d];
                let mut hi = center.clone();
                hi[d] = cub.upper()[d] + self.eps / stretch[d];
                out.push(lo);
                out.push(hi);
            }
        }
        let (lo, hi) = self.bounds();
        let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        for i in 0..samples {
            let mut p: Vec<f64> = (0..n)
                .map(|d| {
                    let u = (halton(i as u64 + 1, d) + shift[d]).fract();
                    lo[d] + u * (hi[d] - lo[d])
                })
                .collect();
            self.project(&mut p);
            out.push(p);
        }
        out
    }
}

struct LevelEvaluator<'a> {
    a: &'a Concept,
    b: &'a Concept,
    c: &'a Concept,
    metric: &'a Metric,
    config: &'a BetweennessConfig,
}

impl LevelEvaluator<'_> {
    fn ratio(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        let m = self.metric;
        soft_from_distances(m.distance(x, y), m.distance(y, z), m.distance(x, z))
    }

    fn level(&self, alpha: f64) -> f64 {
        if alpha > self.b.mu0() {
            return 1.0;
        }
        if alpha > self.a.mu0() || alpha > self.c.mu0() {
            return 0.0;
        }
        let cut_a = Cut {
            concept: self.a,
            eps: self.a.epsilon(alpha),
        };
        let cut_b = Cut {
            concept: self.b,
            eps: self.b.epsilon(alpha),
        };
        let cut_c = Cut {
            concept: self.c,
            eps: self.c.epsilon(alpha),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(alpha.to_bits());
        let xs = cut_a.candidates(self.config.xz_samples, &mut rng);
        let mut ys = cut_b.candidates(self.config.y_samples, &mut rng);
        let zs = cut_c.candidates(self.config.xz_samples, &mut rng);
        let pool = Pool::new(&xs, &zs, self.metric);

        let mut scores: Vec<f64> = ys
            .iter()
            .map(|y| {
                if cut_a.contains(y) || cut_c.contains(y) {
                    1.0
                } else {
                    pool.best(y).0
                }
            })
            .collect();

        // Refine the `worst_y` lowest candidates, then keep going while the
        // minimum still rests on an unrefined (pool-only) estimate.
        let lowest = |scores: &[f64], refined: &[bool], only_unrefined: bool| {
            scores
                .iter()
                .enumerate()
                .filter(|(i, _)| !(only_unrefined && refined[*i]))
                .min_by(|p, q| p.1.total_cmp(q.1))
                .map(|(i, _)| i)
        };
        let mut refined = vec![false; ys.len()];
        let mut done = 0;
        while done < 4 * self.config.worst_y.max(1) {
            let Some(mut idx) = lowest(&scores, &refined, false) else {
                break;
            };
            if refined[idx] {
                if done >= self.config.worst_y {
                    break;
                }
                match lowest(&scores, &refined, true) {
                    Some(i) => idx = i,
                    None => break,
                }
            }
            self.refine(idx, &mut ys, &mut scores, &pool, &cut_a, &cut_b, &cut_c);
            refined[idx] = true;
            done += 1;
        }
        scores.iter().copied().fold(1.0, f64::min)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        idx: usize,
        ys: &mut [Vec<f64>],
        scores: &mut [f64],
        pool: &Pool,
        cut_a: &Cut,
        cut_b: &Cut,
        cut_c: &Cut,
    ) {
        if scores[idx] >= 1.0 {
            return;
        }
        let y0 = ys[idx].clone();
        let (_, i0, j0) = pool.best(&y0);
        let (x, z, v0) =
            self.refine_pair(&y0, pool.xs[i0].clone(), pool.zs[j0].clone(), cut_a, cut_c);
        let tracked = pool.top_pairs(&y0, TRACKED_PAIRS);

        // Coordinate descent on y against the tracked pairs.
        let inner = |y: &[f64]| -> f64 {
            if cut_a.contains(y) || cut_c.contains(y) {
                return 1.0;
            }
            tracked
                .iter()
                .map(|&(i, j)| self.ratio(&pool.xs[i], y, &pool.zs[j]))
                .fold(self.ratio(&x, y, &z), f64::max)
        };
        let mut y = y0.clone();
        let mut value = inner(&y);
        let mut h = 0.25 * cut_b.extent().max(1e-12);
        for _ in 0..self.config.refine_iterations {
            let mut improved = false;
            for d in 0..y.len() {
                for sign in [-1.0, 1.0] {
                    let mut trial = y.clone();
                    trial[d] += sign * h;
                    cut_b.project(&mut trial);
                    let v = inner(&trial);
                    if v < value {
                        value = v;
                        y = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }

        let mut best = v0;
        if y != y0 && !(cut_a.contains(&y) || cut_c.contains(&y)) {
            let (v_pool, i, j) = pool.best(&y);
            let start = if self.ratio(&x, &y, &z) >= v_pool {
                (x.clone(), z.clone())
            } else {
                (pool.xs[i].clone(), pool.zs[j].clone())
            };
            let (_, _, v1) = self.refine_pair(&y, start.0, start.1, cut_a, cut_c);
            if v1 < best {
                best = v1;
                ys[idx] = y;
            }
        }
        scores[idx] = best;
    }

    /// Coordinate ascent on `(x, z)` for a fixed `y`.
    fn refine_pair(
        &self,
        y: &[f64],
        mut x: Vec<f64>,
        mut z: Vec<f64>,
        cut_a: &Cut,
        cut_c: &Cut,
    ) -> (Vec<f64>, Vec<f64>, f64) {
        let mut value = self.ratio(&x, y, &z);
        let mut hx = 0.25 * cut_a.extent().max(1e-12);
        let mut hz = 0.25 * cut_c.extent().max(1e-12);
        let n = y.len();
        for _ in 0..self.config.refine_iterations {
            let mut improved = false;
            for d in 0..2 * n {
                for sign in [-1.0, 1.0] {
                    let (mut tx, mut tz) = (x.clone(), z.clone());
                    if d < n {
                        tx[d] += sign * hx;
                        cut_a.project(&mut tx);
                    } else {
                        tz[d - n] += sign * hz;
                        cut_c.project(&mut tz);
                    }
                    let v = self.ratio(&tx, y, &tz);
                    if v > value {
                        value = v;
                        x = tx;
                        z = tz;
                        improved = true;
                    }
                }
            }
            if !improved {
                hx *= 0.5;
                hz *= 0.5;
            }
        }
        (x, z, value)
    }
}

/// Candidate `x` and `z` points with their cross distances.
struct Pool<'a> {
    xs: &'a [Vec<f64>],
    zs: &'a [Vec<f64>],
    dxz: Vec<f64>,
    metric: &'a Metric,
}

impl<'a> Pool<'a> {
    fn new(xs: &'a [Vec<f64>], zs: &'a [Vec<f64>], metric: &'a Metric) -> Self {
        let mut dxz = Vec::with_capacity(xs.len() * zs.len());
        for x in xs {
            for z in zs {
                dxz.push(metric.distance(x, z));
            }
        }
        Self {
            xs,
            zs,
            dxz,
            metric,
        }
    }

    fn side_distances(&self, y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (
            self.xs.iter().map(|x| self.metric.distance(x, y)).collect(),
            self.zs.iter().map(|z| self.metric.distance(y, z)).collect(),
        )
    }

    /// Best ratio over all pairs and its indices.
    fn best(&self, y: &[f64]) -> (f64, usize, usize) {
        let (dxy, dyz) = self.side_distances(y);
        let nz = self.zs.len();
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for (i, a) in dxy.iter().enumerate() {
            for (j, b) in dyz.iter().enumerate() {
                let r = soft_from_distances(*a, *b, self.dxz[i * nz + j]);
                if r > best.0 {
                    best = (r, i, j);
                }
            }
        }
        best
    }

    fn top_pairs(&self, y: &[f64], count: usize) -> Vec<(usize, usize)> {
        let (dxy, dyz) = self.side_distances(y);
        let nz = self.zs.len();
        let mut all: Vec<(f64, usize, usize)> = Vec::with_capacity(dxy.len() * nz);
        for (i, a) in dxy.iter().enumerate() {
            for (j, b) in dyz.iter().enumerate() {
                all.push((soft_from_distances(*a, *b, self.dxz[i * nz + j]), i, j));
            }
        }
        let k = count.min(all.len());
        if k == 0 {
            return Vec::new();
        }
        all.select_nth_unstable_by(k - 1, |p, q| q.0.total_cmp(&p.0));
        all[..k].iter().map(|p| (p.1, p.2)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_heights_and_neighbours() {
        let config = BetweennessConfig {
            alpha_levels: 4,
            tail_levels: 3,
            tail_floor: 0.25e-3,
            ..Default::default()
        };
        let g = alpha_grid(&config, &[0.6, 1.0]);
        assert!((g[0] - 0.25e-3).abs() < 1e-15);
        assert!((g[1] - 0.25e-2).abs() < 1e-15);
        assert_eq!(g[3], 0.25);
        assert!(g.contains(&0.6) && g.contains(&(0.6 + MU0_OFFSET)));
        assert!(g.contains(&(1.0 - MU0_OFFSET)));
        assert!(!g.iter().any(|a| *a > 1.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn integral_of_constant() {
        let config = BetweennessConfig {
            alpha_levels: 10,
            ..Default::default()
        };
        let v: Vec<(f64, f64)> = alpha_grid(&config, &[])
            .into_iter()
            .map(|a| (a, 0.7))
            .collect();
        assert!((integrate(&v) - 0.7).abs() < 1e-12);
    }
}

//! Intersection and unification of two concepts on the same domains.

use crate::concept::{subsethood_conditions, Concept, CoreRegion, Cuboid};
use crate::error::{Error, Result};
use crate::metric::WeightSpec;

/// Relative tolerance for treating two candidate heights as equal.
const HEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionPath {
    /// One concept is a fuzzy subset of the other, which makes it the
    /// intersection.
    Contained,
    /// The cores overlap; the intersection core is their crisp overlap.
    Overlap,
    /// The cores are disjoint; the core sits where `min(μ1, μ2)` peaks.
    Separated,
    /// Monte-Carlo integral of `min(μ1, μ2)`.
    MonteCarlo,
}

/// A concept standing for `S̃1 ∩ S̃2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub concept: Concept,
    pub path: IntersectionPath,
    /// The pieces had no common point and were stretched to a shared one.
    pub repaired: bool,
}

fn same_structure(s1: &Concept, s2: &Concept) -> Result<()> {
    if s1.structure() != s2.structure() {
        return Err(Error::Structure(
            "concepts must be projected onto the same domains first".into(),
        ));
    }
    Ok(())
}

/// Builds the intersection of two concepts on identical domain structures.
///
/// If one concept is a fuzzy subset of the other (`μ1 ≤ μ2` everywhere) the
/// intersection is that concept. Otherwise, for every pair of cuboids the
/// height of `min(μ1, μ2)` is maximized: it is `min(μ0⁽¹⁾, μ0⁽²⁾)` on the crisp overlap of overlapping pairs and smaller
/// for separated ones, where the peak is found by convex minimization of
/// `max(c1·d1 − ln μ0⁽¹⁾, c2·d2 − ln μ0⁽²⁾)`. Heights are computed with each
/// concept's own parameters. The pieces reaching the highest value form the
/// core; if they share no point they are extended to the midpoint of their
/// per-dimension bound extremes. The result uses sensitivity `c` and
/// `weights`.
pub fn fuzzy_intersection(
    s1: &Concept,
    s2: &Concept,
    c: f64,
    weights: &WeightSpec,
) -> Result<Intersection> {
    same_structure(s1, s2)?;
    if let Some(inner) = nested(s1, s2).map(|(inner, _)| inner) {
        return Ok(Intersection {
            concept: Concept::new(inner.core().clone(), inner.mu0(), c, weights.clone())?,
            path: IntersectionPath::Contained,
            repaired: false,
        });
    }
    let mut pieces: Vec<(f64, Cuboid)> = Vec::new();
    let mut any_overlap = false;
    for a in s1.core().cuboids() {
        for b in s2.core().cuboids() {
            let piece = match a.intersect(b) {
                Some(o) => {
                    any_overlap = true;
                    (s1.mu0().min(s2.mu0()), o)
                }
                None => separated_peak(s1, a, s2, b),
            };
            pieces.push(piece);
        }
    }
    let top = pieces.iter().map(|p| p.0).fold(0.0, f64::max);
    let mut kept: Vec<Cuboid> = Vec::new();
    for (h, cub) in pieces {
        if h >= top * (1.0 - HEIGHT_TOLERANCE) && !kept.contains(&cub) {
            kept.push(cub);
        }
    }
    let (kept, repaired) = repair_to_common_point(kept, None);
    let core = CoreRegion::new(s1.structure().clone(), kept)?;
    Ok(Intersection {
        concept: Concept::new(core, top.min(1.0), c, weights.clone())?,
        path: if any_overlap {
            IntersectionPath::Overlap
        } else {
            IntersectionPath::Separated
        },
        repaired,
    })
}

/// Builds `S̃1 ∪ S̃2`: all cuboids of both cores, height `max(μ0)`,
/// sensitivity `c` and `weights`. When the cuboids lack a common point they
/// are extended to the midpoint between the centers of the two central
/// regions. A concept containing the other is its own union with it.
pub fn unification(s1: &Concept, s2: &Concept, c: f64, weights: &WeightSpec) -> Result<Concept> {
    same_structure(s1, s2)?;
    if let Some((_, outer)) = nested(s1, s2) {
        return Concept::new(outer.core().clone(), outer.mu0(), c, weights.clone());
    }
    let mut cuboids: Vec<Cuboid> = s1.core().cuboids().to_vec();
    for cub in s2.core().cuboids() {
        if !cuboids.contains(cub) {
            cuboids.push(cub.clone());
        }
    }
    let anchor: Vec<f64> = s1
        .core()
        .central()
        .center()
        .iter()
        .zip(s2.core().central().center())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let (cuboids, _) = repair_to_common_point(cuboids, Some(&anchor));
    let core = CoreRegion::new(s1.structure().clone(), cuboids)?;
    Concept::new(core, s1.mu0().max(s2.mu0()), c, weights.clone())
}

/// `(inner, outer)` when one concept is a fuzzy subset of the other.
fn nested<'a>(s1: &'a Concept, s2: &'a Concept) -> Option<(&'a Concept, &'a Concept)> {
    if subsethood_conditions(s1, s2).holds() {
        Some((s1, s2))
    } else if subsethood_conditions(s2, s1).holds() {
        Some((s2, s1))
    } else {
        None
    }
}

/// Extends cuboids to a common point when they have none. Without an
/// explicit anchor the point is the midpoint of the largest lower and the
/// smallest upper bound on every dimension.
fn repair_to_common_point(cuboids: Vec<Cuboid>, anchor: Option<&[f64]>) -> (Vec<Cuboid>, bool) {
    let n = cuboids[0].n_dims();
    let lo: Vec<f64> = (0..n)
        .map(|d| {
            cuboids
                .iter()
                .map(|c| c.lower()[d])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let hi: Vec<f64> = (0..n)
        .map(|d| {
            cuboids
                .iter()
                .map(|c| c.upper()[d])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    if lo.iter().zip(&hi).all(|(l, h)| l <= h) {
        return (cuboids, false);
    }
    let mid: Vec<f64> = match anchor {
        Some(p) => p.to_vec(),
        None => lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect(),
    };
    (cuboids.iter().map(|c| c.extend_to(&mid)).collect(), true)
}

/// Height and core piece of `min(μ1, μ2)` for two separated cuboids.
fn separated_peak(s1: &Concept, a: &Cuboid, s2: &Concept, b: &Cuboid) -> (f64, Cuboid) {
    let n = a.n_dims();
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    // Gap dimensions and the interval between the two boxes on each.
    let mut gaps: Vec<(usize, f64, f64)> = Vec::new();
    for d in 0..n {
        let l = a.lower()[d].max(b.lower()[d]);
        let u = a.upper()[d].min(b.upper()[d]);
        if l <= u {
            lower[d] = l;
            upper[d] = u;
        } else {
            gaps.push((d, u, l));
        }
    }
    let mut x: Vec<f64> = a.center();
    for d in 0..n {
        if !gaps.iter().any(|g| g.0 == d) {
            x[d] = lower[d];
        }
    }
    let problem = PeakProblem {
        s1,
        a,
        s2,
        b,
        gaps: &gaps,
    };
    let (best, value) = problem.minimize(&mut x);
    for (j, &(d, _, _)) in gaps.iter().enumerate() {
        lower[d] = best[j];
        upper[d] = best[j];
    }
    (
        (-value).exp(),
        Cuboid::new(lower, upper).expect("bounds ordered"),
    )
}

struct PeakProblem<'a> {
    s1: &'a Concept,
    a: &'a Cuboid,
    s2: &'a Concept,
    b: &'a Cuboid,
    gaps: &'a [(usize, f64, f64)],
}

impl PeakProblem<'_> {
    /// `c·d(x, C) − ln μ0` and a subgradient over the gap coordinates.
    fn side(&self, concept: &Concept, cub: &Cuboid, x: &[f64], grad: &mut [f64]) -> f64 {
        let structure = concept.structure();
        let dw = concept.weights().domain_weights();
        let mw = concept.weights().dimension_weights();
        let c = concept.c();
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut total = 0.0;
        for (i, range) in structure.domain_ranges().enumerate() {
            let mut sq = 0.0;
            for d in range.clone() {
                let g = signed_gap(cub, d, x[d]);
                sq += mw[d] * g * g;
            }
            if sq > 0.0 {
                let norm = sq.sqrt();
                total += dw[i] * norm;
                for (j, &(d, _, _)) in self.gaps.iter().enumerate() {
                    if range.contains(&d) {
                        grad[j] += c * dw[i] * mw[d] * signed_gap(cub, d, x[d]) / norm;
                    }
                }
            }
        }
        c * total - concept.mu0().ln()
    }

    fn eval(&self, y: &[f64], x: &mut [f64], grad: &mut [f64], tmp: &mut [f64]) -> f64 {
        for (j, &(d, _, _)) in self.gaps.iter().enumerate() {
            x[d] = y[j];
        }
        let h1 = self.side(self.s1, self.a, x, grad);
        let h2 = self.side(self.s2, self.b, x, tmp);
        if h2 > h1 {
            grad.copy_from_slice(tmp);
            h2
        } else {
            h1
        }
    }

    /// Minimizes over the gap box; bisection in one dimension, the central-cut
    /// ellipsoid method otherwise.
    fn minimize(&self, x: &mut [f64]) -> (Vec<f64>, f64) {
        let k = self.gaps.len();
        let lo: Vec<f64> = self.gaps.iter().map(|g| g.1).collect();
        let hi: Vec<f64> = self.gaps.iter().map(|g| g.2).collect();
        let mut grad = vec![0.0; k];
        let mut tmp = vec![0.0; k];
        if k == 1 {
            let (mut a, mut b) = (lo[0], hi[0]);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                self.eval(&[m], x, &mut grad, &mut tmp);
                if grad[0] > 0.0 {
                    b = m;
                } else if grad[0] < 0.0 {
                    a = m;
                } else {
                    a = m;
                    b = m;
                }
                if b - a <= f64::EPSILON * (1.0 + m.abs()) {
                    break;
                }
            }
            let m = 0.5 * (a + b);
            let v = self.eval(&[m], x, &mut grad, &mut tmp);
            return (vec![m], v);
        }

        // Ellipsoid {center + B u : |u| ≤ 1}, kept in factored form so that
        // B Bᵀ stays positive semidefinite under rounding.
        let mut center: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
        let radius = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| 0.25 * (h - l) * (h - l))
            .sum::<f64>()
            .sqrt()
            * 1.0001;
        let mut bm = vec![0.0; k * k];
        for j in 0..k {
            bm[j * k + j] = radius;
        }
        let mut best = center.clone();
        let mut best_value = f64::INFINITY;
        let kf = k as f64;
        let a = kf / (kf * kf - 1.0).sqrt();
        let b = kf / (kf + 1.0);
        let mut btg = vec![0.0; k];
        let mut bp = vec![0.0; k];
        for _ in 0..400 * k * k {
            let mut cut = vec![0.0; k];
            if let Some(j) = (0..k).find(|&j| center[j] < lo[j] || center[j] > hi[j]) {
                cut[j] = if center[j] < lo[j] { -1.0 } else { 1.0 };
            } else {
                let v = self.eval(&center, x, &mut grad, &mut tmp);
                if v < best_value {
                    best_value = v;
                    best.copy_from_slice(&center);
                }
                if grad.iter().all(|g| *g == 0.0) {
                    break;
                }
                cut.copy_from_slice(&grad);
            }
            for c in 0..k {
                btg[c] = (0..k).map(|r| bm[r * k + c] * cut[r]).sum();
            }
            let norm = btg.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 1e-300) {
                break;
            }
            btg.iter_mut().for_each(|v| *v /= norm);
            for r in 0..k {
                bp[r] = (0..k).map(|c| bm[r * k + c] * btg[c]).sum();
                center[r] -= bp[r] / (kf + 1.0);
            }
            for r in 0..k {
                for c in 0..k {
                    bm[r * k + c] = a * bm[r * k + c] + (b - a) * bp[r] * btg[c];
                }
            }
        }
        (best, best_value)
    }
}

/// `x − nearest point of the cuboid's interval` on dimension `d`.
fn signed_gap(cub: &Cuboid, d: usize, v: f64) -> f64 {
    if v < cub.lower()[d] {
        v - cub.lower()[d]
    } else if v > cub.upper()[d] {
        v - cub.upper()[d]
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DomainStructure;

    fn fruit() -> DomainStructure {
        DomainStructure::new([
            ("color", vec!["hue"]),
            ("shape", vec!["round"]),
            ("taste", vec!["sweet"]),
        ])
        .unwrap()
    }

    fn concept(cubs: &[([f64; 3], [f64; 3])], c: f64, w: [f64; 3]) -> Concept {
        let s = fruit();
        let cuboids = cubs
            .iter()
            .map(|(l, u)| Cuboid::new(l.to_vec(), u.to_vec()).unwrap())
            .collect();
        let core = CoreRegion::new(s.clone(), cuboids).unwrap();
        Concept::new(
            core,
            1.0,
            c,
            WeightSpec::new(&s, w.to_vec(), vec![1.0; 3]).unwrap(),
        )
        .unwrap()
    }

    fn apple() -> Concept {
        concept(
            &[
                ([0.50, 0.65, 0.35], [0.80, 0.80, 0.50]),
                ([0.65, 0.65, 0.40], [0.85, 0.80, 0.55]),
                ([0.70, 0.65, 0.45], [1.00, 0.80, 0.60]),
            ],
            10.0,
            [0.5, 1.5, 1.0],
        )
    }

    #[test]
    fn orange_and_apple_peak() {
        let orange = concept(&[([0.80, 0.90, 0.60], [0.90, 1.00, 0.70])], 15.0, [1.0; 3]);
        let a = apple();
        let i = fuzzy_intersection(&orange, &a, 10.0, a.weights()).unwrap();
        assert_eq!(i.path, IntersectionPath::Separated);
        assert!((i.concept.mu0() - (-0.75f64).exp()).abs() < 1e-12);
        let core = &i.concept.core().cuboids()[0];
        assert!((core.lower()[0] - 0.8).abs() < 1e-12 && (core.upper()[0] - 0.9).abs() < 1e-12);
        assert!((core.lower()[1] - 0.85).abs() < 1e-12);
        assert!((core.lower()[2] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn lemon_and_apple_peak() {
        let lemon = concept(
            &[([0.70, 0.45, 0.00], [0.80, 0.55, 0.10])],
            20.0,
            [0.5, 0.5, 2.0],
        );
        let a = apple();
        let i = fuzzy_intersection(&lemon, &a, 10.0, a.weights()).unwrap();
        assert!(
            (i.concept.mu0() - (-2.2f64).exp()).abs() < 1e-9,
            "{}",
            i.concept.mu0()
        );
        let core = &i.concept.core().cuboids()[0];
        assert!((core.lower()[1] - 0.65).abs() < 1e-7, "{:?}", core);
        assert!((core.lower()[2] - 0.13).abs() < 1e-7, "{:?}", core);
    }

    #[test]
    fn overlapping_cores_keep_crisp_overlap() {
        let a = concept(&[([0.0, 0.0, 0.0], [0.5, 0.5, 0.5])], 10.0, [1.0, 1.0, 1.0]);
        let b = concept(&[([0.3, 0.3, 0.3], [0.8, 0.8, 0.8])], 10.0, [1.0, 1.0, 1.0]);
        let i = fuzzy_intersection(&a, &b, 10.0, a.weights()).unwrap();
        assert_eq!(i.path, IntersectionPath::Overlap);
        assert_eq!(i.concept.mu0(), 1.0);
        assert_eq!(i.concept.core().cuboids()[0].lower(), &[0.3, 0.3, 0.3]);
        assert_eq!(i.concept.core().cuboids()[0].upper(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn nested_concepts_intersect_to_the_inner_one() {
        let a = apple();
        let i = fuzzy_intersection(&a, &a, a.c(), a.weights()).unwrap();
        assert_eq!(i.path, IntersectionPath::Contained);
        assert_eq!(i.concept, a);
        let gs = concept(
            &[([0.55, 0.70, 0.35], [0.60, 0.80, 0.45])],
            25.0,
            [1.0, 1.0, 1.0],
        );
        let i = fuzzy_intersection(&gs, &a, 10.0, a.weights()).unwrap();
        assert_eq!(i.path, IntersectionPath::Contained);
        assert_eq!(i.concept.core(), gs.core());
        assert_eq!(
            unification(&gs, &a, 10.0, a.weights()).unwrap().core(),
            a.core()
        );
    }

    #[test]
    fn unification_repairs_disjoint_cores() {
        let lemon = concept(
            &[([0.70, 0.45, 0.00], [0.80, 0.55, 0.10])],
            20.0,
            [0.5, 0.5, 2.0],
        );
        let a = apple();
        let u = unification(&lemon, &a, 10.0, a.weights()).unwrap();
        assert_eq!(u.core().cuboids().len(), 4);
        let p = u.core().central();
        assert!(p.lower().iter().zip(p.upper()).all(|(l, h)| l <= h));
    }
}

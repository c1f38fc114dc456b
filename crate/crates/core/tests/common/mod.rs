//! Random domain structures, weights and concepts for the property suites.
#![allow(dead_code)]

use concept_space::{Concept, CoreRegion, Cuboid, DomainStructure, WeightSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` dimensions split into consecutive domains at random.
pub fn structure(rng: &mut impl Rng, n: usize) -> DomainStructure {
    let mut domains: Vec<(String, Vec<String>)> = Vec::new();
    for d in 0..n {
        if domains.is_empty() || rng.random_bool(0.5) {
            domains.push((format!("D{}", domains.len()), Vec::new()));
        }
        domains.last_mut().unwrap().1.push(format!("x{d}"));
    }
    DomainStructure::new(domains).unwrap()
}

/// Every way of splitting `n` dimensions into consecutive domains.
pub fn all_partitions(n: usize) -> Vec<DomainStructure> {
    (0u32..1 << (n - 1))
        .map(|cuts| {
            let mut domains: Vec<(String, Vec<String>)> = vec![("D0".into(), vec!["x0".into()])];
            for d in 1..n {
                if cuts >> (d - 1) & 1 == 1 {
                    domains.push((format!("D{}", domains.len()), Vec::new()));
                }
                domains.last_mut().unwrap().1.push(format!("x{d}"));
            }
            DomainStructure::new(domains).unwrap()
        })
        .collect()
}

pub fn weights(rng: &mut impl Rng, s: &DomainStructure) -> WeightSpec {
    let raw: Vec<f64> = (0..s.n_domains())
        .map(|_| rng.random_range(0.2..2.0))
        .collect();
    let total: f64 = raw.iter().sum();
    let mut domain: Vec<f64> = raw
        .iter()
        .map(|w| w * s.n_domains() as f64 / total)
        .collect();
    // Absorb rounding so the sum is exact enough for validation.
    let drift = s.n_domains() as f64 - domain.iter().sum::<f64>();
    domain[0] += drift;
    let mut dims = vec![0.0; s.n_dims()];
    for range in s.domain_ranges() {
        let raw: Vec<f64> = range.clone().map(|_| rng.random_range(0.2..2.0)).collect();
        let total: f64 = raw.iter().sum();
        for (d, w) in range.clone().zip(raw) {
            dims[d] = w / total;
        }
    }
    WeightSpec::new(s, domain, dims).unwrap()
}

pub fn point(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// A cuboid containing `p`, extending up to `reach` on each side.
pub fn cuboid_around(rng: &mut impl Rng, p: &[f64], reach: f64) -> Cuboid {
    let lower = p.iter().map(|x| x - rng.random_range(0.0..reach)).collect();
    let upper = p.iter().map(|x| x + rng.random_range(0.0..reach)).collect();
    Cuboid::new(lower, upper).unwrap()
}

/// A concept with `k` cuboids around a shared random point.
pub fn concept(rng: &mut impl Rng, s: &DomainStructure, k: usize) -> Concept {
    let p = point(rng, s.n_dims(), 0.2, 0.8);
    let cuboids = (0..k).map(|_| cuboid_around(rng, &p, 0.2)).collect();
    let core = CoreRegion::new(s.clone(), cuboids).unwrap();
    let mu0 = rng.random_range(0.3..=1.0);
    let c = rng.random_range(2.0..20.0);
    Concept::new(core, mu0, c, weights(rng, s)).unwrap()
}

/// A concept nested inside `outer`: a smaller core, no greater height and
/// faster decay under the same weights.
pub fn nested(rng: &mut impl Rng, outer: &Concept) -> Concept {
    let central = outer.core().central();
    let lower: Vec<f64> = central
        .lower()
        .iter()
        .zip(central.upper())
        .map(|(l, u)| l + rng.random_range(0.0..0.5) * (u - l))
        .collect();
    let upper: Vec<f64> = lower
        .iter()
        .zip(central.upper())
        .map(|(l, u)| l + rng.random_range(0.0..=1.0) * (u - l))
        .collect();
    let core = CoreRegion::new(
        outer.structure().clone(),
        vec![Cuboid::new(lower, upper).unwrap()],
    )
    .unwrap();
    let mu0 = outer.mu0() * rng.random_range(0.5..=1.0);
    let c = outer.c() * rng.random_range(1.0..3.0);
    Concept::new(core, mu0, c, outer.weights().clone()).unwrap()
}

/// Points covering the unit box and a margin around it.
pub fn samples(rng: &mut impl Rng, n_dims: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| point(rng, n_dims, -0.1, 1.1)).collect()
}

//! Small numeric helpers shared by the measure, relations and oracle code.

use std::f64::consts::PI;

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Γ(k/2 + 1) for a natural k, through n! and the half-integer recurrence.
pub(crate) fn gamma_half_plus_one(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        factorial(k / 2)
    } else {
        // Γ(m + 1/2) with m = (k + 1) / 2, built up from Γ(1/2) = √π.
        let m = k.div_ceil(2);
        (0..m).fold(PI.sqrt(), |acc, j| acc * (f64::from(j) + 0.5))
    }
}

/// `k! · π^{k/2} / Γ(k/2 + 1)`: the per-domain factor of the combined-metric
/// hyperball volume for a domain with `k` dimensions.
pub(crate) fn domain_ball_factor(k: u32) -> f64 {
    factorial(k) * PI.powf(f64::from(k) / 2.0) / gamma_half_plus_one(k)
}

const PRIMES: [u32; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131,
];

/// Van der Corput radical inverse of `index` in base `PRIMES[axis]`.
pub(crate) fn halton(index: u64, axis: usize) -> f64 {
    let base = u64::from(PRIMES[axis % PRIMES.len()]);
    let inv_base = 1.0 / base as f64;
    let mut i = index;
    let mut f = inv_base;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv_base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_half_integers() {
        assert_eq!(gamma_half_plus_one(0), 1.0);
        assert_eq!(gamma_half_plus_one(2), 1.0);
        assert_eq!(gamma_half_plus_one(4), 2.0);
        assert!((gamma_half_plus_one(1) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma_half_plus_one(3) - 3.0 * PI.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn ball_factors_match_unit_balls() {
        // k! times the unit Euclidean ball volume.
        assert!((domain_ball_factor(1) - 2.0).abs() < 1e-15);
        assert!((domain_ball_factor(2) - 2.0 * PI).abs() < 1e-14);
        assert!((domain_ball_factor(3) - 6.0 * 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let acc: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.total(), 2.0);
    }

    #[test]
    fn halton_base_two() {
        let v: Vec<f64> = (1..5).map(|i| halton(i, 0)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }
}

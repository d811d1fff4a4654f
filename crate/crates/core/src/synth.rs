//! Seeded synthetic data for acceptance and calibration tests.
//!
//! Generator: ChaCha8 seeded with `seed_from_u64(seed)`. Uniforms take the
//! top 53 bits of `next_u64`; normals come from the Box–Muller transform
//! (both outputs used, cosine first) evaluated with `libm`, so a seed
//! produces the same bits on every platform.

use alloc::vec::Vec;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::timeseries::AlignedPair;

pub const MIN_SYNTHETIC_LEN: usize = 50;

/// Standard normal draws from a seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    pub fn fill(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sample()).collect()
    }

    /// Fisher–Yates shuffle driven by the same stream.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.uniform() * (i + 1) as f64) as usize;
            items.swap(i, j.min(i));
        }
    }
}

/// First synthetic date, a Monday.
pub fn synthetic_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2015, 5, 4).expect("valid date")
}

/// `n` consecutive weekdays starting at `start` (rolled forward if it falls
/// on a weekend).
pub fn weekdays_from(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut day = start;
    while out.len() < n {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day);
        }
        day = day.succ_opt().expect("date in range");
    }
    out
}

/// `x_t ~ N(0,1)` i.i.d.; `y_0 = 0`, `y_t = 0.5·y_{t−1} + c·x_{t−1} + ε_t`
/// with `ε_t ~ N(0, noise_sd²)`.
///
/// All `n` values of `x` are drawn first, then the `n − 1` innovations, so
/// for a fixed seed `x` and the innovations do not depend on `coupling`.
pub fn gen_synthetic(n: usize, coupling: f64, noise_sd: f64, seed: u64) -> Result<AlignedPair> {
    if n < MIN_SYNTHETIC_LEN {
        return Err(Error::DomainError("synthetic series needs n >= 50"));
    }
    if !(noise_sd > 0.0) || !noise_sd.is_finite() {
        return Err(Error::DomainError("noise_sd must be positive"));
    }
    if !coupling.is_finite() {
        return Err(Error::DomainError("coupling must be finite"));
    }
    let mut g = GaussianSampler::new(seed);
    let x = g.fill(n);
    let mut y = Vec::with_capacity(n);
    y.push(0.0);
    for t in 1..n {
        let eps = noise_sd * g.sample();
        y.push(0.5 * y[t - 1] + coupling * x[t - 1] + eps);
    }
    AlignedPair::new(weekdays_from(synthetic_start(), n), y, x)
}

/// Two independent standard-normal series of length `n`.
pub fn white_noise_pair(n: usize, seed: u64) -> Result<AlignedPair> {
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let mut g = GaussianSampler::new(seed);
    let y = g.fill(n);
    let x = g.fill(n);
    AlignedPair::new(weekdays_from(synthetic_start(), n), y, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = gen_synthetic(200, 0.8, 0.1, 42).unwrap();
        let b = gen_synthetic(200, 0.8, 0.1, 42).unwrap();
        assert_eq!(a, b);
        let c = gen_synthetic(200, 0.8, 0.1, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn x_independent_of_coupling() {
        let a = gen_synthetic(100, 0.0, 0.5, 1).unwrap();
        let b = gen_synthetic(100, 0.9, 0.5, 1).unwrap();
        assert_eq!(a.x(), b.x());
        assert_eq!(a.y()[0], 0.0);
        assert_ne!(a.y(), b.y());
    }

    #[test]
    fn recursion_holds() {
        let p = gen_synthetic(60, 0.8, 1e-9, 3).unwrap();
        for t in 1..60 {
            let pred = 0.5 * p.y()[t - 1] + 0.8 * p.x()[t - 1];
            assert!((p.y()[t] - pred).abs() < 1e-7);
        }
    }

    #[test]
    fn dates_are_weekdays() {
        let d = weekdays_from(synthetic_start(), 10);
        assert_eq!(d[0], synthetic_start());
        assert_eq!(d[5], NaiveDate::from_ymd_opt(2015, 5, 11).unwrap());
        assert!(d.iter().all(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_synthetic(49, 0.5, 1.0, 0).is_err());
        assert!(gen_synthetic(100, 0.5, 0.0, 0).is_err());
        assert!(gen_synthetic(100, f64::NAN, 1.0, 0).is_err());
    }

    #[test]
    fn sampler_moments() {
        let mut g = GaussianSampler::new(2024);
        let v = g.fill(200_000);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.01);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut g = GaussianSampler::new(5);
        let mut v: Vec<usize> = (0..100).collect();
        g.shuffle(&mut v);
        let mut s = v.clone();
        s.sort_unstable();
        assert_eq!(s, (0..100).collect::<Vec<_>>());
        assert_ne!(v, s);
    }
}

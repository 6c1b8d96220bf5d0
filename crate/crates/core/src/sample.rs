//! Seeded random elements for property checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matgroup::{AlgebraElement, CMat, GroupElement};
use crate::rootdata::Weight;

/// Deterministic source of random algebra, group and torus elements.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Entries uniform in `[-1, 1]` before projection onto `su(n)`.
    pub fn algebra(&mut self, n: usize) -> AlgebraElement {
        let m =
            CMat::from_fn(n, n, |_, _| Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)));
        AlgebraElement::project(&m)
    }

    pub fn diagonal_algebra(&mut self, n: usize) -> AlgebraElement {
        let mut a: Vec<f64> = (0..n).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
        let mean = a.iter().sum::<f64>() / n as f64;
        a.iter_mut().for_each(|x| *x -= mean);
        AlgebraElement::diagonal(&a).expect("traceless by construction")
    }

    /// `exp` of an algebra element of norm up to 2π.
    pub fn group(&mut self, n: usize) -> GroupElement {
        let a = self.algebra(n);
        let s = self.rng.gen_range(0.0..2.0 * PI) / a.norm().max(1e-12);
        a.scale(s).exp()
    }

    /// A random element of the diagonal torus.
    pub fn torus(&mut self, n: usize) -> GroupElement {
        self.diagonal_algebra(n).scale(PI * 2.0).exp()
    }

    /// Integral weight of type A with coordinates in `[lo, hi]`.
    pub fn weight(&mut self, rank: usize, lo: i64, hi: i64) -> Weight {
        let c: Vec<i64> = (0..rank).map(|_| self.rng.gen_range(lo..=hi)).collect();
        Weight::from_ints(&c)
    }
}

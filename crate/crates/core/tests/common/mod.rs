//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcov::{SpectralMeasure, StableModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit vector in the plane at angle `phi`.
pub fn planar(phi: f64) -> Vec<f64> {
    vec![phi.cos(), phi.sin()]
}

/// Uniformly distributed direction on `S_{d-1}`.
pub fn direction(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Symmetric measure on `S_{d-1}` built from `1..=max_pairs` random
/// antipodal pairs.
pub fn measure(rng: &mut impl Rng, d: usize, max_pairs: usize) -> SpectralMeasure {
    let pairs = rng.random_range(1..=max_pairs);
    let atoms: Vec<(Vec<f64>, f64)> = (0..pairs)
        .map(|_| (direction(rng, d), rng.random_range(0.05..1.0)))
        .collect();
    SpectralMeasure::from_pairs(d, atoms).unwrap().symmetrize()
}

pub fn model(rng: &mut impl Rng, d: usize, max_pairs: usize, alpha: f64) -> StableModel {
    StableModel::new(alpha, measure(rng, d, max_pairs)).unwrap()
}

/// Measure concentrated on the coordinate axes of the plane.
pub fn axis_measure(w1: f64, w2: f64) -> SpectralMeasure {
    SpectralMeasure::from_pairs(2, [(vec![1.0, 0.0], w1), (vec![0.0, 1.0], w2)])
        .unwrap()
        .symmetrize()
}

/// Measure invariant under `s1 -> -s1` (and `s2 -> -s2`): every atom
/// `(a, b)` comes with all four sign combinations.
pub fn quadrant_measure(rng: &mut impl Rng, pairs: usize) -> SpectralMeasure {
    let mut atoms = Vec::new();
    for _ in 0..pairs {
        let phi = rng.random_range(0.0..PI / 2.0);
        let w = rng.random_range(0.05..1.0);
        for (sa, sb) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            atoms.push((vec![sa * phi.cos(), sb * phi.sin()], w));
        }
    }
    SpectralMeasure::from_pairs(2, atoms).unwrap()
}

/// Measure for `X1 = lambda X2`: all mass on `+-(lambda, 1)/|(lambda, 1)|`.
pub fn proportional_measure(lambda: f64, w: f64) -> SpectralMeasure {
    let n = (lambda * lambda + 1.0).sqrt();
    SpectralMeasure::from_pairs(2, [(vec![lambda / n, 1.0 / n], w)])
        .unwrap()
        .symmetrize()
}

/// S_3 measure with `s2 s3 = 0` on every atom: atoms in the (x1, x2) and
/// (x1, x3) planes.
pub fn split_support_measure(rng: &mut impl Rng, pairs: usize) -> SpectralMeasure {
    let mut atoms = Vec::new();
    for i in 0..pairs {
        let phi = rng.random_range(0.0..2.0 * PI);
        let w = rng.random_range(0.05..1.0);
        let s = if i % 2 == 0 {
            vec![phi.cos(), phi.sin(), 0.0]
        } else {
            vec![phi.cos(), 0.0, phi.sin()]
        };
        atoms.push((s, w));
    }
    SpectralMeasure::from_pairs(3, atoms).unwrap().symmetrize()
}

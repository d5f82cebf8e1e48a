//! Monte Carlo sampling of SαS vectors with a given spectral measure.
//!
//! Scalar draws use the symmetric Chambers–Mallows–Stuck transform and
//! have characteristic function `exp(-|t|^alpha)`; in particular `alpha = 2`
//! gives `Normal(0, 2)`. A vector draw is `X = sum_j w_j^(1/alpha) Z_j s_j`
//! with independent scalar draws `Z_j`, whose characteristic function is
//! `exp(-sum_j w_j |<theta, s_j>|^alpha)`.
//!
//! Randomness comes from ChaCha8. The variate `Z_j` of draw `i` is read from
//! the generator keyed by `(seed, j)` on stream `i`, so every draw depends
//! only on `(seed, j, i)` and parallel generation is reproducible.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::spectral_measure::{check_alpha, SpectralMeasure, StableModel};

/// Draws are summed in fixed-size chunks so reductions do not depend on
/// the thread pool.
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    /// Row-major `n x dim` draws.
    draws: Vec<f64>,
    dim: usize,
    seed: u64,
    alpha: f64,
}

impl SampleBatch {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.draws.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn draw(&self, i: usize) -> &[f64] {
        &self.draws[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.draws.chunks_exact(self.dim.max(1))
    }

    /// Flat row-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.draws
    }
}

fn generator(seed: u64, atom: u64, draw: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&atom.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(draw);
    rng
}

/// Uniform on the open interval `(0, 1)`.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// One standard symmetric stable variate from a uniform angle and a unit
/// exponential.
fn cms(alpha: f64, rng: &mut ChaCha8Rng) -> f64 {
    let u = PI * (open_unit(rng) - 0.5);
    let w = -open_unit(rng).ln();
    if alpha == 1.0 {
        u.tan()
    } else if alpha == 2.0 {
        2.0 * w.sqrt() * u.sin()
    } else {
        (alpha * u).sin() / u.cos().powf(1.0 / alpha)
            * ((((1.0 - alpha) * u).cos()) / w).powf((1.0 - alpha) / alpha)
    }
}

fn standard_variate(alpha: f64, seed: u64, atom: u64, draw: u64) -> f64 {
    cms(alpha, &mut generator(seed, atom, draw))
}

/// `n` i.i.d. draws with characteristic function `exp(-|t|^alpha)`.
pub fn sample_standard_sas(alpha: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    check_alpha(alpha).map_err(|_| Error::Domain(format!("alpha must be in (0, 2], got {alpha}")))?;
    Ok((0..n)
        .into_par_iter()
        .map(|i| standard_variate(alpha, seed, 0, i as u64))
        .collect())
}

/// Draws from the SαS law with exponent `alpha` and spectral measure
/// `measure`. The measure need not be symmetric: the scalar variates are,
/// so the law only depends on the symmetrized measure.
pub fn sample_from_measure(
    alpha: f64,
    measure: &SpectralMeasure,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    check_alpha(alpha)?;
    let dim = measure.dim();
    let scales: Vec<(f64, &[f64])> = measure
        .atoms()
        .iter()
        .map(|a| (a.weight().powf(1.0 / alpha), a.direction()))
        .collect();
    let mut draws = vec![0.0; n * dim];
    if dim > 0 {
        draws.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
            for (j, (scale, s)) in scales.iter().enumerate() {
                let z = scale * standard_variate(alpha, seed, j as u64, i as u64);
                for (x, sk) in row.iter_mut().zip(s.iter()) {
                    *x += z * sk;
                }
            }
        });
    }
    Ok(SampleBatch {
        draws,
        dim,
        seed,
        alpha,
    })
}

pub fn sample_vector(model: &StableModel, n: usize, seed: u64) -> Result<SampleBatch> {
    sample_from_measure(model.alpha(), model.measure(), n, seed)
}

/// `(mean cos<theta, X_i>, mean sin<theta, X_i>)`.
pub fn empirical_chf(batch: &SampleBatch, theta: &[f64]) -> Result<(f64, f64)> {
    check_dim(batch.dim(), theta.len())?;
    if batch.is_empty() {
        return Err(Error::Domain("empirical CHF of an empty batch".into()));
    }
    let partial: Vec<(f64, f64)> = batch
        .as_slice()
        .par_chunks(CHUNK * batch.dim())
        .map(|chunk| {
            chunk
                .chunks_exact(batch.dim())
                .fold((0.0, 0.0), |(c, s), x| {
                    let t: f64 = x.iter().zip(theta).map(|(a, b)| a * b).sum();
                    let (sin, cos) = t.sin_cos();
                    (c + cos, s + sin)
                })
        })
        .collect();
    let (c, s) = partial
        .iter()
        .fold((0.0, 0.0), |(c, s), &(pc, ps)| (c + pc, s + ps));
    let n = batch.len() as f64;
    Ok((c / n, s / n))
}

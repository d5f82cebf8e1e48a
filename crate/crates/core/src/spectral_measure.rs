//! Finite discrete spectral measures on the unit sphere and the jointly
//! symmetric alpha-stable laws they parameterize.
//!
//! A law is described by a stability index `alpha` in `(0, 2]` and a
//! symmetric measure `Gamma` on `S_d`; its characteristic function is
//! `exp(-sum_j w_j |<theta, s_j>|^alpha)`. Every integral against `Gamma`
//! is a finite sum over atoms, evaluated left to right in stored order so
//! results are bit-reproducible.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Absolute tolerance on `| ||s|| - 1 |` for atom directions.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Coordinate-wise tolerance under which two directions are the same atom.
pub const MERGE_TOL: f64 = 1e-12;
/// Weight tolerance used when checking antipodal pairing.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralAtom {
    direction: Vec<f64>,
    weight: f64,
}

impl SpectralAtom {
    pub fn new(direction: Vec<f64>, weight: f64) -> Result<Self> {
        if direction.is_empty() {
            return Err(Error::Validation("atom direction is empty".into()));
        }
        if direction.iter().any(|c| !c.is_finite()) || !weight.is_finite() {
            return Err(Error::Validation("atom has non-finite entries".into()));
        }
        let norm = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::Validation(format!(
                "atom direction {direction:?} has norm {norm}, expected 1"
            )));
        }
        if weight < 0.0 {
            return Err(Error::Validation(format!("atom weight {weight} is negative")));
        }
        Ok(Self { direction, weight })
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    fn negated(&self) -> Vec<f64> {
        // Avoid producing -0.0 coordinates.
        self.direction
            .iter()
            .map(|&c| if c == 0.0 { 0.0 } else { -c })
            .collect()
    }
}

fn same_direction(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= MERGE_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    dim: usize,
    atoms: Vec<SpectralAtom>,
}

impl SpectralMeasure {
    pub fn new(dim: usize, atoms: Vec<SpectralAtom>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        for atom in &atoms {
            check_dim(dim, atom.direction.len())?;
        }
        Ok(Self { dim, atoms })
    }

    /// Builds a measure from `(direction, weight)` pairs.
    pub fn from_pairs<I, V>(dim: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, f64)>,
        V: Into<Vec<f64>>,
    {
        let atoms = pairs
            .into_iter()
            .map(|(s, w)| SpectralAtom::new(s.into(), w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, atoms)
    }

    /// The zero measure on `S_dim`.
    pub fn empty(dim: usize) -> Self {
        Self { dim, atoms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Adds `weight` at `direction`, merging into an existing atom with the
    /// same direction. The first-seen atom keeps its position.
    fn push_merged(atoms: &mut Vec<SpectralAtom>, direction: Vec<f64>, weight: f64) {
        match atoms
            .iter_mut()
            .find(|a| same_direction(&a.direction, &direction))
        {
            Some(existing) => existing.weight += weight,
            None => atoms.push(SpectralAtom { direction, weight }),
        }
    }

    /// Merges atoms whose directions coincide within [`MERGE_TOL`].
    pub fn merged(&self) -> Self {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            Self::push_merged(&mut atoms, atom.direction.clone(), atom.weight);
        }
        Self { dim: self.dim, atoms }
    }

    /// Splits every atom `(s, w)` into `(s, w/2)` and `(-s, w/2)`, merging
    /// coinciding directions.
    pub fn symmetrize(&self) -> Self {
        let mut atoms = Vec::with_capacity(2 * self.atoms.len());
        for atom in &self.atoms {
            let half = 0.5 * atom.weight;
            Self::push_merged(&mut atoms, atom.direction.clone(), half);
            Self::push_merged(&mut atoms, atom.negated(), half);
        }
        Self { dim: self.dim, atoms }
    }

    /// Antipodal pairing check: every `(s, w)` has a partner `(-s, w)`.
    pub fn is_symmetric(&self) -> bool {
        let merged = self.merged();
        merged.atoms.iter().all(|atom| {
            let neg = atom.negated();
            merged.atoms.iter().any(|other| {
                same_direction(&other.direction, &neg)
                    && (other.weight - atom.weight).abs() <= WEIGHT_TOL
            })
        })
    }

    /// `sum_j w_j f(s_j)`, accumulated left to right in stored atom order.
    pub fn integrate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&[f64]) -> f64,
    {
        let mut acc = 0.0;
        for (index, atom) in self.atoms.iter().enumerate() {
            let v = f(&atom.direction);
            if !v.is_finite() {
                return Err(Error::numerical(
                    format!(
                        "integrand is {v} at atom {index} (direction {:?}, weight {})",
                        atom.direction, atom.weight
                    ),
                    Some(v),
                ));
            }
            acc += atom.weight * v;
        }
        Ok(acc)
    }

    /// Applies `map` to every direction. The result is validated, so `map`
    /// must send unit vectors to unit vectors.
    pub fn map_directions<F>(&self, mut map: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let atoms = self
            .atoms
            .iter()
            .map(|a| SpectralAtom::new(map(&a.direction), a.weight))
            .collect::<Result<Vec<_>>>()?;
        let dim = atoms.first().map_or(self.dim, |a| a.direction.len());
        Self::new(dim, atoms)
    }

    /// Exchanges coordinates `i` and `j` of every atom.
    pub fn swap_coordinates(&self, i: usize, j: usize) -> Result<Self> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: i.max(j) + 1,
            });
        }
        self.map_directions(|s| {
            let mut v = s.to_vec();
            v.swap(i, j);
            v
        })
    }

    /// Negates coordinate `i` of every atom.
    pub fn negate_coordinate(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: i + 1,
            });
        }
        self.map_directions(|s| {
            let mut v = s.to_vec();
            v[i] = -v[i];
            v
        })
    }
}

/// A jointly symmetric alpha-stable law: index of stability plus a
/// symmetric spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableModel {
    alpha: f64,
    measure: SpectralMeasure,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Validation(format!(
            "alpha = {alpha} is outside (0, 2]"
        )));
    }
    Ok(())
}

impl StableModel {
    pub fn new(alpha: f64, measure: SpectralMeasure) -> Result<Self> {
        check_alpha(alpha)?;
        if !measure.is_symmetric() {
            return Err(Error::Validation(
                "spectral measure is not symmetric under s -> -s".into(),
            ));
        }
        Ok(Self { alpha, measure })
    }

    /// Symmetrizes `measure` before building the model.
    pub fn symmetrized(alpha: f64, measure: &SpectralMeasure) -> Result<Self> {
        Self::new(alpha, measure.symmetrize())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.measure.dim
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.measure.clone())
    }

    pub fn with_measure(&self, measure: SpectralMeasure) -> Result<Self> {
        Self::new(self.alpha, measure)
    }

    /// `sigma^alpha(theta) = integral of |<theta, s>|^alpha`.
    pub fn scale_parameter_pow(&self, theta: &[f64]) -> Result<f64> {
        check_dim(self.dim(), theta.len())?;
        let alpha = self.alpha;
        self.measure
            .integrate(|s| dot(theta, s).abs().powf(alpha))
    }

    /// The scale parameter of `<theta, X>`.
    pub fn scale_parameter_direct(&self, theta: &[f64]) -> Result<f64> {
        let integral = self.scale_parameter_pow(theta)?;
        if integral == 0.0 {
            return Ok(0.0);
        }
        Ok(integral.powf(1.0 / self.alpha))
    }

    /// `E exp(i <theta, X>) = exp(-sigma^alpha(theta))`, real for symmetric laws.
    pub fn characteristic_function(&self, theta: &[f64]) -> Result<f64> {
        Ok((-self.scale_parameter_pow(theta)?).exp())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Result of [`pushforward_linear`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pushforward {
    pub model: StableModel,
    /// Atoms sent to the origin (`A = B = 0`), which carry no mass.
    pub dropped_atoms: usize,
}

/// Spectral measure of `(Y1, Y2) = (sum a_k X_k, sum b_k X_k)`.
///
/// Each atom `s` maps to `(A, B) / sqrt(A^2 + B^2)` with weight
/// `w (A^2 + B^2)^(alpha/2)`. With `a = b = 0` the image is the zero
/// measure, returned only when `allow_degenerate` is set.
pub fn pushforward_linear(
    model: &StableModel,
    a: &[f64],
    b: &[f64],
    allow_degenerate: bool,
) -> Result<Pushforward> {
    check_dim(model.dim(), a.len())?;
    check_dim(model.dim(), b.len())?;
    let all_zero = a.iter().chain(b).all(|&c| c == 0.0);
    if all_zero && !allow_degenerate {
        return Err(Error::DegenerateMap);
    }

    let alpha = model.alpha;
    let mut atoms: Vec<SpectralAtom> = Vec::with_capacity(model.measure.len());
    let mut dropped_atoms = 0;
    for atom in &model.measure.atoms {
        let big_a = dot(a, &atom.direction);
        let big_b = dot(b, &atom.direction);
        let r2 = big_a * big_a + big_b * big_b;
        if r2 == 0.0 {
            dropped_atoms += 1;
            continue;
        }
        let r = r2.sqrt();
        let direction = vec![big_a / r, big_b / r];
        let weight = atom.weight * r2.powf(0.5 * alpha);
        SpectralMeasure::push_merged(&mut atoms, direction, weight);
    }
    let measure = SpectralMeasure::new(2, atoms)?;
    Ok(Pushforward {
        model: StableModel::new(alpha, measure)?,
        dropped_atoms,
    })
}

/// Midpoint-rule discretization of a density on `[0, 2 pi)` onto `S_2`,
/// symmetrized afterwards.
pub fn discretize_density<F>(density: F, n_points: usize) -> Result<SpectralMeasure>
where
    F: Fn(f64) -> f64,
{
    if n_points < 4 {
        return Err(Error::Validation(format!(
            "n_points = {n_points}, need at least 4"
        )));
    }
    let step = 2.0 * PI / n_points as f64;
    let mut atoms = Vec::with_capacity(n_points);
    for j in 0..n_points {
        let phi = (j as f64 + 0.5) * step;
        let d = density(phi);
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::Validation(format!(
                "density is {d} at angle {phi}"
            )));
        }
        atoms.push(SpectralAtom::new(vec![phi.cos(), phi.sin()], d * step)?);
    }
    Ok(SpectralMeasure::new(2, atoms)?.symmetrize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub s: Vec<f64>,
    pub w: f64,
}

/// On-disk measure description:
/// `{ "alpha": .., "atoms": [{ "s": [..], "w": .. }], "auto_symmetrize": .. }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub alpha: f64,
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub auto_symmetrize: bool,
}

impl MeasureSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Validates the atoms and builds the model, symmetrizing when
    /// `auto_symmetrize` is set. Asymmetric input is an error otherwise.
    pub fn to_model(&self) -> Result<StableModel> {
        let dim = self
            .atoms
            .first()
            .map(|a| a.s.len())
            .ok_or_else(|| Error::Validation("measure has no atoms".into()))?;
        let measure =
            SpectralMeasure::from_pairs(dim, self.atoms.iter().map(|a| (a.s.clone(), a.w)))?;
        let measure = if self.auto_symmetrize {
            measure.symmetrize()
        } else {
            measure
        };
        StableModel::new(self.alpha, measure)
    }

    pub fn from_model(model: &StableModel) -> Self {
        Self {
            alpha: model.alpha,
            atoms: model
                .measure
                .atoms
                .iter()
                .map(|a| AtomSpec {
                    s: a.direction.clone(),
                    w: a.weight,
                })
                .collect(),
            auto_symmetrize: false,
        }
    }
}

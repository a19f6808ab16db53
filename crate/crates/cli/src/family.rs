//! One-parameter state families read from JSON.

use serde::{Deserialize, Serialize};
use sldkit_core::json::{matrix_from_json, MatrixJson};
use sldkit_core::linalg::{hermitize, unitary_from_generator};
use sldkit_core::state_space::{numeric_tangent, tangent_from_generator, transport_state, transversal_tangent};
use sldkit_core::{Basis, Error, Matrix, State, Tangent, Weights};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// `ρ(θ) = e^{-iθK} ρ₀ e^{iθK}` with `ρ₀ = diag(weights)`.
    ExpGenerator { n: usize, weights: Vec<f64>, generator_coeffs: Vec<f64> },
    /// Piecewise-linear path through `(θ, ρ)` samples.
    ExplicitMatrices {
        n: usize,
        matrices: Vec<(f64, MatrixJson)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fd_step: Option<f64>,
    },
    /// `ρ(θ) = diag(weights + θ · weight_rates)`.
    WeightPath { n: usize, weights: Vec<f64>, weight_rates: Vec<f64> },
}

impl FamilySpec {
    pub fn dimension(&self) -> usize {
        match self {
            Self::ExpGenerator { n, .. } | Self::ExplicitMatrices { n, .. } | Self::WeightPath { n, .. } => *n,
        }
    }
}

enum Path {
    Exp { rho0: State, k: Matrix },
    Explicit { samples: Vec<(f64, Matrix)>, h: f64 },
    Weights { k: Vec<f64>, dk: Vec<f64> },
}

/// A validated family bound to its generator basis.
pub struct Family {
    basis: Basis,
    path: Path,
}

impl Family {
    pub fn new(spec: &FamilySpec, basis: Basis, fd_step: f64) -> Result<Self, CliError> {
        let n = spec.dimension();
        if basis.dimension() != n {
            return Err(Error::DimensionMismatch { expected: n, found: basis.dimension() }.into());
        }
        let path = match spec {
            FamilySpec::ExpGenerator { weights, generator_coeffs, .. } => {
                let weights = Weights::new(weights, n)?;
                let rho0 = State::base_point(&basis, &weights)?;
                if generator_coeffs.len() != basis.len() {
                    return Err(Error::DimensionMismatch { expected: basis.len(), found: generator_coeffs.len() }.into());
                }
                Path::Exp { rho0, k: basis.reconstruct(0.0, generator_coeffs) }
            }
            FamilySpec::ExplicitMatrices { matrices, fd_step: own_step, .. } => {
                let h = own_step.unwrap_or(fd_step);
                if !(h > 0.0) {
                    return Err(CliError::Usage(format!("fd_step must be positive (got {h})")));
                }
                if matrices.len() < 2 {
                    return Err(CliError::Usage("explicit_matrices needs at least two samples".into()));
                }
                let mut samples = Vec::with_capacity(matrices.len());
                for (theta, m) in matrices {
                    let m = matrix_from_json(m)?;
                    let state = State::from_matrix(&basis, m)?;
                    samples.push((*theta, state.matrix().clone()));
                }
                if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(CliError::Usage("sample angles must be strictly increasing".into()));
                }
                Path::Explicit { samples, h }
            }
            FamilySpec::WeightPath { weights, weight_rates, .. } => {
                Weights::new(weights, n)?;
                if weight_rates.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: weight_rates.len() }.into());
                }
                let mut k = weights.clone();
                k.resize(n, 0.0);
                Path::Weights { k, dk: weight_rates.clone() }
            }
        };
        Ok(Self { basis, path })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// `ρ(θ)` and `dρ/dθ`.
    pub fn at(&self, theta: f64) -> Result<(State, Tangent), CliError> {
        let basis = &self.basis;
        match &self.path {
            Path::Exp { rho0, k } => {
                let u = unitary_from_generator(k, -theta);
                let rho = transport_state(basis, &u, rho0)?;
                let form = tangent_from_generator(basis, k, &rho)?;
                Ok((rho, form))
            }
            Path::Explicit { samples, h } => {
                let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
                if theta - h < lo || theta + h > hi {
                    return Err(CliError::Usage(format!("θ = {theta} ± {h} leaves the sampled range [{lo}, {hi}]")));
                }
                let rho = State::from_matrix(basis, interpolate(samples, theta))?;
                let form = numeric_tangent(basis, |x| Ok::<_, Error>(interpolate(samples, x)), theta, *h)?;
                Ok((rho, form))
            }
            Path::Weights { k, dk } => {
                let at: Vec<f64> = k.iter().zip(dk).map(|(k, d)| k + theta * d).collect();
                let weights = Weights::new(&at, at.len())?;
                let rho = State::base_point(basis, &weights)?;
                let form = transversal_tangent(basis, dk, &rho)?;
                Ok((rho, form))
            }
        }
    }
}

fn interpolate(samples: &[(f64, Matrix)], theta: f64) -> Matrix {
    let i = samples.partition_point(|(t, _)| *t <= theta).clamp(1, samples.len() - 1);
    let (t0, m0) = &samples[i - 1];
    let (t1, m1) = &samples[i];
    let s = (theta - t0) / (t1 - t0);
    hermitize(&(m0 * nalgebra::Complex::new(1.0 - s, 0.0) + m1 * nalgebra::Complex::new(s, 0.0)))
}

//! Quantum Fisher information and the Fisher tensor `F_μν = Tr(ρ L_μ L_ν)`.
//!
//! For Hermitian `L_μ` the real part of `F` is the symmetric QFI metric
//! `g = ½ Tr(ρ{L_μ, L_ν})` and the imaginary part is the antisymmetric
//! `ω = (1/2i) Tr(ρ[L_μ, L_ν])`.
//!
//! The qutrit flag chart uses complex coordinates `z₁, z₂, z₃` attached to
//! the generator pairs `(1,2)`, `(1,3)`, `(2,3)`, with
//!
//! ```text
//!        ⎛ 0        r₁ dz₁*  r₂ dz₂* ⎞
//! dρ₀ =  ⎜ r₁ dz₁   0        r₃ dz₃* ⎟ ,   r₁ = k₁-k₂, r₂ = k₁-k₃, r₃ = k₂-k₃.
//!        ⎝ r₂ dz₂   r₃ dz₃   0       ⎠
//! ```

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::lie_basis::{GeneratorBasis, GeneratorKind, StructureConstants};
use crate::linalg::{anticommutator, trace_product};
use crate::scalar::{CMatrix, Real};
use crate::sld_solver::{solve_sld, SLDSolution};
use crate::state_space::{tangent_from_generator, DensityState, MixingWeights, TangentForm};

#[derive(Clone, Debug, PartialEq)]
pub struct FisherTensorResult<T: Real> {
    pub directions: usize,
    pub components: CMatrix<T>,
    pub symmetric: DMatrix<T>,
    pub antisymmetric: DMatrix<T>,
}

/// `I = Tr(ρ L²)`.
pub fn qfi_index<T: Real>(state: &DensityState<T>, sld: &SLDSolution<T>) -> Result<T> {
    if sld.dimension() != state.dimension() {
        return Err(Error::DimensionMismatch { expected: state.dimension(), found: sld.dimension() });
    }
    Ok(trace_product(state.matrix(), &(&sld.matrix * &sld.matrix)).re)
}

pub fn fisher_tensor<T: Real>(state: &DensityState<T>, slds: &[SLDSolution<T>]) -> Result<FisherTensorResult<T>> {
    let n = state.dimension();
    if let Some(bad) = slds.iter().find(|s| s.dimension() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dimension() });
    }
    let p = slds.len();
    let rho_l: Vec<CMatrix<T>> = slds.iter().map(|s| state.matrix() * &s.matrix).collect();
    let components = CMatrix::from_fn(p, p, |mu, nu| trace_product(&rho_l[mu], &slds[nu].matrix));
    // exact Hermitian symmetry of F is restored by averaging
    let half = T::lit(0.5);
    let components = (&components + components.adjoint()).map(|z| z * half);
    let symmetric = components.map(|z| z.re);
    let antisymmetric = components.map(|z| z.im);
    Ok(FisherTensorResult { directions: p, components, symmetric, antisymmetric })
}

/// `Tr(ρ {L_h, L_T})`, the cross term between a horizontal and a
/// transversal SLD.
pub fn horizontal_transversal_split_check<T: Real>(
    state: &DensityState<T>,
    horizontal: &SLDSolution<T>,
    transversal: &SLDSolution<T>,
) -> Result<T> {
    let n = state.dimension();
    for found in [horizontal.dimension(), transversal.dimension()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    Ok(trace_product(state.matrix(), &anticommutator(&horizontal.matrix, &transversal.matrix)).re)
}

/// Exponential chart at the base point of a qutrit orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagChartU3<T: Real> {
    weights: MixingWeights<T>,
    gaps: [T; 3],
}

impl<T: Real> FlagChartU3<T> {
    /// Chart on a full flag orbit; repeated weights are rejected because a
    /// zero gap collapses the matching coordinate.
    pub fn new(weights: &MixingWeights<T>) -> Result<Self> {
        let chart = Self::allow_degenerate(weights)?;
        if chart.gaps.iter().any(|&r| r == T::zero()) {
            return Err(Error::Degenerate(format!(
                "repeated weights {:?} collapse the flag chart",
                weights.as_slice().iter().map(|k| k.as_f64()).collect::<Vec<_>>()
            )));
        }
        Ok(chart)
    }

    /// Same chart, keeping collapsed coordinates (their tangents are zero).
    pub fn allow_degenerate(weights: &MixingWeights<T>) -> Result<Self> {
        if weights.dimension() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: weights.dimension() });
        }
        let k = weights.as_slice();
        let gaps = [k[0] - k[1], k[0] - k[2], k[1] - k[2]];
        Ok(Self { weights: weights.clone(), gaps })
    }

    pub fn weights(&self) -> &MixingWeights<T> {
        &self.weights
    }

    /// `(r₁, r₂, r₃)`.
    pub fn gaps(&self) -> [T; 3] {
        self.gaps
    }
}

/// `∂/∂Re z` and `∂/∂Im z` for the coordinate on the `(row, col)` pair:
/// `dρ` has `(row, col)` entry `r` and `-i r` respectively.
pub fn pair_tangents<T: Real>(
    basis: &GeneratorBasis<T>,
    state: &DensityState<T>,
    row: usize,
    col: usize,
) -> Result<[TangentForm<T>; 2]> {
    let sym = basis
        .index_of(GeneratorKind::Symmetric { row, col })
        .ok_or_else(|| Error::InvalidInput(format!("no generator pair ({row}, {col})")))?;
    let anti = basis
        .index_of(GeneratorKind::Antisymmetric { row, col })
        .ok_or_else(|| Error::InvalidInput(format!("no generator pair ({row}, {col})")))?;
    let re = tangent_from_generator(basis, basis.generator(anti), state)?;
    let im = tangent_from_generator(basis, &basis.generator(sym).map(|z| -z), state)?;
    Ok([re, im])
}

pub const QUTRIT_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// The six real coordinate tangents `Re z₁, Im z₁, Re z₂, Im z₂, Re z₃, Im z₃`.
pub fn chart_tangents_u3<T: Real>(basis: &GeneratorBasis<T>, chart: &FlagChartU3<T>) -> Result<Vec<TangentForm<T>>> {
    if basis.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: basis.dimension() });
    }
    let state = DensityState::base_point(basis, &chart.weights)?;
    let mut out = Vec::with_capacity(6);
    for (row, col) in QUTRIT_PAIRS {
        out.extend(pair_tangents(basis, &state, row, col)?);
    }
    Ok(out)
}

/// Numeric Fisher tensor over the six chart directions, using the
/// structure-constant solver for every direction.
pub fn chart_fisher_u3<T: Real>(
    basis: &GeneratorBasis<T>,
    constants: &StructureConstants<T>,
    chart: &FlagChartU3<T>,
    tol: T,
) -> Result<FisherTensorResult<T>> {
    let state = DensityState::base_point(basis, &chart.weights)?;
    let slds = chart_tangents_u3(basis, chart)?
        .iter()
        .map(|form| solve_sld(basis, constants, &state, form, tol))
        .collect::<Result<Vec<_>>>()?;
    fisher_tensor(&state, &slds)
}

/// Coefficients of one complex coordinate: `g` multiplies `dz ⊙ dz*`
/// and `ω` is the antisymmetric part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCoefficients<T: Real> {
    pub g: T,
    pub omega: T,
}

impl<T: Real> PairCoefficients<T> {
    pub fn zero() -> Self {
        Self { g: T::zero(), omega: T::zero() }
    }
}

/// `g = 4|μ|² r²/s`, `ω = -4|μ|² r³/s²` with `r = k_a - k_b`,
/// `s = k_a + k_b`; both are `0` when `s = 0`.
fn pair_formula<T: Real>(ka: T, kb: T, mu_sq: T) -> PairCoefficients<T> {
    let s = ka + kb;
    if s == T::zero() {
        return PairCoefficients::zero();
    }
    let r = ka - kb;
    let four = T::lit(4.0) * mu_sq;
    PairCoefficients { g: four * r * r / s, omega: -four * r * r * r / (s * s) }
}

/// Fisher tensor coefficients of a full qutrit flag for the three
/// coordinate pairs `(1,2)`, `(1,3)`, `(2,3)`.
pub fn closed_form_fisher_u3<T: Real>(weights: &MixingWeights<T>) -> Result<[PairCoefficients<T>; 3]> {
    if weights.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: weights.dimension() });
    }
    let k = weights.as_slice();
    Ok(QUTRIT_PAIRS.map(|(a, b)| pair_formula(k[a], k[b], T::one())))
}

/// `k₃ = 0`: pair `(1,2)` is unchanged and the kernel-coupling pairs become
/// `g = -ω = 4k₁` and `g = -ω = 4k₂`.
pub fn closed_form_fisher_u3_rank2<T: Real>(weights: &MixingWeights<T>) -> Result<[PairCoefficients<T>; 3]> {
    if weights.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: weights.dimension() });
    }
    let k = weights.as_slice();
    if k[2] != T::zero() {
        return Err(Error::InvalidWeights("rank-2 Fisher tensor needs k₃ = 0".into()));
    }
    if k[0] == T::zero() || k[1] == T::zero() {
        return Err(Error::Degenerate("rank-2 Fisher tensor needs k₁ k₂ ≠ 0".into()));
    }
    let four = T::lit(4.0);
    Ok([
        pair_formula(k[0], k[1], T::one()),
        PairCoefficients { g: four * k[0], omega: -four * k[0] },
        PairCoefficients { g: four * k[1], omega: -four * k[1] },
    ])
}

/// `k₂ = k₃`: the first two pairs share the `(k₁, k₂)` coefficients and the
/// third coordinate collapses.
pub fn closed_form_fisher_u3_equal_pair<T: Real>(weights: &MixingWeights<T>) -> Result<[PairCoefficients<T>; 3]> {
    if weights.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: weights.dimension() });
    }
    let k = weights.as_slice();
    if k[1] != k[2] {
        return Err(Error::InvalidWeights("equal-pair Fisher tensor needs k₂ = k₃".into()));
    }
    let c = pair_formula(k[0], k[1], T::one());
    Ok([c, c, PairCoefficients::zero()])
}

/// Pure qutrit: `4 dz₁*⊗dz₁ + 4 dz₂*⊗dz₂`.
pub fn closed_form_fisher_cp2<T: Real>() -> [PairCoefficients<T>; 3] {
    let four = T::lit(4.0);
    let c = PairCoefficients { g: four, omega: -four };
    [c, c, PairCoefficients::zero()]
}

/// Two-level tensor with chart factor `|μ|²` (equal to 1 at the base
/// point of the exponential chart).
pub fn closed_form_fisher_u2<T: Real>(weights: &MixingWeights<T>, mu_sq: T) -> Result<PairCoefficients<T>> {
    if weights.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: weights.dimension() });
    }
    Ok(pair_formula(weights.get(0), weights.get(1), mu_sq))
}

/// Reads per-pair coefficients from a tensor laid out as
/// `(Re z₁, Im z₁, Re z₂, Im z₂, …)`: `g` from the `(Re, Re)` entry and
/// `ω` from the `(Im, Re)` entry of the antisymmetric part.
pub fn pair_coefficients<T: Real>(tensor: &FisherTensorResult<T>) -> Vec<PairCoefficients<T>> {
    (0..tensor.directions / 2)
        .map(|p| PairCoefficients { g: tensor.symmetric[(2 * p, 2 * p)], omega: tensor.antisymmetric[(2 * p + 1, 2 * p)] })
        .collect()
}

/// Largest `|F_μν|` outside the 2×2 diagonal blocks.
pub fn cross_block_max<T: Real>(tensor: &FisherTensorResult<T>) -> T {
    let p = tensor.directions;
    let mut worst = T::zero();
    for mu in 0..p {
        for nu in 0..p {
            if mu / 2 != nu / 2 {
                worst = worst.max(tensor.components[(mu, nu)].modulus());
            }
        }
    }
    worst
}

/// Largest deviation of a tensor from the block-diagonal form built from
/// `coeffs`: `g` on both diagonal entries of each block, `±ω` off them.
pub fn deviation_from_blocks<T: Real>(tensor: &FisherTensorResult<T>, coeffs: &[PairCoefficients<T>]) -> T {
    let p = tensor.directions;
    let mut worst = T::zero();
    for mu in 0..p {
        for nu in 0..p {
            let expected = if mu / 2 != nu / 2 {
                (T::zero(), T::zero())
            } else {
                let c = coeffs[mu / 2];
                match (mu % 2, nu % 2) {
                    (0, 0) | (1, 1) => (c.g, T::zero()),
                    (1, 0) => (T::zero(), c.omega),
                    _ => (T::zero(), -c.omega),
                }
            };
            let z = tensor.components[(mu, nu)];
            worst = worst.max((z.re - expected.0).abs()).max((z.im - expected.1).abs());
        }
    }
    worst
}

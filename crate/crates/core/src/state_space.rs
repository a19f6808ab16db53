//! Density states on co-adjoint orbits and tangent one-forms.
//!
//! A state `ρ` and a tangent `dρ` are both stored as a matrix together with
//! its generator expansion `a 𝟙 + Σ_k a_k t_k`. Orbit tangents are produced
//! as `dρ = -i[K, ρ]` for Hermitian `K`, which is the derivative of
//! `e^{-iθK} ρ e^{iθK}` at `θ = 0`.

use nalgebra::{ComplexField, Complex};

use crate::error::{Error, Result};
use crate::lie_basis::GeneratorBasis;
use crate::linalg::{commutator, diagonal, ensure_hermitian, ensure_square, hermitian_eigen, hermitize, max_abs_entry, unitary_deviation};
use crate::scalar::{tolerance, CMatrix, Real};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Coefficients of `identity 𝟙 + Σ_k coeffs[k] t_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion<T: Real> {
    pub identity: T,
    pub coeffs: Vec<T>,
}

/// Eigenvalues `k₁ … k_n` of a base point, zero-padded to the dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingWeights<T: Real> {
    weights: Vec<T>,
}

impl<T: Real> MixingWeights<T> {
    pub fn new(weights: &[T], n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if weights.is_empty() || weights.len() > n {
            return Err(Error::InvalidWeights(format!("expected between 1 and {n} weights, got {}", weights.len())));
        }
        if let Some(k) = weights.iter().find(|k| !(**k >= T::zero())) {
            return Err(Error::InvalidWeights(format!("negative or non-finite weight {}", k.as_f64())));
        }
        let sum = weights.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > tolerance::<T>(WEIGHT_SUM_TOL) {
            return Err(Error::InvalidWeights(format!("weights sum to {}", sum.as_f64())));
        }
        let mut padded = weights.to_vec();
        padded.resize(n, T::zero());
        Ok(Self { weights: padded })
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    #[inline]
    pub fn get(&self, i: usize) -> T {
        self.weights[i]
    }

    /// Number of strictly positive weights.
    pub fn rank(&self) -> usize {
        self.weights.iter().filter(|&&k| k > T::zero()).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityState<T: Real> {
    matrix: CMatrix<T>,
    coeff_identity: T,
    coeffs: Vec<T>,
}

impl<T: Real> DensityState<T> {
    /// `diag(k₁, …, k_n)`.
    pub fn base_point(basis: &GeneratorBasis<T>, weights: &MixingWeights<T>) -> Result<Self> {
        check_dim(basis, weights.dimension())?;
        let matrix = diagonal(weights.as_slice());
        let (coeff_identity, coeffs) = basis.coefficients(&matrix);
        Ok(Self { matrix, coeff_identity, coeffs })
    }

    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(basis: &GeneratorBasis<T>, matrix: CMatrix<T>) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        check_dim(basis, n)?;
        ensure_hermitian(&matrix, tolerance(HERMITIAN_TOL))?;
        let matrix = hermitize(&matrix);
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > tolerance::<T>(HERMITIAN_TOL) {
            return Err(Error::InvalidTrace(trace.as_f64()));
        }
        let (values, _) = hermitian_eigen(&matrix);
        if values[0] < -tolerance::<T>(POSITIVITY_TOL) {
            return Err(Error::NotPositive(values[0].as_f64()));
        }
        let (coeff_identity, coeffs) = basis.coefficients(&matrix);
        Ok(Self { matrix, coeff_identity, coeffs })
    }

    /// A pure state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(basis: &GeneratorBasis<T>, psi: &nalgebra::DVector<Complex<T>>) -> Result<Self> {
        let norm = psi.norm();
        if norm == T::zero() {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        let psi = psi.map(|z| z / Complex::new(norm, T::zero()));
        Self::from_matrix(basis, &psi * psi.adjoint())
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `ρ_𝟙 = Tr(ρ)/n`.
    #[inline]
    pub fn coeff_identity(&self) -> T {
        self.coeff_identity
    }

    /// `ρ_k = Tr(ρ t_k)/2`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigen(&self.matrix).0.as_slice().to_vec()
    }

    /// Whether the matrix is diagonal to within `tol`.
    pub fn is_diagonal(&self, tol: T) -> bool {
        let n = self.dimension();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].modulus() <= tol))
    }

    /// Diagonal entries (real parts).
    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.dimension()).map(|i| self.matrix[(i, i)].re).collect()
    }
}

/// A Lie-algebra–valued one-form component `dρ` along one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentForm<T: Real> {
    coeff_identity: T,
    coeffs: Vec<T>,
    matrix: CMatrix<T>,
}

impl<T: Real> TangentForm<T> {
    pub fn from_matrix(basis: &GeneratorBasis<T>, matrix: CMatrix<T>) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        check_dim(basis, n)?;
        ensure_hermitian(&matrix, tolerance(HERMITIAN_TOL))?;
        let matrix = hermitize(&matrix);
        let (coeff_identity, coeffs) = basis.coefficients(&matrix);
        Ok(Self { coeff_identity, coeffs, matrix })
    }

    pub fn from_coefficients(basis: &GeneratorBasis<T>, identity: T, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: coeffs.len() });
        }
        let matrix = basis.reconstruct(identity, &coeffs);
        Ok(Self { coeff_identity: identity, coeffs, matrix })
    }

    pub fn zero(basis: &GeneratorBasis<T>) -> Self {
        let n = basis.dimension();
        Self { coeff_identity: T::zero(), coeffs: vec![T::zero(); basis.len()], matrix: CMatrix::zeros(n, n) }
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `D_𝟙`.
    #[inline]
    pub fn coeff_identity(&self) -> T {
        self.coeff_identity
    }

    /// `D_k`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Scales the form by a real factor.
    pub fn scaled(&self, s: T) -> Self {
        Self {
            coeff_identity: self.coeff_identity * s,
            coeffs: self.coeffs.iter().map(|&d| d * s).collect(),
            matrix: self.matrix.map(|z| z * s),
        }
    }
}

fn check_dim<T: Real>(basis: &GeneratorBasis<T>, n: usize) -> Result<()> {
    if basis.dimension() != n {
        return Err(Error::DimensionMismatch { expected: basis.dimension(), found: n });
    }
    Ok(())
}

/// Generator expansion of a Hermitian matrix.
pub fn expand<T: Real>(basis: &GeneratorBasis<T>, matrix: &CMatrix<T>) -> Result<Expansion<T>> {
    let n = ensure_square(matrix)?;
    check_dim(basis, n)?;
    ensure_hermitian(matrix, tolerance(HERMITIAN_TOL))?;
    let (identity, coeffs) = basis.coefficients(matrix);
    Ok(Expansion { identity, coeffs })
}

pub fn reconstruct<T: Real>(basis: &GeneratorBasis<T>, expansion: &Expansion<T>) -> CMatrix<T> {
    basis.reconstruct(expansion.identity, &expansion.coeffs)
}

fn ensure_unitary<T: Real>(u: &CMatrix<T>, n: usize) -> Result<()> {
    let m = ensure_square(u)?;
    if m != n {
        return Err(Error::DimensionMismatch { expected: n, found: m });
    }
    let dev = unitary_deviation(u);
    if dev > tolerance::<T>(UNITARY_TOL) {
        return Err(Error::NotUnitary(dev.as_f64()));
    }
    Ok(())
}

/// `U† ρ U`.
pub fn transport_state<T: Real>(basis: &GeneratorBasis<T>, u: &CMatrix<T>, state: &DensityState<T>) -> Result<DensityState<T>> {
    ensure_unitary(u, state.dimension())?;
    let matrix = hermitize(&(u.adjoint() * state.matrix() * u));
    let (coeff_identity, coeffs) = basis.coefficients(&matrix);
    Ok(DensityState { matrix, coeff_identity, coeffs })
}

/// `U† dρ U`.
pub fn transport_form<T: Real>(basis: &GeneratorBasis<T>, u: &CMatrix<T>, form: &TangentForm<T>) -> Result<TangentForm<T>> {
    ensure_unitary(u, form.dimension())?;
    let matrix = hermitize(&(u.adjoint() * form.matrix() * u));
    let (coeff_identity, coeffs) = basis.coefficients(&matrix);
    Ok(TangentForm { coeff_identity, coeffs, matrix })
}

/// `dρ = -i[K, ρ]`.
pub fn tangent_from_generator<T: Real>(basis: &GeneratorBasis<T>, k: &CMatrix<T>, state: &DensityState<T>) -> Result<TangentForm<T>> {
    let n = ensure_square(k)?;
    check_dim(basis, n)?;
    check_dim(basis, state.dimension())?;
    ensure_hermitian(k, tolerance(HERMITIAN_TOL))?;
    let minus_i = Complex::new(T::zero(), -T::one());
    let matrix = hermitize(&commutator(k, state.matrix()).map(|z| z * minus_i));
    let (coeff_identity, coeffs) = basis.coefficients(&matrix);
    Ok(TangentForm { coeff_identity, coeffs, matrix })
}

/// Central difference `(ρ(θ+h) - ρ(θ-h)) / 2h`, Hermitized and expanded.
pub fn numeric_tangent<T, F, E>(basis: &GeneratorBasis<T>, family: F, theta: T, h: T) -> Result<TangentForm<T>>
where
    T: Real,
    F: Fn(T) -> std::result::Result<CMatrix<T>, E>,
    E: std::fmt::Display,
{
    if !(h > T::zero()) {
        return Err(Error::InvalidInput(format!("finite-difference step must be positive (got {})", h.as_f64())));
    }
    let eval = |x: T| family(x).map_err(|e| Error::FamilyEvaluation(e.to_string()));
    let plus = eval(theta + h)?;
    let minus = eval(theta - h)?;
    if plus.shape() != minus.shape() {
        return Err(Error::FamilyEvaluation("family changed shape between samples".into()));
    }
    let n = ensure_square(&plus)?;
    check_dim(basis, n)?;
    let scale = T::one() / (h + h);
    let matrix = hermitize(&(plus - minus).map(|z| z * scale));
    let (coeff_identity, coeffs) = basis.coefficients(&matrix);
    Ok(TangentForm { coeff_identity, coeffs, matrix })
}

/// `dᵀρ = Σ dk_i P_i` at a diagonal base point.
pub fn transversal_tangent<T: Real>(basis: &GeneratorBasis<T>, rates: &[T], state: &DensityState<T>) -> Result<TangentForm<T>> {
    check_dim(basis, state.dimension())?;
    check_dim(basis, rates.len())?;
    if !state.is_diagonal(tolerance(HERMITIAN_TOL)) {
        return Err(Error::InvalidInput("transversal tangents need a diagonal base point".into()));
    }
    let sum = rates.iter().fold(T::zero(), |a, &b| a + b);
    if sum.abs() > tolerance::<T>(WEIGHT_SUM_TOL) {
        return Err(Error::RateSumNonzero(sum.as_f64()));
    }
    let matrix = diagonal(rates);
    let (coeff_identity, coeffs) = basis.coefficients(&matrix);
    Ok(TangentForm { coeff_identity, coeffs, matrix })
}

/// Max entrywise distance between two matrices.
pub fn matrix_distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    max_abs_entry(&(a - b))
}

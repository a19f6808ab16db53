//! The symmetric logarithmic derivative as a linear system over generator
//! coefficients.
//!
//! Expanding `dρ = ½{ρ, L}` with `ρ = ρ_𝟙 𝟙 + Σ ρ_k t_k`,
//! `L = L_𝟙 𝟙 + Σ L_j t_j` and `dρ = D_𝟙 𝟙 + Σ D_l t_l` gives
//!
//! ```text
//! D_𝟙 = ρ_𝟙 L_𝟙 + (2/n) Σ_j ρ_j L_j
//! D_l = ρ_𝟙 L_l + ρ_l L_𝟙 + Σ_{j,k} ρ_k L_j f_kjl
//! ```
//!
//! which is an `n² × n²` real system. Rank-deficient states make it
//! singular; the null space is exactly the set of Hermitian `X` with
//! `{X, ρ} = 0` (the gauge freedom of `L`).

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::lie_basis::{GeneratorBasis, GeneratorKind, StructureConstants};
use crate::linalg::{anticommutator, diagonal, frobenius};
use crate::scalar::{cplx, creal, tolerance, CMatrix, Real};
use crate::state_space::{DensityState, MixingWeights, TangentForm};

pub const DEFAULT_TOL: f64 = 1e-10;
const REFINEMENT_STEPS: usize = 4;
/// Largest diagonal `D` component a closed-form path accepts as zero.
pub const TANGENCY_TOL: f64 = 1e-10;

/// `M · (L_𝟙, L_1, …) = (D_𝟙, D_1, …)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SLDSystem<T: Real> {
    dimension: usize,
    matrix: DMatrix<T>,
    rhs: DVector<T>,
}

impl<T: Real> SLDSystem<T> {
    #[inline]
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DVector<T> {
        &self.rhs
    }

    /// The block of `M` over the identity and the diagonal generators.
    /// At a diagonal base point it decouples from the off-diagonal
    /// unknowns and its determinant is `Π k_i`.
    pub fn diagonal_block(&self, basis: &GeneratorBasis<T>) -> DMatrix<T> {
        let idx: Vec<usize> = std::iter::once(0).chain(basis.diagonal_indices().iter().map(|&i| i + 1)).collect();
        DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.matrix[(idx[r], idx[c])])
    }

    pub fn diagonal_block_determinant(&self, basis: &GeneratorBasis<T>) -> T {
        self.diagonal_block(basis).determinant()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SLDSolution<T: Real> {
    pub coeff_identity: T,
    pub coeffs: Vec<T>,
    pub matrix: CMatrix<T>,
    /// Frobenius-orthonormal Hermitian matrices with `{X, ρ} = 0`.
    pub gauge_basis: Vec<CMatrix<T>>,
    /// `‖dρ - ½{ρ, L}‖_F`.
    pub residual: T,
}

impl<T: Real> SLDSolution<T> {
    /// Wraps a given SLD matrix, computing its coefficients and residual.
    pub fn from_matrix(
        basis: &GeneratorBasis<T>,
        state: &DensityState<T>,
        form: &TangentForm<T>,
        matrix: CMatrix<T>,
        gauge_basis: Vec<CMatrix<T>>,
    ) -> Self {
        let (coeff_identity, coeffs) = basis.coefficients(&matrix);
        let residual = defining_residual(state.matrix(), form.matrix(), &matrix);
        Self { coeff_identity, coeffs, matrix, gauge_basis, residual }
    }

    fn from_coefficients(
        basis: &GeneratorBasis<T>,
        state: &DensityState<T>,
        form: &TangentForm<T>,
        coeff_identity: T,
        coeffs: Vec<T>,
        gauge_basis: Vec<CMatrix<T>>,
    ) -> Self {
        let matrix = basis.reconstruct(coeff_identity, &coeffs);
        let residual = defining_residual(state.matrix(), form.matrix(), &matrix);
        Self { coeff_identity, coeffs, matrix, gauge_basis, residual }
    }

    #[inline]
    pub fn gauge_dim(&self) -> usize {
        self.gauge_basis.len()
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `‖dρ - ½{ρ, L}‖_F`.
pub fn defining_residual<T: Real>(rho: &CMatrix<T>, drho: &CMatrix<T>, sld: &CMatrix<T>) -> T {
    let half = T::lit(0.5);
    frobenius(&(drho - anticommutator(rho, sld).map(|z| z * half)))
}

pub fn assemble<T: Real>(state: &DensityState<T>, form: &TangentForm<T>, constants: &StructureConstants<T>) -> Result<SLDSystem<T>> {
    let n = constants.dimension();
    for found in [state.dimension(), form.dimension()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let m = n * n - 1;
    let rho_id = state.coeff_identity();
    let rho = state.coeffs();
    let two_over_n = T::lit(2.0 / n as f64);

    let mut matrix = DMatrix::<T>::zeros(m + 1, m + 1);
    matrix[(0, 0)] = rho_id;
    for j in 0..m {
        matrix[(0, j + 1)] = two_over_n * rho[j];
        matrix[(j + 1, 0)] = rho[j];
        matrix[(j + 1, j + 1)] = rho_id;
    }
    for ([k, j, l], value) in constants.f_permuted() {
        if rho[k] != T::zero() {
            matrix[(l + 1, j + 1)] += rho[k] * value;
        }
    }
    let rhs = DVector::from_iterator(m + 1, std::iter::once(form.coeff_identity()).chain(form.coeffs().iter().copied()));
    Ok(SLDSystem { dimension: n, matrix, rhs })
}

/// `A = Σ values_i left_i right_iᵀ` with orthonormal columns. Symmetric input
/// goes through the symmetric eigensolver, anything else through the SVD.
struct Spectral<T: Real> {
    left: DMatrix<T>,
    right: DMatrix<T>,
    values: Vec<T>,
}

impl<T: Real> Spectral<T> {
    fn new(a: &DMatrix<T>) -> Self {
        let scale = a.norm().max(T::one());
        if (a - a.transpose()).norm() <= T::lit(64.0) * T::default_epsilon() * scale {
            let sym = (a + a.transpose()) * T::lit(0.5);
            let eig = SymmetricEigen::new(sym);
            Spectral { left: eig.eigenvectors.clone(), right: eig.eigenvectors, values: eig.eigenvalues.iter().copied().collect() }
        } else {
            let svd = SVD::new(a.clone(), true, true);
            Spectral {
                left: svd.u.expect("left singular vectors requested"),
                right: svd.v_t.expect("right singular vectors requested").transpose(),
                values: svd.singular_values.iter().copied().collect(),
            }
        }
    }
}

/// Minimum-norm solution of the assembled system.
///
/// The system is solved in Frobenius-isometric coordinates
/// (`√n L_𝟙`, `√2 L_k`) so that "minimum norm" means minimum `‖L‖_F`, which
/// is the same representative the spectral construction picks. In those
/// coordinates the system is symmetric. Eigenvalues with modulus below
/// `tol · max|λ|` are treated as zero and their eigenvectors become the gauge
/// basis. The system is rejected when the refined residual exceeds
/// `tol · max(1, ‖d‖)`.
pub fn solve<T: Real>(basis: &GeneratorBasis<T>, system: &SLDSystem<T>, state: &DensityState<T>, tol: T) -> Result<SLDSolution<T>> {
    let n = system.dimension();
    for found in [basis.dimension(), state.dimension()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let size = n * n;
    let weight: Vec<T> = (0..size).map(|i| if i == 0 { T::lit(n as f64).sqrt() } else { T::lit(2.0).sqrt() }).collect();
    let scaled = DMatrix::from_fn(size, size, |r, c| weight[r] * system.matrix[(r, c)] / weight[c]);
    let d = DVector::from_fn(size, |r, _| weight[r] * system.rhs[r]);

    let spectral = Spectral::new(&scaled);
    let sigma_max = spectral.values.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
    let cutoff = tol * sigma_max;
    let kept: Vec<usize> = (0..size).filter(|&i| spectral.values[i].abs() > cutoff).collect();
    let null_rows: Vec<usize> = (0..size).filter(|&i| spectral.values[i].abs() <= cutoff).collect();
    let pinv_apply = |r: &DVector<T>| {
        let mut out = DVector::<T>::zeros(size);
        for &i in &kept {
            out += spectral.right.column(i) * (spectral.left.column(i).dot(r) / spectral.values[i]);
        }
        out
    };

    // iterative refinement through the truncated pseudo-inverse
    let mut y = pinv_apply(&d);
    let mut miss = &d - &scaled * &y;
    for _ in 0..REFINEMENT_STEPS {
        let step = pinv_apply(&miss);
        let next = &y + step;
        let next_miss = &d - &scaled * &next;
        if next_miss.norm() >= miss.norm() {
            break;
        }
        y = next;
        miss = next_miss;
    }
    let outside = miss.norm();
    if outside > tol * d.norm().max(T::one()) {
        return Err(Error::InconsistentSystem(outside.as_f64()));
    }

    let unscale = |v: &DVector<T>| -> (T, Vec<T>) { (v[0] / weight[0], (1..size).map(|i| v[i] / weight[i]).collect()) };
    let (coeff_identity, coeffs) = unscale(&y);
    let gauge_basis = null_rows
        .iter()
        .map(|&i| {
            let (a, b) = unscale(&spectral.right.column(i).into_owned());
            basis.reconstruct(a, &b)
        })
        .collect();

    let drho = basis.reconstruct(system.rhs[0], &system.rhs.as_slice()[1..]);
    let matrix = basis.reconstruct(coeff_identity, &coeffs);
    let residual = defining_residual(state.matrix(), &drho, &matrix);
    Ok(SLDSolution { coeff_identity, coeffs, matrix, gauge_basis, residual })
}

/// [`assemble`] followed by [`solve`].
pub fn solve_sld<T: Real>(
    basis: &GeneratorBasis<T>,
    constants: &StructureConstants<T>,
    state: &DensityState<T>,
    form: &TangentForm<T>,
    tol: T,
) -> Result<SLDSolution<T>> {
    let system = assemble(state, form, constants)?;
    solve(basis, &system, state, tol)
}

/// Frobenius-orthonormal basis of Hermitian matrices supported on the
/// kernel of a diagonal state.
pub fn diagonal_gauge_basis<T: Real>(weights: &MixingWeights<T>) -> Vec<CMatrix<T>> {
    let n = weights.dimension();
    let kernel: Vec<usize> = (0..n).filter(|&i| weights.get(i) == T::zero()).collect();
    let r = T::lit(0.5).sqrt();
    let mut out = Vec::new();
    for (a, &i) in kernel.iter().enumerate() {
        let mut e = CMatrix::zeros(n, n);
        e[(i, i)] = creal(T::one());
        out.push(e);
        for &j in &kernel[a + 1..] {
            let mut s = CMatrix::zeros(n, n);
            s[(i, j)] = creal(r);
            s[(j, i)] = creal(r);
            out.push(s);
            let mut t = CMatrix::zeros(n, n);
            t[(i, j)] = cplx(T::zero(), -r);
            t[(j, i)] = cplx(T::zero(), r);
            out.push(t);
        }
    }
    out
}

fn check_basis<T: Real>(basis: &GeneratorBasis<T>, n: usize) -> Result<()> {
    if basis.dimension() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.dimension() });
    }
    Ok(())
}

fn check_form<T: Real>(basis: &GeneratorBasis<T>, form: &TangentForm<T>) -> Result<()> {
    if form.dimension() != basis.dimension() {
        return Err(Error::DimensionMismatch { expected: basis.dimension(), found: form.dimension() });
    }
    let tol = tolerance::<T>(TANGENCY_TOL);
    let worst = basis.diagonal_indices().iter().map(|&i| form.coeffs()[i].abs()).fold(form.coeff_identity().abs(), |a, b| a.max(b));
    if worst > tol {
        return Err(Error::NonTangentForm(format!("diagonal component of magnitude {:e} on an orbit-only path", worst.as_f64())));
    }
    Ok(())
}

/// Off-diagonal `L_{pair} = 2 D_{pair} / denominator` for each `(row, col)`
/// generator pair, zero elsewhere.
fn pairwise<T: Real>(basis: &GeneratorBasis<T>, form: &TangentForm<T>, denominator: impl Fn(usize, usize) -> T) -> Vec<T> {
    let two = T::lit(2.0);
    let mut coeffs = vec![T::zero(); basis.len()];
    for (i, kind) in basis.kinds().iter().enumerate() {
        match *kind {
            GeneratorKind::Symmetric { row, col } | GeneratorKind::Antisymmetric { row, col } => {
                let d = denominator(row, col);
                if d != T::zero() {
                    coeffs[i] = two * form.coeffs()[i] / d;
                }
            }
            _ => {}
        }
    }
    coeffs
}

/// Two-level mixed or pure state: `L = 2/(k₁+k₂) (D₁σ₁ + D₂σ₂)`.
pub fn closed_form_u2<T: Real>(basis: &GeneratorBasis<T>, weights: &MixingWeights<T>, form: &TangentForm<T>) -> Result<SLDSolution<T>> {
    check_basis(basis, 2)?;
    check_basis(basis, weights.dimension())?;
    check_form(basis, form)?;
    let sum = weights.get(0) + weights.get(1);
    let state = DensityState::base_point(basis, weights)?;
    let coeffs = pairwise(basis, form, |_, _| sum);
    Ok(SLDSolution::from_coefficients(basis, &state, form, T::zero(), coeffs, diagonal_gauge_basis(weights)))
}

fn qutrit_weights<T: Real>(basis: &GeneratorBasis<T>, weights: &MixingWeights<T>) -> Result<[T; 3]> {
    check_basis(basis, 3)?;
    check_basis(basis, weights.dimension())?;
    let k = weights.as_slice();
    Ok([k[0], k[1], k[2]])
}

/// Full-rank, non-degenerate qutrit: three decoupled SU(2) blocks with
/// `L = 2 D / (k_a + k_b)` on the `(a, b)` generator pair.
pub fn closed_form_u3<T: Real>(basis: &GeneratorBasis<T>, weights: &MixingWeights<T>, form: &TangentForm<T>) -> Result<SLDSolution<T>> {
    let k = qutrit_weights(basis, weights)?;
    if k.iter().any(|&x| x == T::zero()) {
        return Err(Error::Degenerate("zero weight; use the rank-2 path or the general solver".into()));
    }
    if k[0] == k[1] || k[0] == k[2] || k[1] == k[2] {
        return Err(Error::Degenerate("repeated weights; use the degenerate path or the general solver".into()));
    }
    check_form(basis, form)?;
    let state = DensityState::base_point(basis, weights)?;
    let coeffs = pairwise(basis, form, |a, b| k[a] + k[b]);
    Ok(SLDSolution::from_coefficients(basis, &state, form, T::zero(), coeffs, Vec::new()))
}

/// Rank-2 qutrit `(k₁, k₂, 0)`: `L₁,₂ = 2D/(k₁+k₂)`, `L₄,₅ = 2D/k₁`,
/// `L₆,₇ = 2D/k₂`, defined up to multiples of `diag(0, 0, 1)`.
pub fn closed_form_u3_rank2<T: Real>(basis: &GeneratorBasis<T>, weights: &MixingWeights<T>, form: &TangentForm<T>) -> Result<SLDSolution<T>> {
    let k = qutrit_weights(basis, weights)?;
    if k[2] != T::zero() {
        return Err(Error::InvalidWeights("rank-2 path needs k₃ = 0".into()));
    }
    if k[0] == T::zero() || k[1] == T::zero() {
        return Err(Error::Degenerate("rank-2 path needs k₁ k₂ ≠ 0".into()));
    }
    check_form(basis, form)?;
    let state = DensityState::base_point(basis, weights)?;
    let coeffs = pairwise(basis, form, |a, b| k[a] + k[b]);
    Ok(SLDSolution::from_coefficients(basis, &state, form, T::zero(), coeffs, diagonal_gauge_basis(weights)))
}

/// The part of the rank-2 SLD that couples the support to the kernel
/// vector: entries `2 D₂^∓ / k₁` and `2 D₃^∓ / k₂` in the third row and
/// column, where `D₂^± = D₄ ± i D₅` and `D₃^± = D₆ ± i D₇`.
pub fn rank2_kernel_coupling<T: Real>(weights: &MixingWeights<T>, form: &TangentForm<T>) -> Result<CMatrix<T>> {
    if weights.dimension() != 3 || form.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: weights.dimension().max(form.dimension()) });
    }
    let (k1, k2) = (weights.get(0), weights.get(1));
    if k1 == T::zero() || k2 == T::zero() || weights.get(2) != T::zero() {
        return Err(Error::InvalidWeights("kernel coupling needs (k₁, k₂, 0) with k₁ k₂ ≠ 0".into()));
    }
    let d = form.coeffs();
    let two = T::lit(2.0);
    let d2_minus = cplx(d[3], -d[4]);
    let d3_minus = cplx(d[5], -d[6]);
    let mut m = CMatrix::zeros(3, 3);
    m[(0, 2)] = d2_minus * (two / k1);
    m[(1, 2)] = d3_minus * (two / k2);
    m[(2, 0)] = m[(0, 2)].conj();
    m[(2, 1)] = m[(1, 2)].conj();
    Ok(m)
}

/// `k₂ = k₃` qutrit: tangents have `D₆ = D₇ = 0`; `L₁,₂,₄,₅ = 2D/(k₁+k₂)`
/// and `L₆ = L₇ = 0`.
pub fn closed_form_u3_degenerate<T: Real>(
    basis: &GeneratorBasis<T>,
    weights: &MixingWeights<T>,
    form: &TangentForm<T>,
) -> Result<SLDSolution<T>> {
    let k = qutrit_weights(basis, weights)?;
    if k[1] != k[2] || k[1] == T::zero() {
        return Err(Error::InvalidWeights("degenerate path needs k₂ = k₃ > 0".into()));
    }
    if k[0] == k[1] {
        return Err(Error::Degenerate("all weights equal; every orbit tangent vanishes".into()));
    }
    check_form(basis, form)?;
    let tol = tolerance::<T>(TANGENCY_TOL);
    let (d6, d7) = (form.coeffs()[5], form.coeffs()[6]);
    if d6.abs() > tol || d7.abs() > tol {
        return Err(Error::NonTangentForm(format!(
            "D₆ = {:e}, D₇ = {:e} must vanish on the k₂ = k₃ orbit",
            d6.as_f64(),
            d7.as_f64()
        )));
    }
    let state = DensityState::base_point(basis, weights)?;
    let coeffs = pairwise(basis, form, |a, b| if a == 1 && b == 2 { T::zero() } else { k[a] + k[b] });
    Ok(SLDSolution::from_coefficients(basis, &state, form, T::zero(), coeffs, Vec::new()))
}

/// SLD along the weights at fixed eigenprojectors: `diag(dk_i / k_i)`.
pub fn transversal_sld<T: Real>(basis: &GeneratorBasis<T>, rates: &[T], weights: &MixingWeights<T>) -> Result<SLDSolution<T>> {
    let n = weights.dimension();
    check_basis(basis, n)?;
    if rates.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rates.len() });
    }
    let mut entries = vec![T::zero(); n];
    for i in 0..n {
        let k = weights.get(i);
        if k > T::zero() {
            entries[i] = rates[i] / k;
        } else if rates[i] != T::zero() {
            return Err(Error::Degenerate(format!("weight rate {} on a zero weight (index {i})", rates[i].as_f64())));
        }
    }
    let state = DensityState::base_point(basis, weights)?;
    let form = TangentForm::from_matrix(basis, diagonal(rates))?;
    Ok(SLDSolution::from_matrix(basis, &state, &form, diagonal(&entries), diagonal_gauge_basis(weights)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_entry, trace_product};
    use crate::state_space::tangent_from_generator;
    use approx::assert_abs_diff_eq;

    fn setup(n: usize) -> (GeneratorBasis<f64>, StructureConstants<f64>) {
        let b = GeneratorBasis::new(n).unwrap();
        let c = StructureConstants::compute(&b);
        (b, c)
    }

    fn state(b: &GeneratorBasis<f64>, k: &[f64]) -> (MixingWeights<f64>, DensityState<f64>) {
        let w = MixingWeights::new(k, b.dimension()).unwrap();
        let s = DensityState::base_point(b, &w).unwrap();
        (w, s)
    }

    fn offdiag_form(b: &GeneratorBasis<f64>, values: &[f64]) -> TangentForm<f64> {
        let mut coeffs = vec![0.0; b.len()];
        for (&i, &v) in b.offdiagonal_indices().iter().zip(values) {
            coeffs[i] = v;
        }
        TangentForm::from_coefficients(b, 0.0, coeffs).unwrap()
    }

    #[test]
    fn qubit_homogeneous_block() {
        let (b, c) = setup(2);
        let (k1, k2) = (0.7, 0.3);
        let (_, s) = state(&b, &[k1, k2]);
        let sys = assemble(&s, &TangentForm::zero(&b), &c).unwrap();
        let block = sys.diagonal_block(&b);
        assert_abs_diff_eq!(block[(0, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(block[(0, 1)], (k1 - k2) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(block[(1, 0)], (k1 - k2) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(block[(1, 1)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sys.diagonal_block_determinant(&b), k1 * k2, epsilon = 1e-15);
    }

    #[test]
    fn qutrit_system_structure() {
        let (b, c) = setup(3);
        let (k1, k2, k3) = (0.5, 0.3, 0.2);
        let (_, s) = state(&b, &[k1, k2, k3]);
        let sys = assemble(&s, &TangentForm::zero(&b), &c).unwrap();
        assert_abs_diff_eq!(sys.diagonal_block_determinant(&b), k1 * k2 * k3, epsilon = 1e-15);
        let m = sys.matrix();
        // off-diagonal unknowns decouple with the pair sums on the diagonal
        for (gen, expected) in [(0, (k1 + k2) / 2.0), (1, (k1 + k2) / 2.0), (3, (k1 + k3) / 2.0), (4, (k1 + k3) / 2.0), (5, (k2 + k3) / 2.0), (6, (k2 + k3) / 2.0)] {
            let row = gen + 1;
            assert_abs_diff_eq!(m[(row, row)], expected, epsilon = 1e-15);
            for col in 0..9 {
                if col != row {
                    assert_abs_diff_eq!(m[(row, col)], 0.0, epsilon = 1e-15);
                    assert_abs_diff_eq!(m[(col, row)], 0.0, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn assemble_rejects_mismatched_dimensions() {
        let (b2, _) = setup(2);
        let (_, c3) = setup(3);
        let (_, s) = state(&b2, &[0.5, 0.5]);
        assert!(matches!(assemble(&s, &TangentForm::zero(&b2), &c3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mixed_qubit_matches_two_level_formula() {
        let (b, c) = setup(2);
        let (k1, k2) = (0.8, 0.2);
        let (w, s) = state(&b, &[k1, k2]);
        let form = offdiag_form(&b, &[0.3, -0.45]);
        let sol = solve_sld(&b, &c, &s, &form, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(sol.coeffs[0], 2.0 * 0.3 / (k1 + k2), epsilon = 1e-14);
        assert_abs_diff_eq!(sol.coeffs[1], 2.0 * -0.45 / (k1 + k2), epsilon = 1e-14);
        assert_abs_diff_eq!(sol.coeffs[2], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.coeff_identity, 0.0, epsilon = 1e-14);
        assert_eq!(sol.gauge_dim(), 0);
        assert!(sol.residual < 1e-14);
        let closed = closed_form_u2(&b, &w, &form).unwrap();
        assert!(max_abs_entry(&(closed.matrix - sol.matrix)) < 1e-14);
    }

    #[test]
    fn pure_qubit_gauge_is_lower_diagonal() {
        let (b, c) = setup(2);
        let (_, s) = state(&b, &[1.0, 0.0]);
        let form = offdiag_form(&b, &[0.4, 0.1]);
        let sol = solve_sld(&b, &c, &s, &form, DEFAULT_TOL).unwrap();
        assert_eq!(sol.gauge_dim(), 1);
        let g = &sol.gauge_basis[0];
        assert_abs_diff_eq!(g[(0, 0)].norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g[(1, 1)].norm(), 1.0, epsilon = 1e-14);
        // in coefficients the gauge direction has L₃ = -L_𝟙
        let (gid, gc) = b.coefficients(g);
        assert_abs_diff_eq!(gc[2], -gid, epsilon = 1e-14);
        assert!(sol.residual < 1e-14);
        assert!(max_abs_entry(&(sol.matrix - form.matrix().map(|z| z * 2.0))) < 1e-14);
    }

    #[test]
    fn pure_qutrit_minimum_norm_is_twice_tangent() {
        let (b, c) = setup(3);
        let (_, s) = state(&b, &[1.0, 0.0, 0.0]);
        let k = b.reconstruct(0.0, &[0.3, 0.1, -0.4, 0.8, 0.2, -0.5, 0.7, 0.6]);
        let form = tangent_from_generator(&b, &k, &s).unwrap();
        let sol = solve_sld(&b, &c, &s, &form, DEFAULT_TOL).unwrap();
        assert_eq!(sol.gauge_dim(), 4);
        assert!(sol.residual < 1e-14);
        assert!(max_abs_entry(&(&sol.matrix - form.matrix().map(|z| z * 2.0))) < 1e-14);
        for (i, x) in sol.gauge_basis.iter().enumerate() {
            assert!(max_abs_entry(&anticommutator(x, s.matrix())) < 1e-14);
            for (j, y) in sol.gauge_basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(trace_product(x, y).re, expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn inconsistent_rhs_is_rejected() {
        let (b, c) = setup(3);
        let (_, s) = state(&b, &[1.0, 0.0, 0.0]);
        // D₆ ≠ 0 couples two kernel vectors; no L reproduces it
        let mut coeffs = vec![0.0; 8];
        coeffs[5] = 0.3;
        let form = TangentForm::from_coefficients(&b, 0.0, coeffs).unwrap();
        assert!(matches!(solve_sld(&b, &c, &s, &form, DEFAULT_TOL), Err(Error::InconsistentSystem(_))));
    }

    #[test]
    fn qutrit_closed_form_examples() {
        let (b, c) = setup(3);
        let (w, s) = state(&b, &[0.5, 0.3, 0.2]);
        let mut coeffs = vec![0.0; 8];
        coeffs[0] = 1.0;
        let form = TangentForm::from_coefficients(&b, 0.0, coeffs).unwrap();
        let sol = closed_form_u3(&b, &w, &form).unwrap();
        assert_abs_diff_eq!(sol.coeffs[0], 2.5, epsilon = 1e-15);
        let mut coeffs = vec![0.0; 8];
        coeffs[5] = 1.0;
        let form6 = TangentForm::from_coefficients(&b, 0.0, coeffs).unwrap();
        let sol6 = closed_form_u3(&b, &w, &form6).unwrap();
        assert_abs_diff_eq!(sol6.coeffs[5], 4.0, epsilon = 1e-15);
        let general = solve_sld(&b, &c, &s, &form6, DEFAULT_TOL).unwrap();
        assert!(max_abs_entry(&(general.matrix - sol6.matrix)) < 1e-12);
        let zero = closed_form_u3(&b, &w, &TangentForm::zero(&b)).unwrap();
        assert!(zero.coeffs.iter().all(|&x| x == 0.0));

        let w_rep = MixingWeights::new(&[0.4, 0.3, 0.3], 3).unwrap();
        assert!(matches!(closed_form_u3(&b, &w_rep, &form), Err(Error::Degenerate(_))));
        let w_zero = MixingWeights::new(&[0.6, 0.4, 0.0], 3).unwrap();
        assert!(matches!(closed_form_u3(&b, &w_zero, &form), Err(Error::Degenerate(_))));
        let mut diag = vec![0.0; 8];
        diag[2] = 0.1;
        let diag_form = TangentForm::from_coefficients(&b, 0.0, diag).unwrap();
        assert!(matches!(closed_form_u3(&b, &w, &diag_form), Err(Error::NonTangentForm(_))));
    }

    #[test]
    fn qutrit_rank2_closed_form() {
        let (b, c) = setup(3);
        let (w, s) = state(&b, &[0.6, 0.4, 0.0]);
        let form = offdiag_form(&b, &[0.2, -0.1, 1.0, 0.3, 1.0, -0.6]);
        let sol = closed_form_u3_rank2(&b, &w, &form).unwrap();
        assert_abs_diff_eq!(sol.coeffs[3], 2.0 / 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.coeffs[5], 2.0 / 0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.coeffs[0], 2.0 * 0.2, epsilon = 1e-14);
        assert!(sol.residual < 1e-14);
        assert_eq!(sol.gauge_dim(), 1);
        assert_abs_diff_eq!(sol.gauge_basis[0][(2, 2)].re, 1.0);

        let general = solve_sld(&b, &c, &s, &form, DEFAULT_TOL).unwrap();
        assert_eq!(general.gauge_dim(), 1);
        let g = &general.gauge_basis[0];
        assert_abs_diff_eq!(g[(2, 2)].norm(), 1.0, epsilon = 1e-12);
        // difference lies in the gauge span
        let diff = &general.matrix - &sol.matrix;
        let proj = trace_product(&diff, g).re;
        let remainder = &diff - g.map(|z| z * proj);
        assert!(crate::linalg::frobenius(&remainder) < 1e-10);

        // kernel coupling plus the SU(2) block rebuilds the whole SLD
        let coupling = rank2_kernel_coupling(&w, &form).unwrap();
        let su2 = b.reconstruct(0.0, &[sol.coeffs[0], sol.coeffs[1], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(max_abs_entry(&(coupling + su2 - &sol.matrix)) < 1e-14);

        let w_full = MixingWeights::new(&[0.5, 0.3, 0.2], 3).unwrap();
        assert!(closed_form_u3_rank2(&b, &w_full, &form).is_err());
        let w_pure = MixingWeights::new(&[1.0, 0.0, 0.0], 3).unwrap();
        assert!(matches!(closed_form_u3_rank2(&b, &w_pure, &form), Err(Error::Degenerate(_))));
    }

    #[test]
    fn qutrit_equal_pair_closed_form() {
        let (b, c) = setup(3);
        let (w, s) = state(&b, &[0.6, 0.2, 0.2]);
        let form = offdiag_form(&b, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let sol = closed_form_u3_degenerate(&b, &w, &form).unwrap();
        assert_abs_diff_eq!(sol.coeffs[0], 2.5, epsilon = 1e-15);
        assert_eq!(sol.gauge_dim(), 0);
        let general = solve_sld(&b, &c, &s, &form, DEFAULT_TOL).unwrap();
        assert!(max_abs_entry(&(general.matrix - &sol.matrix)) < 1e-12);

        let bad = offdiag_form(&b, &[0.0, 0.0, 0.0, 0.0, 0.1, 0.0]);
        assert!(matches!(closed_form_u3_degenerate(&b, &w, &bad), Err(Error::NonTangentForm(_))));
        let zero = closed_form_u3_degenerate(&b, &w, &TangentForm::zero(&b)).unwrap();
        assert!(zero.coeffs.iter().all(|&x| x == 0.0));
        let w_generic = MixingWeights::new(&[0.5, 0.3, 0.2], 3).unwrap();
        assert!(closed_form_u3_degenerate(&b, &w_generic, &form).is_err());
    }

    #[test]
    fn transversal_examples() {
        let (b, c) = setup(2);
        let w = MixingWeights::new(&[0.75, 0.25], 2).unwrap();
        let sol = transversal_sld(&b, &[1.0, -1.0], &w).unwrap();
        assert_abs_diff_eq!(sol.matrix[(0, 0)].re, 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.matrix[(1, 1)].re, -4.0, epsilon = 1e-15);
        assert!(sol.residual < 1e-15);
        let zero = transversal_sld(&b, &[0.0, 0.0], &w).unwrap();
        assert!(max_abs_entry(&zero.matrix) == 0.0);

        // same answer from the general system
        let s = DensityState::base_point(&b, &w).unwrap();
        let form = crate::state_space::transversal_tangent(&b, &[1.0, -1.0], &s).unwrap();
        let general = solve_sld(&b, &c, &s, &form, DEFAULT_TOL).unwrap();
        assert!(max_abs_entry(&(general.matrix - &sol.matrix)) < 1e-13);

        let b3 = GeneratorBasis::<f64>::new(3).unwrap();
        let w3 = MixingWeights::new(&[0.5, 0.3, 0.2], 3).unwrap();
        let sol3 = transversal_sld(&b3, &[1.0, 0.0, -1.0], &w3).unwrap();
        assert_abs_diff_eq!(sol3.matrix[(0, 0)].re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol3.matrix[(1, 1)].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol3.matrix[(2, 2)].re, -5.0, epsilon = 1e-14);

        let w_rank2 = MixingWeights::new(&[0.6, 0.4, 0.0], 3).unwrap();
        assert!(matches!(transversal_sld(&b3, &[0.5, -0.4, -0.1], &w_rank2), Err(Error::Degenerate(_))));
        assert_eq!(transversal_sld(&b3, &[0.5, -0.5, 0.0], &w_rank2).unwrap().gauge_dim(), 1);
    }

    #[test]
    fn qubit_pure_closed_form_u2() {
        let (b, _) = setup(2);
        let w = MixingWeights::new(&[1.0, 0.0], 2).unwrap();
        let form = offdiag_form(&b, &[0.5, 0.25]);
        let sol = closed_form_u2(&b, &w, &form).unwrap();
        assert_abs_diff_eq!(sol.coeffs[0], 1.0);
        assert_abs_diff_eq!(sol.coeffs[1], 0.5);
        assert_eq!(sol.gauge_dim(), 1);
        assert!(sol.residual < 1e-15);
    }

    #[test]
    fn single_precision_solve() {
        let b = GeneratorBasis::<f32>::new(3).unwrap();
        let c = StructureConstants::compute(&b);
        let w = MixingWeights::new(&[0.5f32, 0.3, 0.2], 3).unwrap();
        let s = DensityState::base_point(&b, &w).unwrap();
        let mut coeffs = vec![0.0f32; 8];
        coeffs[0] = 1.0;
        let form = TangentForm::from_coefficients(&b, 0.0, coeffs).unwrap();
        let sol = solve_sld(&b, &c, &s, &form, 1e-5).unwrap();
        assert!((sol.coeffs[0] - 2.5).abs() < 1e-5);
    }
}

//! Spectral SLD and QFI, independent of the structure-constant system.
//!
//! In an eigenbasis `ρ = Σ λ_i |i⟩⟨i|` the defining equation is diagonal:
//! `⟨i|L|j⟩ = 2⟨i|dρ|j⟩ / (λ_i + λ_j)`. Pairs with `λ_i + λ_j ≤ tol` get
//! `⟨i|L|j⟩ = 0`, which is the minimum-Frobenius-norm choice.

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::lie_basis::GeneratorBasis;
use crate::linalg::hermitian_eigen;
use crate::scalar::{cplx, creal, CMatrix, Real};
use crate::sld_solver::SLDSolution;
use crate::state_space::{DensityState, TangentForm};

struct Spectral<T: Real> {
    values: Vec<T>,
    vectors: CMatrix<T>,
    rotated: CMatrix<T>,
}

fn spectral<T: Real>(state: &DensityState<T>, form: &TangentForm<T>, tol: T) -> Result<Spectral<T>> {
    let n = state.dimension();
    if form.dimension() != n {
        return Err(Error::DimensionMismatch { expected: n, found: form.dimension() });
    }
    let (values, vectors) = hermitian_eigen(state.matrix());
    let rotated = vectors.adjoint() * form.matrix() * &vectors;
    let scale = form.matrix().norm().max(T::one());
    for i in 0..n {
        for j in 0..n {
            if values[i] + values[j] <= tol && rotated[(i, j)].modulus() > tol * scale {
                return Err(Error::KernelInconsistentTangent { i, j, value: rotated[(i, j)].modulus().as_f64() });
            }
        }
    }
    Ok(Spectral { values: values.as_slice().to_vec(), vectors, rotated })
}

pub fn sld_eigenbasis<T: Real>(
    basis: &GeneratorBasis<T>,
    state: &DensityState<T>,
    form: &TangentForm<T>,
    tol: T,
) -> Result<SLDSolution<T>> {
    let Spectral { values, vectors, rotated } = spectral(state, form, tol)?;
    let n = values.len();
    let two = T::lit(2.0);
    let mut l = CMatrix::<T>::zeros(n, n);
    let mut kernel = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s = values[i] + values[j];
            if s > tol {
                l[(i, j)] = rotated[(i, j)] * (two / s);
            } else if i <= j {
                kernel.push((i, j));
            }
        }
    }
    let matrix = &vectors * l * vectors.adjoint();

    let r = T::lit(0.5).sqrt();
    let gauge = kernel
        .into_iter()
        .flat_map(|(i, j)| {
            let mut out = Vec::new();
            if i == j {
                let mut e = CMatrix::zeros(n, n);
                e[(i, i)] = creal(T::one());
                out.push(e);
            } else {
                let mut s = CMatrix::zeros(n, n);
                s[(i, j)] = creal(r);
                s[(j, i)] = creal(r);
                out.push(s);
                let mut a = CMatrix::zeros(n, n);
                a[(i, j)] = cplx(T::zero(), -r);
                a[(j, i)] = cplx(T::zero(), r);
                out.push(a);
            }
            out
        })
        .map(|x| &vectors * x * vectors.adjoint())
        .collect();
    Ok(SLDSolution::from_matrix(basis, state, form, matrix, gauge))
}

/// `Σ_{λ_i+λ_j > tol} 2 |⟨i|dρ|j⟩|² / (λ_i + λ_j)`.
pub fn qfi_eigenbasis<T: Real>(state: &DensityState<T>, form: &TangentForm<T>, tol: T) -> Result<T> {
    let Spectral { values, rotated, .. } = spectral(state, form, tol)?;
    let n = values.len();
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let s = values[i] + values[j];
            if s > tol {
                acc += two * rotated[(i, j)].modulus_squared() / s;
            }
        }
    }
    Ok(acc)
}

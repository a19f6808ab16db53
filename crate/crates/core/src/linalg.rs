//! Small dense complex-matrix helpers.

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cplx, creal, CMatrix, Real, RVector};

#[inline]
pub fn commutator<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a * b - b * a
}

#[inline]
pub fn anticommutator<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a * b + b * a
}

#[inline]
pub fn frobenius<T: Real>(a: &CMatrix<T>) -> T {
    a.norm()
}

/// Real part of `Tr(a b)`.
pub fn trace_product_re<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let n = a.nrows();
    let mut acc = T::zero();
    for i in 0..n {
        for k in 0..n {
            let p = a[(i, k)] * b[(k, i)];
            acc += p.re;
        }
    }
    acc
}

/// `Tr(a b)` as a complex number.
pub fn trace_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> nalgebra::Complex<T> {
    let n = a.nrows();
    let mut acc = creal(T::zero());
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs_entry<T: Real>(a: &CMatrix<T>) -> T {
    a.iter().fold(T::zero(), |m, z| m.max(z.modulus()))
}

pub fn hermitian_deviation<T: Real>(a: &CMatrix<T>) -> T {
    max_abs_entry(&(a - a.adjoint()))
}

pub fn unitary_deviation<T: Real>(u: &CMatrix<T>) -> T {
    let n = u.nrows();
    max_abs_entry(&(u.adjoint() * u - CMatrix::<T>::identity(n, n)))
}

pub fn ensure_square<T: Real>(a: &CMatrix<T>) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare(a.nrows(), a.ncols()));
    }
    Ok(a.nrows())
}

pub fn ensure_hermitian<T: Real>(a: &CMatrix<T>, tol: T) -> Result<()> {
    ensure_square(a)?;
    let dev = hermitian_deviation(a);
    if dev > tol {
        return Err(Error::NotHermitian(dev.as_f64()));
    }
    Ok(())
}

/// `(a + a†)/2`.
pub fn hermitize<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    (a + a.adjoint()).map(|z| z * T::lit(0.5))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> (RVector<T>, CMatrix<T>) {
    let eig = SymmetricEigen::new(hermitize(a));
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = RVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMatrix::<T>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(-i θ K)` for Hermitian `K`.
pub fn unitary_from_generator<T: Real>(k: &CMatrix<T>, theta: T) -> CMatrix<T> {
    let (values, vectors) = hermitian_eigen(k);
    let n = k.nrows();
    let mut phases = CMatrix::<T>::zeros(n, n);
    for i in 0..n {
        let angle = -theta * values[i];
        phases[(i, i)] = cplx(angle.cos(), angle.sin());
    }
    &vectors * phases * vectors.adjoint()
}

pub fn complex_from_real<T: Real>(a: &DMatrix<T>) -> CMatrix<T> {
    a.map(creal)
}

pub fn diagonal<T: Real>(entries: &[T]) -> CMatrix<T> {
    let n = entries.len();
    let mut m = CMatrix::<T>::zeros(n, n);
    for (i, &e) in entries.iter().enumerate() {
        m[(i, i)] = creal(e);
    }
    m
}

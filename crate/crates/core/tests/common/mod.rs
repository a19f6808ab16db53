#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sldkit_core::linalg::unitary_from_generator;
use sldkit_core::scalar::cplx;
use sldkit_core::{Basis, Matrix, State, Tangent, Weights};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = cplx(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = cplx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn traceless_hermitian(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = hermitian(rng, n);
    let shift = m.trace().re / n as f64;
    for i in 0..n {
        m[(i, i)].re -= shift;
    }
    m
}

pub fn unitary(rng: &mut impl Rng, n: usize) -> Matrix {
    unitary_from_generator(&hermitian(rng, n), 2.0)
}

/// Full-rank weights with every entry at least `floor / n`.
pub fn full_rank_weights(rng: &mut impl Rng, n: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(floor..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|x| x / sum).collect()
}

/// Random-spectrum state `U† diag(k) U` and an arbitrary traceless tangent.
pub fn random_pair(rng: &mut impl Rng, basis: &Basis) -> (State, Tangent) {
    let n = basis.dimension();
    let k = full_rank_weights(rng, n, 0.1);
    let u = unitary(rng, n);
    let rho0 = State::base_point(basis, &Weights::new(&k, n).unwrap()).unwrap();
    let rho = sldkit_core::state_space::transport_state(basis, &u, &rho0).unwrap();
    let form = Tangent::from_matrix(basis, traceless_hermitian(rng, n)).unwrap();
    (rho, form)
}

/// Random off-diagonal orbit tangent at a diagonal base point.
pub fn offdiagonal_form(rng: &mut impl Rng, basis: &Basis) -> Tangent {
    let mut coeffs = vec![0.0; basis.len()];
    for &i in basis.offdiagonal_indices() {
        coeffs[i] = rng.random_range(-1.0..1.0);
    }
    Tangent::from_coefficients(basis, 0.0, coeffs).unwrap()
}

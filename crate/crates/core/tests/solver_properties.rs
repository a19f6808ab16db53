mod common;

use common::*;
use rand::Rng;
use sldkit_core::fisher::{fisher_tensor, qfi_index};
use sldkit_core::linalg::{anticommutator, frobenius, trace_product};
use sldkit_core::oracle::{qfi_eigenbasis, sld_eigenbasis};
use sldkit_core::sld_solver::{assemble, solve_sld, DEFAULT_TOL};
use sldkit_core::state_space::{tangent_from_generator, transport_form, transport_state};
use sldkit_core::{Basis, Constants, Matrix, State, Weights};

fn gauge_projection_remainder(diff: &Matrix, gauge: &[Matrix]) -> f64 {
    let mut rem = diff.clone();
    for g in gauge {
        let c = trace_product(g, diff).re;
        rem -= g.map(|z| z * c);
    }
    frobenius(&rem)
}

#[test]
fn solver_matches_oracle_on_full_rank_states() {
    let mut rng = rng(11);
    for n in 2..=6 {
        let b = Basis::new(n).unwrap();
        let c = Constants::compute(&b);
        for _ in 0..20 {
            let (rho, form) = random_pair(&mut rng, &b);
            let sol = solve_sld(&b, &c, &rho, &form, DEFAULT_TOL).unwrap();
            let oracle = sld_eigenbasis(&b, &rho, &form, DEFAULT_TOL).unwrap();
            assert!(sol.residual <= 1e-10, "n={n} residual {}", sol.residual);
            assert!(frobenius(&(&sol.matrix - &oracle.matrix)) <= 1e-9);
            assert!(sol.gauge_basis.is_empty());
            let qfi = qfi_index(&rho, &sol).unwrap();
            assert!((qfi - qfi_eigenbasis(&rho, &form, DEFAULT_TOL).unwrap()).abs() <= 1e-9);
        }
    }
}

#[test]
fn rank_deficient_solutions_differ_from_oracle_only_by_gauge() {
    let mut rng = rng(12);
    for n in 2..=5 {
        let b = Basis::new(n).unwrap();
        let c = Constants::compute(&b);
        for rank in 1..n {
            let k = full_rank_weights(&mut rng, rank, 0.1);
            let rho0 = State::base_point(&b, &Weights::new(&k, n).unwrap()).unwrap();
            let u = unitary(&mut rng, n);
            let rho = transport_state(&b, &u, &rho0).unwrap();
            let form = tangent_from_generator(&b, &hermitian(&mut rng, n), &rho).unwrap();
            let sol = solve_sld(&b, &c, &rho, &form, DEFAULT_TOL).unwrap();
            let oracle = sld_eigenbasis(&b, &rho, &form, DEFAULT_TOL).unwrap();
            let kernel = n - rank;
            assert_eq!(sol.gauge_dim(), kernel * kernel, "n={n} rank={rank}");
            assert!(sol.residual <= 1e-10);
            for x in &sol.gauge_basis {
                assert!(frobenius(&anticommutator(x, rho.matrix())) <= 1e-10);
                // Tr(ρX²) and the cross term vanish, so the QFI is gauge independent
                assert!(trace_product(rho.matrix(), &(x * x)).re.abs() <= 1e-10);
                assert!(trace_product(rho.matrix(), &anticommutator(&sol.matrix, x)).re.abs() <= 1e-10);
            }
            assert!(gauge_projection_remainder(&(&sol.matrix - &oracle.matrix), &sol.gauge_basis) <= 1e-9);
            // both pick the minimum-norm representative
            assert!(frobenius(&(&sol.matrix - &oracle.matrix)) <= 1e-9);
        }
    }
}

#[test]
fn gauge_basis_is_frobenius_orthonormal() {
    let b = Basis::new(4).unwrap();
    let c = Constants::compute(&b);
    let rho = State::base_point(&b, &Weights::new(&[0.7, 0.3], 4).unwrap()).unwrap();
    let sol = solve_sld(&b, &c, &rho, &sldkit_core::Tangent::zero(&b), DEFAULT_TOL).unwrap();
    assert_eq!(sol.gauge_dim(), 4);
    for (i, x) in sol.gauge_basis.iter().enumerate() {
        for (j, y) in sol.gauge_basis.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((trace_product(x, y).re - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn diagonal_components_vanish_at_full_rank_base_points() {
    let mut rng = rng(13);
    for n in 2..=6 {
        let b = Basis::new(n).unwrap();
        let c = Constants::compute(&b);
        let k = full_rank_weights(&mut rng, n, 0.1);
        let rho = State::base_point(&b, &Weights::new(&k, n).unwrap()).unwrap();
        let form = tangent_from_generator(&b, &hermitian(&mut rng, n), &rho).unwrap();
        let sol = solve_sld(&b, &c, &rho, &form, DEFAULT_TOL).unwrap();
        assert!(sol.coeff_identity.abs() < 1e-13);
        for &l in b.diagonal_indices() {
            assert!(sol.coeffs[l].abs() < 1e-13, "n={n} l={l}");
        }
    }
}

#[test]
fn diagonal_block_determinant_is_product_of_weights() {
    let mut rng = rng(14);
    for n in 2..=6 {
        let b = Basis::new(n).unwrap();
        let c = Constants::compute(&b);
        for _ in 0..5 {
            let k = full_rank_weights(&mut rng, n, 0.05);
            let rho = State::base_point(&b, &Weights::new(&k, n).unwrap()).unwrap();
            let sys = assemble(&rho, &sldkit_core::Tangent::zero(&b), &c).unwrap();
            let det = sys.diagonal_block_determinant(&b);
            let prod: f64 = k.iter().product();
            assert!((det - prod).abs() < 1e-12 * prod.max(1e-3), "n={n}: {det} vs {prod}");
        }
        let drop = rng.random_range(0..n);
        let mut k = full_rank_weights(&mut rng, n, 0.05);
        let removed = k[drop];
        k[drop] = 0.0;
        let k: Vec<f64> = k.iter().map(|x| x / (1.0 - removed)).collect();
        let rho = State::base_point(&b, &Weights::new(&k, n).unwrap()).unwrap();
        let sys = assemble(&rho, &sldkit_core::Tangent::zero(&b), &c).unwrap();
        assert!(sys.diagonal_block_determinant(&b).abs() < 1e-14);
    }
}

#[test]
fn qfi_is_equivariant_under_transport() {
    let mut rng = rng(15);
    for n in 2..=4 {
        let b = Basis::new(n).unwrap();
        let c = Constants::compute(&b);
        for _ in 0..5 {
            let (rho, form) = random_pair(&mut rng, &b);
            let u = unitary(&mut rng, n);
            let rho_u = transport_state(&b, &u, &rho).unwrap();
            let form_u = transport_form(&b, &u, &form).unwrap();
            let before = qfi_index(&rho, &solve_sld(&b, &c, &rho, &form, DEFAULT_TOL).unwrap()).unwrap();
            let after = qfi_index(&rho_u, &solve_sld(&b, &c, &rho_u, &form_u, DEFAULT_TOL).unwrap()).unwrap();
            assert!((before - after).abs() < 1e-10);
        }
    }
}

#[test]
fn fisher_tensor_invariants() {
    let mut rng = rng(16);
    let b = Basis::new(4).unwrap();
    let c = Constants::compute(&b);
    let (rho, _) = random_pair(&mut rng, &b);
    let slds: Vec<_> = (0..5)
        .map(|_| {
            let form = tangent_from_generator(&b, &hermitian(&mut rng, 4), &rho).unwrap();
            solve_sld(&b, &c, &rho, &form, DEFAULT_TOL).unwrap()
        })
        .collect();
    let t = fisher_tensor(&rho, &slds).unwrap();
    for mu in 0..5 {
        assert!((t.symmetric[(mu, mu)] - qfi_index(&rho, &slds[mu]).unwrap()).abs() < 1e-12);
        for nu in 0..5 {
            assert!((t.symmetric[(mu, nu)] - t.symmetric[(nu, mu)]).abs() < 1e-15);
            assert!((t.antisymmetric[(mu, nu)] + t.antisymmetric[(nu, mu)]).abs() < 1e-15);
        }
    }
    let eig = t.symmetric.clone().symmetric_eigen();
    assert!(eig.eigenvalues.iter().all(|&v| v > -1e-12));
}

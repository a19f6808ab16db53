//! SLD at one point of a family, by the selected method.

use serde::{Deserialize, Serialize};
use sldkit_core::linalg::{frobenius, hermitian_eigen, trace_product};
use sldkit_core::oracle::sld_eigenbasis;
use sldkit_core::sld_solver::{
    closed_form_u2, closed_form_u3, closed_form_u3_degenerate, closed_form_u3_rank2, solve_sld, transversal_sld,
};
use sldkit_core::state_space::transport_form;
use sldkit_core::{Basis, Constants, Matrix, Solution, State, Tangent, Weights};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    General,
    ClosedU3,
    ClosedU2,
    Oracle,
}

pub fn solve_at(
    basis: &Basis,
    constants: &Constants,
    state: &State,
    form: &Tangent,
    method: Method,
    tol: f64,
) -> Result<Solution, CliError> {
    match method {
        Method::General => Ok(solve_sld(basis, constants, state, form, tol)?),
        Method::Oracle => Ok(sld_eigenbasis(basis, state, form, tol)?),
        Method::ClosedU2 | Method::ClosedU3 => closed(basis, state, form, method, tol),
    }
}

/// Rounds weights within `tol` of zero or of their neighbour onto the same
/// value, then renormalizes. Input is sorted descending.
pub fn snap_weights(k: &mut [f64], tol: f64) {
    for x in k.iter_mut() {
        if x.abs() <= tol {
            *x = 0.0;
        }
    }
    for i in 1..k.len() {
        if (k[i] - k[i - 1]).abs() <= tol {
            k[i] = k[i - 1];
        }
    }
    let sum: f64 = k.iter().sum();
    if sum > 0.0 {
        k.iter_mut().for_each(|x| *x /= sum);
    }
}

/// Eigenframe `ρ = V diag(k) V†` with weights ordered for the closed forms:
/// descending, and for three levels a lone distinct positive weight first.
fn frame(state: &State, tol: f64) -> (Matrix, Vec<f64>) {
    let (values, vectors) = hermitian_eigen(state.matrix());
    let n = values.len();
    let mut order: Vec<usize> = (0..n).rev().collect();
    let mut k: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    snap_weights(&mut k, tol);
    if n == 3 && k[0] == k[1] && k[1] != k[2] && k[2] > 0.0 {
        order = vec![order[2], order[0], order[1]];
        k = vec![k[2], k[0], k[1]];
    }
    let v = Matrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    (v, k)
}

fn closed(basis: &Basis, state: &State, form: &Tangent, method: Method, tol: f64) -> Result<Solution, CliError> {
    let n = basis.dimension();
    match (method, n) {
        (Method::ClosedU2, 2) | (Method::ClosedU3, 3) => {}
        _ => return Err(CliError::Usage(format!("method {method:?} does not apply to n = {n}"))),
    }
    let (v, k) = frame(state, tol);
    let weights = Weights::new(&k, n)?;
    let local = transport_form(basis, &v, form)?;

    let scale = frobenius(form.matrix()).max(1.0);
    let rates: Vec<f64> = (0..n)
        .map(|i| local.matrix()[(i, i)].re)
        .map(|r| if r.abs() <= tol * scale { 0.0 } else { r })
        .collect();
    let mut coeffs = local.coeffs().to_vec();
    for &i in basis.diagonal_indices() {
        coeffs[i] = 0.0;
    }
    let orbit = Tangent::from_coefficients(basis, 0.0, coeffs)?;

    let horizontal = match method {
        Method::ClosedU2 => closed_form_u2(basis, &weights, &orbit)?,
        _ if k[2] == 0.0 => closed_form_u3_rank2(basis, &weights, &orbit)?,
        _ if k[1] == k[2] => closed_form_u3_degenerate(basis, &weights, &orbit)?,
        _ => closed_form_u3(basis, &weights, &orbit)?,
    };
    let transversal = transversal_sld(basis, &rates, &weights)?;

    let rotate = |m: &Matrix| &v * m * v.adjoint();
    let matrix = rotate(&(&horizontal.matrix + &transversal.matrix));
    let gauge = horizontal.gauge_basis.iter().map(rotate).collect();
    Ok(Solution::from_matrix(basis, state, form, matrix, gauge))
}

/// Frobenius norm of `a - b` after removing its component in the gauge span.
pub fn gauge_distance(a: &Matrix, b: &Matrix, gauge: &[Matrix]) -> f64 {
    let mut diff = a - b;
    for g in gauge {
        let c = trace_product(g, &diff).re;
        diff -= g.map(|z| z * c);
    }
    frobenius(&diff)
}

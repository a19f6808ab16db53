//! JSON forms of bases, states, solutions and tensors.
//!
//! Complex matrices are nested row-major arrays of `[re, im]` pairs; all
//! indices are 0-based. Structure constants list their stored entries as
//! `[i, j, k, value]` with `i < j < k` for `c` and `i ≤ j ≤ k` for `f`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::FisherTensorResult;
use crate::lie_basis::{GeneratorBasis, StructureConstants};
use crate::scalar::{cplx, CMatrix, Real};
use crate::sld_solver::SLDSolution;
use crate::state_space::DensityState;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;
pub type Entry = (usize, usize, usize, f64);

pub fn matrix_to_json<T: Real>(m: &CMatrix<T>) -> MatrixJson {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re.as_f64(), m[(r, c)].im.as_f64()]).collect()).collect()
}

pub fn matrix_from_json<T: Real>(rows: &MatrixJson) -> Result<CMatrix<T>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if let Some(row) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare(n, row.len()));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| cplx(T::lit(rows[r][c][0]), T::lit(rows[r][c][1]))))
}

fn real_to_json<T: Real>(m: &DMatrix<T>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)].as_f64()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub n: usize,
    pub generators: Vec<MatrixJson>,
    pub c: Vec<Entry>,
    pub f: Vec<Entry>,
}

impl BasisJson {
    pub fn new<T: Real>(basis: &GeneratorBasis<T>, constants: &StructureConstants<T>) -> Self {
        let entry = |([i, j, k], v): ([usize; 3], T)| (i, j, k, v.as_f64());
        Self {
            n: basis.dimension(),
            generators: basis.generators().iter().map(matrix_to_json).collect(),
            c: constants.c_entries().map(entry).collect(),
            f: constants.f_entries().map(entry).collect(),
        }
    }

    pub fn to_basis<T: Real>(&self) -> Result<(GeneratorBasis<T>, StructureConstants<T>)> {
        let generators = self.generators.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        let basis = GeneratorBasis::from_generators(self.n, generators)?;
        let conv = |e: &Entry| ([e.0, e.1, e.2], T::lit(e.3));
        let constants = StructureConstants::from_entries(self.n, self.c.iter().map(conv), self.f.iter().map(conv))?;
        Ok((basis, constants))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub n: usize,
    pub matrix: MatrixJson,
}

impl StateJson {
    pub fn new<T: Real>(state: &DensityState<T>) -> Self {
        Self { n: state.dimension(), matrix: matrix_to_json(state.matrix()) }
    }

    pub fn to_state<T: Real>(&self, basis: &GeneratorBasis<T>) -> Result<DensityState<T>> {
        let m = matrix_from_json(&self.matrix)?;
        if m.nrows() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.nrows() });
        }
        DensityState::from_matrix(basis, m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    #[serde(rename = "L_identity")]
    pub l_identity: f64,
    #[serde(rename = "L")]
    pub l: Vec<f64>,
    pub matrix: MatrixJson,
    pub gauge_dim: usize,
    pub residual: f64,
}

impl SolutionJson {
    pub fn new<T: Real>(sol: &SLDSolution<T>) -> Self {
        Self {
            l_identity: sol.coeff_identity.as_f64(),
            l: sol.coeffs.iter().map(|x| x.as_f64()).collect(),
            matrix: matrix_to_json(&sol.matrix),
            gauge_dim: sol.gauge_dim(),
            residual: sol.residual.as_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    #[serde(rename = "F_re")]
    pub f_re: Vec<Vec<f64>>,
    #[serde(rename = "F_im")]
    pub f_im: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    pub omega: Vec<Vec<f64>>,
    pub directions: usize,
}

impl TensorJson {
    pub fn new<T: Real>(t: &FisherTensorResult<T>) -> Self {
        let re = t.components.map(|z| z.re);
        let im = t.components.map(|z| z.im);
        Self {
            f_re: real_to_json(&re),
            f_im: real_to_json(&im),
            g: real_to_json(&t.symmetric),
            omega: real_to_json(&t.antisymmetric),
            directions: t.directions,
        }
    }
}

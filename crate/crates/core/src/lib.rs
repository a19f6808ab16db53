//! Symmetric logarithmic derivatives of n-level mixed states, solved as a
//! linear system over the structure constants of su(n), together with the
//! quantum Fisher information and the Fisher tensor.
//!
//! Every numeric type is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use sldkit_core::{Basis, Constants, State, Weights};
//! use sldkit_core::{fisher, sld_solver, state_space};
//!
//! let basis = Basis::new(2).unwrap();
//! let constants = Constants::compute(&basis);
//! let weights = Weights::new(&[0.75, 0.25], 2).unwrap();
//! let rho = State::base_point(&basis, &weights).unwrap();
//! let k = basis.generator(1).map(|z| z * 0.5);
//! let drho = state_space::tangent_from_generator(&basis, &k, &rho).unwrap();
//! let sld = sld_solver::solve_sld(&basis, &constants, &rho, &drho, 1e-10).unwrap();
//! let qfi = fisher::qfi_index(&rho, &sld).unwrap();
//! assert!((qfi - 0.25).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod error;
pub mod fisher;
pub mod json;
pub mod lie_basis;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod sld_solver;
pub mod state_space;

pub use error::{Error, Result};
pub use fisher::{FisherTensorResult, FlagChartU3, PairCoefficients};
pub use lie_basis::{GeneratorBasis, GeneratorKind, StructureConstants};
pub use scalar::{CMatrix, Real};
pub use sld_solver::{SLDSolution, SLDSystem};
pub use state_space::{DensityState, MixingWeights, TangentForm};

pub type Basis = GeneratorBasis<f64>;
pub type Constants = StructureConstants<f64>;
pub type Weights = MixingWeights<f64>;
pub type State = DensityState<f64>;
pub type Tangent = TangentForm<f64>;
pub type System = SLDSystem<f64>;
pub type Solution = SLDSolution<f64>;
pub type FisherTensor = FisherTensorResult<f64>;
pub type FlagChart = FlagChartU3<f64>;
pub type Matrix = CMatrix<f64>;

pub type Basis32 = GeneratorBasis<f32>;
pub type Constants32 = StructureConstants<f32>;
pub type State32 = DensityState<f32>;
pub type Solution32 = SLDSolution<f32>;

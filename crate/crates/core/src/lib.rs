//! Numerical toolkit for hypothesis testing between finite-dimensional states.

pub mod classical;
pub mod composite;
pub mod divergence;
pub mod error;
pub mod gallery;
pub mod ext;
pub mod hermcore;
pub mod io;
pub mod optim;
pub mod random;
pub mod scalar;
pub mod special;
pub mod typelab;
pub mod verify;
pub mod tradeoff;

pub use classical::ClassicalWeight;
pub use error::{Error, Result};
pub use ext::ExtReal;
pub use hermcore::{DensityOperator, HermitianOperator};
pub use num_rational::BigRational;
pub use scalar::{Exact, Real};

/// Double-precision classical weight.
pub type Weight = ClassicalWeight<f64>;
/// Single-precision classical weight.
pub type Weight32 = ClassicalWeight<f32>;
pub type Herm = HermitianOperator;

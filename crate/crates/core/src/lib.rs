pub mod cli;
pub mod decomp;
pub mod error;
pub mod interval;
pub mod kostant;
pub mod linalg;
pub mod matrix;
pub mod nilpotent;
pub mod parse;
pub mod scalar;
pub mod slgroup;
pub mod puiseux;
pub mod rootsys;
pub mod tower;

pub use error::{Error, Result};
pub use scalar::{q, qf, Rational, Scalar, Sign};
pub use matrix::Matrix;
pub use puiseux::{PuiseuxScalar, Tail, Truncation};
pub use tower::TowerScalar;

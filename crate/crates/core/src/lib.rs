pub mod bell;
pub mod chain;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod scalar;
pub mod seesaw;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};

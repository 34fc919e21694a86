//! Scalar field abstraction shared by the solvers.
//!
//! Every algorithm in this crate is written once against [`Scalar`] and runs
//! either over the reals or over the complex numbers.

use nalgebra::ComplexField;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which field the matrices of a run live over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field '{other}', expected real or complex")),
        }
    }
}

/// Matrix entry type: `f64` or `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    const FIELD: Field;

    /// A uniformly distributed unit-modulus number (always `1` over the reals).
    fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// `(re, im)` pair used by the serializers.
    fn parts(self) -> (f64, f64) {
        (self.clone().real(), self.imaginary())
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn random_phase<R: Rng + ?Sized>(_rng: &mut R) -> Self {
        1.0
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(1.0, phi)
    }
}

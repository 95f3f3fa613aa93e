//! Dense matrices over the associative real normed division algebras.
//!
//! Every element is carried as a quaternion; the algebra tag decides how
//! many of its real components are live (1, 2 or 4). Real and complex
//! arithmetic are closed inside the quaternion product, so projecting back
//! onto the live components after an operation is exact.
//!
//! Octonions are accepted by [`Algebra`] so that scalar formulas can be
//! evaluated for `beta = 8`, but any attempt to build a matrix over them is
//! rejected at construction.

mod matrix;
mod quat;

pub use matrix::{DivMatrix, HermitianPD, UpperTriangular};
pub use quat::Quat;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four real normed division algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl Algebra {
    /// Real dimension of the algebra.
    pub const fn beta(self) -> usize {
        match self {
            Algebra::Real => 1,
            Algebra::Complex => 2,
            Algebra::Quaternion => 4,
            Algebra::Octonion => 8,
        }
    }

    pub fn beta_f64(self) -> f64 {
        self.beta() as f64
    }

    pub fn from_beta(beta: usize) -> Result<Self> {
        match beta {
            1 => Ok(Algebra::Real),
            2 => Ok(Algebra::Complex),
            4 => Ok(Algebra::Quaternion),
            8 => Ok(Algebra::Octonion),
            other => Err(Error::UnsupportedAlgebra(format!(
                "beta = {other}; expected 1, 2, 4 or 8"
            ))),
        }
    }

    /// Exponent of pi in the singular value Jacobian: 0, -m, -2m, -4m.
    pub fn rho(self, m: usize) -> i64 {
        let m = m as i64;
        match self {
            Algebra::Real => 0,
            Algebra::Complex => -m,
            Algebra::Quaternion => -2 * m,
            Algebra::Octonion => -4 * m,
        }
    }

    pub const fn is_associative(self) -> bool {
        !matches!(self, Algebra::Octonion)
    }

    /// Fails for algebras whose matrices this crate cannot multiply.
    pub fn require_associative(self) -> Result<()> {
        if self.is_associative() {
            Ok(())
        } else {
            Err(Error::UnsupportedAlgebra(
                "octonion matrices are not supported (non-associative)".into(),
            ))
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Real => "real",
            Algebra::Complex => "complex",
            Algebra::Quaternion => "quaternion",
            Algebra::Octonion => "octonion",
        }
    }
}

impl std::str::FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" | "1" => Ok(Algebra::Real),
            "complex" | "c" | "2" => Ok(Algebra::Complex),
            "quaternion" | "h" | "4" => Ok(Algebra::Quaternion),
            "octonion" | "o" | "8" => Ok(Algebra::Octonion),
            other => Err(Error::UnsupportedAlgebra(other.to_string())),
        }
    }
}

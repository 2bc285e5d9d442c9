//! Exact algebra in the four independent symbols `z1, zb1, z2, zb2`.
//!
//! Coefficients are complex numbers with exact rational real and imaginary
//! parts, so every symbolic identity can be checked with tolerance zero.
//! Numeric evaluation goes through [`NumPoly`] / [`NumRational`], which
//! cache `f64` coefficients.

mod kernel;
mod poly;
mod rational;

pub use kernel::{polarize, PolarizedKernel};
pub use poly::{Coeff, ConjPoly, Exponent, NumPoly};
pub use rational::{NumRational, RationalExpr};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four formal symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z1,
    Zb1,
    Z2,
    Zb2,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Z1, Var::Zb1, Var::Z2, Var::Zb2];

    /// Position in the exponent tuple `(z1, zb1, z2, zb2)`.
    pub fn slot(self) -> usize {
        match self {
            Var::Z1 => 0,
            Var::Zb1 => 1,
            Var::Z2 => 2,
            Var::Zb2 => 3,
        }
    }

    pub fn conj(self) -> Var {
        match self {
            Var::Z1 => Var::Zb1,
            Var::Zb1 => Var::Z1,
            Var::Z2 => Var::Zb2,
            Var::Zb2 => Var::Z2,
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn coeff(re: BigRational, im: BigRational) -> Coeff {
    Complex::new(re, im)
}

pub fn coeff_int(re: i64, im: i64) -> Coeff {
    Complex::new(rat(re, 1), rat(im, 1))
}

pub(crate) fn coeff_is_zero(c: &Coeff) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

pub(crate) fn coeff_one() -> Coeff {
    Complex::new(BigRational::one(), BigRational::zero())
}

pub(crate) fn coeff_to_f64(c: &Coeff) -> num_complex::Complex64 {
    use num_traits::ToPrimitive;
    num_complex::Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

/// JSON term: `{"e":[a,b,c,d],"re":"p/q","im":"p/q"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub e: [u32; 4],
    pub re: String,
    pub im: String,
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

pub(crate) fn term_to_json(e: Exponent, c: &Coeff) -> TermJson {
    TermJson {
        e,
        re: c.re.to_string(),
        im: c.im.to_string(),
    }
}

pub(crate) fn term_from_json(t: &TermJson) -> Result<(Exponent, Coeff)> {
    Ok((t.e, coeff(parse_rational(&t.re)?, parse_rational(&t.im)?)))
}

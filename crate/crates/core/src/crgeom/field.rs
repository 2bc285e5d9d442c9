use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::point::C2;
use crate::symalg::{ConjPoly, RationalExpr, Var};

/// Symbol differentiated by each basis slot of a [`VectorField`].
pub const BASIS: [Var; 4] = [Var::Z1, Var::Z2, Var::Zb1, Var::Zb2];

/// `c0 d/dz1 + c1 d/dz2 + c2 d/dzb1 + c3 d/dzb2`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorField {
    pub coeffs: [RationalExpr; 4],
}

impl VectorField {
    pub fn new(coeffs: [RationalExpr; 4]) -> Self {
        VectorField { coeffs }
    }

    pub fn from_polys(c: [ConjPoly; 4]) -> Self {
        VectorField {
            coeffs: c.map(RationalExpr::from_poly),
        }
    }

    pub fn zero() -> Self {
        Self::from_polys([ConjPoly::zero(), ConjPoly::zero(), ConjPoly::zero(), ConjPoly::zero()])
    }

    /// The coordinate field `d/d(symbol)`.
    pub fn coordinate(v: Var) -> Self {
        let mut c = [ConjPoly::zero(), ConjPoly::zero(), ConjPoly::zero(), ConjPoly::zero()];
        let slot = BASIS.iter().position(|b| *b == v).expect("basis symbol");
        c[slot] = ConjPoly::one();
        Self::from_polys(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalExpr::is_zero)
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            coeffs: std::array::from_fn(|i| self.coeffs[i].neg()),
        }
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField {
            coeffs: std::array::from_fn(|i| self.coeffs[i].add(&o.coeffs[i])),
        }
    }

    pub fn scale(&self, f: &RationalExpr) -> VectorField {
        VectorField {
            coeffs: std::array::from_fn(|i| self.coeffs[i].mul(f)),
        }
    }

    /// The derivation `X(f) = sum_i c_i * d f / d(basis_i)`.
    pub fn apply(&self, f: &RationalExpr) -> RationalExpr {
        self.coeffs
            .iter()
            .zip(BASIS)
            .filter(|(c, _)| !c.is_zero())
            .fold(RationalExpr::zero(), |acc, (c, v)| acc.add(&c.mul(&f.derivative(v))))
    }

    /// Exact equality of coefficient functions.
    pub fn equals(&self, o: &VectorField) -> bool {
        self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.equals(b))
    }

    pub fn eval(&self, z: C2) -> Result<[Complex64; 4]> {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o = c.eval(z)?;
        }
        Ok(out)
    }
}

/// `[X, Y]_i = X(Y_i) - Y(X_i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField {
        coeffs: std::array::from_fn(|i| x.apply(&y.coeffs[i]).sub(&y.apply(&x.coeffs[i]))),
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["d/dz1", "d/dz2", "d/dzb1", "d/dzb2"];
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(NAMES)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("({c}) {n}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

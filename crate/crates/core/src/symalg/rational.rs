use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConjPoly, NumPoly, Var};
use crate::error::{Error, Result};
use crate::point::C2;

/// Quotient of two [`ConjPoly`] values. The denominator is never zero.
///
/// Only the common monomial content of numerator and denominator is
/// cancelled; there is no polynomial gcd.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalExpr {
    numerator: ConjPoly,
    denominator: ConjPoly,
}

impl RationalExpr {
    pub fn new(numerator: ConjPoly, denominator: ConjPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::canonical(numerator, denominator))
    }

    pub fn from_poly(p: ConjPoly) -> Self {
        RationalExpr {
            numerator: p,
            denominator: ConjPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(ConjPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(ConjPoly::one())
    }

    fn canonical(num: ConjPoly, den: ConjPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // A constant denominator is folded into the numerator.
        if let Some(c) = den.as_constant() {
            let inv = super::coeff_one() / c;
            return Self::from_poly(num.scale(&inv));
        }
        let mn = num.monomial_content();
        let md = den.monomial_content();
        let common = [mn[0].min(md[0]), mn[1].min(md[1]), mn[2].min(md[2]), mn[3].min(md[3])];
        if common == [0; 4] {
            return RationalExpr {
                numerator: num,
                denominator: den,
            };
        }
        let num = num.div_monomial(common);
        let den = den.div_monomial(common);
        if let Some(c) = den.as_constant() {
            let inv = super::coeff_one() / c;
            return Self::from_poly(num.scale(&inv));
        }
        RationalExpr {
            numerator: num,
            denominator: den,
        }
    }

    pub fn numerator(&self) -> &ConjPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &ConjPoly {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator == ConjPoly::one()
    }

    pub fn add(&self, o: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.denominator == o.denominator {
            return Self::canonical(&self.numerator + &o.numerator, self.denominator.clone());
        }
        Self::canonical(
            &(&self.numerator * &o.denominator) + &(&o.numerator * &self.denominator),
            &self.denominator * &o.denominator,
        )
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }

    pub fn sub(&self, o: &RationalExpr) -> RationalExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalExpr) -> RationalExpr {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::canonical(&self.numerator * &o.numerator, &self.denominator * &o.denominator)
    }

    pub fn mul_poly(&self, p: &ConjPoly) -> RationalExpr {
        Self::canonical(&self.numerator * p, self.denominator.clone())
    }

    pub fn div(&self, o: &RationalExpr) -> Result<RationalExpr> {
        if o.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::canonical(&self.numerator * &o.denominator, &self.denominator * &o.numerator))
    }

    pub fn div_poly(&self, p: &ConjPoly) -> Result<RationalExpr> {
        if p.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self::canonical(self.numerator.clone(), &self.denominator * p))
    }

    /// Wirtinger derivative by the quotient rule.
    pub fn derivative(&self, v: Var) -> RationalExpr {
        let dn = self.numerator.derivative(v);
        if self.is_polynomial() {
            return Self::from_poly(dn);
        }
        let dd = self.denominator.derivative(v);
        if dd.is_zero() {
            return Self::canonical(dn, self.denominator.clone());
        }
        Self::canonical(
            &(&dn * &self.denominator) - &(&self.numerator * &dd),
            &self.denominator * &self.denominator,
        )
    }

    /// Exact equality as rational functions (cross-multiplication).
    pub fn equals(&self, o: &RationalExpr) -> bool {
        (&self.numerator * &o.denominator) == (&o.numerator * &self.denominator)
    }

    pub fn eval(&self, z: C2) -> Result<Complex64> {
        self.numeric().eval(z)
    }

    pub fn numeric(&self) -> NumRational {
        NumRational {
            numerator: self.numerator.numeric(),
            denominator: self.denominator.numeric(),
            polynomial: self.is_polynomial(),
        }
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({self})")
    }
}

impl From<ConjPoly> for RationalExpr {
    fn from(p: ConjPoly) -> Self {
        RationalExpr::from_poly(p)
    }
}

/// Floating-point image of a [`RationalExpr`].
#[derive(Clone, Debug)]
pub struct NumRational {
    numerator: NumPoly,
    denominator: NumPoly,
    polynomial: bool,
}

impl NumRational {
    /// Numerator over denominator, or [`Error::DivisionByZero`] when the
    /// denominator vanishes at `z`.
    pub fn eval(&self, z: C2) -> Result<Complex64> {
        let n = self.numerator.eval(z);
        if self.polynomial {
            return Ok(n);
        }
        let d = self.denominator.eval(z);
        if d == Complex64::new(0.0, 0.0) || !d.is_finite() {
            return Err(Error::DivisionByZero(z));
        }
        Ok(n / d)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

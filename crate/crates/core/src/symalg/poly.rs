use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{coeff_is_zero, coeff_one, coeff_to_f64, term_from_json, term_to_json, TermJson, Var};
use crate::error::Result;
use crate::point::C2;

pub type Coeff = Complex<BigRational>;

/// Powers of `(z1, zb1, z2, zb2)`.
pub type Exponent = [u32; 4];

/// Polynomial in `z1, zb1, z2, zb2` with exact complex-rational coefficients.
///
/// The term map never stores a zero coefficient, so structural equality is
/// equality of polynomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ConjPoly {
    terms: BTreeMap<Exponent, Coeff>,
}

impl ConjPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(coeff_one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(super::coeff_int(n, 0))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.slot()] = 1;
        Self::monomial(e, coeff_one())
    }

    pub fn monomial(e: Exponent, c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Coeff)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Coeff) {
        if coeff_is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot = &*slot + &c;
                if coeff_is_zero(slot) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Option<&Coeff> {
        self.terms.get(e)
    }

    /// The constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Complex::new(BigRational::zero(), BigRational::zero())),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Coeff) -> ConjPoly {
        if coeff_is_zero(c) {
            return Self::zero();
        }
        ConjPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> ConjPoly {
        let mut base = self.clone();
        let mut acc = ConjPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Wirtinger derivative, treating the four symbols as independent.
    pub fn derivative(&self, v: Var) -> ConjPoly {
        let s = v.slot();
        let mut out = ConjPoly::zero();
        for (e, c) in &self.terms {
            if e[s] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[s] -= 1;
            let k = Complex::new(BigRational::from_integer(BigInt::from(e[s])), BigRational::zero());
            out.add_term(e2, c * k);
        }
        out
    }

    /// Complex conjugate: swaps `z <-> zb` and conjugates coefficients.
    pub fn conjugate(&self) -> ConjPoly {
        ConjPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[1], e[0], e[3], e[2]], c.conj()))
                .collect(),
        }
    }

    /// True when the polynomial takes real values at every point.
    pub fn is_real_valued(&self) -> bool {
        *self == self.conjugate()
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Exponent {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return [0; 4];
        };
        let mut m = *first;
        for e in it {
            for i in 0..4 {
                m[i] = m[i].min(e[i]);
            }
        }
        m
    }

    pub fn mul_monomial(&self, m: Exponent) -> ConjPoly {
        ConjPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0] + m[0], e[1] + m[1], e[2] + m[2], e[3] + m[3]], c.clone()))
                .collect(),
        }
    }

    /// Divides every term by `x^m`; panics if some term is not divisible.
    pub fn div_monomial(&self, m: Exponent) -> ConjPoly {
        ConjPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    assert!((0..4).all(|i| e[i] >= m[i]), "monomial does not divide term");
                    ([e[0] - m[0], e[1] - m[1], e[2] - m[2], e[3] - m[3]], c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `z1, z2` and their true conjugates.
    pub fn eval(&self, z: C2) -> Complex64 {
        self.numeric().eval(z)
    }

    pub fn numeric(&self) -> NumPoly {
        NumPoly::new(self.terms.iter().map(|(e, c)| (*e, coeff_to_f64(c))).collect())
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(e, c)| term_to_json(*e, c)).collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<ConjPoly> {
        let mut p = ConjPoly::zero();
        for t in terms {
            let (e, c) = term_from_json(t)?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_terms()).expect("term list serializes")
    }

    pub fn from_json(s: &str) -> Result<ConjPoly> {
        let terms: Vec<TermJson> = serde_json::from_str(s)?;
        Self::from_json_terms(&terms)
    }
}

impl Serialize for ConjPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConjPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        ConjPoly::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn add(self, o: &ConjPoly) -> ConjPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn sub(self, o: &ConjPoly) -> ConjPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a ConjPoly> for &'a ConjPoly {
    type Output = ConjPoly;
    fn mul(self, o: &ConjPoly) -> ConjPoly {
        let mut out = ConjPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &ConjPoly {
    type Output = ConjPoly;
    fn neg(self) -> ConjPoly {
        ConjPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ConjPoly {
            type Output = ConjPoly;
            fn $m(self, o: ConjPoly) -> ConjPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ConjPoly {
    type Output = ConjPoly;
    fn neg(self) -> ConjPoly {
        -&self
    }
}

fn fmt_coeff(c: &Coeff) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => format!("{}", c.re),
        (true, false) => format!("{}i", c.im),
        _ => format!("({}{}{}i)", c.re, if c.im > BigRational::zero() { "+" } else { "" }, c.im),
    }
}

impl fmt::Display for ConjPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; 4] = ["z1", "zb1", "z2", "zb2"];
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .zip(NAMES)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", fmt_coeff(c))?;
            } else if *c == coeff_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(c), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ConjPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConjPoly({self})")
    }
}

/// Floating-point image of a [`ConjPoly`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumPoly {
    terms: Vec<(Exponent, Complex64)>,
    max_exp: Exponent,
}

impl NumPoly {
    pub fn new(terms: Vec<(Exponent, Complex64)>) -> Self {
        let mut max_exp = [0; 4];
        for (e, _) in &terms {
            for i in 0..4 {
                max_exp[i] = max_exp[i].max(e[i]);
            }
        }
        NumPoly { terms, max_exp }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, z: C2) -> Complex64 {
        let base = [z.0, z.0.conj(), z.1, z.1.conj()];
        self.eval_symbols(base)
    }

    /// Evaluates with arbitrary values for the four symbols.
    pub fn eval_symbols(&self, base: [Complex64; 4]) -> Complex64 {
        let pows: Vec<Vec<Complex64>> = (0..4)
            .map(|i| {
                let mut v = Vec::with_capacity(self.max_exp[i] as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                v.push(acc);
                for _ in 0..self.max_exp[i] {
                    acc *= base[i];
                    v.push(acc);
                }
                v
            })
            .collect();
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |s, (e, c)| {
            s + c
                * pows[0][e[0] as usize]
                * pows[1][e[1] as usize]
                * pows[2][e[2] as usize]
                * pows[3][e[3] as usize]
        })
    }
}

impl One for ConjPoly {
    fn one() -> Self {
        ConjPoly::one()
    }
}

impl Zero for ConjPoly {
    fn zero() -> Self {
        ConjPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{coeff_int, Var::*};

    fn v(x: Var) -> ConjPoly {
        ConjPoly::var(x)
    }

    fn paper_quartic() -> ConjPoly {
        &(&(&v(Z1) * &v(Zb1)) + &(&v(Z2).pow(2) * &v(Zb1).pow(2))) - &ConjPoly::one()
    }

    #[test]
    fn power_rule() {
        let p = &v(Z1) * &v(Zb1);
        assert_eq!(p.derivative(Z1), v(Zb1));
        assert!(ConjPoly::from_int(-1).derivative(Z2).is_zero());
    }

    #[test]
    fn derivative_of_quartic_in_zb1() {
        let d = paper_quartic().derivative(Zb1);
        let want = &v(Z1) + &(&v(Z2).pow(2) * &v(Zb1)).scale(&coeff_int(2, 0));
        assert_eq!(d, want);
    }

    #[test]
    fn evaluation_examples() {
        let sphere = &(&(&v(Z1) * &v(Zb1)) + &(&v(Z2) * &v(Zb2))) - &ConjPoly::one();
        assert_eq!(sphere.eval(C2::real(1.0, 0.0)), Complex64::new(0.0, 0.0));
        assert_eq!(paper_quartic().eval(C2::real(1.0, 0.0)), Complex64::new(0.0, 0.0));
        let p = &v(Z1) * &v(Zb1);
        let i = C2(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        assert_eq!(p.eval(i), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = &v(Z1) - &v(Z1);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn conjugate_and_reality() {
        assert!(!paper_quartic().is_real_valued());
        let sphere = &(&v(Z1) * &v(Zb1)) + &(&v(Z2) * &v(Zb2));
        assert!(sphere.is_real_valued());
        let p = v(Z1).scale(&coeff_int(0, 1));
        assert_eq!(p.conjugate(), v(Zb1).scale(&coeff_int(0, -1)));
    }

    #[test]
    fn monomial_content_and_division() {
        let p = &(&v(Z1).pow(2) * &v(Zb1)) + &(&v(Z1) * &v(Zb1).pow(3));
        assert_eq!(p.monomial_content(), [1, 1, 0, 0]);
        let q = p.div_monomial([1, 1, 0, 0]);
        assert_eq!(q.mul_monomial([1, 1, 0, 0]), p);
    }

    #[test]
    fn json_format() {
        let p = &v(Z1).scale(&crate::symalg::coeff(crate::symalg::rat(1, 2), crate::symalg::rat(-3, 4))) - &ConjPoly::one();
        let s = p.to_json();
        assert_eq!(s, r#"[{"e":[0,0,0,0],"re":"-1","im":"0"},{"e":[1,0,0,0],"re":"1/2","im":"-3/4"}]"#);
        assert_eq!(ConjPoly::from_json(&s).unwrap(), p);
        assert!(ConjPoly::from_json(r#"[{"e":[0,0,0,0],"re":"x","im":"0"}]"#).is_err());
    }
}

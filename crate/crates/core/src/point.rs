use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of C^2.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct C2(pub Complex64, pub Complex64);

impl C2 {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        C2(z1, z2)
    }

    pub fn real(x1: f64, x2: f64) -> Self {
        C2(Complex64::new(x1, 0.0), Complex64::new(x2, 0.0))
    }

    pub fn from_reals(v: [f64; 4]) -> Self {
        C2(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
    }

    pub fn to_reals(self) -> [f64; 4] {
        [self.0.re, self.0.im, self.1.re, self.1.im]
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr() + self.1.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_i * conj(other_i)`.
    pub fn hdot(self, other: C2) -> Complex64 {
        self.0 * other.0.conj() + self.1 * other.1.conj()
    }

    pub fn scale(self, s: Complex64) -> C2 {
        C2(self.0 * s, self.1 * s)
    }

    pub fn dist(self, other: C2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.to_reals().iter().all(|x| x.is_finite())
    }
}

impl Add for C2 {
    type Output = C2;
    fn add(self, o: C2) -> C2 {
        C2(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for C2 {
    type Output = C2;
    fn sub(self, o: C2) -> C2 {
        C2(self.0 - o.0, self.1 - o.1)
    }
}

impl Neg for C2 {
    type Output = C2;
    fn neg(self) -> C2 {
        C2(-self.0, -self.1)
    }
}

impl Mul<f64> for C2 {
    type Output = C2;
    fn mul(self, s: f64) -> C2 {
        C2(self.0 * s, self.1 * s)
    }
}

impl fmt::Display for C2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i, {}{:+}i)",
            self.0.re, self.0.im, self.1.re, self.1.im
        )
    }
}

// Serialized as [re1, im1, re2, im2].
impl Serialize for C2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_reals().serialize(s)
    }
}

impl<'de> Deserialize<'de> for C2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = <[f64; 4]>::deserialize(d)?;
        Ok(C2::from_reals(v))
    }
}

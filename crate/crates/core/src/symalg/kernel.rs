use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{coeff_is_zero, coeff_to_f64, term_from_json, term_to_json, Coeff, ConjPoly, Exponent, TermJson};
use crate::error::Result;
use crate::point::C2;

/// Polarization `R(z, w)` of a defining polynomial: a polynomial in
/// `z1, z2, wb1, wb2` (in that exponent order). No `zb` symbols occur, so
/// `R` is holomorphic in `z` by construction.
#[derive(Clone, Default, Debug)]
pub struct PolarizedKernel {
    terms: BTreeMap<Exponent, Coeff>,
    // cached f64 coefficients for evaluation
    numeric: Vec<(Exponent, Complex64)>,
}

/// Replaces every `zb1^b zb2^d` by `wb1^b wb2^d`.
pub fn polarize(p: &ConjPoly) -> PolarizedKernel {
    PolarizedKernel::from_terms(p.terms().map(|(e, c)| ([e[0], e[2], e[1], e[3]], c.clone())))
}

impl PartialEq for PolarizedKernel {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl Eq for PolarizedKernel {}

impl PolarizedKernel {
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Coeff)>>(terms: I) -> Self {
        let mut map: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert_with(|| super::coeff_int(0, 0));
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !coeff_is_zero(c));
        let numeric = map.iter().map(|(e, c)| (*e, coeff_to_f64(c))).collect();
        PolarizedKernel { terms: map, numeric }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `R(z, z)` as a polynomial in the four conjugate symbols.
    pub fn diagonal(&self) -> ConjPoly {
        ConjPoly::from_terms(self.terms.iter().map(|(e, c)| ([e[0], e[2], e[1], e[3]], c.clone())))
    }

    /// The kernel `(z, w) -> conj(R(w, z))`.
    pub fn conj_transpose(&self) -> PolarizedKernel {
        PolarizedKernel::from_terms(self.terms.iter().map(|(e, c)| ([e[2], e[3], e[0], e[1]], c.conj())))
    }

    pub fn sub(&self, o: &PolarizedKernel) -> PolarizedKernel {
        PolarizedKernel::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.clone()))
                .chain(o.terms.iter().map(|(e, c)| (*e, -c.clone()))),
        )
    }

    /// Derivative in `z1` (`slot = 0`) or `z2` (`slot = 1`).
    pub fn derivative_z(&self, slot: usize) -> PolarizedKernel {
        assert!(slot < 2);
        PolarizedKernel::from_terms(self.terms.iter().filter(|(e, _)| e[slot] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[slot] -= 1;
            (e2, c * super::coeff_int(e[slot] as i64, 0))
        }))
    }

    /// Derivative in `zb1` or `zb2`; identically zero since no `zb` symbol occurs.
    pub fn derivative_zbar(&self, slot: usize) -> PolarizedKernel {
        assert!(slot < 2);
        PolarizedKernel::default()
    }

    pub fn eval(&self, z: C2, w: C2) -> Complex64 {
        let (wb1, wb2) = (w.0.conj(), w.1.conj());
        self.numeric.iter().fold(Complex64::new(0.0, 0.0), |s, (e, c)| {
            s + c * z.0.powu(e[0]) * z.1.powu(e[1]) * wb1.powu(e[2]) * wb2.powu(e[3])
        })
    }

    /// Upper bound for `|grad_z R(z, w)|` over `|z_i| <= zmax[i]`, `|w_i| <= wmax[i]`.
    pub fn z_gradient_bound(&self, zmax: [f64; 2], wmax: [f64; 2]) -> f64 {
        let mut g = [0.0f64; 2];
        for (e, c) in &self.numeric {
            let rest = c.norm() * wmax[0].powi(e[2] as i32) * wmax[1].powi(e[3] as i32);
            if e[0] > 0 {
                g[0] += rest * e[0] as f64 * zmax[0].powi(e[0] as i32 - 1) * zmax[1].powi(e[1] as i32);
            }
            if e[1] > 0 {
                g[1] += rest * e[1] as f64 * zmax[0].powi(e[0] as i32) * zmax[1].powi(e[1] as i32 - 1);
            }
        }
        (g[0] * g[0] + g[1] * g[1]).sqrt()
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(e, c)| term_to_json(*e, c)).collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<Self> {
        let parsed = terms.iter().map(term_from_json).collect::<Result<Vec<_>>>()?;
        Ok(PolarizedKernel::from_terms(parsed))
    }
}

impl Serialize for PolarizedKernel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolarizedKernel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        PolarizedKernel::from_json_terms(&terms).map_err(serde::de::Error::custom)
    }
}

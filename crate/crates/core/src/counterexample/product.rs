use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gfun::eval_g_full;
use super::packing::Packing;
use super::params::epsilon;
use crate::boundary::DomainModel;
use crate::error::{Error, Result};
use crate::point::C2;

/// Denominators below this make the product singular.
pub const PRODUCT_DENOMINATOR_FLOOR: f64 = 1e-12;

/// One factor `f_{n_k} / (1 - (1 - eps_{n_k}) g_k)` of the product.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Stage {
    pub n: u64,
    pub packing: Packing,
    /// Fitted `A_k` in `max |g_k| <= 1 + A_k / n_k`.
    pub a_fit: f64,
}

impl Stage {
    /// `(1 - eps)(1 + A / n) < 1`, which keeps the denominator away from 0.
    pub fn precondition_holds(&self) -> bool {
        (1.0 - epsilon(self.n)) * (1.0 + self.a_fit / self.n as f64) < 1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductValue {
    pub value: Complex64,
    pub factor_moduli: Vec<f64>,
}

/// `(1 - eps - g) / (1 - (1 - eps) g)`.
pub fn product_factor(g: Complex64, n: u64) -> Option<Complex64> {
    let e = epsilon(n);
    let den = 1.0 - (1.0 - e) * g;
    (den.norm() >= PRODUCT_DENOMINATOR_FLOOR).then(|| (1.0 - e - g) / den)
}

/// Finite product over the configured stages.
pub fn eval_f_product(domain: &DomainModel, stages: &[Stage], z: C2) -> Result<ProductValue> {
    let mut value = Complex64::new(1.0, 0.0);
    let mut factor_moduli = Vec::with_capacity(stages.len());
    for (k, st) in stages.iter().enumerate() {
        let g = eval_g_full(domain, &st.packing, st.n, z)?;
        let f = product_factor(g, st.n)
            .ok_or_else(|| Error::Singular(format!("product denominator vanishes at {z} in stage {k}")))?;
        factor_moduli.push(f.norm());
        value *= f;
    }
    Ok(ProductValue { value, factor_moduli })
}

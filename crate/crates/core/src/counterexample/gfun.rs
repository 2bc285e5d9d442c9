use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::packing::Packing;
use super::params::epsilon;
use crate::boundary::DomainModel;
use crate::error::{Error, Result};
use crate::point::C2;

/// `g_{n,r}(z)` split into an exactly summed part and a bound on the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub exact_terms: usize,
    /// Discarded terms per shell `k = floor(|R| / r^tau)`, from `truncation` up.
    pub shell_counts: Vec<(u64, usize)>,
}

/// `(r^tau / (R - r^tau))^{2n}`.
pub fn term(r_val: Complex64, rt: f64, n: u64) -> Result<Complex64> {
    let den = r_val - rt;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("pole of g: R = r^tau = {rt:e}")));
    }
    Ok(pow_u(Complex64::new(rt, 0.0) / den, 2 * n))
}

pub(crate) fn pow_u(mut b: Complex64, mut e: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Modulus bound for a term whose `R` lies in shell `k >= 2`.
///
/// With `Re R <= 0` one has `|R - r^tau|^2 >= (1 + k^2) r^{2 tau}`, otherwise
/// only `|R - r^tau| >= (k - 1) r^tau`.
pub fn shell_bound(k: u64, n: u64, re_nonpositive: bool) -> f64 {
    let k = k as f64;
    if re_nonpositive {
        (1.0 + k * k).powf(-(n as f64))
    } else {
        (k - 1.0).powf(-2.0 * n as f64)
    }
}

/// Sums the terms with `|R(z, zeta_j)| <= truncation r^tau` exactly and bounds
/// the rest shell by shell.
pub fn eval_g(domain: &DomainModel, packing: &Packing, n: u64, z: C2, truncation: f64) -> Result<GValue> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if !(truncation >= 2.0) {
        return Err(Error::InvalidArgument(format!("truncation must be at least 2, got {truncation}")));
    }
    let rt = packing.r_tau();
    let mut value = Complex64::new(0.0, 0.0);
    let mut exact_terms = 0;
    let mut shells: std::collections::BTreeMap<(u64, bool), usize> = Default::default();
    for (j, c) in packing.centers.iter().enumerate() {
        let rv = domain.r(z, *c);
        if rv.norm() <= truncation * rt {
            value += term(rv, rt, n).map_err(|_| Error::Singular(format!("pole of g at {z} from centre {j}")))?;
            exact_terms += 1;
        } else {
            let k = (rv.norm() / rt).floor() as u64;
            *shells.entry((k, rv.re <= 0.0)).or_default() += 1;
        }
    }
    let tail_bound = shells.iter().map(|((k, neg), c)| *c as f64 * shell_bound(*k, n, *neg)).sum();
    let mut shell_counts: Vec<(u64, usize)> = Vec::new();
    for ((k, _), c) in shells {
        match shell_counts.last_mut() {
            Some(last) if last.0 == k => last.1 += c,
            _ => shell_counts.push((k, c)),
        }
    }
    Ok(GValue {
        value,
        tail_bound,
        exact_terms,
        shell_counts,
    })
}

/// `g_{n,r}(z)` summed over every centre.
pub fn eval_g_full(domain: &DomainModel, packing: &Packing, n: u64, z: C2) -> Result<Complex64> {
    let rt = packing.r_tau();
    packing
        .centers
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |s, c| Ok(s + term(domain.r(z, *c), rt, n)?))
}

/// `f_n = 1 - eps_n - g_{n,r}`.
pub fn eval_f_n(domain: &DomainModel, packing: &Packing, n: u64, z: C2) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    Ok(1.0 - epsilon(n) - eval_g_full(domain, packing, n, z)?)
}

/// Fit of `max |g| <= 1 + A / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GBoundFit {
    pub ns: Vec<u64>,
    pub max_abs_g: Vec<f64>,
    /// Smallest `A` with `max |g| <= 1 + A / n` at every `n`.
    pub a: f64,
    /// Minus the log-log slope of `max |g| - 1` against `n`; `None` when some
    /// excess is not positive.
    pub decay_exponent: Option<f64>,
}

pub fn fit_g_bound(ns: &[u64], max_abs_g: &[f64]) -> GBoundFit {
    let a = ns
        .iter()
        .zip(max_abs_g)
        .map(|(n, m)| (m - 1.0) * *n as f64)
        .fold(0.0, f64::max);
    let pos = max_abs_g.iter().all(|m| *m > 1.0);
    let decay_exponent = (pos && ns.len() >= 2).then(|| {
        let xs: Vec<f64> = ns.iter().map(|n| (*n as f64).ln()).collect();
        let ys: Vec<f64> = max_abs_g.iter().map(|m| (m - 1.0).ln()).collect();
        -slope(&xs, &ys)
    });
    GBoundFit {
        ns: ns.to_vec(),
        max_abs_g: max_abs_g.to_vec(),
        a,
        decay_exponent,
    }
}

/// Least-squares slope.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

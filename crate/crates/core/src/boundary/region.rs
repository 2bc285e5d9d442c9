use serde::{Deserialize, Serialize};

use super::domain::DomainModel;
use super::geometry::{lambda_theta_from, PointGeometry};
use crate::error::{Error, Result};
use crate::point::C2;

/// Nonincreasing broadening factor `h: (0, 1] -> [1, inf)` with
/// `h(x) -> inf` as `x -> 0+`. `Unit` (constant 1) is the degenerate control.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HFunction {
    Unit,
    /// `1 + log(1 + log(1/x))`
    #[default]
    LogLog,
    /// `(1 + log(1/x))^sigma`
    PowerLog { sigma: f64 },
    /// `x^(-sigma)`
    Power { sigma: f64 },
}

impl HFunction {
    pub fn eval(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= 0.0 {
            return match self {
                HFunction::Unit => 1.0,
                _ => f64::INFINITY,
            };
        }
        let l = (1.0 / x).ln().max(0.0);
        let v = match *self {
            HFunction::Unit => 1.0,
            HFunction::LogLog => 1.0 + (1.0 + l).ln(),
            HFunction::PowerLog { sigma } => (1.0 + l).powf(sigma),
            HFunction::Power { sigma } => x.min(1.0).powf(-sigma),
        };
        v.max(1.0)
    }

    /// Parameter sanity: `sigma > 0` for the parametric families.
    pub fn validate(&self) -> Result<()> {
        match *self {
            HFunction::PowerLog { sigma } | HFunction::Power { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidArgument(format!("h-function sigma must be positive, got {sigma}")))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            HFunction::Unit => "unit".into(),
            HFunction::LogLog => "loglog".into(),
            HFunction::PowerLog { sigma } => format!("powerlog({sigma})"),
            HFunction::Power { sigma } => format!("power({sigma})"),
        }
    }
}

/// Which of the three region families to test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RegionSpec {
    /// `|pi(z) - w| < alpha D` and `|R(pi(z), w)| < Lambda^{alpha D}(w)`.
    Alpha { alpha: f64 },
    /// `|z - w| < D` and `|R(pi(z), w)| < Lambda^D(w)`.
    Comparable,
    /// `|z - w| < h1(delta_n) D` and `|R(pi(z), w)| < h2(delta_n) Lambda^D(w)`.
    Broadened { h1: HFunction, h2: HFunction },
}

impl Default for RegionSpec {
    fn default() -> Self {
        RegionSpec::Broadened {
            h1: HFunction::LogLog,
            h2: HFunction::LogLog,
        }
    }
}

impl RegionSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            RegionSpec::Alpha { alpha } if !(*alpha > 0.0 && alpha.is_finite()) => {
                Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")))
            }
            RegionSpec::Broadened { h1, h2 } => {
                h1.validate()?;
                h2.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            RegionSpec::Alpha { alpha } => format!("alpha({alpha})"),
            RegionSpec::Comparable => "comparable".into(),
            RegionSpec::Broadened { h1, h2 } => format!("broadened({},{})", h1.label(), h2.label()),
        }
    }
}

/// Both inequalities of a region test with their two sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub lhs1: f64,
    pub rhs1: f64,
    pub lhs2: f64,
    pub rhs2: f64,
    pub cond1: bool,
    pub cond2: bool,
    pub inside: bool,
}

impl DomainModel {
    pub fn region_contains(&self, spec: &RegionSpec, base: C2, z: C2) -> Result<(PointGeometry, RegionVerdict)> {
        let g = self.geometry(z)?;
        let v = self.region_verdict(spec, base, &g)?;
        Ok((g, v))
    }

    /// Region test with precomputed geometry of `z`.
    pub fn region_verdict(&self, spec: &RegionSpec, base: C2, g: &PointGeometry) -> Result<RegionVerdict> {
        let base_lambdas = self.lambdas(base)?;
        Ok(region_verdict_with(self, spec, base, &base_lambdas, g))
    }
}

pub(crate) fn region_verdict_with(
    domain: &DomainModel,
    spec: &RegionSpec,
    base: C2,
    base_lambdas: &[f64],
    g: &PointGeometry,
) -> RegionVerdict {
    let r = domain.r(g.pi_z, base).norm();
    let (lhs1, rhs1, rhs2) = match *spec {
        RegionSpec::Alpha { alpha } => {
            let theta = alpha * g.d;
            (g.pi_z.dist(base), theta, lambda_theta_from(base_lambdas, theta))
        }
        RegionSpec::Comparable => (g.z.dist(base), g.d, lambda_theta_from(base_lambdas, g.d)),
        RegionSpec::Broadened { h1, h2 } => (
            g.z.dist(base),
            h1.eval(g.delta_n) * g.d,
            h2.eval(g.delta_n) * lambda_theta_from(base_lambdas, g.d),
        ),
    };
    let cond1 = lhs1 < rhs1;
    let cond2 = r < rhs2;
    RegionVerdict {
        lhs1,
        rhs1,
        lhs2: r,
        rhs2,
        cond1,
        cond2,
        inside: cond1 && cond2,
    }
}

use nalgebra::{Matrix5, Vector5};
use serde::{Deserialize, Serialize};

use super::domain::DomainModel;
use crate::error::{Error, Result};
use crate::point::C2;

pub const PROJECTION_MAX_ITER: usize = 100;
/// Points with `|rho(z)|` above this are outside the tubular neighbourhood.
pub const PROJECTION_RHO_CAP: f64 = 0.5;

/// Boundary data attached to a point near the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointGeometry {
    pub z: C2,
    pub pi_z: C2,
    pub delta: f64,
    pub delta_n: f64,
    pub tau_z: usize,
    /// `Lambda_2 .. Lambda_tau` at `pi_z`.
    pub lambdas: Vec<f64>,
    pub d: f64,
}

/// Result of the nearest-point solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub pi_z: C2,
    pub delta: f64,
    pub delta_n: f64,
    pub iterations: usize,
}

fn residual(domain: &DomainModel, z: [f64; 4], w: [f64; 4], s: f64) -> Vector5<f64> {
    let wc = C2::from_reals(w);
    let g = domain.real_gradient(wc);
    Vector5::new(
        w[0] + s * g[0] - z[0],
        w[1] + s * g[1] - z[1],
        w[2] + s * g[2] - z[2],
        w[3] + s * g[3] - z[3],
        domain.rho_at(wc),
    )
}

/// Euclidean nearest point on the boundary by damped Newton on
/// `w + s grad rho(w) = z`, `rho(w) = 0`.
pub fn project(domain: &DomainModel, z: C2) -> Result<Projection> {
    if !z.is_finite() {
        return Err(Error::OutsideChart(format!("non-finite point {z}")));
    }
    let r0 = domain.rho_at(z);
    if !(r0.abs() <= PROJECTION_RHO_CAP) {
        return Err(Error::OutsideChart(format!("{z} is outside the tubular neighbourhood (rho = {r0:.3e})")));
    }
    let zr = z.to_reals();
    let mut w = zr;
    let mut s = 0.0;
    let mut f = residual(domain, zr, w, s);
    let mut iterations = 0;
    let tol = 1e-15;
    while f.norm() > tol {
        if iterations == PROJECTION_MAX_ITER {
            return Err(Error::OutsideChart(format!(
                "projection of {z} did not converge (residual {:.3e})",
                f.norm()
            )));
        }
        iterations += 1;
        let wc = C2::from_reals(w);
        let g = domain.real_gradient(wc);
        let h = domain.real_hessian(wc);
        let mut j = Matrix5::zeros();
        for a in 0..4 {
            for b in 0..4 {
                j[(a, b)] = s * h[a][b] + if a == b { 1.0 } else { 0.0 };
            }
            j[(a, 4)] = g[a];
            j[(4, a)] = g[a];
        }
        let step = j
            .lu()
            .solve(&(-f))
            .ok_or_else(|| Error::Singular(format!("projection Jacobian singular near {z}")))?;
        let mut alpha = 1.0;
        let fnorm = f.norm();
        loop {
            let wn: [f64; 4] = std::array::from_fn(|a| w[a] + alpha * step[a]);
            let sn = s + alpha * step[4];
            let fnew = residual(domain, zr, wn, sn);
            if fnew.norm() < fnorm || alpha < 1e-6 {
                w = wn;
                s = sn;
                f = fnew;
                break;
            }
            alpha *= 0.5;
        }
        // Stagnation at rounding level counts as convergence.
        if (f.norm() - fnorm).abs() <= 1e-16 && f.norm() < 1e-12 {
            break;
        }
    }
    let pi_z = C2::from_reals(w);
    let res = domain.rho_complex(pi_z).norm();
    if !(res < crate::crgeom::ON_BOUNDARY_TOL) {
        return Err(Error::OutsideChart(format!("projection of {z} left the boundary (|rho| = {res:.2e})")));
    }
    let diff = z - pi_z;
    let nu = domain.unit_normal(pi_z)?;
    let delta = diff.norm();
    let delta_n = diff.hdot(nu).norm().min(delta);
    Ok(Projection {
        pi_z,
        delta,
        delta_n,
        iterations,
    })
}

/// `inf_k (delta / Lambda_k)^{1/k}` over `k = 2..` with zero `Lambda_k`
/// skipped. `lambdas[i]` is `Lambda_{i+2}`.
pub fn d_from_lambdas(delta: f64, lambdas: &[f64]) -> Option<f64> {
    lambdas
        .iter()
        .enumerate()
        .filter(|(_, l)| **l > 0.0)
        .map(|(i, l)| (delta / l).powf(1.0 / (i + 2) as f64))
        .reduce(f64::min)
}

/// `sum_{k=2}^{tau} theta^k Lambda_k`, with `lambdas[i] = Lambda_{i+2}`.
pub fn lambda_theta_from(lambdas: &[f64], theta: f64) -> f64 {
    lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| theta.powi(i as i32 + 2) * l)
        .sum()
}

impl DomainModel {
    pub fn project_to_boundary(&self, z: C2) -> Result<Projection> {
        project(self, z)
    }

    /// Projection, type, `Lambda_k(pi(z))` and `D(z)`.
    pub fn geometry(&self, z: C2) -> Result<PointGeometry> {
        let p = project(self, z)?;
        let tau_z = self.point_type(p.pi_z)?.tau_z;
        let lambdas = self.lambdas(p.pi_z)?;
        let d = d_from_lambdas(p.delta, &lambdas).ok_or(Error::TypeExceedsKmax {
            point: p.pi_z,
            k_max: self.tau(),
        })?;
        Ok(PointGeometry {
            z,
            pi_z: p.pi_z,
            delta: p.delta,
            delta_n: p.delta_n,
            tau_z,
            lambdas,
            d,
        })
    }

    pub fn capital_d(&self, z: C2) -> Result<f64> {
        Ok(self.geometry(z)?.d)
    }

    pub fn lambda_theta(&self, w: C2, theta: f64) -> Result<f64> {
        Ok(lambda_theta_from(&self.lambdas(w)?, theta))
    }

    /// Membership of `omega` in the non-isotropic ball of radius `r` at `center`.
    pub fn ball_contains(&self, center: C2, r: f64, omega: C2) -> Result<bool> {
        if omega.dist(center) >= r {
            return Ok(false);
        }
        Ok(self.r(omega, center).norm() < self.lambda_theta(center, r)?)
    }
}

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::crgeom::{CommutatorTable, TypeReport, DEFAULT_K_MAX, DEFAULT_TYPE_TOL, ON_BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::point::C2;
use crate::symalg::{polarize, ConjPoly, NumPoly, PolarizedKernel, Var};

pub const PRESETS: [&str; 4] = ["sphere", "paper-quartic", "egg-m2", "egg-m3"];

/// Chart iterations allowed before a parameter point is declared outside
/// the validity box.
pub const CHART_MAX_ITER: usize = 25;

/// Parameter box of the chart around `(1, 0)`.
///
/// A parameter `(t, u_re, u_im)` is sent to the point `(1 + s + i t, u)` with
/// real `s` solved from `rho = 0`, i.e. the chart walks along the normal
/// line at the base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPatch {
    /// Half widths of the box in `t`, `Re u`, `Im u`.
    pub half_width: [f64; 3],
    /// Grid points per axis (odd, so the centre is included).
    pub grid: usize,
}

impl Default for BoundaryPatch {
    fn default() -> Self {
        BoundaryPatch {
            half_width: [0.2, 0.2, 0.2],
            grid: 5,
        }
    }
}

impl BoundaryPatch {
    pub fn validate(&self) -> Result<()> {
        if self.grid == 0 || self.grid.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("patch grid must be odd and positive, got {}", self.grid)));
        }
        if self.half_width.iter().any(|h| !(h.is_finite() && *h >= 0.0)) {
            return Err(Error::InvalidArgument("patch half widths must be finite and nonnegative".into()));
        }
        Ok(())
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        p.iter().zip(&self.half_width).all(|(x, h)| x.abs() <= *h * (1.0 + 1e-12))
    }

    /// Regular grid over the box, centre first.
    pub fn grid_params(&self) -> Vec<[f64; 3]> {
        let g = self.grid as i64;
        let half = g / 2;
        let axis = |i: usize| -> Vec<f64> {
            if half == 0 {
                return vec![0.0];
            }
            (-half..=half).map(|j| self.half_width[i] * j as f64 / half as f64).collect()
        };
        let (a, b, c) = (axis(0), axis(1), axis(2));
        let mut out = vec![[0.0; 3]];
        for x in &a {
            for y in &b {
                for z in &c {
                    if *x != 0.0 || *y != 0.0 || *z != 0.0 {
                        out.push([*x, *y, *z]);
                    }
                }
            }
        }
        out
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut f, mut r) = (inv, 0.0);
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// Chart parameters of [`DomainModel::sample_in`].
pub fn sample_params(patch: &BoundaryPatch, count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 3] = [rng.random(), rng.random(), rng.random()];
    let bases = [2u64, 3, 5];
    (0..count)
        .map(|i| {
            if i == 0 {
                return [0.0; 3];
            }
            std::array::from_fn(|a| {
                let u = (radical_inverse(i as u64, bases[a]) + shift[a]).fract();
                patch.half_width[a] * (2.0 * u - 1.0)
            })
        })
        .collect()
}

/// Defining polynomial, its polarization, the commutator table and the
/// chart around the base point `(1, 0)`.
#[derive(Clone)]
pub struct DomainModel {
    pub name: String,
    rho: ConjPoly,
    kernel: PolarizedKernel,
    table: CommutatorTable,
    patch: BoundaryPatch,
    tau_global: usize,
    type_tol: f64,
    rho_num: NumPoly,
    // d rho / dz_j and d rho / dzb_j
    dz: [NumPoly; 2],
    dzb: [NumPoly; 2],
    // d^2 rho / dz_j dz_k and d^2 rho / dz_j dzb_k
    dzz: [[NumPoly; 2]; 2],
    dzzb: [[NumPoly; 2]; 2],
    // d R / dz_j
    kernel_dz: [PolarizedKernel; 2],
}

impl std::fmt::Debug for DomainModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DomainModel")
            .field("name", &self.name)
            .field("rho", &self.rho)
            .field("tau_global", &self.tau_global)
            .finish()
    }
}

pub fn preset_rho(name: &str) -> Result<ConjPoly> {
    let v = ConjPoly::var;
    let z1zb1 = &v(Var::Z1) * &v(Var::Zb1);
    let z2zb2 = &v(Var::Z2) * &v(Var::Zb2);
    let one = ConjPoly::one();
    Ok(match name {
        "sphere" => &(&z1zb1 + &z2zb2) - &one,
        "paper-quartic" => &(&z1zb1 + &(&v(Var::Z2).pow(2) * &v(Var::Zb1).pow(2))) - &one,
        "egg-m2" => &(&z1zb1 + &z2zb2.pow(2)) - &one,
        "egg-m3" => &(&z1zb1 + &z2zb2.pow(3)) - &one,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown preset {other:?} (expected one of {PRESETS:?})"
            )))
        }
    })
}

impl DomainModel {
    /// A named preset with the default patch.
    pub fn preset(name: &str) -> Result<DomainModel> {
        Self::preset_with(name, BoundaryPatch::default(), DEFAULT_K_MAX)
    }

    pub fn preset_with(name: &str, patch: BoundaryPatch, k_max: usize) -> Result<DomainModel> {
        Self::new(name, preset_rho(name)?, patch, k_max, DEFAULT_TYPE_TOL)
    }

    pub fn new(name: &str, rho: ConjPoly, patch: BoundaryPatch, k_max: usize, type_tol: f64) -> Result<DomainModel> {
        patch.validate()?;
        let base = C2::real(1.0, 0.0);
        if rho.eval(base).norm() > 1e-14 {
            return Err(Error::InvalidDomain("rho(1,0) must vanish".into()));
        }
        let d = |p: &ConjPoly, v: Var| p.derivative(v);
        let (r1, r2) = (d(&rho, Var::Z1), d(&rho, Var::Z2));
        let (rb1, rb2) = (d(&rho, Var::Zb1), d(&rho, Var::Zb2));
        if r1.eval(base).norm() == 0.0 || rb1.eval(base).norm() == 0.0 {
            return Err(Error::InvalidDomain("d rho/dz1 and d rho/dzb1 must not vanish at (1,0)".into()));
        }
        let table = CommutatorTable::build(&rho, k_max)?;
        let zs = [&r1, &r2];
        let dzz = [0, 1].map(|j| [Var::Z1, Var::Z2].map(|v| d(zs[j], v).numeric()));
        let dzzb = [0, 1].map(|j| [Var::Zb1, Var::Zb2].map(|v| d(zs[j], v).numeric()));
        let kernel = polarize(&rho);
        let mut model = DomainModel {
            name: name.to_string(),
            kernel_dz: [kernel.derivative_z(0), kernel.derivative_z(1)],
            kernel,
            rho_num: rho.numeric(),
            dz: [r1.numeric(), r2.numeric()],
            dzb: [rb1.numeric(), rb2.numeric()],
            dzz,
            dzzb,
            rho,
            table,
            patch,
            tau_global: 0,
            type_tol,
        };
        model.tau_global = model.estimate_tau()?;
        Ok(model)
    }

    fn estimate_tau(&self) -> Result<usize> {
        let params = self.patch.grid_params();
        let types = par_map(&params, |p| self.chart(*p).and_then(|z| self.point_type(z)));
        let mut tau = 2;
        for t in types {
            tau = tau.max(t?.tau_z);
        }
        Ok(tau)
    }

    pub fn rho(&self) -> &ConjPoly {
        &self.rho
    }

    pub fn kernel(&self) -> &PolarizedKernel {
        &self.kernel
    }

    pub fn table(&self) -> &CommutatorTable {
        &self.table
    }

    pub fn patch(&self) -> &BoundaryPatch {
        &self.patch
    }

    pub fn base_point(&self) -> C2 {
        C2::real(1.0, 0.0)
    }

    /// Maximal type over the patch grid.
    pub fn tau(&self) -> usize {
        self.tau_global
    }

    pub fn type_tol(&self) -> f64 {
        self.type_tol
    }

    pub fn rho_at(&self, z: C2) -> f64 {
        self.rho_num.eval(z).re
    }

    pub fn rho_complex(&self, z: C2) -> Complex64 {
        self.rho_num.eval(z)
    }

    /// `(d rho/dz1, d rho/dz2)` at `z`.
    pub fn dz(&self, z: C2) -> [Complex64; 2] {
        [self.dz[0].eval(z), self.dz[1].eval(z)]
    }

    /// `(d rho/dzb1, d rho/dzb2)` at `z`.
    pub fn dzb(&self, z: C2) -> [Complex64; 2] {
        [self.dzb[0].eval(z), self.dzb[1].eval(z)]
    }

    /// Real gradient in coordinates `(x1, y1, x2, y2)`.
    pub fn real_gradient(&self, z: C2) -> [f64; 4] {
        let [a, b] = self.dz(z);
        [2.0 * a.re, -2.0 * a.im, 2.0 * b.re, -2.0 * b.im]
    }

    /// Real Hessian in coordinates `(x1, y1, x2, y2)`.
    pub fn real_hessian(&self, z: C2) -> [[f64; 4]; 4] {
        let mut h = [[0.0; 4]; 4];
        for j in 0..2 {
            for k in 0..2 {
                let a = self.dzz[k][j].eval(z); // rho_{z_k z_j}
                let b = self.dzzb[k][j].eval(z); // rho_{z_k zb_j}
                // derivatives of d rho/dx_k = 2 Re rho_{z_k}, d rho/dy_k = -2 Im rho_{z_k}
                // along x_j = d_zj + d_zbj and y_j = i (d_zj - d_zbj)
                let dxj = a + b;
                let dyj = Complex64::i() * (a - b);
                h[2 * j][2 * k] = 2.0 * dxj.re;
                h[2 * j][2 * k + 1] = -2.0 * dxj.im;
                h[2 * j + 1][2 * k] = 2.0 * dyj.re;
                h[2 * j + 1][2 * k + 1] = -2.0 * dyj.im;
            }
        }
        h
    }

    /// Unit complex normal `(rho_zb1, rho_zb2) / |.|` at a boundary point.
    pub fn unit_normal(&self, w: C2) -> Result<C2> {
        let [a, b] = self.dzb(w);
        let n = C2::new(a, b);
        let len = n.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::Singular(format!("vanishing gradient at {w}")));
        }
        Ok(n * (1.0 / len))
    }

    /// `R(z, w)`.
    pub fn r(&self, z: C2, w: C2) -> Complex64 {
        self.kernel.eval(z, w)
    }

    /// `(dR/dz1, dR/dz2)` at `(z, w)`.
    pub fn r_dz(&self, z: C2, w: C2) -> [Complex64; 2] {
        [self.kernel_dz[0].eval(z, w), self.kernel_dz[1].eval(z, w)]
    }

    /// Boundary point for the chart parameter `(t, u_re, u_im)`.
    pub fn chart(&self, p: [f64; 3]) -> Result<C2> {
        self.chart_in(&self.patch, p)
    }

    /// Chart restricted to another parameter box.
    pub fn chart_in(&self, patch: &BoundaryPatch, p: [f64; 3]) -> Result<C2> {
        if !patch.contains(p) {
            return Err(Error::OutsideChart(format!("parameter {p:?} outside the patch box")));
        }
        self.chart_unchecked(p)
    }

    pub(crate) fn chart_unchecked(&self, p: [f64; 3]) -> Result<C2> {
        let q = C2::new(Complex64::new(1.0, p[0]), Complex64::new(p[1], p[2]));
        let mut s = 0.0;
        for _ in 0..CHART_MAX_ITER {
            let z = C2::new(q.0 + s, q.1);
            let f = self.rho_at(z);
            let df = 2.0 * self.dz[0].eval(z).re;
            if f.abs() < 1e-15 {
                break;
            }
            if df == 0.0 || !df.is_finite() {
                return Err(Error::OutsideChart(format!("degenerate normal line at parameter {p:?}")));
            }
            s -= f / df;
        }
        let z = C2::new(q.0 + s, q.1);
        let res = self.rho_complex(z).norm();
        if !(res < ON_BOUNDARY_TOL) {
            return Err(Error::OutsideChart(format!(
                "chart solve did not converge at parameter {p:?} (|rho| = {res:.2e})"
            )));
        }
        Ok(z)
    }

    /// Seeded quasi-uniform boundary samples: the chart centre first, then a
    /// randomly shifted Halton sequence over the parameter box.
    pub fn sample_patch(&self, count: usize, seed: u64) -> Result<Vec<C2>> {
        self.sample_in(&self.patch, count, seed)
    }

    pub fn sample_in(&self, patch: &BoundaryPatch, count: usize, seed: u64) -> Result<Vec<C2>> {
        sample_params(patch, count, seed)
            .into_iter()
            .map(|p| self.chart_in(patch, p))
            .collect()
    }

    pub fn point_type(&self, z: C2) -> Result<TypeReport> {
        self.table.point_type(z, self.type_tol)
    }

    /// `[Lambda_2, ..., Lambda_tau]` at a boundary point.
    pub fn lambdas(&self, w: C2) -> Result<Vec<f64>> {
        let prof = self.table.lambda_profile_to(w, self.tau_global)?;
        Ok(prof[1..].to_vec())
    }
}

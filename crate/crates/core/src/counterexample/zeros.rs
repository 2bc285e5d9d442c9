use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gfun::term;
use super::packing::Packing;
use super::params::{epsilon, gamma};
use crate::boundary::{DomainModel, RegionSpec, RegionVerdict};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::point::C2;

const MIN_CONTOUR: usize = 32;
const MAX_CONTOUR: usize = 1 << 14;
const POLISH_MAX_ITER: usize = 60;
const LINE_MAX_ITER: usize = 40;

/// A certified zero of `f_n` on the complex normal line through a centre.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub center_index: usize,
    pub center: C2,
    pub n: u64,
    pub r: f64,
    pub r_tau: f64,
    pub w_nr: C2,
    /// Coordinate of `w_nr` along the unit complex normal at the centre.
    pub line_param: Complex64,
    pub winding_number: i64,
    pub contour_points: usize,
    /// The contour is centred at the polished zero rather than the seed.
    pub recentred: bool,
    pub distance_to_center: f64,
    /// `|pi(w_nr) - center|`.
    pub projection_residual: f64,
    pub delta: f64,
    /// `delta(w_nr) / r^tau`.
    pub c_empirical: f64,
    /// `|f_n(w_nr)|` bound: local residual plus the far-centre tail.
    pub f_abs: f64,
    pub tail_bound: f64,
    pub local_terms: usize,
}

/// Centres that can matter near one centre, plus shell counts of the rest.
#[derive(Clone, Debug)]
pub struct Neighbourhood {
    pub local: Vec<usize>,
    /// Largest `|w|` along the normal line covered by the far bounds.
    pub rho_cap: f64,
    far_shells: Vec<(u64, usize)>,
}

impl Neighbourhood {
    /// Bound for the sum of far terms on the disc `|w| <= rho_cap`.
    pub fn tail_bound(&self, n: u64) -> f64 {
        self.far_shells
            .iter()
            .map(|(k, c)| *c as f64 * (*k as f64 - 1.0).powf(-2.0 * n as f64))
            .sum()
    }
}

/// Precomputed neighbourhoods for zero finding on one packing.
pub struct ZeroFinder<'a> {
    domain: &'a DomainModel,
    packing: &'a Packing,
    truncation: f64,
    grad_bound: f64,
}

impl<'a> ZeroFinder<'a> {
    pub fn new(domain: &'a DomainModel, packing: &'a Packing, truncation: f64) -> ZeroFinder<'a> {
        let mut wmax = [0.0f64; 2];
        for c in &packing.centers {
            wmax[0] = wmax[0].max(c.0.norm());
            wmax[1] = wmax[1].max(c.1.norm());
        }
        // Contour discs are far below 1e-2 in size.
        let zmax = [wmax[0] + 1e-2, wmax[1] + 1e-2];
        ZeroFinder {
            domain,
            packing,
            truncation,
            grad_bound: domain.kernel().z_gradient_bound(zmax, wmax),
        }
    }

    pub fn neighbourhood(&self, j: usize) -> Result<Neighbourhood> {
        let zeta = self.packing.centers[j];
        let rt = self.packing.r_tau();
        let slope = normal_slope(self.domain, zeta)?;
        let rho_cap = 4.0 * rt / slope;
        let reach = self.grad_bound * rho_cap;
        let mut local = Vec::new();
        let mut shells = std::collections::BTreeMap::<u64, usize>::new();
        for (i, c) in self.packing.centers.iter().enumerate() {
            let lower = self.domain.r(zeta, *c).norm() - reach;
            if i == j || lower <= self.truncation * rt {
                local.push(i);
            } else {
                *shells.entry((lower / rt).floor() as u64).or_default() += 1;
            }
        }
        Ok(Neighbourhood {
            local,
            rho_cap,
            far_shells: shells.into_iter().collect(),
        })
    }

    pub fn find(&self, j: usize, n: u64) -> Result<ZeroRecord> {
        let nb = self.neighbourhood(j)?;
        self.find_with(j, n, &nb)
    }

    /// Zeros for several `n` at each listed centre, sharing neighbourhoods.
    pub fn find_many(&self, centers: &[usize], ns: &[u64]) -> Vec<Vec<Result<ZeroRecord>>> {
        par_map(centers, |&j| match self.neighbourhood(j) {
            Ok(nb) => ns.iter().map(|&n| self.find_with(j, n, &nb)).collect(),
            Err(_) => ns.iter().map(|&n| self.find(j, n)).collect(),
        })
    }

    pub fn find_with(&self, j: usize, n: u64, nb: &Neighbourhood) -> Result<ZeroRecord> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
        }
        let d = self.domain;
        let zeta = self.packing.centers[j];
        let rt = self.packing.r_tau();
        let eps = epsilon(n);
        let nu = d.unit_normal(zeta)?;
        let local: Vec<C2> = nb.local.iter().map(|&i| self.packing.centers[i]).collect();
        let line = |w: Complex64| zeta + nu.scale(w);
        let r_line = |w: Complex64| d.r(line(w), zeta);
        let dr_line = |w: Complex64| {
            let g = d.r_dz(line(w), zeta);
            g[0] * nu.0 + g[1] * nu.1
        };
        let f_local = |w: Complex64| -> Result<Complex64> {
            let z = line(w);
            local
                .iter()
                .try_fold(Complex64::new(1.0 - eps, 0.0), |s, c| Ok(s - term(d.r(z, *c), rt, n)?))
        };
        let no_zero = |reason: String| Error::NoCertifiedZero { center: zeta, reason };

        // Seed: the zero of the single-term function on the negative real R axis.
        let target = rt * (1.0 - (1.0 - eps).powf(-1.0 / (2.0 * n as f64)));
        let seed = solve_line(&r_line, &dr_line, Complex64::new(target, 0.0), Complex64::new(0.0, 0.0), 1e-3 * rt)
            .ok_or_else(|| no_zero(format!("Newton for the seed R = {target:e} diverged")))?;

        let radius = gamma(n) * rt;
        let tail = nb.tail_bound(n);
        // Winding number of f_n on the image of the R-circle of radius
        // gamma_n r^tau about `mid`, doubling the point count until stable.
        let wind = |mid: Complex64, start: Complex64| -> Result<(i64, usize)> {
            let mut prev = None;
            let mut stable = 0;
            let mut m = MIN_CONTOUR;
            loop {
                let mut w = start;
                let mut values = Vec::with_capacity(m);
                let mut min_f = f64::INFINITY;
                for k in 0..m {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    w = solve_line(&r_line, &dr_line, mid + Complex64::from_polar(radius, th), w, 1e-3 * radius)
                        .ok_or_else(|| no_zero(format!("contour point {k}/{m} did not converge")))?;
                    if w.norm() > nb.rho_cap {
                        return Err(no_zero(format!("contour leaves the neighbourhood disc ({:.3e})", nb.rho_cap)));
                    }
                    let f = f_local(w)?;
                    min_f = min_f.min(f.norm());
                    values.push(f);
                }
                if !(min_f > tail) {
                    return Err(no_zero(format!("far tail {tail:e} not dominated on the contour (min |f| = {min_f:e})")));
                }
                let total: f64 = (0..m).map(|k| (values[(k + 1) % m] / values[k]).arg()).sum();
                let wnum = (total / (2.0 * std::f64::consts::PI)).round() as i64;
                stable = if prev == Some(wnum) { stable + 1 } else { 0 };
                prev = Some(wnum);
                if stable >= 2 || m >= MAX_CONTOUR {
                    return Ok((wnum, m));
                }
                m *= 2;
            }
        };
        let (mut winding, mut m) = wind(Complex64::new(target, 0.0), seed)?;

        // Polish by damped Newton on the line.
        let mut w = seed;
        let mut f = f_local(w)?;
        for _ in 0..POLISH_MAX_ITER {
            if f.norm() < 1e-14 {
                break;
            }
            let z = line(w);
            let mut df = Complex64::new(0.0, 0.0);
            for c in &local {
                let rv = d.r(z, *c);
                let g = d.r_dz(z, *c);
                let dr = g[0] * nu.0 + g[1] * nu.1;
                df += 2.0 * n as f64 * term(rv, rt, n)? / (rv - rt) * dr;
            }
            if df.norm() == 0.0 {
                return Err(Error::Singular(format!("flat f_n at the zero near {zeta}")));
            }
            let step = f / df;
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-4 {
                let wn = w - step * alpha;
                if wn.norm() <= nb.rho_cap {
                    let fnew = f_local(wn)?;
                    if fnew.norm() < f.norm() {
                        w = wn;
                        f = fnew;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        // The neighbours can push the zero off the seed contour; certify the
        // polished zero on a contour of the same radius about it instead.
        let recentred = winding < 1;
        if recentred {
            (winding, m) = wind(r_line(w), w)?;
        }
        if winding < 1 {
            return Err(no_zero(format!("winding number {winding} on {m} contour points")));
        }
        let w_nr = line(w);
        let proj = d.project_to_boundary(w_nr)?;
        Ok(ZeroRecord {
            center_index: j,
            center: zeta,
            n,
            r: self.packing.r,
            r_tau: rt,
            w_nr,
            line_param: w,
            winding_number: winding,
            contour_points: m,
            recentred,
            distance_to_center: w_nr.dist(zeta),
            projection_residual: proj.pi_z.dist(zeta),
            delta: proj.delta,
            c_empirical: proj.delta / rt,
            f_abs: f.norm() + tail,
            tail_bound: tail,
            local_terms: local.len(),
        })
    }
}

/// `|dR(zeta + w nu, zeta)/dw|` at `w = 0`.
fn normal_slope(domain: &DomainModel, zeta: C2) -> Result<f64> {
    let nu = domain.unit_normal(zeta)?;
    let g = domain.r_dz(zeta, zeta);
    let s = (g[0] * nu.0 + g[1] * nu.1).norm();
    if !(s > 0.0) {
        return Err(Error::Singular(format!("R is flat along the normal at {zeta}")));
    }
    Ok(s)
}

fn solve_line<F, G>(r: &F, dr: &G, target: Complex64, mut w: Complex64, tol: f64) -> Option<Complex64>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    for _ in 0..LINE_MAX_ITER {
        let res = r(w) - target;
        if res.norm() <= tol {
            return Some(w);
        }
        let d = dr(w);
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        w -= res / d;
    }
    ((r(w) - target).norm() <= tol).then_some(w)
}

/// Zero near centre `j` of a single packing.
pub fn find_zero_near(domain: &DomainModel, packing: &Packing, j: usize, n: u64, truncation: f64) -> Result<ZeroRecord> {
    if j >= packing.len() {
        return Err(Error::InvalidArgument(format!("centre index {j} out of range")));
    }
    ZeroFinder::new(domain, packing, truncation).find(j, n)
}

/// Both region inequalities at `z = w_nr` with base `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroMembership {
    pub center_index: usize,
    pub n: u64,
    pub w: C2,
    pub verdict: RegionVerdict,
    pub delta: f64,
    pub delta_n: f64,
    pub d: f64,
    pub c_empirical: f64,
}

pub fn verify_zero_in_region(domain: &DomainModel, zero: &ZeroRecord, w: C2, spec: &RegionSpec) -> Result<ZeroMembership> {
    let (g, verdict) = domain.region_contains(spec, w, zero.w_nr)?;
    Ok(ZeroMembership {
        center_index: zero.center_index,
        n: zero.n,
        w,
        verdict,
        delta: g.delta,
        delta_n: g.delta_n,
        d: g.d,
        c_empirical: g.delta / zero.r_tau,
    })
}

/// `R` value at which the single-term function `1 - eps_n - (r^tau / (R - r^tau))^{2n}` vanishes on the negative axis.
pub fn single_term_zero_target(r_tau: f64, n: u64) -> f64 {
    r_tau * (1.0 - (1.0 - epsilon(n)).powf(-1.0 / (2.0 * n as f64)))
}

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gfun::{eval_g, fit_g_bound, term, GBoundFit};
use super::packing::{build_packing, covering_index, fit_covering, CoveringFit, Packing};
use super::params::{epsilon, epsilon_tail_bound, subsequence, CounterexampleParams};
use super::product::{eval_f_product, Stage};
use super::zeros::{ZeroFinder, ZeroRecord};
use crate::boundary::{lambda_theta_from, region_verdict_with, DomainModel, RegionSpec};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::point::C2;

/// Independent sub-seed for stream `tag` (splitmix64 finaliser).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome of one property suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub rs: Vec<f64>,
    pub centers: Vec<usize>,
    pub fits: Vec<CoveringFit>,
    /// Largest over smallest fitted `K`.
    pub k_ratio: f64,
    pub pass: bool,
}

/// Covering fits at several scales; passes with full coverage everywhere and
/// `K` stable within a factor 2.
pub fn covering_suite(domain: &DomainModel, params: &CounterexampleParams, seed: u64, rs: &[f64]) -> Result<CoveringReport> {
    let samples = domain.sample_in(&params.patch, params.samples, derive_seed(seed, 1))?;
    let mut centers = Vec::new();
    let mut fits = Vec::new();
    for &r in rs {
        let p = build_packing(domain, &params.patch, r, params.radius_rule, params.candidates, derive_seed(seed, 2))?;
        centers.push(p.len());
        fits.push(fit_covering(domain, &p, &samples, params.max_k));
    }
    let ks: Vec<f64> = fits.iter().map(|f| f.k).collect();
    let k_ratio = ks.iter().cloned().fold(0.0, f64::max) / ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let full = fits.iter().all(|f| f.covered == f.samples);
    Ok(CoveringReport {
        rs: rs.to_vec(),
        centers,
        fits,
        k_ratio,
        pass: full && k_ratio <= 2.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GBoundReport {
    pub r: f64,
    pub points: usize,
    pub fit: GBoundFit,
    pub max_tail_bound: f64,
    pub tail_checks: usize,
    pub tail_violations: usize,
    pub pass: bool,
}

/// `max |g|` over boundary samples and the centres themselves, for each `n`.
fn max_abs_g(domain: &DomainModel, packing: &Packing, points: &[C2], ns: &[u64], truncation: f64) -> Result<(Vec<f64>, f64)> {
    let rt = packing.r_tau();
    let per_point = par_map(points, |z| -> Result<(Vec<f64>, f64)> {
        let near: Vec<Complex64> = packing
            .centers
            .iter()
            .map(|c| domain.r(*z, *c))
            .filter(|v| v.norm() <= truncation * rt)
            .collect();
        let mut out = Vec::with_capacity(ns.len());
        let mut tail: f64 = 0.0;
        for &n in ns {
            let v = near.iter().try_fold(Complex64::new(0.0, 0.0), |s, r| term(*r, rt, n).map(|t| s + t))?;
            out.push(v.norm());
            tail = tail.max(packing.len() as f64 * super::gfun::shell_bound(truncation.floor() as u64, n, false));
        }
        Ok((out, tail))
    });
    let mut best = vec![0.0f64; ns.len()];
    let mut tail: f64 = 0.0;
    for r in per_point {
        let (v, t) = r?;
        for (b, x) in best.iter_mut().zip(v) {
            *b = b.max(x);
        }
        tail = tail.max(t);
    }
    Ok((best, tail))
}

/// Fits `max |g| <= 1 + A / n` and checks the tail bound of `eval_g` against
/// the change from doubling the truncation radius.
pub fn g_bound_suite(
    domain: &DomainModel,
    packing: &Packing,
    params: &CounterexampleParams,
    seed: u64,
    ns: &[u64],
) -> Result<GBoundReport> {
    let mut points = domain.sample_in(&params.patch, params.samples, derive_seed(seed, 3))?;
    points.extend_from_slice(&packing.centers);
    let (maxes, max_tail_bound) = max_abs_g(domain, packing, &points, ns, params.truncation)?;
    let fit = fit_g_bound(ns, &maxes);
    let checks: Vec<&C2> = points.iter().step_by((points.len() / 200).max(1)).collect();
    let violations: Vec<Result<bool>> = par_map(&checks, |z| {
        let mut bad = false;
        for &n in ns {
            let a = eval_g(domain, packing, n, **z, params.truncation)?;
            let b = eval_g(domain, packing, n, **z, 2.0 * params.truncation)?;
            bad |= (a.value - b.value).norm() > a.tail_bound + 1e-14;
        }
        Ok(bad)
    });
    let tail_violations = violations.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|b| **b).count();
    let pass = fit.decay_exponent.is_some_and(|e| (0.7..=1.3).contains(&e)) && tail_violations == 0;
    Ok(GBoundReport {
        r: packing.r,
        points: points.len(),
        fit,
        max_tail_bound,
        tail_checks: checks.len(),
        tail_violations,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSuiteReport {
    pub r: f64,
    pub ns: Vec<u64>,
    pub centers: usize,
    pub certified: usize,
    pub recentred: usize,
    pub failures: Vec<String>,
    pub max_f_abs: f64,
    /// Fraction of centres whose zero distance decreases strictly along `ns`.
    pub decreasing_fraction: f64,
    pub pass: bool,
}

const PROBE_CENTERS: usize = 64;

/// Zeros at every centre for each `n`.
pub fn zero_suite(domain: &DomainModel, packing: &Packing, ns: &[u64], truncation: f64) -> (ZeroSuiteReport, Vec<ZeroRecord>) {
    let idx: Vec<usize> = (0..packing.len()).collect();
    zero_suite_at(domain, packing, &idx, ns, truncation)
}

/// Zeros at the listed centres for each `n`.
pub fn zero_suite_at(
    domain: &DomainModel,
    packing: &Packing,
    idx: &[usize],
    ns: &[u64],
    truncation: f64,
) -> (ZeroSuiteReport, Vec<ZeroRecord>) {
    let finder = ZeroFinder::new(domain, packing, truncation);
    let res = finder.find_many(idx, ns);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut decreasing = 0;
    for (&j, row) in idx.iter().zip(res) {
        let mut dists = Vec::new();
        for (r, n) in row.into_iter().zip(ns) {
            match r {
                Ok(z) => {
                    dists.push(z.distance_to_center);
                    records.push(z);
                }
                Err(e) => failures.push(format!("centre {j}, n = {n}: {e}")),
            }
        }
        if dists.len() == ns.len() && dists.windows(2).all(|w| w[1] < w[0]) {
            decreasing += 1;
        }
    }
    let certified = records.len();
    let max_f_abs = records.iter().map(|z| z.f_abs).fold(0.0, f64::max);
    let decreasing_fraction = decreasing as f64 / idx.len().max(1) as f64;
    let pass = failures.is_empty()
        && records.iter().all(|z| z.winding_number >= 1)
        && max_f_abs < 1e-9
        && decreasing_fraction >= 0.9;
    let report = ZeroSuiteReport {
        r: packing.r,
        ns: ns.to_vec(),
        centers: idx.len(),
        certified,
        recentred: records.iter().filter(|z| z.recentred).count(),
        failures,
        max_f_abs,
        decreasing_fraction,
        pass,
    };
    (report, records)
}

/// Seeded boundary points of `V_r(zeta_j)` for covering constant `k`.
pub fn sample_vr(
    domain: &DomainModel,
    params: &CounterexampleParams,
    packing: &Packing,
    k: f64,
    j: usize,
    count: usize,
    seed: u64,
) -> Vec<C2> {
    let c = packing.centers[j];
    let e = packing.vr_radius(k);
    let lam = lambda_theta_from(&packing.center_lambdas[j], k * packing.r);
    let pc = [c.0.im, c.1.re, c.1.im];
    // |R(w, c)| grows linearly in the transverse parameter t, so only a thin
    // slab in t can meet the second condition.
    let slope = domain.dz(c)[0].norm().max(f64::MIN_POSITIVE);
    let half = [e.min(2.0 * lam / slope), e, e];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..50 * count {
        if out.len() == count {
            break;
        }
        let p: [f64; 3] = std::array::from_fn(|a| pc[a] + half[a] * (2.0 * rng.random::<f64>() - 1.0));
        let Ok(w) = domain.chart_in(&params.patch, p) else { continue };
        if w.dist(c) < e && domain.r(w, c).norm() < lam {
            out.push(w);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipSummary {
    pub tested: usize,
    pub passed: usize,
    pub cond1_failures: usize,
    pub cond2_failures: usize,
    /// Centres where fewer than the requested `w` were found in `V_r`.
    pub short_samples: usize,
    /// Smallest and largest `delta(w_nr) / r^tau`.
    pub c_min: f64,
    pub c_max: f64,
    /// Largest `|R(pi(z), w)| / rhs` over the tested pairs.
    pub worst_ratio2: f64,
    pub worst_ratio1: f64,
}

impl MembershipSummary {
    pub fn all_pass(&self) -> bool {
        self.tested > 0 && self.passed == self.tested
    }
}

/// Region membership of each zero for `w_per_center` points `w` of its
/// `V_r`. With `stop_early` the sweep ends at the first failing centre.
/// Per-sample `(cond1, cond2, ratio1, ratio2)`, whether the sample set came
/// up short, and the zero's empirical `C`.
type ZeroSweep = (Vec<(bool, bool, f64, f64)>, bool, f64);

pub fn membership_sweep(
    domain: &DomainModel,
    params: &CounterexampleParams,
    packing: &Packing,
    k: f64,
    zeros: &[ZeroRecord],
    seed: u64,
    stop_early: bool,
) -> Result<MembershipSummary> {
    let spec = RegionSpec::Broadened {
        h1: params.h1,
        h2: params.h2,
    };
    let chunk = if stop_early { 64 } else { zeros.len().max(1) };
    let mut s = MembershipSummary {
        tested: 0,
        passed: 0,
        cond1_failures: 0,
        cond2_failures: 0,
        short_samples: 0,
        c_min: f64::INFINITY,
        c_max: 0.0,
        worst_ratio2: 0.0,
        worst_ratio1: 0.0,
    };
    for block in zeros.chunks(chunk) {
        let rows = par_map(block, |z| -> Result<ZeroSweep> {
            let g = domain.geometry(z.w_nr)?;
            let ws = sample_vr(
                domain,
                params,
                packing,
                k,
                z.center_index,
                params.w_per_center,
                derive_seed(seed, z.center_index as u64),
            );
            let short = ws.len() < params.w_per_center;
            let mut out = Vec::with_capacity(ws.len());
            for w in ws {
                let lw = domain.lambdas(w)?;
                let v = region_verdict_with(domain, &spec, w, &lw, &g);
                out.push((v.cond1, v.cond2, v.lhs1 / v.rhs1, v.lhs2 / v.rhs2));
            }
            Ok((out, short, g.delta / z.r_tau))
        });
        let mut failed = false;
        for row in rows {
            let (vs, short, c) = row?;
            s.short_samples += short as usize;
            s.c_min = s.c_min.min(c);
            s.c_max = s.c_max.max(c);
            for (c1, c2, q1, q2) in vs {
                s.tested += 1;
                s.passed += (c1 && c2) as usize;
                s.cond1_failures += !c1 as usize;
                s.cond2_failures += !c2 as usize;
                s.worst_ratio1 = s.worst_ratio1.max(q1);
                s.worst_ratio2 = s.worst_ratio2.max(q2);
                failed |= !(c1 && c2);
            }
        }
        if stop_early && failed {
            break;
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub index: usize,
    pub n: u64,
    pub epsilon: f64,
    pub r: f64,
    pub halvings: usize,
    pub centers: usize,
    pub rejections: usize,
    pub covering: CoveringFit,
    pub a_fit: f64,
    pub precondition: bool,
    pub zeros: ZeroSuiteReport,
    pub membership: MembershipSummary,
    /// Scales tried before settling, with their membership pass rates.
    pub attempts: Vec<(f64, f64)>,
    pub membership_pass: bool,
}

/// Packing, covering fit, zeros and region check for stage `index`, halving
/// `r` from `r0` until every tested zero lies in its regions. When no scale
/// passes, the scale with the best pass rate is kept.
pub fn build_stage(
    domain: &DomainModel,
    params: &CounterexampleParams,
    index: usize,
    n: u64,
    seed: u64,
) -> Result<(Stage, StageReport, Vec<ZeroRecord>)> {
    let samples = domain.sample_in(&params.patch, params.samples, derive_seed(seed, 10 + index as u64))?;
    let mseed = derive_seed(seed, 30 + index as u64);
    let pseed = derive_seed(seed, 20 + index as u64);
    let mut attempts: Vec<(f64, f64)> = Vec::new();
    let mut best = (f64::NEG_INFINITY, params.r0, 0);
    let mut r = params.r0;
    for h in 0..=params.max_halvings {
        let packing = build_packing(domain, &params.patch, r, params.radius_rule, params.candidates, pseed)?;
        let covering = fit_covering(domain, &packing, &samples, params.max_k);
        // Probe a prefix of the centres before paying for all of them.
        let probe: Vec<usize> = (0..packing.len().min(PROBE_CENTERS)).collect();
        let (zr, zeros) = zero_suite_at(domain, &packing, &probe, &[n], params.truncation);
        let quick = membership_sweep(domain, params, &packing, covering.k, &zeros, mseed, false)?;
        let mut frac = pass_rate(&quick, zr.failures.len());
        if frac == 1.0 {
            let (stage, report, zeros) = finish_stage(domain, params, index, n, r, h, packing, covering, &samples, mseed, &attempts)?;
            if report.membership_pass {
                return Ok((stage, report, zeros));
            }
            frac = pass_rate(&report.membership, report.zeros.failures.len());
        }
        attempts.push((r, frac));
        if frac > best.0 {
            best = (frac, r, h);
        }
        r *= 0.5;
    }
    let (_, r, h) = best;
    let packing = build_packing(domain, &params.patch, r, params.radius_rule, params.candidates, pseed)?;
    let covering = fit_covering(domain, &packing, &samples, params.max_k);
    finish_stage(domain, params, index, n, r, h, packing, covering, &samples, mseed, &attempts)
}

fn pass_rate(m: &MembershipSummary, zero_failures: usize) -> f64 {
    m.passed as f64 / (m.tested + zero_failures).max(1) as f64
}

#[allow(clippy::too_many_arguments)]
fn finish_stage(
    domain: &DomainModel,
    params: &CounterexampleParams,
    index: usize,
    n: u64,
    r: f64,
    halvings: usize,
    mut packing: Packing,
    covering: CoveringFit,
    samples: &[C2],
    mseed: u64,
    attempts: &[(f64, f64)],
) -> Result<(Stage, StageReport, Vec<ZeroRecord>)> {
    let (zr, zeros) = zero_suite(domain, &packing, &[n], params.truncation);
    let membership = membership_sweep(domain, params, &packing, covering.k, &zeros, mseed, false)?;
    let ok = zr.failures.is_empty() && membership.all_pass();
    let mut attempts = attempts.to_vec();
    attempts.push((r, pass_rate(&membership, zr.failures.len())));
    let (maxes, _) = max_abs_g(domain, &packing, &samples_with_centers(samples, &packing), &[n], params.truncation)?;
    let a_fit = ((maxes[0] - 1.0) * n as f64).max(0.0);
    packing.k = Some(covering.k);
    let stage = Stage { n, packing, a_fit };
    let report = StageReport {
        index,
        n,
        epsilon: epsilon(n),
        r,
        halvings,
        centers: stage.packing.len(),
        rejections: stage.packing.rejections.len(),
        covering,
        a_fit,
        precondition: stage.precondition_holds(),
        membership_pass: ok,
        zeros: zr,
        membership,
        attempts,
    };
    Ok((stage, report, zeros))
}

fn samples_with_centers(samples: &[C2], packing: &Packing) -> Vec<C2> {
    let mut v = samples.to_vec();
    v.extend_from_slice(&packing.centers);
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductReport {
    pub samples: usize,
    pub singular: usize,
    /// `max |f|` of the products over the first `k` stages, `k = 1..`.
    pub prefix_max: Vec<f64>,
    pub preconditions: Vec<bool>,
    pub pass: bool,
}

/// `|f|` at interior points pushed in from boundary samples.
pub fn product_suite(domain: &DomainModel, params: &CounterexampleParams, stages: &[Stage], seed: u64) -> Result<ProductReport> {
    let base = domain.sample_in(&params.patch, params.samples, derive_seed(seed, 4))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 5));
    let mut pts = Vec::with_capacity(base.len());
    for b in base {
        let depth = 10f64.powf(-rng.random_range(2.0..8.0));
        pts.push(b - domain.unit_normal(b)?.scale(Complex64::new(depth, 0.0)));
    }
    let vals = par_map(&pts, |z| eval_f_product(domain, stages, *z));
    let mut singular = 0;
    let mut prefix_max = vec![0.0f64; stages.len()];
    for v in vals {
        match v {
            Ok(p) => {
                let mut acc = 1.0;
                for (k, m) in p.factor_moduli.iter().enumerate() {
                    acc *= m;
                    prefix_max[k] = prefix_max[k].max(acc);
                }
            }
            Err(Error::Singular(_)) => singular += 1,
            Err(e) => return Err(e),
        }
    }
    let preconditions: Vec<bool> = stages.iter().map(|s| s.precondition_holds()).collect();
    Ok(ProductReport {
        samples: pts.len(),
        singular,
        pass: singular == 0 && preconditions.iter().all(|b| *b) && prefix_max.iter().all(|m| m.is_finite()),
        prefix_max,
        preconditions,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: C2,
    pub delta: f64,
    pub abs_f: f64,
    /// Stage and centre of the zero, for low witnesses.
    pub stage: Option<usize>,
    pub center_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationRow {
    pub base_index: usize,
    pub base: C2,
    pub scale: f64,
    pub low: Option<Witness>,
    pub high: Option<Witness>,
    /// Control: `min |f|` and `max |f|` on the normal ray with `h = 1`.
    pub ray_min_abs_f: f64,
    pub ray_max_abs_f: f64,
}

impl OscillationRow {
    pub fn pass(&self) -> bool {
        self.low.is_some() && self.high.is_some()
    }
}

/// Low and high witnesses inside the broadened region at each base point
/// and scale.
pub fn oscillation_experiment(
    domain: &DomainModel,
    params: &CounterexampleParams,
    stages: &[Stage],
    zeros: &[Vec<ZeroRecord>],
    bases: &[C2],
) -> Result<Vec<OscillationRow>> {
    let spec = RegionSpec::Broadened {
        h1: params.h1,
        h2: params.h2,
    };
    let control = RegionSpec::Broadened {
        h1: crate::boundary::HFunction::Unit,
        h2: crate::boundary::HFunction::Unit,
    };
    let mut all: Vec<(usize, &ZeroRecord)> = Vec::new();
    for (k, zs) in zeros.iter().enumerate() {
        all.extend(zs.iter().map(|z| (k, z)));
    }
    let idx: Vec<usize> = (0..bases.len()).collect();
    let rows = par_map(&idx, |&b| -> Result<Vec<OscillationRow>> {
        let base = bases[b];
        let lb = domain.lambdas(base)?;
        let nu = domain.unit_normal(base)?;
        let mut near: Vec<&(usize, &ZeroRecord)> = all.iter().collect();
        near.sort_by(|x, y| x.1.center.dist(base).total_cmp(&y.1.center.dist(base)));
        near.truncate(32);
        let mut out = Vec::new();
        for &s in &params.scales {
            let mut low = None;
            for (k, z) in near.iter().map(|p| (p.0, p.1)) {
                if z.delta > s {
                    continue;
                }
                let g = domain.geometry(z.w_nr)?;
                if !region_verdict_with(domain, &spec, base, &lb, &g).inside {
                    continue;
                }
                let f = eval_f_product(domain, stages, z.w_nr)?.value.norm();
                if f < params.low_threshold {
                    low = Some(Witness {
                        z: z.w_nr,
                        delta: g.delta,
                        abs_f: f,
                        stage: Some(k),
                        center_index: Some(z.center_index),
                    });
                    break;
                }
            }
            let mut high = None;
            let mut ray_min = f64::INFINITY;
            let mut ray_max: f64 = 0.0;
            for i in 0..10 {
                let t = s * 0.5f64.powi(i);
                let z = base - nu.scale(Complex64::new(t, 0.0));
                let g = domain.geometry(z)?;
                if g.delta > s {
                    continue;
                }
                let f = eval_f_product(domain, stages, z)?.value.norm();
                if region_verdict_with(domain, &control, base, &lb, &g).inside {
                    ray_min = ray_min.min(f);
                    ray_max = ray_max.max(f);
                }
                if high.is_none() && f > params.high_threshold && region_verdict_with(domain, &spec, base, &lb, &g).inside {
                    high = Some(Witness {
                        z,
                        delta: g.delta,
                        abs_f: f,
                        stage: None,
                        center_index: None,
                    });
                }
            }
            out.push(OscillationRow {
                base_index: b,
                base,
                scale: s,
                low,
                high,
                ray_min_abs_f: ray_min,
                ray_max_abs_f: ray_max,
            });
        }
        Ok(out)
    });
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageCenters {
    pub index: usize,
    pub centers: Vec<C2>,
}

/// Everything a run produces; a function of the preset, parameters and seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub preset: String,
    pub seed: u64,
    pub tau: usize,
    pub params: CounterexampleParams,
    pub subsequence: Vec<u64>,
    pub epsilon_tail_bound: f64,
    pub covering: CoveringReport,
    pub g_bound: GBoundReport,
    pub zero_suite: ZeroSuiteReport,
    pub stages: Vec<StageReport>,
    pub stage_centers: Vec<StageCenters>,
    pub stage_zeros: Vec<Vec<ZeroRecord>>,
    pub product: ProductReport,
    pub bases: Vec<C2>,
    pub oscillation: Vec<OscillationRow>,
    pub suites: Vec<SuiteResult>,
}

impl RunManifest {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.suites.iter().filter(|s| !s.pass).map(|s| s.name.as_str()).collect()
    }
}

/// Extra records kept out of the manifest.
#[derive(Clone, Debug, Default)]
pub struct RunArtifacts {
    pub zero_suite_records: Vec<ZeroRecord>,
}

/// The full pipeline: covering, `g` bound and zero suites at `r0`, then the
/// stages, the product check and the oscillation experiment.
pub fn run_counterexample(
    domain: &DomainModel,
    params: &CounterexampleParams,
    seed: u64,
) -> Result<(RunManifest, RunArtifacts)> {
    params.validate()?;
    let covering = covering_suite(domain, params, seed, &[params.r0, params.r0 / 2.0])?;
    let probe = build_packing(domain, &params.patch, params.r0, params.radius_rule, params.candidates, derive_seed(seed, 2))?;
    let g_bound = g_bound_suite(domain, &probe, params, seed, &[8, 16, 32, 64])?;
    let (zero_report, zero_records) = zero_suite(domain, &probe, &[16, 32, 64], params.truncation);

    let ns = subsequence(params.stages);
    let mut stages = Vec::new();
    let mut reports = Vec::new();
    let mut stage_zeros = Vec::new();
    for (k, &n) in ns.iter().enumerate() {
        let (st, rep, zs) = build_stage(domain, params, k, n, seed)?;
        stages.push(st);
        reports.push(rep);
        stage_zeros.push(zs);
    }
    let product = product_suite(domain, params, &stages, seed)?;
    let bases = domain.sample_in(&params.patch, params.base_points, derive_seed(seed, 6))?;
    let oscillation = oscillation_experiment(domain, params, &stages, &stage_zeros, &bases)?;

    let fmt_k: Vec<String> = covering.fits.iter().map(|f| format!("{}", f.k)).collect();
    let suites = vec![
        SuiteResult {
            name: "covering".into(),
            pass: covering.pass,
            detail: format!("K = [{}], ratio {:.3}", fmt_k.join(", "), covering.k_ratio),
        },
        SuiteResult {
            name: "g-bound".into(),
            pass: g_bound.pass,
            detail: format!(
                "A = {:.4e}, decay exponent {}",
                g_bound.fit.a,
                g_bound.fit.decay_exponent.map_or("undefined".into(), |e| format!("{e:.3}"))
            ),
        },
        SuiteResult {
            name: "tail-rigor".into(),
            pass: g_bound.tail_violations == 0,
            detail: format!("{} violations in {} checks", g_bound.tail_violations, g_bound.tail_checks),
        },
        SuiteResult {
            name: "zeros".into(),
            pass: zero_report.pass,
            detail: format!(
                "{}/{} certified, max |f_n| {:.2e}, decreasing {:.3}",
                zero_report.certified,
                zero_report.centers * zero_report.ns.len(),
                zero_report.max_f_abs,
                zero_report.decreasing_fraction
            ),
        },
        SuiteResult {
            name: "zero-membership".into(),
            pass: reports.iter().all(|r| r.membership_pass),
            detail: reports
                .iter()
                .map(|r| format!("n={} r={}: {}/{}", r.n, r.r, r.membership.passed, r.membership.tested))
                .collect::<Vec<_>>()
                .join("; "),
        },
        SuiteResult {
            name: "product".into(),
            pass: product.pass,
            detail: format!("{} singular, prefix max {:?}", product.singular, product.prefix_max),
        },
        SuiteResult {
            name: "oscillation".into(),
            pass: !oscillation.is_empty() && oscillation.iter().all(|r| r.pass()),
            detail: format!(
                "{}/{} rows with both witnesses (low {}, high {})",
                oscillation.iter().filter(|r| r.pass()).count(),
                oscillation.len(),
                oscillation.iter().filter(|r| r.low.is_some()).count(),
                oscillation.iter().filter(|r| r.high.is_some()).count()
            ),
        },
    ];
    let manifest = RunManifest {
        preset: domain.name.clone(),
        seed,
        tau: domain.tau(),
        params: params.clone(),
        epsilon_tail_bound: epsilon_tail_bound(ns.len() as u64 + 2),
        subsequence: ns,
        covering,
        g_bound,
        zero_suite: zero_report,
        stage_centers: stages
            .iter()
            .enumerate()
            .map(|(index, s)| StageCenters {
                index,
                centers: s.packing.centers.clone(),
            })
            .collect(),
        stages: reports,
        stage_zeros,
        product,
        bases,
        oscillation,
        suites,
    };
    Ok((
        manifest,
        RunArtifacts {
            zero_suite_records: zero_records,
        },
    ))
}

/// Index of a centre covering `zeta`, if any.
pub fn covering_center(domain: &DomainModel, packing: &Packing, k: f64, zeta: C2) -> Option<usize> {
    covering_index(domain, packing, k, zeta, None)
}

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::params::RadiusRule;
use crate::boundary::{lambda_theta_from, BoundaryPatch, DomainModel};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::point::C2;

/// Uniform hash grid over the real coordinates of C^2.
pub(crate) struct Grid {
    cell: f64,
    cells: HashMap<[i64; 4], Vec<usize>>,
}

impl Grid {
    pub fn new(points: &[C2], cell: f64) -> Grid {
        let mut cells: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(*p, cell)).or_default().push(i);
        }
        Grid { cell, cells }
    }

    fn key(p: C2, cell: f64) -> [i64; 4] {
        p.to_reals().map(|x| (x / cell).floor() as i64)
    }

    /// Indices of points within one cell of `p` in every coordinate.
    pub fn near(&self, p: C2) -> Vec<usize> {
        let k = Self::key(p, self.cell);
        let mut out = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    for d in -1..=1 {
                        if let Some(v) = self.cells.get(&[k[0] + a, k[1] + b, k[2] + c, k[3] + d]) {
                            out.extend_from_slice(v);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Why a candidate was not accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub candidate: usize,
    pub blocking_center: usize,
    pub shared_sample: usize,
}

/// Greedy maximal family of pairwise disjoint balls, relative to a seeded
/// candidate set that doubles as the intersection sample set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Packing {
    pub r: f64,
    pub tau: usize,
    pub rule: RadiusRule,
    /// Radius of the packing balls.
    pub ball_radius: f64,
    pub seed: u64,
    pub candidate_count: usize,
    pub centers: Vec<C2>,
    /// Candidate index of each centre.
    pub center_candidates: Vec<usize>,
    /// `Lambda_2 .. Lambda_tau` at each centre.
    pub center_lambdas: Vec<Vec<f64>>,
    pub rejections: Vec<Rejection>,
    /// Fitted covering constant, once known.
    pub k: Option<f64>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// A packing with prescribed centres and no rejection record.
    pub fn from_centers(domain: &DomainModel, r: f64, rule: RadiusRule, centers: Vec<C2>) -> Result<Packing> {
        let center_lambdas = centers.iter().map(|c| domain.lambdas(*c)).collect::<Result<Vec<_>>>()?;
        let tau = domain.tau();
        Ok(Packing {
            r,
            tau,
            rule,
            ball_radius: rule.radius(r, tau),
            seed: 0,
            candidate_count: centers.len(),
            center_candidates: (0..centers.len()).collect(),
            centers,
            center_lambdas,
            rejections: Vec::new(),
            k: None,
        })
    }

    /// `r^tau`, the scale of `g_{n,r}`.
    pub fn r_tau(&self) -> f64 {
        self.r.powi(self.tau as i32)
    }

    /// Euclidean radius of `V_r` for covering constant `k`.
    pub fn vr_radius(&self, k: f64) -> f64 {
        k * self.rule.radius(self.r, self.tau)
    }
}

fn ball_members(domain: &DomainModel, pts: &[C2], grid: &Grid, c: C2, radius: f64, lam: f64) -> Vec<usize> {
    let mut m: Vec<usize> = grid
        .near(c)
        .into_iter()
        .filter(|&i| pts[i].dist(c) < radius && domain.r(pts[i], c).norm() < lam)
        .collect();
    m.sort_unstable();
    m
}

/// Greedy sweep over `candidates` seeded boundary points of `patch`.
pub fn build_packing(
    domain: &DomainModel,
    patch: &BoundaryPatch,
    r: f64,
    rule: RadiusRule,
    candidates: usize,
    seed: u64,
) -> Result<Packing> {
    if candidates == 0 {
        return Err(Error::InvalidArgument("empty candidate list".into()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("packing scale must be positive, got {r}")));
    }
    let tau = domain.tau();
    let pts = domain.sample_in(patch, candidates, seed)?;
    let radius = rule.radius(r, tau);
    let lambdas: Vec<Vec<f64>> = par_map(&pts, |p| domain.lambdas(*p)).into_iter().collect::<Result<_>>()?;
    let grid = Grid::new(&pts, radius);
    let members: Vec<Vec<usize>> = par_map(&(0..pts.len()).collect::<Vec<_>>(), |&i| {
        ball_members(domain, &pts, &grid, pts[i], radius, lambda_theta_from(&lambdas[i], radius))
    });
    let mut owner: Vec<Option<usize>> = vec![None; pts.len()];
    let mut centers = Vec::new();
    let mut center_candidates = Vec::new();
    let mut center_lambdas = Vec::new();
    let mut rejections = Vec::new();
    for (i, m) in members.iter().enumerate() {
        if let Some(&s) = m.iter().find(|&&s| owner[s].is_some()) {
            rejections.push(Rejection {
                candidate: i,
                blocking_center: owner[s].unwrap_or_default(),
                shared_sample: s,
            });
            continue;
        }
        let j = centers.len();
        for &s in m {
            owner[s] = Some(j);
        }
        centers.push(pts[i]);
        center_candidates.push(i);
        center_lambdas.push(lambdas[i].clone());
    }
    Ok(Packing {
        r,
        tau,
        rule,
        ball_radius: radius,
        seed,
        candidate_count: candidates,
        centers,
        center_candidates,
        center_lambdas,
        rejections,
        k: None,
    })
}

/// `zeta` lies in some `V_r(zeta_j)`.
pub fn covering_check(domain: &DomainModel, packing: &Packing, k: f64, zeta: C2) -> bool {
    covering_index(domain, packing, k, zeta, None).is_some()
}

/// Index of a centre whose `V_r` contains `zeta`.
pub(crate) fn covering_index(
    domain: &DomainModel,
    packing: &Packing,
    k: f64,
    zeta: C2,
    grid: Option<&Grid>,
) -> Option<usize> {
    let e = packing.vr_radius(k);
    let theta = k * packing.r;
    let test = |j: usize| {
        zeta.dist(packing.centers[j]) < e
            && domain.r(zeta, packing.centers[j]).norm() < lambda_theta_from(&packing.center_lambdas[j], theta)
    };
    match grid {
        Some(g) => {
            let mut near = g.near(zeta);
            near.sort_unstable();
            near.into_iter().find(|&j| test(j))
        }
        None => (0..packing.len()).find(|&j| test(j)),
    }
}

/// Result of fitting the covering constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringFit {
    pub k: f64,
    pub covered: usize,
    pub samples: usize,
    /// Coverage fraction at each tried `K`.
    pub trace: Vec<(f64, f64)>,
}

/// Doubles `K` from 1 until every sample is covered, up to `max_k`.
pub fn fit_covering(domain: &DomainModel, packing: &Packing, samples: &[C2], max_k: f64) -> CoveringFit {
    let mut k = 1.0;
    let mut trace = Vec::new();
    loop {
        let grid = Grid::new(&packing.centers, packing.vr_radius(k));
        let hits = par_map(samples, |z| covering_index(domain, packing, k, *z, Some(&grid)).is_some());
        let covered = hits.iter().filter(|h| **h).count();
        trace.push((k, covered as f64 / samples.len() as f64));
        if covered == samples.len() || k >= max_k {
            return CoveringFit {
                k,
                covered,
                samples: samples.len(),
                trace,
            };
        }
        k *= 2.0;
    }
}

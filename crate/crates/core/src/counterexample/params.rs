use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryPatch, HFunction};
use crate::error::{Error, Result};

/// `eps_n = n^{-1/4}`.
pub fn epsilon(n: u64) -> f64 {
    (n as f64).powf(-0.25)
}

/// `gamma_n = n^{-4/3}`.
pub fn gamma(n: u64) -> f64 {
    (n as f64).powf(-4.0 / 3.0)
}

/// `n_k = k^8`, so `eps_{n_k} = k^{-2}`. Starts at `k = 2` since `n >= 2`.
pub fn subsequence(stages: usize) -> Vec<u64> {
    (2..2 + stages as u64).map(|k| k.pow(8)).collect()
}

/// Upper bound for `sum_{k >= k0} eps_{n_k} = sum_{k >= k0} k^{-2}`.
pub fn epsilon_tail_bound(k0: u64) -> f64 {
    let k0 = k0.max(2) as f64;
    1.0 / (k0 - 1.0)
}

/// Which radius the packing balls and the Euclidean part of `V_r` use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusRule {
    /// Balls `beta_2(zeta, r^tau)`, `V_r` with `|zeta - zeta_j| < K r^tau`.
    RTau,
    /// Balls `beta_2(zeta, r)`, `V_r` with `|zeta - zeta_j| < K r`.
    R,
}

impl RadiusRule {
    pub fn radius(self, r: f64, tau: usize) -> f64 {
        match self {
            RadiusRule::RTau => r.powi(tau as i32),
            RadiusRule::R => r,
        }
    }
}

/// Settings of the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CounterexampleParams {
    /// Neighbourhood `U` in chart parameters.
    pub patch: BoundaryPatch,
    pub radius_rule: RadiusRule,
    /// Candidate count of the greedy packing.
    pub candidates: usize,
    /// Boundary samples for covering and the bound on `g`.
    pub samples: usize,
    /// Terms of `g` with `|R| <= truncation * r^tau` are summed exactly.
    pub truncation: f64,
    pub stages: usize,
    /// First stage radius; later radii are halved from it.
    pub r0: f64,
    pub max_halvings: usize,
    pub h1: HFunction,
    pub h2: HFunction,
    /// Random boundary points per centre in the zero-membership test.
    pub w_per_center: usize,
    pub base_points: usize,
    pub scales: Vec<f64>,
    pub low_threshold: f64,
    pub high_threshold: f64,
    pub max_k: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        CounterexampleParams {
            patch: BoundaryPatch {
                half_width: [0.05, 0.1, 0.1],
                grid: 3,
            },
            radius_rule: RadiusRule::RTau,
            candidates: 10_000,
            samples: 1000,
            truncation: 8.0,
            stages: 3,
            r0: 0.1,
            max_halvings: 3,
            h1: HFunction::LogLog,
            h2: HFunction::LogLog,
            w_per_center: 20,
            base_points: 10,
            scales: vec![1e-2, 1e-3, 1e-4],
            low_threshold: 1e-6,
            high_threshold: 0.1,
            max_k: (1u64 << 30) as f64,
        }
    }
}

impl CounterexampleParams {
    pub fn validate(&self) -> Result<()> {
        self.patch.validate()?;
        self.h1.validate()?;
        self.h2.validate()?;
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.stages == 0 {
            return bad("stage count must be at least 1");
        }
        if self.candidates == 0 || self.samples == 0 {
            return bad("candidate and sample counts must be positive");
        }
        if !(self.r0 > 0.0 && self.r0 < 1.0) {
            return bad("r0 must lie in (0, 1)");
        }
        if !(self.truncation >= 1.0) {
            return bad("truncation must be at least 1");
        }
        if self.scales.iter().any(|s| !(*s > 0.0)) {
            return bad("scales must be positive");
        }
        if !(self.low_threshold < self.high_threshold) {
            return bad("low threshold must be below the high threshold");
        }
        Ok(())
    }
}

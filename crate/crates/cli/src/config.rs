use std::fs;
use std::path::{Path, PathBuf};

use ftl_core::boundary::{BoundaryPatch, HFunction, RegionSpec, PRESETS};
use ftl_core::counterexample::CounterexampleParams;
use ftl_core::crgeom::{DEFAULT_K_MAX, DEFAULT_TYPE_TOL, MAX_K};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Numerical tolerances shared by the subcommands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// `Lambda_k` at or below this counts as zero when computing the type.
    pub type_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { type_tol: DEFAULT_TYPE_TOL }
    }
}

/// The interior slice swept by `region-slice`.
///
/// Points are `(1 - s, x)` with `s` log-spaced in `depth` and `x` uniform in
/// `[-lateral, lateral]`, so the slice is spanned by the inner normal at
/// `(1, 0)` and the real `z2` axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SliceSpec {
    /// Smallest and largest depth `s`.
    pub depth: [f64; 2],
    pub depth_steps: usize,
    pub lateral: f64,
    pub lateral_steps: usize,
}

impl Default for SliceSpec {
    fn default() -> Self {
        SliceSpec {
            depth: [1e-4, 1e-1],
            depth_steps: 31,
            lateral: 0.5,
            lateral_steps: 41,
        }
    }
}

impl SliceSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let [lo, hi] = self.depth;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(CliError::Usage(format!("slice depth range must satisfy 0 < lo <= hi, got {:?}", self.depth)));
        }
        if self.depth_steps == 0 || self.lateral_steps == 0 {
            return Err(CliError::Usage("slice step counts must be positive".into()));
        }
        if !(self.lateral >= 0.0 && self.lateral.is_finite()) {
            return Err(CliError::Usage(format!("slice lateral half width must be nonnegative, got {}", self.lateral)));
        }
        Ok(())
    }

    /// Slice coordinates `(s, x)` in row-major order, depth outermost.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let [lo, hi] = self.depth;
        let depth = |i: usize| {
            if self.depth_steps == 1 {
                lo
            } else {
                lo * (hi / lo).powf(i as f64 / (self.depth_steps - 1) as f64)
            }
        };
        let lateral = |j: usize| {
            if self.lateral_steps == 1 {
                0.0
            } else {
                -self.lateral + 2.0 * self.lateral * j as f64 / (self.lateral_steps - 1) as f64
            }
        };
        (0..self.depth_steps)
            .flat_map(|i| (0..self.lateral_steps).map(move |j| (depth(i), lateral(j))))
            .collect()
    }
}

/// Everything a subcommand needs. Missing fields take their defaults, so a
/// config file may list only what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: String,
    /// Chart patch swept by `typemap` and used to estimate the global type.
    pub patch: BoundaryPatch,
    pub k_max: usize,
    pub tolerances: Tolerances,
    /// Region families tested by `region-slice`.
    pub regions: Vec<RegionSpec>,
    pub slice: SliceSpec,
    pub counterexample: CounterexampleParams,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: "egg-m2".into(),
            patch: BoundaryPatch::default(),
            k_max: DEFAULT_K_MAX,
            tolerances: Tolerances::default(),
            regions: vec![
                RegionSpec::Alpha { alpha: 1.0 },
                RegionSpec::Comparable,
                RegionSpec::Broadened {
                    h1: HFunction::LogLog,
                    h2: HFunction::LogLog,
                },
            ],
            slice: SliceSpec::default(),
            counterexample: CounterexampleParams::default(),
            seed: 7,
            out: PathBuf::from("ftl-out"),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub stages: Option<usize>,
    pub k_max: Option<usize>,
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<RunConfig, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Defaults, then the file if given, then the overrides.
    pub fn resolve(file: Option<&Path>, o: &Overrides) -> Result<RunConfig, CliError> {
        let mut c = match file {
            Some(p) => Self::load(p)?,
            None => RunConfig::default(),
        };
        c.apply(o);
        c.validate()?;
        Ok(c)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(p) = &o.preset {
            self.preset = p.clone();
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(d) = &o.out {
            self.out = d.clone();
        }
        if let Some(k) = o.stages {
            self.counterexample.stages = k;
        }
        if let Some(k) = o.k_max {
            self.k_max = k;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !PRESETS.contains(&self.preset.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown preset {:?}; expected one of {}",
                self.preset,
                PRESETS.join(", ")
            )));
        }
        if !(2..=MAX_K).contains(&self.k_max) {
            return Err(CliError::Usage(format!("k_max must lie in 2..={MAX_K}, got {}", self.k_max)));
        }
        if !(self.tolerances.type_tol >= 0.0 && self.tolerances.type_tol.is_finite()) {
            return Err(CliError::Usage("type_tol must be finite and nonnegative".into()));
        }
        self.patch.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        for r in &self.regions {
            r.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        }
        self.slice.validate()?;
        self.counterexample.validate().map_err(|e| CliError::Usage(e.to_string()))
    }
}

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use ftl_core::boundary::{preset_rho, BoundaryPatch, DomainModel, PointGeometry, RegionVerdict};
use ftl_core::counterexample::{run_counterexample, RunManifest, ZeroRecord};
use ftl_core::parallel::{par_map, thread_cap};
use ftl_core::C2;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Tolerances};
use crate::error::CliError;
use crate::output::{col, num, opt_num, out_file, point_cells, point_columns, write_csv, write_json, Column};

/// What a subcommand reports back to the caller.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    /// Names of failing checks.
    pub failing: Vec<String>,
    pub files: Vec<PathBuf>,
    /// One line per check or headline number, for the terminal.
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            3
        }
    }
}

pub fn build_domain(cfg: &RunConfig) -> Result<DomainModel, CliError> {
    build_domain_with(cfg, cfg.patch.clone())
}

fn build_domain_with(cfg: &RunConfig, patch: BoundaryPatch) -> Result<DomainModel, CliError> {
    let rho = preset_rho(&cfg.preset)?;
    Ok(DomainModel::new(&cfg.preset, rho, patch, cfg.k_max, cfg.tolerances.type_tol)?)
}

fn write_config(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let path = out_file(&cfg.out, "config.json")?;
    std::fs::write(&path, cfg.to_json() + "\n")?;
    Ok(path)
}

#[derive(Serialize, Deserialize)]
struct TypemapSummary {
    preset: String,
    k_max: usize,
    type_tol: f64,
    points: usize,
    /// Grid maximum of the point type.
    tau: usize,
    /// Number of grid points of each type.
    type_counts: BTreeMap<usize, usize>,
}

/// Type and `Lambda_2 .. Lambda_{k_max}` over the patch grid.
pub fn cmd_typemap(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let domain = build_domain(cfg)?;
    let params = cfg.patch.grid_params();
    let rows = par_map(&params, |p| -> Result<Vec<String>, CliError> {
        let z = domain.chart(*p)?;
        let profile = domain.table().lambda_profile(z)?;
        let report = domain.point_type(z)?;
        let mut row: Vec<String> = p.iter().map(|x| num(*x)).collect();
        row.extend(point_cells(z));
        row.extend(profile[1..].iter().map(|x| num(*x)));
        row.push(report.tau_z.to_string());
        Ok(row)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec![
        col("t", "chart parameter along the imaginary z1 direction"),
        col("u_re", "chart parameter Re z2"),
        col("u_im", "chart parameter Im z2"),
    ];
    columns.extend(point_columns("z", "the boundary point"));
    for k in 2..=cfg.k_max {
        columns.push(col(format!("lambda_{k}"), format!("Lambda_{k} at the point")));
    }
    columns.push(col("tau_z", "type: least k with Lambda_k above type_tol"));

    let mut type_counts = BTreeMap::new();
    for r in &rows {
        let t: usize = r.last().and_then(|s| s.parse().ok()).unwrap_or(0);
        *type_counts.entry(t).or_insert(0) += 1;
    }
    let summary = TypemapSummary {
        preset: cfg.preset.clone(),
        k_max: cfg.k_max,
        type_tol: cfg.tolerances.type_tol,
        points: rows.len(),
        tau: domain.tau(),
        type_counts,
    };
    let csv_path = out_file(&cfg.out, "typemap.csv")?;
    write_csv(&csv_path, &format!("ftl typemap: boundary type over the patch grid of {}", cfg.preset), &columns, &rows)?;
    let json_path = out_file(&cfg.out, "typemap_summary.json")?;
    write_json(&json_path, &summary)?;
    let counts: Vec<String> = summary.type_counts.iter().map(|(t, c)| format!("type {t}: {c}")).collect();
    Ok(Outcome {
        pass: true,
        failing: vec![],
        files: vec![write_config(cfg)?, csv_path, json_path],
        lines: vec![format!("{} grid points, tau = {} ({})", summary.points, summary.tau, counts.join(", "))],
    })
}

#[derive(Serialize, Deserialize)]
struct RegionCount {
    label: String,
    file: String,
    inside: usize,
}

#[derive(Serialize, Deserialize)]
struct SliceFailure {
    s: f64,
    x: f64,
    reason: String,
}

#[derive(Serialize, Deserialize)]
struct SliceSummary {
    preset: String,
    base: C2,
    points: usize,
    tested: usize,
    outside_domain: usize,
    failures: Vec<SliceFailure>,
    regions: Vec<RegionCount>,
}

fn slice_columns() -> Vec<Column> {
    let mut c = vec![
        col("s", "depth parameter: z = (1 - s, x)"),
        col("x", "lateral parameter: z = (1 - s, x)"),
    ];
    c.extend(point_columns("z", "the interior point"));
    c.extend(point_columns("pi", "its nearest boundary point"));
    c.extend([
        col("delta", "Euclidean distance from z to the boundary"),
        col("delta_n", "complex-normal component of z - pi"),
        col("tau_z", "type at pi"),
        col("D", "anisotropic scale D(z)"),
        col("lhs1", "left side of the first inequality"),
        col("rhs1", "right side of the first inequality"),
        col("lhs2", "left side of the second inequality, |R(pi, w)|"),
        col("rhs2", "right side of the second inequality"),
        col("cond1", "first inequality holds"),
        col("cond2", "second inequality holds"),
        col("verdict", "z lies in the region at the base point"),
    ]);
    c
}

fn slice_row(s: f64, x: f64, g: &PointGeometry, v: &RegionVerdict) -> Vec<String> {
    let mut row = vec![num(s), num(x)];
    row.extend(point_cells(g.z));
    row.extend(point_cells(g.pi_z));
    row.extend([
        num(g.delta),
        num(g.delta_n),
        g.tau_z.to_string(),
        num(g.d),
        num(v.lhs1),
        num(v.rhs1),
        num(v.lhs2),
        num(v.rhs2),
        v.cond1.to_string(),
        v.cond2.to_string(),
        v.inside.to_string(),
    ]);
    row
}

/// Membership of each configured region family over an interior slice,
/// with base point `(1, 0)`. Points whose geometry fails are logged and
/// skipped.
pub fn cmd_region_slice(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    if cfg.regions.is_empty() {
        return Err(CliError::Usage("no region families configured".into()));
    }
    let domain = build_domain(cfg)?;
    let base = domain.base_point();
    let pts = cfg.slice.points();
    let geoms = par_map(&pts, |&(s, x)| {
        let z = C2::real(1.0 - s, x);
        if domain.rho_at(z) >= 0.0 {
            return None;
        }
        Some(domain.geometry(z))
    });
    let mut failures = Vec::new();
    let mut ok: Vec<((f64, f64), PointGeometry)> = Vec::new();
    let mut outside = 0;
    for (&(s, x), g) in pts.iter().zip(geoms) {
        match g {
            None => outside += 1,
            Some(Err(e)) => {
                eprintln!("region-slice: skipping (s, x) = ({s:e}, {x}): {e}");
                failures.push(SliceFailure {
                    s,
                    x,
                    reason: e.to_string(),
                });
            }
            Some(Ok(g)) => ok.push(((s, x), g)),
        }
    }
    let columns = slice_columns();
    let mut files = vec![write_config(cfg)?];
    let mut regions = Vec::new();
    let mut lines = Vec::new();
    for (i, spec) in cfg.regions.iter().enumerate() {
        let mut rows = Vec::with_capacity(ok.len());
        let mut inside = 0;
        for ((s, x), g) in &ok {
            let v = domain.region_verdict(spec, base, g)?;
            inside += v.inside as usize;
            rows.push(slice_row(*s, *x, g, &v));
        }
        let family = match spec {
            ftl_core::boundary::RegionSpec::Alpha { .. } => "alpha",
            ftl_core::boundary::RegionSpec::Comparable => "comparable",
            ftl_core::boundary::RegionSpec::Broadened { .. } => "broadened",
        };
        let name = format!("region_{i}_{family}.csv");
        let path = out_file(&cfg.out, &name)?;
        write_csv(
            &path,
            &format!("ftl region-slice: {} at base (1, 0) on {}", spec.label(), cfg.preset),
            &columns,
            &rows,
        )?;
        lines.push(format!("{}: {inside}/{} inside", spec.label(), ok.len()));
        regions.push(RegionCount {
            label: spec.label(),
            file: name,
            inside,
        });
        files.push(path);
    }
    if !failures.is_empty() {
        lines.push(format!("{} points skipped after geometry failures", failures.len()));
    }
    let summary = SliceSummary {
        preset: cfg.preset.clone(),
        base,
        points: pts.len(),
        tested: ok.len(),
        outside_domain: outside,
        failures,
        regions,
    };
    let json_path = out_file(&cfg.out, "region_summary.json")?;
    write_json(&json_path, &summary)?;
    files.push(json_path);
    Ok(Outcome {
        pass: true,
        failing: vec![],
        files,
        lines,
    })
}

/// The manifest file: a function of the config and seed only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestFile {
    pub k_max: usize,
    pub tolerances: Tolerances,
    pub patch: BoundaryPatch,
    pub run: RunManifest,
}

/// Wall-clock data kept out of the manifest.
#[derive(Serialize, Deserialize)]
struct RunInfo {
    version: String,
    started_unix_seconds: u64,
    elapsed_seconds: f64,
    thread_cap: Option<usize>,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn zero_columns() -> Vec<Column> {
    let mut c = vec![
        col("source", "\"probe\" for the fixed-radius zero suite, \"stage\" for a product stage"),
        col("stage", "stage index (empty for probe rows)"),
        col("center_index", "index of the packing centre"),
        col("n", "exponent n of f_n"),
        col("r", "packing scale r"),
        col("r_tau", "r^tau"),
    ];
    c.extend(point_columns("center", "the packing centre"));
    c.extend(point_columns("w", "the certified zero"));
    c.extend([
        col("line_re", "Re of the complex-normal line parameter of the zero"),
        col("line_im", "Im of the complex-normal line parameter of the zero"),
        col("winding", "winding number of f_n on the certification contour"),
        col("contour_points", "contour samples used"),
        col("recentred", "contour centred on the polished zero rather than the seed"),
        col("distance_to_center", "|w - centre|"),
        col("projection_residual", "|pi(w) - centre|"),
        col("delta", "distance from w to the boundary"),
        col("c_empirical", "delta / r^tau"),
        col("f_abs", "|f_n(w)| from the local terms plus the tail bound"),
        col("tail_bound", "bound on the terms left out of the local sum"),
        col("local_terms", "number of terms summed exactly"),
    ]);
    c
}

fn zero_row(source: &str, stage: Option<usize>, z: &ZeroRecord) -> Vec<String> {
    let mut row = vec![
        source.to_string(),
        stage.map(|s| s.to_string()).unwrap_or_default(),
        z.center_index.to_string(),
        z.n.to_string(),
        num(z.r),
        num(z.r_tau),
    ];
    row.extend(point_cells(z.center));
    row.extend(point_cells(z.w_nr));
    row.extend([
        num(z.line_param.re),
        num(z.line_param.im),
        z.winding_number.to_string(),
        z.contour_points.to_string(),
        z.recentred.to_string(),
        num(z.distance_to_center),
        num(z.projection_residual),
        num(z.delta),
        num(z.c_empirical),
        num(z.f_abs),
        num(z.tail_bound),
        z.local_terms.to_string(),
    ]);
    row
}

fn oscillation_columns() -> Vec<Column> {
    let mut c = vec![col("base_index", "index of the base point")];
    c.extend(point_columns("base", "the base point"));
    c.extend([
        col("scale", "scale s: witnesses have distance to the boundary at most s"),
        col("low_abs_f", "|f| at the low witness (empty if none found)"),
        col("low_delta", "distance to the boundary of the low witness"),
        col("low_stage", "stage of the zero used as low witness"),
        col("low_center", "packing centre of that zero"),
        col("high_abs_f", "|f| at the high witness (empty if none found)"),
        col("high_delta", "distance to the boundary of the high witness"),
        col("ray_min_abs_f", "control: min |f| on the inner normal ray"),
        col("ray_max_abs_f", "control: max |f| on the inner normal ray"),
        col("pass", "both witnesses found"),
    ]);
    c
}

fn stage_columns() -> Vec<Column> {
    vec![
        col("stage", "stage index"),
        col("n", "exponent n_k"),
        col("epsilon", "epsilon_n = n^(-1/4)"),
        col("r", "chosen packing scale"),
        col("halvings", "halvings of r0 tried"),
        col("centers", "packing centres"),
        col("K", "fitted covering constant"),
        col("A", "fitted constant in max |g| <= 1 + A/n"),
        col("precondition", "(1 - epsilon)(1 + A/n) < 1"),
        col("zeros_certified", "certified zeros"),
        col("membership_passed", "(centre, w) pairs with the zero inside the region at w"),
        col("membership_tested", "(centre, w) pairs tested"),
    ]
}

/// The full construction. Exit status follows the property suites.
pub fn cmd_counterexample(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let started = unix_now();
    let clock = Instant::now();
    let domain = build_domain(cfg)?;
    let (run, artifacts) = run_counterexample(&domain, &cfg.counterexample, cfg.seed)?;

    let mut files = vec![write_config(cfg)?];
    let manifest = ManifestFile {
        k_max: cfg.k_max,
        tolerances: cfg.tolerances.clone(),
        patch: cfg.patch.clone(),
        run,
    };
    let run = &manifest.run;

    let mut zero_rows: Vec<Vec<String>> = artifacts.zero_suite_records.iter().map(|z| zero_row("probe", None, z)).collect();
    for (k, zs) in run.stage_zeros.iter().enumerate() {
        zero_rows.extend(zs.iter().map(|z| zero_row("stage", Some(k), z)));
    }
    let path = out_file(&cfg.out, "zeros.csv")?;
    write_csv(&path, "ftl counterexample: certified zeros of f_n", &zero_columns(), &zero_rows)?;
    files.push(path);

    let osc_rows: Vec<Vec<String>> = run
        .oscillation
        .iter()
        .map(|o| {
            let mut row = vec![o.base_index.to_string()];
            row.extend(point_cells(o.base));
            row.extend([
                num(o.scale),
                opt_num(o.low.as_ref().map(|w| w.abs_f)),
                opt_num(o.low.as_ref().map(|w| w.delta)),
                o.low.as_ref().and_then(|w| w.stage).map(|s| s.to_string()).unwrap_or_default(),
                o.low.as_ref().and_then(|w| w.center_index).map(|s| s.to_string()).unwrap_or_default(),
                opt_num(o.high.as_ref().map(|w| w.abs_f)),
                opt_num(o.high.as_ref().map(|w| w.delta)),
                num(o.ray_min_abs_f),
                num(o.ray_max_abs_f),
                o.pass().to_string(),
            ]);
            row
        })
        .collect();
    let path = out_file(&cfg.out, "oscillation.csv")?;
    write_csv(&path, "ftl counterexample: oscillation witnesses of f", &oscillation_columns(), &osc_rows)?;
    files.push(path);

    let stage_rows: Vec<Vec<String>> = run
        .stages
        .iter()
        .map(|s| {
            vec![
                s.index.to_string(),
                s.n.to_string(),
                num(s.epsilon),
                num(s.r),
                s.halvings.to_string(),
                s.centers.to_string(),
                num(s.covering.k),
                num(s.a_fit),
                s.precondition.to_string(),
                s.zeros.certified.to_string(),
                s.membership.passed.to_string(),
                s.membership.tested.to_string(),
            ]
        })
        .collect();
    let path = out_file(&cfg.out, "stages.csv")?;
    write_csv(&path, "ftl counterexample: product stages", &stage_columns(), &stage_rows)?;
    files.push(path);

    let path = out_file(&cfg.out, "manifest.json")?;
    write_json(&path, &manifest)?;
    files.push(path);
    let info = RunInfo {
        version: env!("CARGO_PKG_VERSION").into(),
        started_unix_seconds: started,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
        thread_cap: thread_cap(),
    };
    let path = out_file(&cfg.out, "run_info.json")?;
    write_json(&path, &info)?;
    files.push(path);

    let lines = run
        .suites
        .iter()
        .map(|s| format!("{:<16} {}  {}", s.name, if s.pass { "PASS" } else { "FAIL" }, s.detail))
        .collect();
    Ok(Outcome {
        pass: run.all_pass(),
        failing: run.failing().into_iter().map(String::from).collect(),
        files,
        lines,
    })
}

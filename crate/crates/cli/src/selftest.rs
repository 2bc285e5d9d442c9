use ftl_core::boundary::{preset_rho, DomainModel};
use ftl_core::crgeom::CommutatorTable;
use ftl_core::C2;
use serde::{Deserialize, Serialize};

use crate::commands::Outcome;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{out_file, write_json};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &str, expected: f64, got: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        expected,
        got,
        tolerance,
        pass: (got - expected).abs() <= tolerance,
    }
}

/// Known values of the invariants and the scale on the presets.
pub fn selftest_checks(seed: u64) -> Result<Vec<Check>, CliError> {
    let origin = C2::real(1.0, 0.0);
    let mut out = Vec::new();

    let sphere = CommutatorTable::build(&preset_rho("sphere")?, 3)?;
    out.push(check("sphere Lambda_2(1,0)", 1.0, sphere.capital_lambda(2, origin)?, 1e-12));

    let egg2 = CommutatorTable::build(&preset_rho("egg-m2")?, 5)?;
    let prof = egg2.lambda_profile(origin)?;
    out.push(check("egg-m2 Lambda_3(1,0)", 0.0, prof[2], 1e-12));
    out.push(check("egg-m2 Lambda_4(1,0)", 4.0, prof[3], 1e-10));
    out.push(check("egg-m2 type at (1,0)", 4.0, egg2.point_type(origin, 1e-8)?.tau_z as f64, 0.0));

    let egg3 = CommutatorTable::build(&preset_rho("egg-m3")?, 6)?;
    let prof = egg3.lambda_profile(origin)?;
    out.push(check("egg-m3 Lambda_5(1,0)", 0.0, prof[4], 1e-12));
    out.push(check("egg-m3 Lambda_6(1,0)", 36.0 * 2f64.sqrt(), prof[5], 1e-9));

    let s = DomainModel::preset("sphere")?;
    let t: f64 = 1e-4;
    out.push(check("sphere D(1 - 1e-4, 0)", t.sqrt(), s.capital_d(C2::real(1.0 - t, 0.0))?, 1e-12));
    let e = DomainModel::preset("egg-m2")?;
    out.push(check("egg-m2 D(1 - 1e-4, 0)", (t / 4.0).powf(0.25), e.capital_d(C2::real(1.0 - t, 0.0))?, 1e-10));

    // polarization: R(z, z) = rho(z) and R(w, z) = conj R(z, w) at seeded points
    let pts = e.sample_patch(8, seed)?;
    let mut diag: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for (i, z) in pts.iter().enumerate() {
        let w = pts[(i + 1) % pts.len()] * 0.9;
        let zi = *z * 0.95;
        diag = diag.max((e.r(zi, zi) - e.rho_complex(zi)).norm());
        sym = sym.max((e.r(w, zi) - e.r(zi, w).conj()).norm());
    }
    out.push(check("egg-m2 max |R(z,z) - rho(z)|", 0.0, diag, 1e-12));
    out.push(check("egg-m2 max |R(w,z) - conj R(z,w)|", 0.0, sym, 1e-12));
    Ok(out)
}

pub fn cmd_selftest(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let checks = selftest_checks(cfg.seed)?;
    let path = out_file(&cfg.out, "selftest.json")?;
    write_json(&path, &checks)?;
    Ok(Outcome {
        pass: checks.iter().all(|c| c.pass),
        failing: checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect(),
        files: vec![path],
        lines: checks
            .iter()
            .map(|c| format!("{:<36} {}  expected {:e}, got {:e}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.expected, c.got))
            .collect(),
    })
}

use ftl_core::boundary::{DomainModel, HFunction, RegionSpec};
use ftl_core::C2;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn presets_and_global_type() {
    assert_eq!(DomainModel::preset("sphere").unwrap().tau(), 2);
    assert_eq!(DomainModel::preset("egg-m2").unwrap().tau(), 4);
    assert_eq!(DomainModel::preset("egg-m3").unwrap().tau(), 6);
    // every bracket coefficient vanishes at (1,0) for the quartic example
    assert!(matches!(
        DomainModel::preset("paper-quartic"),
        Err(ftl_core::Error::TypeExceedsKmax { .. })
    ));
    assert!(DomainModel::preset("torus").is_err());
}

#[test]
fn chart_and_samples() {
    let d = DomainModel::preset("egg-m2").unwrap();
    let s = d.sample_patch(200, 7).unwrap();
    assert_eq!(s[0], C2::real(1.0, 0.0));
    assert!(s.iter().all(|p| d.rho_complex(*p).norm() < 1e-10));
    assert_eq!(s, d.sample_patch(200, 7).unwrap());
    assert_ne!(s, d.sample_patch(200, 8).unwrap());
    let sph = DomainModel::preset("sphere").unwrap();
    assert!(sph.sample_patch(200, 1).unwrap().iter().all(|p| p.norm() <= 1.0 + 1e-12));
    assert!(d.chart([0.5, 0.0, 0.0]).is_err());
}

#[test]
fn hessian_matches_finite_differences() {
    let d = DomainModel::preset("egg-m3").unwrap();
    let z = C2::from_reals([0.7, -0.2, 0.3, 0.4]);
    let h = d.real_hessian(z);
    let eps = 1e-6;
    for j in 0..4 {
        let mut zp = z.to_reals();
        let mut zm = z.to_reals();
        zp[j] += eps;
        zm[j] -= eps;
        let gp = d.real_gradient(C2::from_reals(zp));
        let gm = d.real_gradient(C2::from_reals(zm));
        for k in 0..4 {
            let fd = (gp[k] - gm[k]) / (2.0 * eps);
            assert!((fd - h[j][k]).abs() < 1e-6, "H[{j}][{k}] = {} vs {fd}", h[j][k]);
        }
    }
}

#[test]
fn projection_examples() {
    let s = DomainModel::preset("sphere").unwrap();
    let p = s.project_to_boundary(C2::real(0.9, 0.0)).unwrap();
    assert!(p.pi_z.dist(C2::real(1.0, 0.0)) < 1e-14);
    assert!((p.delta - 0.1).abs() < 1e-14);
    let e = DomainModel::preset("egg-m2").unwrap();
    let t = 1e-3;
    let p = e.project_to_boundary(C2::real(1.0 - t, 0.0)).unwrap();
    assert!(p.pi_z.dist(C2::real(1.0, 0.0)) < 1e-14);
    assert!((p.delta - t).abs() < 1e-14 && (p.delta_n - t).abs() < 1e-14);
    for w in e.sample_patch(30, 3).unwrap() {
        let q = e.project_to_boundary(w).unwrap();
        assert!(q.pi_z.dist(w) < 1e-10 && q.delta < 1e-10);
    }
}

#[test]
fn projection_is_nearest_and_idempotent() {
    let e = DomainModel::preset("egg-m2").unwrap();
    for w in e.sample_patch(40, 11).unwrap() {
        let nu = e.unit_normal(w).unwrap();
        let z = w - nu * 0.01;
        let p = e.project_to_boundary(z).unwrap();
        assert!(p.pi_z.dist(w) < 1e-10, "{} vs {}", p.pi_z, w);
        assert!((p.delta - 0.01).abs() < 1e-10);
        assert!((p.delta_n - p.delta).abs() < 1e-12);
        let again = e.project_to_boundary(p.pi_z).unwrap();
        assert!(again.pi_z.dist(p.pi_z) < 1e-10);
    }
}

#[test]
fn scale_d_examples() {
    let s = DomainModel::preset("sphere").unwrap();
    let t = 1e-4;
    assert!((s.capital_d(C2::real(1.0 - t, 0.0)).unwrap() - t.sqrt()).abs() < 1e-12);
    let e = DomainModel::preset("egg-m2").unwrap();
    let d = e.capital_d(C2::real(1.0 - t, 0.0)).unwrap();
    assert!((d - (t / 4.0).powf(0.25)).abs() < 1e-10);
}

#[test]
fn lambda_theta_and_balls() {
    let s = DomainModel::preset("sphere").unwrap();
    let o = C2::real(1.0, 0.0);
    assert_eq!(s.lambda_theta(o, 0.0).unwrap(), 0.0);
    assert!((s.lambda_theta(o, 0.3).unwrap() - 0.09).abs() < 1e-15);
    assert!(s.ball_contains(o, 0.1, o).unwrap());
    let w = s.chart([0.05, 0.0, 0.0]).unwrap();
    assert!(!s.ball_contains(o, w.dist(o), w).unwrap());
}

#[test]
fn region_examples() {
    let s = DomainModel::preset("sphere").unwrap();
    let o = C2::real(1.0, 0.0);
    let (_, v) = s.region_contains(&RegionSpec::Comparable, o, C2::real(1.0 - 1e-4, 0.0)).unwrap();
    assert!(v.inside);
    let unit = RegionSpec::Broadened {
        h1: HFunction::Unit,
        h2: HFunction::Unit,
    };
    let e = DomainModel::preset("egg-m2").unwrap();
    for w in e.sample_patch(50, 5).unwrap() {
        let z = w - e.unit_normal(w).unwrap() * 1e-3;
        let (g, a) = e.region_contains(&RegionSpec::Comparable, o, z).unwrap();
        let b = e.region_verdict(&unit, o, &g).unwrap();
        let h = e.region_verdict(&RegionSpec::default(), o, &g).unwrap();
        assert_eq!(a, b);
        assert!(!a.inside || h.inside);
    }
}

#[test]
fn h_functions_are_admissible() {
    for h in [
        HFunction::LogLog,
        HFunction::PowerLog { sigma: 0.5 },
        HFunction::Power { sigma: 0.25 },
    ] {
        let xs: Vec<f64> = (0..200).map(|i| 10f64.powf(-(i as f64) / 10.0)).collect();
        let vals: Vec<f64> = xs.iter().map(|x| h.eval(*x)).collect();
        assert!((vals[0] - 1.0).abs() < 1e-15);
        assert!(vals.windows(2).all(|w| w[1] >= w[0] && w[0] >= 1.0));
        assert!(h.eval(1e-300) > vals[199]);
    }
    assert_eq!(HFunction::Unit.eval(1e-9), 1.0);
    let _ = c(0.0, 0.0);
}

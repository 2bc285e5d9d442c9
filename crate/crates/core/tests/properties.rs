use std::sync::OnceLock;

use ftl_core::boundary::{lambda_theta_from, DomainModel, HFunction, RegionSpec};
use ftl_core::counterexample::{shell_bound, term};
use ftl_core::crgeom::{lie_bracket, CommutatorTable, VectorField};
use ftl_core::symalg::{coeff_int, polarize, ConjPoly, RationalExpr, Var};
use num_traits::Zero;
use ftl_core::C2;
use num_complex::Complex64;
use proptest::prelude::*;

fn egg() -> &'static DomainModel {
    static D: OnceLock<DomainModel> = OnceLock::new();
    D.get_or_init(|| DomainModel::preset("egg-m2").unwrap())
}

fn sphere() -> &'static DomainModel {
    static D: OnceLock<DomainModel> = OnceLock::new();
    D.get_or_init(|| DomainModel::preset("sphere").unwrap())
}

fn poly() -> impl Strategy<Value = ConjPoly> {
    prop::collection::vec((prop::array::uniform4(0u32..3), -4i64..=4, -4i64..=4), 0..6).prop_map(|ts| {
        let mut p = ConjPoly::zero();
        for (e, a, b) in ts {
            p.add_term(e, coeff_int(a, b));
        }
        p
    })
}

fn real_poly() -> impl Strategy<Value = ConjPoly> {
    poly().prop_map(|p| &p + &p.conjugate())
}

fn point(r: f64) -> impl Strategy<Value = C2> {
    prop::array::uniform4(-r..r).prop_map(C2::from_reals)
}

/// Interior point below the chart point `p` at depth `depth`.
fn interior(d: &DomainModel, p: [f64; 3], depth: f64) -> Option<C2> {
    let w = d.chart(p).ok()?;
    Some(w - d.unit_normal(w).ok()? * depth)
}

fn chart_param() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-0.15..0.15f64)
}

fn region_verdicts(d: &DomainModel, specs: &[RegionSpec], base: C2, z: C2) -> Option<Vec<bool>> {
    let g = d.geometry(z).ok()?;
    specs
        .iter()
        .map(|s| d.region_verdict(s, base, &g).ok().map(|v| v.inside))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_on_canonical_forms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        let s = &p * &q;
        prop_assert!(s.terms().all(|(_, c)| !(c.re.is_zero() && c.im.is_zero())));
        prop_assert_eq!(ConjPoly::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn leibniz_and_conjugation(p in poly(), q in poly(), v in 0usize..4) {
        let v = Var::ALL[v];
        let lhs = (&p * &q).derivative(v);
        let rhs = &(&p.derivative(v) * &q) + &(&p * &q.derivative(v));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.derivative(v).conjugate(), p.conjugate().derivative(v.conj()));
    }

    #[test]
    fn wirtinger_matches_finite_differences(p in poly(), z in point(0.9)) {
        let h = 1e-3;
        let d = |k: usize| {
            let at = |s: f64| {
                let mut x = z.to_reals();
                x[k] += s;
                p.eval(C2::from_reals(x))
            };
            (at(-2.0 * h) - at(2.0 * h) + 8.0 * (at(h) - at(-h))) / (12.0 * h)
        };
        let i = Complex64::i();
        let fd = [
            0.5 * (d(0) - i * d(1)),
            0.5 * (d(0) + i * d(1)),
            0.5 * (d(2) - i * d(3)),
            0.5 * (d(2) + i * d(3)),
        ];
        let exact: Vec<Complex64> = Var::ALL.iter().map(|v| p.derivative(*v).eval(z)).collect();
        let scale = exact.iter().map(|e| e.norm()).fold(1e-300, f64::max);
        for (a, b) in fd.iter().zip(&exact) {
            prop_assert!((a - b).norm() <= 1e-6 * scale, "{} vs {}", a, b);
        }
    }

    #[test]
    fn polarization_identities(p in real_poly(), z in point(1.0), w in point(1.0)) {
        let k = polarize(&p);
        prop_assert_eq!(k.diagonal(), p.clone());
        prop_assert_eq!(k.conj_transpose(), k.clone());
        let a = k.eval(z, w);
        let b = k.eval(w, z).conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        prop_assert!((k.eval(z, z) - p.eval(z)).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn rational_evaluation(p in poly(), q in poly(), z in point(0.9)) {
        prop_assume!(!q.is_zero());
        let den = q.eval(z);
        prop_assume!(den.norm() > 1e-3);
        let r = RationalExpr::new(p.clone(), q.clone()).unwrap();
        let v = r.eval(z).unwrap();
        let expect = p.eval(z) / den;
        prop_assert!((v - expect).norm() <= 1e-9 * (1.0 + expect.norm()));
    }

    #[test]
    fn bracket_antisymmetry(a in prop::array::uniform4(poly()), b in prop::array::uniform4(poly())) {
        let (x, y) = (VectorField::from_polys(a), VectorField::from_polys(b));
        prop_assert!(lie_bracket(&x, &y).equals(&lie_bracket(&y, &x).neg()));
        prop_assert!(lie_bracket(&x, &x).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn type_report_is_consistent(p in chart_param()) {
        let d = egg();
        let z = d.chart(p).unwrap();
        let t = d.point_type(z).unwrap();
        let prof = d.table().lambda_profile(z).unwrap();
        prop_assert!(prof[t.tau_z - 1] > t.tolerance);
        prop_assert!(prof[1..t.tau_z - 1].iter().all(|l| *l <= t.tolerance));
        prop_assert!(prof.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn table_is_closed(k in 2usize..6) {
        let t = CommutatorTable::build(egg().rho(), k).unwrap();
        for e in t.entries() {
            prop_assert_eq!(e.degree, e.word.degree());
            if let Some(inner) = e.word.inner() {
                if e.degree > 2 {
                    prop_assert!(t.find(&inner).is_some(), "{} has no inner word", e.word);
                }
            }
        }
    }

    #[test]
    fn geometry_invariants(p in chart_param(), depth in -8.0..-1.5f64) {
        let d = egg();
        let z = interior(d, p, 10f64.powf(depth)).unwrap();
        let g = d.geometry(z).unwrap();
        prop_assert!((z.dist(g.pi_z) - g.delta).abs() <= 1e-10);
        prop_assert!(g.delta_n <= g.delta + 1e-12);
        prop_assert!(d.rho_at(g.pi_z).abs() < 1e-10);
        let again = d.project_to_boundary(g.pi_z).unwrap();
        prop_assert!(again.pi_z.dist(g.pi_z) <= 1e-10);
        prop_assert!(g.d > 0.0);
        if g.delta <= 1e-2 {
            prop_assert!(g.delta <= g.d);
        }
    }

    #[test]
    fn region_monotonicity(p in chart_param(), depth in -6.0..-1.5f64, q in chart_param(), alpha in 0.1..4.0f64) {
        let d = egg();
        let z = interior(d, p, 10f64.powf(depth)).unwrap();
        let base = d.chart(q.map(|x| x * 0.3)).unwrap();
        let loglog = RegionSpec::Broadened { h1: HFunction::LogLog, h2: HFunction::LogLog };
        let unit = RegionSpec::Broadened { h1: HFunction::Unit, h2: HFunction::Unit };
        let specs = [
            RegionSpec::Alpha { alpha },
            RegionSpec::Alpha { alpha: 2.0 * alpha },
            RegionSpec::Comparable,
            unit,
            loglog,
        ];
        let v = region_verdicts(d, &specs, base, z).unwrap();
        prop_assert!(!v[0] || v[1]);
        prop_assert_eq!(v[2], v[3]);
        prop_assert!(!v[2] || v[4]);
    }

    #[test]
    fn h_functions_are_admissible(sigma in 0.05..3.0f64) {
        for h in [HFunction::LogLog, HFunction::PowerLog { sigma }, HFunction::Power { sigma }] {
            let xs: Vec<f64> = (0..=60).map(|i| 10f64.powf(-(i as f64) / 2.0)).collect();
            let vals: Vec<f64> = xs.iter().map(|x| h.eval(*x)).collect();
            prop_assert!(vals.iter().all(|v| *v >= 1.0));
            prop_assert!(vals.windows(2).all(|w| w[1] >= w[0]));
            prop_assert!(h.eval(1e-300) > h.eval(1e-30));
        }
    }

    #[test]
    fn lambda_theta_is_increasing(p in chart_param(), a in 1e-6..0.5f64, b in 1e-6..0.5f64) {
        let lam = egg().lambdas(egg().chart(p).unwrap()).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(lambda_theta_from(&lam, lo) <= lambda_theta_from(&lam, hi));
    }

    #[test]
    fn shell_bound_dominates_terms(k in 2u64..50, frac in 0.0..1.0f64, phase in 0.0..std::f64::consts::PI, n in 2u64..64) {
        // |R| in shell k with Re R <= 0 (phase in the left half plane)
        let rt = 1e-3;
        let modulus = (k as f64 + frac) * rt;
        let r = Complex64::from_polar(modulus, std::f64::consts::FRAC_PI_2 + phase);
        let t = term(r, rt, n).unwrap().norm();
        prop_assert!(t <= shell_bound(k, n, r.re <= 0.0) * (1.0 + 1e-12));
        let r = Complex64::from_polar(modulus, phase - std::f64::consts::FRAC_PI_2);
        prop_assert!(term(r, rt, n).unwrap().norm() <= shell_bound(k, n, r.re <= 0.0) * (1.0 + 1e-12));
    }
}

/// Interior point whose projection lies at distance `q D(z)` from `(1, 0)`
/// along chart direction `dir`.
fn sandwich_point(d: &DomainModel, dir: [f64; 3], q: f64, depth: f64) -> Option<C2> {
    let eval = |s: f64| -> Option<(C2, f64)> {
        let z = interior(d, dir.map(|x| x * s), depth)?;
        let g = d.geometry(z).ok()?;
        Some((z, g.pi_z.dist(C2::real(1.0, 0.0)) - q * g.d))
    };
    let (mut lo, mut hi) = (0.0, 0.2);
    if eval(hi)?.1 < 0.0 {
        return None;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if eval(mid)?.1 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    eval(hi).map(|(z, _)| z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_comparable_to_d(
        v in prop::array::uniform3(-1.0..1.0f64),
        q in 0.5..1.0f64,
        depth in -8.0..-3.0f64,
        on_sphere in any::<bool>(),
    ) {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(n > 1e-2);
        let d = if on_sphere { sphere() } else { egg() };
        let z = sandwich_point(d, v.map(|x| x / n), q, 10f64.powf(depth));
        prop_assume!(z.is_some());
        let z = z.unwrap();
        let g = d.geometry(z).unwrap();
        let a = g.pi_z.dist(C2::real(1.0, 0.0));
        prop_assume!(a >= g.d / 2.0 && a <= g.d && g.delta <= g.d / 4.0);
        let e = z.dist(C2::real(1.0, 0.0));
        prop_assert!(g.d / 4.0 <= e && e <= 2.0 * g.d, "|z - (1,0)| = {}, D = {}", e, g.d);
    }
}

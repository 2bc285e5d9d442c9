use ftl_core::crgeom::{
    decompose_in_frame, lie_bracket, tangential_frame, CommutatorTable, LambdaRoute, Word,
};
use ftl_core::symalg::{ConjPoly, RationalExpr, Var::*};
use ftl_core::C2;
use num_complex::Complex64;

fn v(x: ftl_core::symalg::Var) -> ConjPoly {
    ConjPoly::var(x)
}

fn sphere() -> ConjPoly {
    &(&(&v(Z1) * &v(Zb1)) + &(&v(Z2) * &v(Zb2))) - &ConjPoly::one()
}

fn egg(m: u32) -> ConjPoly {
    &(&(&v(Z1) * &v(Zb1)) + &(&v(Z2) * &v(Zb2)).pow(m)) - &ConjPoly::one()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn sphere_first_bracket() {
    let f = tangential_frame(&sphere()).unwrap();
    let b = lie_bracket(&f.l, &f.lb);
    let want = ftl_core::crgeom::VectorField::from_polys([
        v(Z1),
        v(Z2),
        -&v(Zb1),
        -&v(Zb2),
    ]);
    assert_eq!(b, want);
}

#[test]
fn frame_at_north_pole() {
    let f = tangential_frame(&sphere()).unwrap();
    let p = C2::real(1.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    assert_eq!(f.l.eval(p).unwrap(), [z, one, z, z]);
    assert_eq!(f.lb.eval(p).unwrap(), [z, z, z, one]);
    assert_eq!(f.t.eval(p).unwrap(), [one, z, -one, z]);
}

#[test]
fn decomposition_of_frame_fields() {
    let f = tangential_frame(&egg(2)).unwrap();
    let p = C2::new(Complex64::new(0.6, 0.0), Complex64::new(0.5, 0.3));
    let t = decompose_in_frame(&f.t, &f, p).unwrap();
    let l = decompose_in_frame(&f.l, &f, p).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    assert!(close(t.lambda, one, 1e-12) && close(t.f1, zero, 1e-12) && close(t.f2, zero, 1e-12));
    assert!(close(l.f1, one, 1e-12) && close(l.lambda, zero, 1e-12));
}

#[test]
fn sphere_lambda_two_is_one() {
    let t = CommutatorTable::build(&sphere(), 3).unwrap();
    assert_eq!(t.entries().len(), 5);
    let lam = t.capital_lambda(2, C2::real(1.0, 0.0)).unwrap();
    assert!((lam - 1.0).abs() < 1e-12);
    // 1 / |z1|^2 at (3/5, 4i/5)
    let p = C2::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
    assert!((t.capital_lambda(2, p).unwrap() - 25.0 / 9.0).abs() < 1e-12);
    assert_eq!(t.point_type(p, 1e-8).unwrap().tau_z, 2);
}

#[test]
fn egg_values() {
    let t = CommutatorTable::build(&egg(2), 5).unwrap();
    assert_eq!(t.entries().len(), 12);
    for p in [C2::real(1.0, 0.0), C2::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0))] {
        let prof = t.lambda_profile(p).unwrap();
        assert!(prof[1] < 1e-12 && prof[2] < 1e-12);
        assert!((prof[3] - 4.0).abs() < 1e-10 && (prof[4] - 4.0).abs() < 1e-10);
        assert_eq!(t.point_type(p, 1e-8).unwrap().tau_z, 4);
    }
    let t3 = CommutatorTable::build(&egg(3), 6).unwrap();
    assert_eq!(t3.entries().len(), 22);
    let prof = t3.lambda_profile(C2::real(1.0, 0.0)).unwrap();
    assert!(prof[..5].iter().all(|x| *x < 1e-12));
    assert!((prof[5] - 36.0 * 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn explicit_and_bracket_lambdas_agree_exactly() {
    for rho in [sphere(), egg(2)] {
        let t = CommutatorTable::build(&rho, 5).unwrap();
        for e in t.entries().iter().filter(|e| e.route == LambdaRoute::Explicit) {
            let via_bracket = t.frame().decompose_symbolic(&e.field).unwrap();
            assert!(e.lambda.equals(&via_bracket.lambda), "{}", e.word);
            assert!(via_bracket.normal.is_zero());
        }
    }
}

#[test]
fn symbolic_lambda_matches_pointwise_solve() {
    let t = CommutatorTable::build(&egg(2), 5).unwrap();
    let p = C2::new(Complex64::new(0.3, 0.5), Complex64::new(0.0, 0.0));
    let r = (1.0 - p.0.norm_sqr()).sqrt().sqrt();
    let p = C2::new(p.0, Complex64::new(r * 0.6, r * 0.8));
    for e in t.entries() {
        let d = decompose_in_frame(&e.field, t.frame(), p).unwrap();
        let s = e.lambda.eval(p).unwrap();
        assert!(close(d.lambda, s, 1e-9 * (1.0 + s.norm())), "{}", e.word);
        assert!(d.normal_residual.norm() < 1e-9);
    }
}

#[test]
fn bracket_antisymmetry_and_jacobi() {
    let f = tangential_frame(&egg(2)).unwrap();
    let (x, y, z) = (&f.l, &f.lb, &f.t);
    assert_eq!(lie_bracket(x, y), lie_bracket(y, x).neg());
    let j = lie_bracket(x, &lie_bracket(y, z))
        .add(&lie_bracket(y, &lie_bracket(z, x)))
        .add(&lie_bracket(z, &lie_bracket(x, y)));
    assert!(j.coeffs.iter().all(|c| c.equals(&RationalExpr::zero())));
}

#[test]
fn profile_is_monotone() {
    let t = CommutatorTable::build(&egg(2), 6).unwrap();
    let p = C2::new(Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0));
    let r = (1.0 - 0.64f64).sqrt().sqrt();
    let p = C2::new(p.0, Complex64::new(r, 0.0));
    let prof = t.lambda_profile(p).unwrap();
    assert!(prof.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn words_and_json_round_trip() {
    let w: Word = "[L,[L,Lb]]".parse().unwrap();
    assert_eq!(w.to_string(), "[L,[L,Lb]]");
    assert_eq!(w.degree(), 3);
    let t = CommutatorTable::build(&egg(2), 4).unwrap();
    let back = CommutatorTable::from_json(&t.to_json().unwrap()).unwrap();
    assert_eq!(back.entries().len(), t.entries().len());
    let p = C2::real(1.0, 0.0);
    assert_eq!(back.lambda_profile(p).unwrap(), t.lambda_profile(p).unwrap());
}

#[test]
fn off_boundary_points_are_rejected() {
    let t = CommutatorTable::build(&sphere(), 3).unwrap();
    assert!(t.capital_lambda(2, C2::real(0.5, 0.0)).is_err());
}

#[test]
fn degree_two_word_is_l_lb() {
    let t = CommutatorTable::build(&sphere(), 2).unwrap();
    let words: Vec<String> = t.entries().iter().map(|e| e.word.to_string()).collect();
    assert_eq!(words, ["L", "Lb", "[L,Lb]"]);
}

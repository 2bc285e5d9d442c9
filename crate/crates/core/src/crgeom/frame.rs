use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::field::VectorField;
use crate::error::{Error, Result};
use crate::point::C2;
use crate::symalg::{coeff_int, ConjPoly, NumPoly, RationalExpr, Var};

/// Largest condition number accepted by [`decompose_in_frame`].
pub const MAX_FRAME_CONDITION: f64 = 1e12;

/// First and second Wirtinger derivatives of the defining polynomial.
#[derive(Clone, Debug)]
pub struct RhoDerivatives {
    pub rho: ConjPoly,
    /// `d rho / dz1`, `d rho / dz2`
    pub d1: ConjPoly,
    pub d2: ConjPoly,
    /// `d rho / dzb1`, `d rho / dzb2`
    pub db1: ConjPoly,
    pub db2: ConjPoly,
    pub d11: ConjPoly,
    pub d12: ConjPoly,
    pub d1b1: ConjPoly,
    pub d1b2: ConjPoly,
    pub d2b1: ConjPoly,
    pub d2b2: ConjPoly,
}

impl RhoDerivatives {
    pub fn new(rho: &ConjPoly) -> Self {
        let d1 = rho.derivative(Var::Z1);
        let d2 = rho.derivative(Var::Z2);
        RhoDerivatives {
            rho: rho.clone(),
            d11: d1.derivative(Var::Z1),
            d12: d1.derivative(Var::Z2),
            d1b1: d1.derivative(Var::Zb1),
            d1b2: d1.derivative(Var::Zb2),
            d2b1: d2.derivative(Var::Zb1),
            d2b2: d2.derivative(Var::Zb2),
            db1: rho.derivative(Var::Zb1),
            db2: rho.derivative(Var::Zb2),
            d1,
            d2,
        }
    }
}

/// The fields `L`, `Lb`, `T` and the gradient-direction field `N`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub derivs: RhoDerivatives,
    pub l: VectorField,
    pub lb: VectorField,
    pub t: VectorField,
    pub n: VectorField,
    num: [NumPoly; 4],
}

/// Coefficients of a field in the basis `{L, Lb, T, N}`.
#[derive(Clone, Debug)]
pub struct FrameCoefficients {
    pub f1: RationalExpr,
    pub f2: RationalExpr,
    pub lambda: RationalExpr,
    pub normal: RationalExpr,
}

/// Pointwise coefficients of a field in the basis `{L, Lb, T, N}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub f1: Complex64,
    pub f2: Complex64,
    pub lambda: Complex64,
    pub normal_residual: Complex64,
}

/// Builds `L`, `Lb`, `T` from `rho`. Rejects `rho` whose `z1` derivatives
/// vanish identically, since they appear in every denominator.
pub fn tangential_frame(rho: &ConjPoly) -> Result<Frame> {
    let derivs = RhoDerivatives::new(rho);
    if derivs.d1.is_zero() || derivs.db1.is_zero() {
        return Err(Error::InvalidDomain(
            "d rho / dz1 and d rho / dzb1 must not vanish identically".into(),
        ));
    }
    let z = ConjPoly::zero;
    let d = &derivs;
    let l = VectorField::from_polys([-&d.d2, d.d1.clone(), z(), z()]);
    let lb = VectorField::from_polys([z(), z(), -&d.db2, d.db1.clone()]);
    let t = VectorField::from_polys([d.db1.clone(), z(), -&d.d1, z()]);
    let n = VectorField::from_polys([d.db1.clone(), d.db2.clone(), d.d1.clone(), d.d2.clone()]);
    let num = [d.d1.numeric(), d.d2.numeric(), d.db1.numeric(), d.db2.numeric()];
    Ok(Frame {
        derivs,
        l,
        lb,
        t,
        n,
        num,
    })
}

impl Frame {
    /// `(d rho/dz1, d rho/dz2, d rho/dzb1, d rho/dzb2)` at `z`.
    pub fn gradient_at(&self, z: C2) -> [Complex64; 4] {
        std::array::from_fn(|i| self.num[i].eval(z))
    }

    /// Symbolic coefficients of `x` in `{L, Lb, T, N}`, solved in closed form.
    ///
    /// With `A = r1 c1 + r2 c2`, `B = rb1 c3 + rb2 c4` and
    /// `G = r1 rb1 + r2 rb2`: `lambda = (A - B) / (2 r1 rb1)`,
    /// `mu = (A + B) / (2 G)`, `f1 = (c2 - mu rb2) / r1`,
    /// `f2 = (c4 - mu r2) / rb1`.
    pub fn decompose_symbolic(&self, x: &VectorField) -> Result<FrameCoefficients> {
        let d = &self.derivs;
        let [c1, c2, c3, c4] = &x.coeffs;
        let a = c1.mul_poly(&d.d1).add(&c2.mul_poly(&d.d2));
        let b = c3.mul_poly(&d.db1).add(&c4.mul_poly(&d.db2));
        let two = ConjPoly::constant(coeff_int(2, 0));
        let g = &(&d.d1 * &d.db1) + &(&d.d2 * &d.db2);
        let lambda = a.sub(&b).div_poly(&(&two * &(&d.d1 * &d.db1)))?;
        let normal = if a.add(&b).is_zero() {
            RationalExpr::zero()
        } else {
            a.add(&b).div_poly(&(&two * &g))?
        };
        let f1 = c2.sub(&normal.mul_poly(&d.db2)).div_poly(&d.d1)?;
        let f2 = c4.sub(&normal.mul_poly(&d.d2)).div_poly(&d.db1)?;
        Ok(FrameCoefficients {
            f1,
            f2,
            lambda,
            normal,
        })
    }

    /// `lambda_k` of `[L, M]` from `f2` and `lambda_{k-1}` of `M`, by the
    /// explicit five-term formula in the derivatives of `rho`.
    pub fn lambda_step_explicit(&self, f2: &RationalExpr, lambda_prev: &RationalExpr) -> Result<RationalExpr> {
        let d = &self.derivs;
        let mut out = RationalExpr::zero();
        if !lambda_prev.is_zero() {
            let t1 = lambda_prev
                .derivative(Var::Z2)
                .mul_poly(&d.d1)
                .sub(&lambda_prev.derivative(Var::Z1).mul_poly(&d.d2));
            let t2 = lambda_prev.mul_poly(&d.d12);
            let t3 = lambda_prev.mul_poly(&(&d.d2 * &d.d11)).div_poly(&d.d1)?;
            out = t1.add(&t2).sub(&t3);
        }
        if !f2.is_zero() {
            let levi = &(&(&(&d.d1b1 * &d.d2) * &d.db2) + &(&(&d.d2b2 * &d.d1) * &d.db1))
                - &(&(&(&d.d1b2 * &d.d2) * &d.db1) + &(&(&d.d2b1 * &d.d1) * &d.db2));
            let t4 = f2.mul_poly(&levi).div_poly(&(&d.d1 * &d.db1))?;
            out = out.add(&t4);
        }
        Ok(out)
    }
}

/// Solves `X(p) = f1 L + f2 Lb + lambda T + mu N` at one point.
pub fn decompose_in_frame(x: &VectorField, frame: &Frame, point: C2) -> Result<Decomposition> {
    let xv = x.eval(point)?;
    decompose_values(xv, frame, point)
}

pub(crate) fn decompose_values(xv: [Complex64; 4], frame: &Frame, point: C2) -> Result<Decomposition> {
    let [r1, r2, rb1, rb2] = frame.gradient_at(point);
    let zero = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        -r2,  zero, rb1,  rb1,
        r1,   zero, zero, rb2,
        zero, -rb2, -r1,  r1,
        zero, rb1,  zero, r2,
    );
    let sv = m.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_FRAME_CONDITION) {
        return Err(Error::SingularFrame { point, condition });
    }
    let rhs = Vector4::new(xv[0], xv[1], xv[2], xv[3]);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularFrame { point, condition })?;
    Ok(Decomposition {
        f1: sol[0],
        f2: sol[1],
        lambda: sol[2],
        normal_residual: sol[3],
    })
}

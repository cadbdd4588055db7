//! Elliptic branes as explicit products of theta functions.
//!
//! A brane is `pref * prod_f theta(arg_f)^{power_f}` where each argument is a
//! monomial in the equivariant parameters, `q`, `s` and `z`. Evaluation needs
//! the equivariant parameters of the model the brane was built for.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glsm::GlsmModel;
use crate::monomial::{cpow, Monomial};
use crate::qseries::{log_derivative_at_zero, theta, theta_scaled, theta_zero_index, QContext, Scaled};
use crate::rat::{self, Rat};

/// Relative distance below which a theta argument counts as sitting on a zero.
pub const ZERO_MATCH_REL: f64 = 1e-9;

/// `theta(const * prod a^{a_exponents} * q^{q_exponent} * s^{s_exponent} * z^{z_exponent})^{power}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaFactor {
    pub const_coeff: C64,
    #[serde(with = "rat::vec_as_string")]
    pub a_exponents: Vec<Rat>,
    #[serde(with = "rat::as_string")]
    pub q_exponent: Rat,
    #[serde(with = "rat::as_string")]
    pub s_exponent: Rat,
    pub z_exponent: i64,
    pub power: i64,
}

impl ThetaFactor {
    fn monomial(&self) -> Monomial {
        Monomial {
            coeff: self.const_coeff,
            a_exps: self.a_exponents.clone(),
            q_exp: self.q_exponent,
            s_exp: self.s_exponent,
            z_exp: self.z_exponent,
        }
    }

    pub fn arg(&self, equiv: &[C64], s: C64, z: C64, ctx: &QContext) -> C64 {
        self.monomial().eval(equiv, s, z, ctx)
    }

    /// `theta(arg(q s))^p / theta(arg(s))^p` as a monomial.
    fn shift_monomial(&self) -> Result<Monomial> {
        if !self.s_exponent.is_integer() {
            return Err(Error::Domain("s-shift of a factor with fractional s-exponent is not a monomial".into()));
        }
        let e = self.s_exponent.to_integer();
        let mut m = self.monomial();
        m.coeff = -m.coeff;
        let mut out = m.powi(-e);
        out.q_exp -= rat::rat(e * (e - 1), 2);
        Ok(out.powi(self.power))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BraneExpr {
    pub factors: Vec<ThetaFactor>,
    pub pref: Monomial,
}

impl BraneExpr {
    /// The constant brane `1` for a model with `n` coordinates.
    pub fn unit(n: usize) -> Self {
        Self { factors: Vec::new(), pref: Monomial::one(n) }
    }

    /// The zero brane.
    pub fn zero(n: usize) -> Self {
        Self { factors: Vec::new(), pref: Monomial::constant(C64::zero(), n) }
    }

    pub fn times(mut self, f: ThetaFactor) -> Self {
        self.factors.push(f);
        self
    }

    /// Image under `s -> 1/s`, `z -> 1/z`.
    pub fn mirrored(&self) -> BraneExpr {
        let flip = |f: &ThetaFactor| ThetaFactor { s_exponent: -f.s_exponent, z_exponent: -f.z_exponent, ..f.clone() };
        BraneExpr {
            factors: self.factors.iter().map(flip).collect(),
            pref: Monomial { s_exp: -self.pref.s_exp, z_exp: -self.pref.z_exp, ..self.pref.clone() },
        }
    }
}

/// Builds `theta(c * a^A * q^Q * s^S * z^Z)^power` for a model with `n` coordinates.
pub fn factor(n: usize, c: C64, a: &[(usize, Rat)], q: Rat, s: Rat, z: i64, power: i64) -> ThetaFactor {
    let mut a_exponents = vec![rat::zero(); n];
    for &(i, e) in a {
        a_exponents[i] += e;
    }
    ThetaFactor { const_coeff: c, a_exponents, q_exponent: q, s_exponent: s, z_exponent: z, power }
}

pub fn eval_brane(b: &BraneExpr, equiv: &[C64], s: C64, z: C64, ctx: &QContext) -> Result<C64> {
    Ok(eval_brane_scaled(b, equiv, s, z, ctx)?.value())
}

/// [`eval_brane`] without intermediate overflow.
pub fn eval_brane_scaled(b: &BraneExpr, equiv: &[C64], s: C64, z: C64, ctx: &QContext) -> Result<Scaled> {
    let mut v = Scaled::new(b.pref.eval(equiv, s, z, ctx));
    if v.is_zero() {
        return Ok(v);
    }
    for f in &b.factors {
        let (t, near) = theta_scaled(f.arg(equiv, s, z, ctx), ctx)?;
        if f.power < 0 && near <= ctx.tol_abs {
            return Err(Error::Pole(format!("denominator theta vanishes at s={s}, z={z}")));
        }
        for _ in 0..f.power.abs() {
            v = if f.power > 0 { v * t } else { v / t };
        }
    }
    Ok(v)
}

fn ipow(x: C64, p: i64) -> C64 {
    if p >= 0 {
        x.powi(p as i32)
    } else {
        x.inv().powi((-p) as i32)
    }
}

/// Monomial `M` with `B(q s, z) = M(s, z) B(s, z)`.
pub fn s_shift_factor(b: &BraneExpr) -> Result<Monomial> {
    let n = b.pref.a_exps.len();
    let mut m = Monomial::one(n);
    m.q_exp = b.pref.s_exp;
    for f in &b.factors {
        m = m.mul(&f.shift_monomial()?);
    }
    Ok(m)
}

/// Limit of `B(s, z)` as `s -> s0`, resolving factors that sit on theta zeros
/// through `theta(X(s)) ~ e X0 theta'(X0) (s - s0)/s0` with `X ~ s^e`.
pub fn limit_at(b: &BraneExpr, equiv: &[C64], s0: C64, z: C64, ctx: &QContext) -> Result<C64> {
    let mut v = b.pref.eval(equiv, s0, z, ctx);
    if v.is_zero() {
        return Ok(v);
    }
    let mut order = 0i64;
    for f in &b.factors {
        let x0 = f.arg(equiv, s0, z, ctx);
        let zero = if f.s_exponent.is_zero() { None } else { theta_zero_index(x0, ctx, ZERO_MATCH_REL) };
        match zero {
            Some(k) => {
                let slope = log_derivative_at_zero(k, ctx) * rat::to_f64(f.s_exponent);
                v *= ipow(slope, f.power);
                order += f.power;
            }
            None => {
                let t = theta(x0, ctx)?;
                if f.power < 0 && t.norm() <= ctx.tol_abs {
                    return Err(Error::Pole(format!("s-independent denominator vanishes at z={z}")));
                }
                v *= ipow(t, f.power);
            }
        }
    }
    match order.signum() {
        1 => Ok(C64::zero()),
        -1 => Err(Error::Pole(format!("brane has a pole of order {} at s={s0}", -order))),
        _ => Ok(v),
    }
}

/// The same limit by a numeric derivative ratio (central differences with
/// one Richardson step). Used to cross-check [`limit_at`].
pub fn limit_numeric(b: &BraneExpr, equiv: &[C64], s0: C64, z: C64, ctx: &QContext) -> Result<C64> {
    let num = |s: C64| -> Result<C64> {
        let mut v = b.pref.eval(equiv, s, z, ctx);
        for f in b.factors.iter().filter(|f| f.power > 0) {
            v *= ipow(theta(f.arg(equiv, s, z, ctx), ctx)?, f.power);
        }
        Ok(v)
    };
    let den = |s: C64| -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for f in b.factors.iter().filter(|f| f.power < 0) {
            v *= ipow(theta(f.arg(equiv, s, z, ctx), ctx)?, -f.power);
        }
        Ok(v)
    };
    let d0 = den(s0)?;
    if d0.norm() > ctx.tol_abs * 1e3 {
        return Ok(num(s0)? / d0);
    }
    let h = 1e-6 * s0.norm();
    let deriv = |g: &dyn Fn(C64) -> Result<C64>| -> Result<C64> {
        let cd = |h: f64| -> Result<C64> { Ok((g(s0 + h)? - g(s0 - h)?) / (2.0 * h)) };
        Ok((cd(h / 2.0)? * 4.0 - cd(h)?) / 3.0)
    };
    let dn = deriv(&num)?;
    let dd = deriv(&den)?;
    if dd.norm() <= ctx.tol_abs {
        return Err(Error::Degenerate(format!("higher-order degeneracy at s={s0}")));
    }
    Ok(dn / dd)
}

/// Limit of `B` at `s = root * a_k^{-1/D_k}`.
pub fn restrict_to_fixed_point(
    b: &BraneExpr,
    model: &GlsmModel,
    k: usize,
    root: C64,
    z: C64,
    ctx: &QContext,
) -> Result<C64> {
    let d = model.weights()[k];
    let s0 = root * cpow(model.equiv()[k], rat::rat(-1, d));
    limit_at(b, model.equiv(), s0, z, ctx)
}

/// Quadratic s-degree `sum power * s_exponent^2` of the factors.
pub fn quadratic_degree(b: &BraneExpr) -> Rat {
    b.factors.iter().map(|f| rat::int(f.power) * f.s_exponent * f.s_exponent).sum()
}

/// Degree accounting against `Theta(V_+)`: the quadratic s-degree matches
/// `sum_{D_i > 0} D_i^2`, exactly one factor couples `s` and `z`, and the
/// s-shift produces a single power of `z`.
pub fn check_grade_restriction(b: &BraneExpr, model: &GlsmModel) -> bool {
    let target: i64 = model.weights().iter().filter(|&&d| d > 0).map(|d| d * d).sum();
    if quadratic_degree(b) != rat::int(target) {
        return false;
    }
    let coupling = b.factors.iter().filter(|f| !f.s_exponent.is_zero() && f.z_exponent != 0).count();
    if coupling != 1 {
        return false;
    }
    matches!(s_shift_factor(b), Ok(m) if m.z_exp == 1)
}

/// `B * theta(s^{-1} z^{-1}) / theta(z^{-1})`.
pub fn wall_cross(b: &BraneExpr) -> BraneExpr {
    let n = b.pref.a_exps.len();
    let one = C64::new(1.0, 0.0);
    b.clone()
        .times(factor(n, one, &[], rat::zero(), rat::int(-1), -1, 1))
        .times(factor(n, one, &[], rat::zero(), rat::zero(), -1, -1))
}

fn hypersurface_shape(model: &GlsmModel) -> Result<(usize, i64)> {
    model
        .hypersurface_shape()
        .ok_or_else(|| Error::Shape("basis branes need unit positive weights and one negative weight".into()))
}

/// Geometric-phase basis brane attached to the fixed point `s = a_k^{-1}`:
/// `theta(q a_k s / z) / theta(q a_k / z) * prod_{i != k} theta(q a_i s)`.
pub fn geometric_basis_brane(model: &GlsmModel, k: usize) -> Result<BraneExpr> {
    let (n, _) = hypersurface_shape(model)?;
    if k >= n {
        return Err(Error::Shape(format!("fixed point index {k} out of range 0..{n}")));
    }
    let len = model.len();
    let one = C64::new(1.0, 0.0);
    let ak = [(k, rat::one())];
    let mut b = BraneExpr::unit(len)
        .times(factor(len, one, &ak, rat::one(), rat::one(), -1, 1))
        .times(factor(len, one, &ak, rat::one(), rat::zero(), -1, -1));
    for i in (0..n).filter(|&i| i != k) {
        b = b.times(factor(len, one, &[(i, rat::one())], rat::one(), rat::one(), 0, 1));
    }
    Ok(b)
}

/// A point of the `r`-torsion `zeta = exp(2 pi i m / r) q^{-l / r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TorsionLabel {
    pub m: i64,
    pub l: i64,
}

impl TorsionLabel {
    pub fn all(r: i64) -> Vec<TorsionLabel> {
        (0..r).flat_map(|m| (0..r).map(move |l| TorsionLabel { m, l })).collect()
    }

    pub fn zeta(&self, r: i64, ctx: &QContext) -> C64 {
        C64::from_polar(1.0, 2.0 * PI * self.m as f64 / r as f64) * ctx.q_pow(rat::rat(-self.l, r))
    }

    /// `zeta^{-1} a_N^{1/r}`, the point where the brane of this label is supported.
    pub fn point(&self, model: &GlsmModel, ctx: &QContext) -> Result<C64> {
        let (n, r) = hypersurface_shape(model)?;
        Ok(cpow(model.equiv()[n], rat::rat(1, r)) / self.zeta(r, ctx))
    }
}

/// Landau-Ginzburg basis brane
/// `theta(c s^{-1} z) / (theta(c z) theta(c s^{-1})) * theta(a_N s^{-r})`
/// with `c = zeta^{-1} a_N^{1/r}`.
pub fn lg_basis_brane(model: &GlsmModel, label: TorsionLabel) -> Result<BraneExpr> {
    let (n, r) = hypersurface_shape(model)?;
    if !(0..r).contains(&label.m) || !(0..r).contains(&label.l) {
        return Err(Error::Shape(format!("torsion label {label:?} out of range for r={r}")));
    }
    let len = model.len();
    let c = C64::from_polar(1.0, -2.0 * PI * label.m as f64 / r as f64);
    let an = [(n, rat::rat(1, r))];
    let ql = rat::rat(label.l, r);
    let one = C64::new(1.0, 0.0);
    Ok(BraneExpr::unit(len)
        .times(factor(len, c, &an, ql, rat::int(-1), 1, 1))
        .times(factor(len, c, &an, ql, rat::zero(), 1, -1))
        .times(factor(len, c, &an, ql, rat::int(-1), 0, -1))
        .times(factor(len, one, &[(n, rat::one())], rat::zero(), rat::int(-r), 0, 1)))
}

/// Restrictions of the geometric basis: entry `(k, j)` is `E^{(+,k)}` at `s = a_j^{-1}`.
pub fn geometric_restriction_matrix(model: &GlsmModel, z: C64, ctx: &QContext) -> Result<Vec<Vec<C64>>> {
    let (n, _) = hypersurface_shape(model)?;
    (0..n)
        .map(|k| {
            let b = geometric_basis_brane(model, k)?;
            (0..n).map(|j| limit_at(&b, model.equiv(), model.equiv()[j].inv(), z, ctx)).collect()
        })
        .collect()
}

/// Restrictions of the LG basis over all `r^2` torsion labels.
pub fn lg_restriction_matrix(model: &GlsmModel, z: C64, ctx: &QContext) -> Result<Vec<Vec<C64>>> {
    let (_, r) = hypersurface_shape(model)?;
    let labels = TorsionLabel::all(r);
    labels
        .iter()
        .map(|&zl| {
            let b = lg_basis_brane(model, zl)?;
            labels.iter().map(|xl| limit_at(&b, model.equiv(), xl.point(model, ctx)?, z, ctx)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glsm::Phase;
    use crate::qseries::phi;

    fn ctx() -> QContext {
        QContext::real(0.1).unwrap()
    }

    fn model(phase: Phase) -> GlsmModel {
        let eq = [0.3, 1.7, 2.9, 0.8].iter().map(|&t| C64::from_polar(1.0, t)).collect();
        GlsmModel::hypersurface(3, 2, eq, phase).unwrap()
    }

    fn th(x: C64) -> C64 {
        theta(x, &ctx()).unwrap()
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn num_theta_prime(x: C64) -> C64 {
        let h = 1e-5 * x.norm();
        (th(x + h) - th(x - h)) / (2.0 * h)
    }

    #[test]
    fn trivial_evaluations() {
        let c = ctx();
        let z = C64::new(0.2, 0.1);
        assert_eq!(eval_brane(&BraneExpr::unit(2), &[C64::new(1.0, 0.0); 2], z, z, &c).unwrap(), C64::new(1.0, 0.0));
        let one = C64::new(1.0, 0.0);
        let b = BraneExpr::unit(1).times(factor(1, one, &[], rat::zero(), rat::one(), 0, 1));
        assert_eq!(eval_brane(&b, &[one], one, z, &c).unwrap(), C64::new(0.0, 0.0));
        let inv = BraneExpr::unit(1).times(factor(1, one, &[], rat::zero(), rat::one(), 0, -1));
        assert!(matches!(eval_brane(&inv, &[one], one, z, &c), Err(Error::Pole(_))));
    }

    #[test]
    fn geometric_brane_recomposes() {
        let c = ctx();
        let m = model(Phase::Plus);
        let a = m.equiv();
        let (s, z) = (C64::new(0.7, -0.4), C64::new(-0.3, 0.9));
        for k in 0..3 {
            let b = geometric_basis_brane(&m, k).unwrap();
            let mut want = th(c.q() * a[k] * s / z) / th(c.q() * a[k] / z);
            for i in (0..3).filter(|&i| i != k) {
                want *= th(c.q() * a[i] * s);
            }
            assert!(rel(eval_brane(&b, a, s, z, &c).unwrap(), want) < 1e-12);
        }
    }

    #[test]
    fn shift_factor_of_single_theta() {
        let one = C64::new(1.0, 0.0);
        let b = BraneExpr::unit(1).times(factor(1, one, &[], rat::zero(), rat::one(), 0, 1));
        let m = s_shift_factor(&b).unwrap();
        assert_eq!(m.coeff, -one);
        assert_eq!(m.s_exp, rat::int(-1));
        assert_eq!((m.q_exp, m.z_exp), (rat::zero(), 0));

        let flat = BraneExpr::unit(1).times(factor(1, one, &[], rat::one(), rat::zero(), 1, 1));
        assert_eq!(s_shift_factor(&flat).unwrap(), Monomial::one(1));
    }

    #[test]
    fn shift_factor_of_basis_branes_is_numerically_exact() {
        let c = ctx();
        let m = model(Phase::Plus);
        let a = m.equiv();
        let pts = [(C64::new(0.6, 0.3), C64::new(0.2, -0.7)), (C64::new(-1.3, 0.4), C64::new(2.0, 1.0))];
        for k in 0..3 {
            let b = geometric_basis_brane(&m, k).unwrap();
            let sh = s_shift_factor(&b).unwrap();
            assert_eq!(sh.z_exp, 1);
            for &(s, z) in &pts {
                let lhs = eval_brane(&b, a, c.q() * s, z, &c).unwrap();
                let rhs = sh.eval(a, s, z, &c) * eval_brane(&b, a, s, z, &c).unwrap();
                assert!(rel(lhs, rhs) < 1e-11);
            }
        }
    }

    #[test]
    fn grade_restriction_examples() {
        let m = model(Phase::Plus);
        let one = C64::new(1.0, 0.0);
        let b = geometric_basis_brane(&m, 1).unwrap();
        assert!(check_grade_restriction(&b, &m));
        let raised = b.clone().times(factor(4, one, &[], rat::zero(), rat::one(), 0, 1));
        assert!(!check_grade_restriction(&raised, &m));
        assert!(!check_grade_restriction(&BraneExpr::unit(4), &m));
    }

    #[test]
    fn geometric_restrictions_match_display() {
        let c = ctx();
        let m = model(Phase::Plus);
        let a = m.equiv();
        let z = C64::from_polar(0.37, 1.1);
        let mat = geometric_restriction_matrix(&m, z, &c).unwrap();
        for k in 0..3 {
            let mut want = th(c.q() / z) / th(c.q() * a[k] / z);
            for i in (0..3).filter(|&i| i != k) {
                want *= th(a[k] / a[i]);
            }
            assert!(rel(mat[k][k], want) < 1e-12);
            for j in (0..3).filter(|&j| j != k) {
                assert!(mat[k][j].norm() < c.tol_abs);
            }
        }
    }

    #[test]
    fn lg_restriction_at_own_point() {
        let c = ctx();
        let m = model(Phase::Minus);
        let r = 2;
        let z = C64::from_polar(3.1, 0.5);
        let an_root = cpow(m.equiv()[3], rat::rat(1, r));
        for label in TorsionLabel::all(r) {
            let b = lg_basis_brane(&m, label).unwrap();
            let zeta = label.zeta(r, &c);
            let zr = zeta.powi(r as i32);
            let closed = (r as f64) * zr * th(z) / th(an_root / zeta * z) * num_theta_prime(zr) / num_theta_prime(C64::new(1.0, 0.0));
            let p = label.point(&m, &c).unwrap();
            let analytic = limit_at(&b, m.equiv(), p, z, &c).unwrap();
            let numeric = limit_numeric(&b, m.equiv(), p, z, &c).unwrap();
            assert!(rel(analytic, closed) < 1e-8, "{label:?}: {analytic} vs {closed}");
            assert!(rel(numeric, analytic) < 1e-8, "{label:?}: {numeric} vs {analytic}");
        }
    }

    #[test]
    fn lg_restrictions_vanish_elsewhere() {
        let c = ctx();
        let m = model(Phase::Minus);
        let mat = lg_restriction_matrix(&m, C64::from_polar(3.1, 0.5), &c).unwrap();
        assert_eq!(mat.len(), 4);
        for (i, row) in mat.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    assert!(v.norm() > c.tol_abs);
                } else {
                    assert!(v.norm() < c.tol_abs);
                }
            }
        }
    }

    #[test]
    fn theta_prime_at_inverse_powers() {
        let c = ctx();
        let phi2 = phi(c.q(), &c).powi(2);
        for n in 0..=3i64 {
            let x = c.q_powi(-n);
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            let closed = phi2 * c.q_powi(-n * (n - 1) / 2) * sign;
            assert!(rel(num_theta_prime(x), closed) < 1e-9, "n={n}");
        }
    }

    #[test]
    fn restriction_without_zero_factors_is_evaluation() {
        let c = ctx();
        let m = model(Phase::Plus);
        let b = geometric_basis_brane(&m, 0).unwrap();
        let z = C64::new(0.3, 0.2);
        let root = C64::from_polar(1.0, 0.3);
        let s = root / m.equiv()[2];
        let direct = eval_brane(&b, m.equiv(), s, z, &c).unwrap();
        assert!(rel(restrict_to_fixed_point(&b, &m, 2, root, z, &c).unwrap(), direct) < 1e-14);
    }

    #[test]
    fn geometric_brane_vanishes_at_other_fixed_points_exactly() {
        let c = ctx();
        let m = model(Phase::Plus);
        let b = geometric_basis_brane(&m, 0).unwrap();
        let one = C64::new(1.0, 0.0);
        let v = restrict_to_fixed_point(&b, &m, 1, one, C64::new(0.3, 0.2), &c).unwrap();
        assert!(v.norm() < c.tol_abs);
    }

    #[test]
    fn wall_cross_shape_and_inverse() {
        let c = ctx();
        let m = model(Phase::Plus);
        let a = m.equiv();
        let b = geometric_basis_brane(&m, 2).unwrap();
        let w = wall_cross(&b);
        assert_eq!(w.factors.iter().filter(|f| f.z_exponent != 0).count(), 4);
        let (s, z) = (C64::new(0.4, 0.8), C64::new(-0.6, 0.3));
        let mut want = th(s.inv() / z) * th(c.q() * a[2] * s / z) / (th(z.inv()) * th(c.q() * a[2] / z));
        for ai in &a[..2] {
            want *= th(c.q() * ai * s);
        }
        let got = eval_brane(&w, a, s, z, &c).unwrap();
        assert!(rel(got, want) < 1e-12);
        let back = got * th(z.inv()) / th(s.inv() / z);
        assert!(rel(back, eval_brane(&b, a, s, z, &c).unwrap()) < 1e-12);

        let ratio = s_shift_factor(&w).unwrap().eval(a, s, z, &c) / s_shift_factor(&b).unwrap().eval(a, s, z, &c);
        let pair = th(s.inv() / (c.q() * z)) / th(s.inv() / z);
        assert!(rel(ratio, pair) < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let eq = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0)];
        let m = GlsmModel::new(vec![2, 1, -1], vec![rat::zero(); 3], eq, Phase::Plus).unwrap();
        assert!(matches!(geometric_basis_brane(&m, 0), Err(Error::Shape(_))));
        assert!(matches!(lg_basis_brane(&m, TorsionLabel { m: 0, l: 0 }), Err(Error::Shape(_))));
        assert!(geometric_basis_brane(&model(Phase::Plus), 3).is_err());
        assert!(lg_basis_brane(&model(Phase::Minus), TorsionLabel { m: 2, l: 0 }).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = model(Phase::Minus);
        let b = lg_basis_brane(&m, TorsionLabel { m: 1, l: 1 }).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        let back: BraneExpr = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}

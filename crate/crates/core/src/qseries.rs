//! Truncated q-products: `phi`, `theta`, the finite Pochhammer symbol and the
//! closed-form quasi-periodicity factor of `theta`.
//!
//! Everything here is a pure function of its arguments and a [`QContext`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Numerical regime: the nome `q`, the number of factors kept in infinite
/// products, and comparison tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct QContext {
    q: C64,
    ln_q: C64,
    product_terms: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

pub const DEFAULT_PRODUCT_TERMS: usize = 60;
pub const DEFAULT_TOL_ABS: f64 = 1e-13;
pub const DEFAULT_TOL_REL: f64 = 1e-10;

impl QContext {
    pub fn new(q: C64, product_terms: usize) -> Result<Self> {
        Self::with_tolerances(q, product_terms, DEFAULT_TOL_ABS, DEFAULT_TOL_REL)
    }

    pub fn with_tolerances(q: C64, product_terms: usize, tol_abs: f64, tol_rel: f64) -> Result<Self> {
        let m = q.norm();
        if !(m > 0.0 && m < 1.0) || !m.is_finite() {
            return Err(Error::InvalidQ(m));
        }
        if product_terms == 0 {
            return Err(Error::Config("productTerms must be at least 1".into()));
        }
        if !(tol_abs > 0.0 && tol_rel > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(Self { q, ln_q: q.ln(), product_terms, tol_abs, tol_rel })
    }

    /// Real nome with default truncation and tolerances.
    pub fn real(q: f64) -> Result<Self> {
        Self::new(C64::new(q, 0.0), DEFAULT_PRODUCT_TERMS)
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn product_terms(&self) -> usize {
        self.product_terms
    }

    /// `q^e` on the principal branch; integer exponents use repeated products.
    pub fn q_pow(&self, e: Rat) -> C64 {
        if *e.denom() == 1 {
            self.q_powi(*e.numer())
        } else {
            self.q_powf(*e.numer() as f64 / *e.denom() as f64)
        }
    }

    pub fn q_powi(&self, n: i64) -> C64 {
        if n >= 0 {
            self.q.powi(n as i32)
        } else {
            self.q.inv().powi((-n) as i32)
        }
    }

    pub fn q_powf(&self, e: f64) -> C64 {
        if self.q.im == 0.0 && self.q.re > 0.0 {
            C64::new(self.q.re.powf(e), 0.0)
        } else {
            (self.ln_q * e).exp()
        }
    }

    /// Bound on `|phi_truncated(x) / phi(x) - 1|` for `|x| <= x_abs`.
    ///
    /// Uses `|log prod_{i>=P}(1 - q^i x)| <= 2 sum_{i>=P} |q|^i |x|` once every
    /// dropped factor satisfies `|q^i x| <= 1/2`; returns infinity otherwise.
    pub fn phi_tail_bound(&self, x_abs: f64) -> f64 {
        let qa = self.q.norm();
        let lead = qa.powi(self.product_terms as i32) * x_abs;
        if lead > 0.5 {
            return f64::INFINITY;
        }
        let log_bound = 2.0 * lead / (1.0 - qa);
        log_bound.exp_m1()
    }
}

/// `prod_{i=0}^{P-1} (1 - q^i x)`.
pub fn phi(x: C64, ctx: &QContext) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    let mut qi = C64::new(1.0, 0.0);
    for _ in 0..ctx.product_terms {
        acc *= C64::new(1.0, 0.0) - qi * x;
        qi *= ctx.q;
    }
    acc
}

/// `theta(x) = phi(x) phi(q/x)`.
pub fn theta(x: C64, ctx: &QContext) -> Result<C64> {
    if x == C64::new(0.0, 0.0) {
        return Err(Error::Domain("theta(0) is undefined".into()));
    }
    Ok(phi(x, ctx) * phi(ctx.q / x, ctx))
}

/// Arguments this many `q`-steps or fewer from the unit circle are evaluated
/// by direct products; farther ones are first moved back by the shift identity.
const DIRECT_SHIFT_LIMIT: i64 = 8;

/// `|q|^e exp(i e arg q)` for integer `e`, in scaled form.
fn scaled_q_powi(e: i64, ctx: &QContext) -> Scaled {
    let l = e as f64 * ctx.q.norm().log2();
    let exp = l.floor();
    let mantissa = C64::from_polar(2f64.powf(l - exp), e as f64 * ctx.q.arg());
    Scaled { mantissa, exp: exp as i64 }
}

/// `theta(x)` without overflow for large or small `|x|`, together with
/// `|theta|` at the reduced point `x q^{-n}` near the unit circle, which
/// measures how close `x` is to a zero.
pub fn theta_scaled(x: C64, ctx: &QContext) -> Result<(Scaled, f64)> {
    let n = (x.norm().ln() / ctx.q.norm().ln()).round();
    if !n.is_finite() || n.abs() <= DIRECT_SHIFT_LIMIT as f64 {
        let t = theta(x, ctx)?;
        return Ok((Scaled::new(t), t.norm()));
    }
    let n = n as i64;
    let reduced = x * ctx.q_powi(-n);
    let t = theta(reduced, ctx)?;
    let shift = scaled_q_powi(-(n * (n - 1) / 2), ctx);
    let v = shift * t * scaled_powi(-reduced, -n);
    Ok((v, t.norm()))
}

/// `phi(x)` without overflow for large `|x|`, via `phi(x) = theta(x) / phi(q/x)`,
/// together with the zero measure of [`theta_scaled`].
pub fn phi_scaled(x: C64, ctx: &QContext) -> Result<(Scaled, f64)> {
    let n = (x.norm().ln() / ctx.q.norm().ln()).round();
    if !n.is_finite() || n >= -(DIRECT_SHIFT_LIMIT as f64) {
        let p = phi(x, ctx);
        return Ok((Scaled::new(p), p.norm()));
    }
    let (t, near) = theta_scaled(x, ctx)?;
    Ok((t / phi(ctx.q / x, ctx), near))
}

fn scaled_powi(x: C64, n: i64) -> Scaled {
    let mut acc = Scaled::new(C64::new(1.0, 0.0));
    let step = Scaled::new(if n >= 0 { x } else { x.inv() });
    for _ in 0..n.abs() {
        acc = acc * step;
    }
    acc
}

/// Finite q-Pochhammer symbol; negative orders are reciprocals of shifted
/// positive ones.
pub fn pochhammer(x: C64, n: i64, ctx: &QContext) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    if n >= 0 {
        let mut acc = one;
        let mut qk = one;
        for _ in 0..n {
            acc *= one - qk * x;
            qk *= ctx.q;
        }
        return Ok(acc);
    }
    let mut den = one;
    for k in 1..=(-n) {
        let f = one - ctx.q_powi(-k) * x;
        if f.norm() <= ctx.tol_abs {
            return Err(Error::Pole(format!("pochhammer({x}, {n}) has a vanishing factor at k={k}")));
        }
        den *= f;
    }
    Ok(one / den)
}

/// `theta(q^n x) / theta(x) = (-x)^{-n} q^{-n(n-1)/2}` without any products.
pub fn theta_shift_factor(x: C64, n: i64, ctx: &QContext) -> Result<C64> {
    if x == C64::new(0.0, 0.0) {
        return Err(Error::Domain("theta_shift_factor at x = 0".into()));
    }
    let mx = -x;
    let p = if n >= 0 { mx.inv().powi(n as i32) } else { mx.powi((-n) as i32) };
    Ok(p * ctx.q_powi(-(n * (n - 1) / 2)))
}

/// `X0 theta'(X0)` at the zero `X0 = q^k` of theta.
///
/// Follows from `theta(q^k x) = (-x)^{-k} q^{-k(k-1)/2} theta(x)` and
/// `theta'(1) = -phi(q)^2`.
pub fn log_derivative_at_zero(k: i64, ctx: &QContext) -> C64 {
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    -ctx.q_powi(-(k * (k - 1) / 2)) * phi(ctx.q, ctx).powi(2) * sign
}

/// If `x` lies within relative distance `rel` of a theta zero `q^k`, return `k`.
pub fn theta_zero_index(x: C64, ctx: &QContext, rel: f64) -> Option<i64> {
    if x.norm() == 0.0 {
        return None;
    }
    let k = (x.norm().ln() / ctx.q.norm().ln()).round();
    if !k.is_finite() || k.abs() > 1e6 {
        return None;
    }
    let k = k as i64;
    let target = ctx.q_powi(k);
    if (x / target - 1.0).norm() <= rel {
        Some(k)
    } else {
        None
    }
}

/// Complex number as `mantissa * 2^exp`, for products whose partial values
/// leave the `f64` range even though the final value does not.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: C64,
    pub exp: i64,
}

impl Scaled {
    pub fn new(x: C64) -> Self {
        Scaled { mantissa: x, exp: 0 }.normalized()
    }

    fn normalized(self) -> Self {
        let n = self.mantissa.norm();
        if n == 0.0 || !n.is_finite() {
            return self;
        }
        let e = n.log2().floor() as i64;
        Scaled { mantissa: self.mantissa * 2f64.powi(-e as i32), exp: self.exp + e }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.norm() == 0.0
    }

    /// Back to `f64`; underflows to zero and overflows to infinity.
    pub fn value(self) -> C64 {
        let e = self.exp.clamp(-2200, 2200) as i32;
        // split to avoid overflowing 2^e before the mantissa is applied
        self.mantissa * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }
}

impl std::ops::Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled { mantissa: self.mantissa * o.mantissa, exp: self.exp + o.exp }.normalized()
    }
}

impl std::ops::Div for Scaled {
    type Output = Scaled;
    fn div(self, o: Scaled) -> Scaled {
        Scaled { mantissa: self.mantissa / o.mantissa, exp: self.exp - o.exp }.normalized()
    }
}

impl std::ops::Mul<C64> for Scaled {
    type Output = Scaled;
    fn mul(self, x: C64) -> Scaled {
        self * Scaled::new(x)
    }
}

impl std::ops::Div<C64> for Scaled {
    type Output = Scaled;
    fn div(self, x: C64) -> Scaled {
        self / Scaled::new(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext {
        QContext::real(q).unwrap()
    }

    fn long_phi(x: C64, q: f64) -> C64 {
        (0..200).fold(C64::new(1.0, 0.0), |acc, i| acc * (1.0 - x * q.powi(i)))
    }

    #[test]
    fn rejects_nome_outside_unit_disc() {
        assert!(matches!(QContext::real(1.5), Err(Error::InvalidQ(_))));
        assert!(QContext::real(1.0).is_err());
        assert!(QContext::real(0.0).is_err());
        assert!(QContext::new(C64::new(0.1, 0.0), 0).is_err());
    }

    #[test]
    fn phi_trivial_values() {
        let c = ctx(0.1);
        assert_eq!(phi(C64::new(0.0, 0.0), &c), C64::new(1.0, 0.0));
        assert_eq!(phi(C64::new(1.0, 0.0), &c), C64::new(0.0, 0.0));
    }

    #[test]
    fn phi_matches_long_product() {
        let c = ctx(0.1);
        let x = C64::new(0.5, 0.0);
        assert!((phi(x, &c) - long_phi(x, 0.1)).norm() < 1e-13);
    }

    #[test]
    fn theta_values() {
        let c = ctx(0.1);
        assert_eq!(theta(C64::new(1.0, 0.0), &c).unwrap(), C64::new(0.0, 0.0));
        assert!(matches!(theta(C64::new(0.0, 0.0), &c), Err(Error::Domain(_))));
        let x = C64::new(0.3, 0.1);
        let oracle = long_phi(x, 0.1) * long_phi(0.1 / x, 0.1);
        assert!((theta(x, &c).unwrap() - oracle).norm() < 1e-13 * oracle.norm().max(1.0));
        let sym = theta(0.1 / x, &c).unwrap() - theta(x, &c).unwrap();
        assert!(sym.norm() < 1e-13);
    }

    #[test]
    fn pochhammer_values() {
        let c = ctx(0.5);
        let x = C64::new(0.7, -0.2);
        assert_eq!(pochhammer(x, 0, &c).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(pochhammer(C64::new(2.0, 0.0), 2, &c).unwrap(), C64::new(0.0, 0.0));
        let c = ctx(0.1);
        let direct = |x: C64, n: i64| (0..n).fold(C64::new(1.0, 0.0), |a, k| a * (1.0 - x * 0.1f64.powi(k as i32)));
        let lhs = pochhammer(x, 7, &c).unwrap();
        let rhs = pochhammer(x, 3, &c).unwrap() * pochhammer(x * 1e-3, 4, &c).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((lhs - direct(x, 7)).norm() < 1e-12);
    }

    #[test]
    fn pochhammer_negative_order() {
        let c = ctx(0.1);
        let x = C64::new(0.3, 0.4);
        let v = pochhammer(x, -2, &c).unwrap();
        let oracle = 1.0 / ((1.0 - x * 10.0) * (1.0 - x * 100.0));
        assert!((v - oracle).norm() < 1e-14);
        assert!(matches!(pochhammer(C64::new(0.01, 0.0), -2, &c), Err(Error::Pole(_))));
    }

    #[test]
    fn theta_shift_factor_values() {
        let c = ctx(0.1);
        let x = C64::new(0.7, 0.0);
        assert_eq!(theta_shift_factor(x, 0, &c).unwrap(), C64::new(1.0, 0.0));
        assert!((theta_shift_factor(x, 1, &c).unwrap() + x.inv()).norm() < 1e-15);
        let ratio = theta(x * 1e-3, &c).unwrap() / theta(x, &c).unwrap();
        let closed = theta_shift_factor(x, 3, &c).unwrap();
        assert!((ratio - closed).norm() < 1e-11 * closed.norm());
        assert!(theta_shift_factor(C64::new(0.0, 0.0), 2, &c).is_err());
    }

    #[test]
    fn theta_derivative_at_zeros() {
        let c = ctx(0.1);
        for k in -3..=3i32 {
            let x0 = c.q_powi(k as i64);
            let h = 1e-6 * x0.norm();
            let d = (theta(x0 + h, &c).unwrap() - theta(x0 - h, &c).unwrap()) / (2.0 * h);
            let expected = log_derivative_at_zero(k as i64, &c);
            assert!(((x0 * d) - expected).norm() < 1e-7 * expected.norm(), "k={k}");
        }
    }

    #[test]
    fn zero_index_detection() {
        let c = ctx(0.1);
        assert_eq!(theta_zero_index(C64::new(100.0, 0.0), &c, 1e-9), Some(-2));
        assert_eq!(theta_zero_index(C64::new(0.01, 1e-14), &c, 1e-9), Some(2));
        assert_eq!(theta_zero_index(C64::new(0.0, 0.01), &c, 1e-9), None);
    }

    #[test]
    fn tail_bound_covers_truncation() {
        let q = 0.3;
        let short = QContext::new(C64::new(q, 0.0), 20).unwrap();
        let x = C64::new(2.0, 1.0);
        let err = (phi(x, &short) / long_phi(x, q) - 1.0).norm();
        let bound = short.phi_tail_bound(x.norm());
        assert!(err <= bound && bound < 1e-9, "err {err:e} bound {bound:e}");
        assert!(ctx(0.3).phi_tail_bound(5.0) < 1e-29);
    }

    #[test]
    fn scaled_products_survive_overflow() {
        let big = C64::new(1e200, 1e200);
        let v = Scaled::new(big) * big / big / big;
        assert!((v.value() - 1.0).norm() < 1e-14);
        assert_eq!((Scaled::new(C64::new(1e-300, 0.0)) / big / big).value(), C64::new(0.0, 0.0));
    }

    #[test]
    fn scaled_theta_and_phi_match_direct_products() {
        for q in [C64::new(0.1, 0.0), C64::new(0.2, 0.15)] {
            let c = QContext::new(q, 60).unwrap();
            for n in [-14i64, -11, -9, 9, 11, 14] {
                let x = C64::from_polar(1.3, 0.7) * c.q_powi(n);
                let direct = theta(x, &c).unwrap();
                let (v, near) = theta_scaled(x, &c).unwrap();
                assert!((v.value() / direct - 1.0).norm() < 1e-12, "theta n={n}");
                assert!(near > 0.1);
                if n < 0 {
                    let (p, _) = phi_scaled(x, &c).unwrap();
                    assert!((p.value() / phi(x, &c) - 1.0).norm() < 1e-12, "phi n={n}");
                }
            }
        }
    }

    #[test]
    fn scaled_theta_beyond_double_range() {
        let c = ctx(0.1);
        let x = C64::from_polar(1.0, 0.4) * c.q_powi(-40);
        let (v, _) = theta_scaled(x, &c).unwrap();
        let (w, _) = theta_scaled(c.q() * x, &c).unwrap();
        // theta(q x) = -theta(x) / x
        let ratio = (w / v).value();
        assert!((ratio * -x - 1.0).norm() < 1e-12);
        assert!(v.exp > 1024);
        let (_, near) = theta_scaled(c.q_powi(-40), &c).unwrap();
        assert!(near < 1e-13);
    }
}

use num_complex::Complex64 as C64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::qseries::QContext;
use crate::rat::{self, Rat};

/// `coeff * prod a_i^{a_exps[i]} * q^{q_exp} * s^{s_exp} * z^{z_exp}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Monomial {
    pub coeff: C64,
    #[serde(with = "rat::vec_as_string")]
    pub a_exps: Vec<Rat>,
    #[serde(with = "rat::as_string")]
    pub q_exp: Rat,
    #[serde(with = "rat::as_string")]
    pub s_exp: Rat,
    pub z_exp: i64,
}

/// Principal-branch power; integer exponents avoid the logarithm.
pub fn cpow(x: C64, e: Rat) -> C64 {
    if e.is_integer() {
        let n = e.to_integer();
        if n >= 0 {
            x.powi(n as i32)
        } else {
            x.inv().powi((-n) as i32)
        }
    } else {
        (x.ln() * rat::to_f64(e)).exp()
    }
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self::constant(C64::new(1.0, 0.0), n)
    }

    pub fn constant(c: C64, n: usize) -> Self {
        Self { coeff: c, a_exps: vec![rat::zero(); n], q_exp: rat::zero(), s_exp: rat::zero(), z_exp: 0 }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            coeff: self.coeff * o.coeff,
            a_exps: self.a_exps.iter().zip(&o.a_exps).map(|(x, y)| x + y).collect(),
            q_exp: self.q_exp + o.q_exp,
            s_exp: self.s_exp + o.s_exp,
            z_exp: self.z_exp + o.z_exp,
        }
    }

    pub fn powi(&self, n: i64) -> Monomial {
        let r = Rat::from_integer(n);
        let coeff = if n >= 0 { self.coeff.powi(n as i32) } else { self.coeff.inv().powi((-n) as i32) };
        Monomial {
            coeff,
            a_exps: self.a_exps.iter().map(|x| x * r).collect(),
            q_exp: self.q_exp * r,
            s_exp: self.s_exp * r,
            z_exp: self.z_exp * n,
        }
    }

    /// Value with the `s`- and `z`-free part only.
    pub fn eval_const(&self, equiv: &[C64], ctx: &QContext) -> C64 {
        let mut v = self.coeff * ctx.q_pow(self.q_exp);
        for (a, e) in equiv.iter().zip(&self.a_exps) {
            if !e.is_zero() {
                v *= cpow(*a, *e);
            }
        }
        v
    }

    pub fn eval(&self, equiv: &[C64], s: C64, z: C64, ctx: &QContext) -> C64 {
        let mut v = self.eval_const(equiv, ctx);
        if !self.s_exp.is_zero() {
            v *= cpow(s, self.s_exp);
        }
        if self.z_exp != 0 {
            v *= cpow(z, Rat::from_integer(self.z_exp));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_branch_roots() {
        let x = C64::new(-4.0, 0.0);
        let r = cpow(x, rat::rat(1, 2));
        assert!((r - C64::new(0.0, 2.0)).norm() < 1e-14);
        assert_eq!(cpow(C64::new(2.0, 0.0), rat::int(-2)), C64::new(0.25, 0.0));
    }

    #[test]
    fn products_and_powers_evaluate_consistently() {
        let ctx = QContext::real(0.2).unwrap();
        let equiv = [C64::from_polar(1.0, 0.3), C64::new(0.5, 0.2)];
        let m = Monomial {
            coeff: C64::new(0.0, 2.0),
            a_exps: vec![rat::rat(1, 2), rat::int(-1)],
            q_exp: rat::rat(3, 2),
            s_exp: rat::int(2),
            z_exp: -1,
        };
        let (s, z) = (C64::new(0.3, 0.9), C64::new(-1.2, 0.4));
        let v = m.eval(&equiv, s, z, &ctx);
        assert!((m.mul(&m).eval(&equiv, s, z, &ctx) - v * v).norm() < 1e-13 * v.norm_sqr());
        assert!((m.powi(-1).eval(&equiv, s, z, &ctx) * v - 1.0).norm() < 1e-13);
    }
}

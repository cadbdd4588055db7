//! Quantum q-difference operators `sum coeff z^p T_z^e` and residual checks.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::central_charge::{eval_central_charge_shifted, CentralChargeSeries};
use crate::error::{Error, Result};
use crate::glsm::{GlsmModel, Phase};
use crate::monomial::{cpow, Monomial};
use crate::qseries::{pochhammer, theta, QContext};
use crate::rat::{self, Rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QdeTerm {
    /// Monomial in `q` and the equivariant parameters; its `s` and `z` parts are unused.
    pub coeff: Monomial,
    pub z_power: i64,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDifferenceOperator {
    pub terms: Vec<QdeTerm>,
}

type TermKey = (Vec<Rat>, Rat, i64, i64);

/// Polynomial in `T_z` and `z` with monomial coefficients, merged by monomial.
#[derive(Clone, Default)]
struct Poly(BTreeMap<TermKey, C64>);

impl Poly {
    fn one(n: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert((vec![rat::zero(); n], rat::zero(), 0, 0), C64::new(1.0, 0.0));
        Poly(m)
    }

    /// `1 - q^{q_exp} a_i^{a_exp} T^shift`.
    fn binomial(n: usize, i: usize, a_exp: i64, q_exp: Rat, shift: i64) -> Self {
        let mut p = Self::one(n);
        let mut a = vec![rat::zero(); n];
        a[i] = rat::int(a_exp);
        p.0.insert((a, q_exp, 0, shift), C64::new(-1.0, 0.0));
        p
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out: BTreeMap<TermKey, C64> = BTreeMap::new();
        for ((a1, q1, z1, e1), c1) in &self.0 {
            for ((a2, q2, z2, e2), c2) in &o.0 {
                let a: Vec<Rat> = a1.iter().zip(a2).map(|(x, y)| x + y).collect();
                *out.entry((a, q1 + q2, z1 + z2, e1 + e2)).or_default() += c1 * c2;
            }
        }
        out.retain(|_, c| c.norm() != 0.0);
        Poly(out)
    }

    fn times_z(self, c: f64) -> Poly {
        Poly(self.0.into_iter().map(|((a, q, z, e), v)| ((a, q, z + 1, e), v * c)).collect())
    }

    fn add(mut self, o: Poly) -> Poly {
        for (k, v) in o.0 {
            *self.0.entry(k).or_default() += v;
        }
        self.0.retain(|_, c| c.norm() != 0.0);
        self
    }
}

impl QDifferenceOperator {
    /// `prod_{D_i>0} prod_{k=1}^{D_i} (1 - q^{k - q_i/2 - D_i} a_i T^{D_i})
    ///  - z prod_{D_i<0} prod_{k=0}^{-D_i-1} (1 - q^{k + q_i/2} a_i^{-1} T^{-D_i})`
    /// in the frame of `phase`; for `-` the frame variable is `1/z`, so shifts
    /// and powers of `z` are negated on the way back.
    pub fn for_model(model: &GlsmModel, phase: Phase) -> Self {
        let n = model.len();
        let sgn = phase.sign();
        let mut p1 = Poly::one(n);
        let mut p2 = Poly::one(n);
        for i in 0..n {
            let d = model.weights()[i] * sgn;
            let half = model.r_charges()[i] / rat::int(2);
            if d > 0 {
                for k in 1..=d {
                    p1 = p1.mul(&Poly::binomial(n, i, 1, rat::int(k - d) - half, d));
                }
            } else {
                for k in 0..(-d) {
                    p2 = p2.mul(&Poly::binomial(n, i, -1, rat::int(k) + half, -d));
                }
            }
        }
        let poly = p1.add(p2.times_z(-1.0));
        let terms = poly
            .0
            .into_iter()
            .map(|((a_exps, q_exp, z, e), c)| QdeTerm {
                coeff: Monomial { coeff: c, a_exps, q_exp, s_exp: rat::zero(), z_exp: 0 },
                z_power: z * sgn,
                shift: e * sgn,
            })
            .collect();
        Self { terms }
    }

    pub fn identity(n: usize) -> Self {
        Self { terms: vec![QdeTerm { coeff: Monomial::one(n), z_power: 0, shift: 0 }] }
    }

    /// Spread between the largest and smallest shift.
    pub fn order(&self) -> i64 {
        let max = self.terms.iter().map(|t| t.shift).max().unwrap_or(0);
        let min = self.terms.iter().map(|t| t.shift).min().unwrap_or(0);
        max - min
    }

    pub fn shifts(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.terms.iter().map(|t| t.shift).collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// `sum coeff z^p f(q^e z)`.
pub fn apply_operator(
    l: &QDifferenceOperator,
    equiv: &[C64],
    f: &dyn Fn(C64) -> Result<C64>,
    z: C64,
    ctx: &QContext,
) -> Result<C64> {
    apply_operator_shifted(l, equiv, &|e| f(ctx.q_powi(e) * z), z, ctx)
}

/// `sum coeff z^p g(e)`, where `g(e)` is the function at `q^e z`.
pub fn apply_operator_shifted(
    l: &QDifferenceOperator,
    equiv: &[C64],
    g: &dyn Fn(i64) -> Result<C64>,
    z: C64,
    ctx: &QContext,
) -> Result<C64> {
    let mut cache: BTreeMap<i64, C64> = BTreeMap::new();
    let mut acc = C64::new(0.0, 0.0);
    for t in &l.terms {
        let fv = match cache.get(&t.shift) {
            Some(v) => *v,
            None => {
                let v = g(t.shift)?;
                cache.insert(t.shift, v);
                v
            }
        };
        acc += t.coeff.eval_const(equiv, ctx) * cpow(z, rat::int(t.z_power)) * fv;
    }
    Ok(acc)
}

/// Relative residual of `T_z[P(z) z^{floor beta}] = q^beta c^{-1} P(z) z^{floor beta}`
/// with `P(z) = theta(z^{-1}) / theta(q^{-{beta}} c z^{-1})`.
pub fn verify_prefactor_relation(beta: Rat, c: C64, z: C64, ctx: &QContext) -> Result<f64> {
    let n = rat::floor(beta);
    let f = rat::frac(beta);
    let g = |z: C64| -> Result<C64> {
        let den = theta(ctx.q_pow(-f) * c / z, ctx)?;
        if den.norm() <= ctx.tol_abs {
            return Err(Error::Pole(format!("prefactor pole at z={z}")));
        }
        Ok(theta(z.inv(), ctx)? / den * cpow(z, rat::int(n)))
    };
    let lhs = g(ctx.q() * z)?;
    let rhs = ctx.q_pow(beta) / c * g(z)?;
    Ok((lhs - rhs).norm() / rhs.norm().max(1e-300))
}

/// Largest residual `|L Z|` over the samples, relative to the larger of
/// `max |Z(q^e z)|` and the summed magnitudes of the terms of `L Z`, with `L`
/// the operator of `phase`. Fails if any shifted evaluation is only asymptotic.
pub fn qde_residual(
    model: &GlsmModel,
    phase: Phase,
    series: &CentralChargeSeries,
    samples: &[C64],
    ctx: &QContext,
) -> Result<f64> {
    let l = QDifferenceOperator::for_model(model, phase);
    let mut worst: f64 = 0.0;
    for &z in samples {
        let mut local: f64 = 0.0;
        let g = |e: i64| -> Result<C64> {
            let v = eval_central_charge_shifted(series, z, e, ctx)?;
            if !v.converged {
                return Err(Error::Unreliable(format!("series is only asymptotic at q^{e} z, z={z}")));
            }
            Ok(v.value)
        };
        for e in l.shifts() {
            local = local.max(g(e)?.norm());
        }
        // The terms cancel against each other, so their total size bounds the rounding error.
        let mut terms: f64 = 0.0;
        for t in &l.terms {
            terms += (t.coeff.eval_const(model.equiv(), ctx) * cpow(z, rat::int(t.z_power)) * g(t.shift)?).norm();
        }
        let r = apply_operator_shifted(&l, model.equiv(), &g, z, ctx)?.norm() / local.max(terms).max(1e-300);
        if r.is_nan() {
            return Err(Error::Overflow(format!("operator residual at z={z} is not a number")));
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `z prod_{D_i<0} (V_i;q)_{-D_i} / prod_{D_i>0} (q V_i^{-1};q)_{D_i}` with
/// `V_i = a_i^{-1} s^{-D_i} q^{q_i/2}`: the expected ratio
/// `(Gamma_q E)(q s) / (Gamma_q E)(s)` for a brane obeying grade restriction.
pub fn s_shift_ratio(model: &GlsmModel, s: C64, z: C64, ctx: &QContext) -> Result<C64> {
    let mut out = z;
    for i in 0..model.len() {
        let d = model.weights()[i];
        let v = model.u(i, s) * ctx.q_pow(model.r_charges()[i] / rat::int(2));
        if d < 0 {
            out *= pochhammer(v, -d, ctx)?;
        } else {
            out /= pochhammer(ctx.q() / v, d, ctx)?;
        }
    }
    Ok(out)
}

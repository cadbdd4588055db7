//! Central-charge series.
//!
//! A series is a sum of components, one per fixed point and fractional degree
//! class. Each component is `P_b(x) * sum_n c_n x^n` with
//! `P_b(x) = theta(x^{-1}) / theta(b^{-1} x^{-1})`, where `x = z` in the `+`
//! phase and `x = 1/z` in the `-` phase. The base is stored as the pair
//! `(prefactor_arg c, frac_shift f)` with `b = q^f / c`.
//!
//! Two independent constructions are provided: [`central_charge_series`] from
//! numeric residues of the solid-torus integrand, and [`pairing_series`] from
//! the H-function, the orbifold Chern character and the localized Euler
//! pairing. The closed forms for the hypersurface family serve as oracles.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::branes::{limit_at, s_shift_factor, wall_cross, BraneExpr, TorsionLabel};
use crate::error::{Error, Result};
use crate::glsm::{self, GlsmModel, Phase, Sector};
use crate::integrals::{self, RESIDUE_NODES};
use crate::monomial::cpow;
use crate::qseries::{phi, pochhammer, theta, theta_shift_factor, QContext};
use crate::rat::{self, Rat};

/// One term `mult * a^{a_exps} s^{s_exp} w^{w_exp}` of a level structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelTerm {
    pub a_exps: Vec<i64>,
    pub s_exp: i64,
    pub w_exp: i64,
    pub mult: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStructure {
    pub terms: Vec<LevelTerm>,
}

impl LevelStructure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `V^dual` restricted to the positive side of `phase`:
    /// `sum a_i^{-1} s^{-D_i} w^{-q_i/2}`. Needs even R-charges on that side.
    pub fn dual_side(model: &GlsmModel, phase: Phase) -> Result<Self> {
        let n = model.len();
        let mut terms = Vec::new();
        for i in model.side(phase) {
            let half = model.r_charges()[i] / rat::int(2);
            if !half.is_integer() {
                return Err(Error::Model(format!("R-charge of coordinate {i} is not even")));
            }
            let mut a_exps = vec![0; n];
            a_exps[i] = -1;
            terms.push(LevelTerm { a_exps, s_exp: -model.weights()[i], w_exp: -half.to_integer(), mult: 1 });
        }
        Ok(Self { terms })
    }

    fn y(&self, t: &LevelTerm, equiv: &[C64], s: C64) -> C64 {
        let mut y = cpow(s, rat::int(t.s_exp));
        for (a, &e) in equiv.iter().zip(&t.a_exps) {
            if e != 0 {
                y *= cpow(*a, rat::int(e));
            }
        }
        y
    }
}

fn sign_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 }
}

fn ipow(x: C64, p: i64) -> C64 {
    cpow(x, rat::int(p))
}

/// `(-1)^{sigma_R(beta)}` with `sigma_R(beta) = sum R floor(m beta - n)`.
pub fn level_sign(r: &LevelStructure, beta: Rat) -> f64 {
    let sigma: i64 = r.terms.iter().map(|t| t.mult * rat::floor(rat::int(t.s_exp) * beta - rat::int(t.w_exp))).sum();
    sign_pow(sigma)
}

/// Determinant of the pushforward of `R` along a degree-`beta` teardrop:
/// `(-1)^sigma prod [x in Z](-Y)^R (theta(Y q^{-x}) / theta(Y q^{{-x}}))^R`
/// with `Y = a^l s^m` and `x = m beta - n`. The theta ratio is taken in closed
/// form.
pub fn level_det_factor(r: &LevelStructure, beta: Rat, equiv: &[C64], s: C64, ctx: &QContext) -> Result<C64> {
    let mut v = C64::new(level_sign(r, beta), 0.0);
    for t in &r.terms {
        let y = r.y(t, equiv, s);
        let x = rat::int(t.s_exp) * beta - rat::int(t.w_exp);
        if x.is_integer() {
            v *= ipow(-y, t.mult);
        }
        let base = y * ctx.q_pow(rat::frac(-x));
        v *= ipow(theta_shift_factor(base, rat::floor(-x), ctx)?, t.mult);
    }
    Ok(v)
}

/// Gamma-class level monomial `prod_{terms with g(v)^m = 1} (-Y)^{-R}`.
pub fn gamma_hat_level_factor(r: &LevelStructure, v: &Sector, equiv: &[C64], s: C64) -> C64 {
    let mut out = C64::new(1.0, 0.0);
    for t in &r.terms {
        if (v.c * rat::int(t.s_exp)).is_integer() {
            out *= ipow(-r.y(t, equiv, s), -t.mult);
        }
    }
    out
}

/// The degree-`beta` summand of the level-`R` H-function without its
/// z-prefactor, at `s`. Uses the model's weights as stored.
///
/// For coordinates of age zero with `d_i(beta)` a nonnegative integer the
/// quotient `(1 - U_i) / phi(q^{-d} U_i)` is evaluated as
/// `1 / ((q^{-d} U_i; q)_d phi(q U_i))`, which stays finite at `U_i = 1`.
pub fn hk_coefficient(model: &GlsmModel, beta: Rat, r: &LevelStructure, s: C64, ctx: &QContext) -> Result<C64> {
    let v = glsm::sector_of_degree(model, beta);
    let equiv = model.equiv();
    let mut out = if r.terms.is_empty() {
        C64::new(1.0, 0.0)
    } else {
        level_sign(r, beta) * level_det_factor(r, beta, equiv, s, ctx)? * gamma_hat_level_factor(r, &v, equiv, s)
    };
    for i in 0..model.len() {
        let u = model.u(i, s);
        let d = glsm::d_of(model, i, beta);
        let age_zero = glsm::age(model, &v, i).is_zero();
        if age_zero && d.is_integer() && d >= rat::zero() {
            let dd = d.to_integer();
            let den = pochhammer(u * ctx.q_powi(-dd), dd, ctx)? * phi(ctx.q() * u, ctx);
            out /= checked(den, "H-function denominator", ctx)?;
        } else {
            let den = checked(phi(u * ctx.q_pow(-d), ctx), "H-function denominator", ctx)?;
            out /= den;
            if age_zero {
                out *= C64::new(1.0, 0.0) - u;
            }
        }
    }
    Ok(out)
}

fn checked(x: C64, what: &str, ctx: &QContext) -> Result<C64> {
    if x.norm() <= ctx.tol_abs {
        Err(Error::Pole(format!("{what} vanishes")))
    } else {
        Ok(x)
    }
}

/// Orbifold Chern character of `b` on sector `v`: the limit of `b` at `q^c s`.
pub fn chern_restriction(b: &BraneExpr, v: &Sector, equiv: &[C64], s: C64, z: C64, ctx: &QContext) -> Result<C64> {
    limit_at(b, equiv, ctx.q_pow(v.c) * s, z, ctx)
}

/// A fixed point `s = exp(2 pi i m / D_i) a_i^{-1/D_i}` on the positive side
/// of the model's weights as stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub i: usize,
    pub m: i64,
    pub s: C64,
}

pub fn fixed_points(model: &GlsmModel, i: usize) -> Vec<FixedPoint> {
    let d = model.weights()[i];
    assert!(d > 0, "fixed points live on positive weights");
    let base = cpow(model.equiv()[i], rat::rat(-1, d));
    (0..d)
        .map(|m| FixedPoint { i, m, s: C64::from_polar(1.0, 2.0 * PI * m as f64 / d as f64) * base })
        .collect()
}

/// Weight `1 / (D_i prod_{j != i fixed in v} (1 - U_j(s)))` of a fixed point.
pub fn pairing_weight(model: &GlsmModel, v: &Sector, p: &FixedPoint, gap: f64) -> Result<C64> {
    let mut den = C64::new(model.weights()[p.i] as f64, 0.0);
    for &j in v.fixed.iter().filter(|&&j| j != p.i) {
        let f = C64::new(1.0, 0.0) - model.u(j, p.s);
        if f.norm() <= gap {
            return Err(Error::Degenerate(format!("fixed points of coordinates {} and {j} collide", p.i)));
        }
        den *= f;
    }
    Ok(den.inv())
}

/// Localized Euler pairing over the model's phase:
/// `sum_v sum_{fixed points} f(v, s) / (D_i prod_{j != i fixed} (1 - U_j))`.
pub fn pair_orbifold_euler(
    model: &GlsmModel,
    f: &dyn Fn(&Sector, C64) -> Result<C64>,
    gap: f64,
) -> Result<C64> {
    let frame = model.frame();
    let mut total = C64::new(0.0, 0.0);
    for v in glsm::box_sectors(&frame) {
        for i in frame.side(Phase::Plus).into_iter().filter(|&i| v.is_fixed(i)) {
            for p in fixed_points(&frame, i) {
                total += f(&v, p.s)? * pairing_weight(&frame, &v, &p, gap)?;
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentKey {
    /// Coordinate index of the fixed point.
    pub k: usize,
    /// Root-of-unity label of the fixed point.
    pub m: i64,
    #[serde(with = "rat::as_string")]
    pub frac_shift: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Component {
    pub key: ComponentKey,
    pub prefactor_arg: C64,
    pub coeffs: BTreeMap<i64, C64>,
}

impl Component {
    /// `b = q^f / c`.
    pub fn base(&self, ctx: &QContext) -> C64 {
        ctx.q_pow(self.key.frac_shift) / self.prefactor_arg
    }

    /// `theta(x^{-1}) / theta(q^{-f} c x^{-1})`.
    pub fn prefactor(&self, x: C64, ctx: &QContext) -> Result<C64> {
        let num = theta(x.inv(), ctx)?;
        let den = theta(self.base(ctx).inv() / x, ctx)?;
        if den.norm() <= ctx.tol_abs {
            return Err(Error::Pole(format!("prefactor denominator vanishes at x={x}")));
        }
        Ok(num / den)
    }

    /// The same function written over the base `b q^steps`, using
    /// `P_{bq}(x) = -q b x P_b(x)`.
    pub fn rebase(&self, steps: i64, ctx: &QContext) -> Component {
        let mut coeffs = self.coeffs.clone();
        let mut b = self.base(ctx);
        let mut c = self.prefactor_arg;
        for _ in 0..steps.max(0) {
            let f = -ctx.q() * b;
            coeffs = coeffs.into_iter().map(|(n, v)| (n - 1, v / f)).collect();
            b *= ctx.q();
            c /= ctx.q();
        }
        for _ in 0..(-steps).max(0) {
            b /= ctx.q();
            c *= ctx.q();
            let f = -ctx.q() * b;
            coeffs = coeffs.into_iter().map(|(n, v)| (n + 1, v * f)).collect();
        }
        Component { key: self.key.clone(), prefactor_arg: c, coeffs }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CentralChargeSeries {
    /// `+`: the series variable is `z`; `-`: it is `1/z`.
    pub direction: Phase,
    pub components: Vec<Component>,
}

impl CentralChargeSeries {
    fn from_map(direction: Phase, map: BTreeMap<ComponentKey, (C64, BTreeMap<i64, C64>)>) -> Self {
        let components = map
            .into_iter()
            .map(|(key, (prefactor_arg, coeffs))| Component { key, prefactor_arg, coeffs })
            .collect();
        Self { direction, components }
    }

    pub fn variable(&self, z: C64) -> C64 {
        match self.direction {
            Phase::Plus => z,
            Phase::Minus => z.inv(),
        }
    }

    /// Rows `(component id, n, re, im)`.
    pub fn rows(&self) -> Vec<(usize, i64, f64, f64)> {
        let mut out = Vec::new();
        for (id, c) in self.components.iter().enumerate() {
            for (&n, v) in &c.coeffs {
                out.push((id, n, v.re, v.im));
            }
        }
        out
    }

    /// Component whose base equals `b q^steps` for some integer `steps`, with that `steps`.
    pub fn find_by_base(&self, b: C64, ctx: &QContext) -> Option<(usize, i64)> {
        self.components.iter().enumerate().find_map(|(i, c)| {
            let ratio = c.base(ctx) / b;
            let steps = (ratio.norm().ln() / ctx.q().norm().ln()).round();
            if !steps.is_finite() {
                return None;
            }
            let steps = steps as i64;
            ((ratio / ctx.q_powi(steps) - 1.0).norm() < 1e-9).then_some((i, steps))
        })
    }
}

/// Reference point on the unit circle for reading off coefficients.
const X_REF_ANGLES: [f64; 3] = [0.737_1, 2.113_7, -1.291_3];

fn reference_point(bases: &[C64], ctx: &QContext) -> Result<C64> {
    'outer: for &ang in &X_REF_ANGLES {
        let x = C64::from_polar(1.0, ang);
        for b in bases {
            if theta(b.inv() / x, ctx)?.norm() < 1e-6 || theta(x.inv(), ctx)?.norm() < 1e-6 {
                continue 'outer;
            }
        }
        return Ok(x);
    }
    Err(Error::Degenerate("no usable reference point for coefficient extraction".into()))
}

fn prefactor_at(b: C64, x: C64, ctx: &QContext) -> Result<C64> {
    Ok(theta(x.inv(), ctx)? / theta(b.inv() / x, ctx)?)
}

/// Model and brane in the frame of the model's phase.
fn framed(model: &GlsmModel, b: &BraneExpr) -> (GlsmModel, BraneExpr) {
    match model.phase() {
        Phase::Plus => (model.clone(), b.clone()),
        Phase::Minus => (model.mirrored(), b.mirrored()),
    }
}

fn key_for(k: usize, m: i64, beta: Rat) -> ComponentKey {
    ComponentKey { k, m, frac_shift: rat::frac(beta) }
}

/// Central-charge series of `b` from numeric residues of
/// `ds/s Gamma_q E` over the pole lattice of the model's phase.
pub fn central_charge_series(model: &GlsmModel, b: &BraneExpr, max_beta: Rat, ctx: &QContext) -> Result<CentralChargeSeries> {
    let (frame, fb) = framed(model, b);
    let poles = integrals::enumerate_poles(&frame, Phase::Plus, max_beta, ctx);
    let bases: Vec<C64> = poles.iter().map(|p| p.location / ctx.q_powi(rat::floor(p.beta))).collect();
    let x_ref = reference_point(&bases, ctx)?;
    let guard: Vec<C64> = integrals::enumerate_poles(&frame, Phase::Minus, max_beta + rat::one(), ctx)
        .into_iter()
        .map(|p| p.location)
        .chain(poles.iter().map(|p| p.location))
        .collect();
    let integrand = |s: C64| -> Result<C64> {
        Ok(integrals::integrand(&frame, &fb, s, x_ref, ctx)? / s)
    };
    let mut map = BTreeMap::new();
    for (p, base) in poles.iter().zip(&bases) {
        let radius = integrals::residue_radius(p.location, &guard);
        let res = integrals::numeric_residue(&integrand, p.location, radius, RESIDUE_NODES, ctx)?;
        let n = rat::floor(p.beta);
        let coeff = res / (prefactor_at(*base, x_ref, ctx)? * ipow(x_ref, n));
        let c = ctx.q_pow(rat::frac(p.beta)) / *base;
        let entry = map.entry(key_for(p.k, p.m, p.beta)).or_insert_with(|| (c, BTreeMap::new()));
        *entry.1.entry(n).or_insert(C64::zero()) += coeff;
    }
    Ok(CentralChargeSeries::from_map(model.phase(), map))
}

/// Central-charge series of `b` from the pairing of the level-`R`
/// H-function with the orbifold Chern character of the brane.
///
/// The degree-`beta` Chern character is obtained from the restriction of
/// `E_+ = wall_cross(b)` on the sector of `beta`, transported by whole
/// `s`-shifts; the prefactor of the brane is moved onto the canonical base
/// with `P_{b q^n}(x) = P_b(x) x^n (-1)^n q^{n(n+1)/2} b^n`.
pub fn pairing_series(
    model: &GlsmModel,
    b: &BraneExpr,
    r: &LevelStructure,
    max_beta: Rat,
    gap: f64,
    ctx: &QContext,
) -> Result<CentralChargeSeries> {
    let (frame, fb) = framed(model, b);
    let e_plus = wall_cross(&fb);
    let shift = s_shift_factor(&e_plus)?;
    let equiv = frame.equiv();
    let classes = glsm::effective_classes(&frame, max_beta);
    let mut all_bases = Vec::new();
    for &beta in &classes {
        for i in frame.side(Phase::Plus) {
            for p in fixed_points(&frame, i) {
                all_bases.push(p.s * ctx.q_pow(rat::frac(beta)));
            }
        }
    }
    let x_ref = reference_point(&all_bases, ctx)?;
    let mut map = BTreeMap::new();
    for &beta in &classes {
        let v = glsm::sector_of_degree(&frame, beta);
        let n = rat::floor(beta);
        for i in frame.side(Phase::Plus).into_iter().filter(|&i| v.is_fixed(i)) {
            for p in fixed_points(&frame, i) {
                let base = p.s * ctx.q_pow(v.c);
                let weight = pairing_weight(&frame, &v, &p, gap)?;
                let hk = hk_coefficient(&frame, beta, r, p.s, ctx)?;
                let mut ch = chern_restriction(&e_plus, &v, equiv, p.s, x_ref, ctx)?;
                for t in 0..n {
                    ch *= shift.eval(equiv, base * ctx.q_powi(t), x_ref, ctx);
                }
                let transport = sign_pow(n) * ctx.q_powi(n * (n + 1) / 2) * ipow(base, n);
                let coeff = weight * hk * ch * transport;
                let c = ctx.q_pow(v.c) / base;
                let entry = map.entry(key_for(i, p.m, beta)).or_insert_with(|| (c, BTreeMap::new()));
                *entry.1.entry(n).or_insert(C64::zero()) += coeff;
            }
        }
    }
    Ok(CentralChargeSeries::from_map(model.phase(), map))
}

fn hypersurface(model: &GlsmModel) -> Result<(usize, i64)> {
    model
        .hypersurface_shape()
        .ok_or_else(|| Error::Shape("closed forms need the hypersurface family".into()))
}

/// Closed form for the geometric basis brane at `s = a_k^{-1}`:
/// `a_k phi(q)^{-1} sum_n z^n / (q;q)_n prod_{i != k} phi(q^{n+1} a_i/a_k)
/// / phi(q^{rn+1} a_N^{-1} a_k^{-r})` over the prefactor
/// `theta(z^{-1}) / theta(a_k z^{-1})`.
pub fn geometric_closed_form(model: &GlsmModel, k: usize, max_n: i64, ctx: &QContext) -> Result<CentralChargeSeries> {
    let (n_plus, r) = hypersurface(model)?;
    let a = model.equiv();
    let ak = a[k];
    let an = a[n_plus];
    let q = ctx.q();
    let phi_q = phi(q, ctx);
    let mut coeffs = BTreeMap::new();
    for n in 0..=max_n {
        let mut c = ak / phi_q / pochhammer(q, n, ctx)?;
        for i in (0..n_plus).filter(|&i| i != k) {
            c *= phi(ctx.q_powi(n + 1) * a[i] / ak, ctx);
        }
        c /= checked(phi(ctx.q_powi(r * n + 1) / an / ipow(ak, r), ctx), "closed-form denominator", ctx)?;
        coeffs.insert(n, c);
    }
    let key = ComponentKey { k, m: 0, frac_shift: rat::zero() };
    Ok(CentralChargeSeries { direction: Phase::Plus, components: vec![Component { key, prefactor_arg: ak, coeffs }] })
}

/// Closed form for the LG basis brane of torsion label `zeta`:
/// `-phi(q)^{-2} sum_{n>0} z^{-n} phi(zeta^r q^{rn}) / prod_{i<=N_+} phi(zeta a_i^{-1} a_N^{-1/r} q^n)`
/// over the prefactor `theta(z) / theta(zeta^{-1} a_N^{1/r} z)`.
pub fn lg_example_series(model: &GlsmModel, label: TorsionLabel, max_n: i64, ctx: &QContext) -> Result<CentralChargeSeries> {
    let (n_plus, r) = hypersurface(model)?;
    let a = model.equiv();
    let zeta = label.zeta(r, ctx);
    let an_root = cpow(a[n_plus], rat::rat(1, r));
    let phi_q2 = phi(ctx.q(), ctx).powi(2);
    let mut coeffs = BTreeMap::new();
    for n in 1..=max_n {
        let mut c = -phi(ipow(zeta, r) * ctx.q_powi(r * n), ctx) / phi_q2;
        for &ai in &a[..n_plus] {
            c /= checked(phi(zeta / ai / an_root * ctx.q_powi(n), ctx), "closed-form denominator", ctx)?;
        }
        coeffs.insert(n, c);
    }
    let key = ComponentKey { k: n_plus, m: label.m, frac_shift: rat::zero() };
    let prefactor_arg = an_root / zeta;
    Ok(CentralChargeSeries { direction: Phase::Minus, components: vec![Component { key, prefactor_arg, coeffs }] })
}

/// Value of a series and whether every component passed the ratio test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: C64,
    pub converged: bool,
}

/// `sum_components P_b(x) sum_n c_n x^n`. A component whose last three
/// nonzero terms do not decrease geometrically is treated as asymptotic and
/// summed up to its smallest term.
pub fn eval_central_charge(z_series: &CentralChargeSeries, z: C64, ctx: &QContext) -> Result<SeriesValue> {
    eval_central_charge_shifted(z_series, z, 0, ctx)
}

/// The series at `q^e z`, with each prefactor taken at `z` and moved by
/// `P_b(q^k x) = b^k P_b(x)`. Theta itself is never evaluated at the shifted
/// point, which would overflow for large `|e|`.
pub fn eval_central_charge_shifted(z_series: &CentralChargeSeries, z: C64, e: i64, ctx: &QContext) -> Result<SeriesValue> {
    let x = z_series.variable(z);
    let k = match z_series.direction {
        Phase::Plus => e,
        Phase::Minus => -e,
    };
    let xs = x * ctx.q_powi(k);
    let mut value = C64::zero();
    let mut converged = true;
    for comp in &z_series.components {
        let terms: Vec<(i64, C64)> = comp.coeffs.iter().map(|(&n, &c)| (n, c * ipow(xs, n))).collect();
        let nonzero: Vec<f64> = terms.iter().map(|t| t.1.norm()).filter(|&m| m > 0.0).collect();
        if nonzero.is_empty() {
            continue;
        }
        let ok = nonzero.len() < 3 || {
            let l = nonzero.len();
            let (t0, t1, t2) = (nonzero[l - 3], nonzero[l - 2], nonzero[l - 1]);
            t1 < t0 && t2 < t1 && t2 <= ctx.tol_rel * nonzero.iter().cloned().fold(0.0, f64::max)
        };
        let sum: C64 = if ok {
            terms.iter().map(|t| t.1).sum()
        } else {
            converged = false;
            let cut = terms
                .iter()
                .enumerate()
                .filter(|(_, t)| t.1.norm() > 0.0)
                .min_by(|a, b| a.1 .1.norm().total_cmp(&b.1 .1.norm()))
                .map(|(i, _)| i)
                .unwrap_or(terms.len() - 1);
            terms[..=cut].iter().map(|t| t.1).sum()
        };
        value += comp.prefactor(x, ctx)? * ipow(comp.base(ctx), k) * sum;
    }
    if !value.is_finite() {
        return Err(Error::Overflow(format!("series value at q^{e} z, z={z}, is not finite")));
    }
    Ok(SeriesValue { value, converged })
}

/// Degrees covered by both truncations.
fn common_range(a: &Component, b: &Component) -> (i64, i64) {
    let lo = |c: &Component| c.coeffs.keys().next().cloned().unwrap_or(0);
    let hi = |c: &Component| c.coeffs.keys().next_back().cloned().unwrap_or(-1);
    (lo(a).min(lo(b)), hi(a).min(hi(b)))
}

/// Largest coefficient discrepancy between two series after aligning
/// components by base, over the degrees both truncations cover; components
/// missing on one side count as zero.
/// Returns `(max absolute difference, largest coefficient magnitude)`.
pub fn compare_series(a: &CentralChargeSeries, b: &CentralChargeSeries, ctx: &QContext) -> (f64, f64) {
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut used = vec![false; b.components.len()];
    for ca in &a.components {
        scale = scale.max(ca.max_abs_coeff());
        match b.find_by_base(ca.base(ctx), ctx) {
            Some((j, steps)) => {
                used[j] = true;
                let cb = b.components[j].rebase(-steps, ctx);
                scale = scale.max(cb.max_abs_coeff());
                let (lo, hi) = common_range(ca, &cb);
                for n in lo..=hi {
                    let va = ca.coeffs.get(&n).cloned().unwrap_or_default();
                    let vb = cb.coeffs.get(&n).cloned().unwrap_or_default();
                    diff = diff.max((va - vb).norm());
                }
            }
            None => diff = diff.max(ca.max_abs_coeff()),
        }
    }
    for (j, cb) in b.components.iter().enumerate() {
        if !used[j] {
            scale = scale.max(cb.max_abs_coeff());
            diff = diff.max(cb.max_abs_coeff());
        }
    }
    (diff, scale)
}

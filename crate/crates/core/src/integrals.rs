//! The solid-torus integral `(1/2 pi i) \oint ds/s Gamma_q(s) E(s, z)`:
//! the q-Gamma factor, its pole lattices, small-circle residues, residue sums
//! in both directions and trapezoid quadrature on `|s| = delta`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::branes::{eval_brane_scaled, BraneExpr};
use crate::error::{Error, Result};
use crate::glsm::{GlsmModel, Phase};
use crate::monomial::cpow;
use crate::qseries::{phi_scaled, QContext, Scaled};
use crate::rat::{self, Rat};

/// Default relative radius of the residue circles.
pub const RESIDUE_RADIUS_REL: f64 = 1e-2;
pub const RESIDUE_NODES: usize = 128;

/// `1 / prod_i phi(a_i^{-1} s^{-D_i} q^{q_i/2})`.
pub fn gamma_q(model: &GlsmModel, s: C64, ctx: &QContext) -> Result<C64> {
    Ok(gamma_q_scaled(model, s, ctx)?.value())
}

pub fn gamma_q_scaled(model: &GlsmModel, s: C64, ctx: &QContext) -> Result<Scaled> {
    let mut v = Scaled::new(C64::new(1.0, 0.0));
    for i in 0..model.len() {
        let x = model.u(i, s) * ctx.q_pow(model.r_charges()[i] / rat::int(2));
        let (p, near) = phi_scaled(x, ctx)?;
        if near <= ctx.tol_abs {
            return Err(Error::Pole(format!("Gamma_q has a pole at s={s}")));
        }
        v = v / p;
    }
    Ok(v)
}

/// `Gamma_q(s) B(s, z)`, multiplied in scaled form so that large brane
/// factors can cancel small Gamma factors.
pub fn integrand(model: &GlsmModel, b: &BraneExpr, s: C64, z: C64, ctx: &QContext) -> Result<C64> {
    let g = gamma_q_scaled(model, s, ctx)?;
    let e = eval_brane_scaled(b, model.equiv(), s, z, ctx)?;
    Ok((g * e).value())
}

/// One simple pole of `Gamma_q`: `t = exp(2 pi i m / D_k) a_k^{-1/D_k} q^beta`
/// in the frame of `phase`, with `s = t` for `+` and `s = 1/t` for `-`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleSpec {
    pub location: C64,
    pub k: usize,
    #[serde(with = "rat::as_string")]
    pub beta: Rat,
    pub m: i64,
    pub order: u32,
    pub phase: Phase,
}

pub fn enumerate_poles(model: &GlsmModel, phase: Phase, max_beta: Rat, ctx: &QContext) -> Vec<PoleSpec> {
    let mut out = Vec::new();
    if max_beta < rat::zero() {
        return out;
    }
    let sgn = phase.sign();
    for k in model.side(phase) {
        let d = model.weights()[k] * sgn;
        let half_q = model.r_charges()[k] / rat::int(2);
        let base = cpow(model.equiv()[k], rat::rat(-1, d));
        let mut j = 0;
        loop {
            let beta = (rat::int(j) + half_q) / rat::int(d);
            if beta > max_beta {
                break;
            }
            for m in 0..d {
                let t = C64::from_polar(1.0, 2.0 * PI * m as f64 / d as f64) * base * ctx.q_pow(beta);
                let location = if phase == Phase::Plus { t } else { t.inv() };
                out.push(PoleSpec { location, k, beta, m, order: 1, phase });
            }
            j += 1;
        }
    }
    out
}

/// `(1/2 pi i) \oint_{|s - s0| = r} f ds` by the `M`-point trapezoid rule,
/// checked against `2M` points.
pub fn numeric_residue(
    f: &dyn Fn(C64) -> Result<C64>,
    s0: C64,
    r: f64,
    m: usize,
    ctx: &QContext,
) -> Result<C64> {
    let (coarse, scale_c) = circle_sum(f, s0, r, m, 0.0)?;
    let (odd, scale_o) = circle_sum(f, s0, r, m, 0.5)?;
    let fine = (coarse + odd) * 0.5;
    let scale = scale_c.max(scale_o) * r;
    let diff = (fine - coarse).norm();
    // below the smallest normal double the comparison is rounding noise
    if diff > ctx.tol_rel * fine.norm() + 1e-13 * scale + f64::MIN_POSITIVE {
        return Err(Error::NoConvergence(format!(
            "residue at {s0} changed by {diff:e} when doubling to {} nodes",
            2 * m
        )));
    }
    Ok(fine)
}

fn circle_sum(f: &dyn Fn(C64) -> Result<C64>, s0: C64, r: f64, m: usize, offset: f64) -> Result<(C64, f64)> {
    let mut acc = C64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    for i in 0..m {
        let u = C64::from_polar(1.0, 2.0 * PI * (i as f64 + offset) / m as f64);
        let v = f(s0 + u * r)?;
        if !v.is_finite() {
            return Err(Error::Overflow(format!("integrand is not finite near {s0}")));
        }
        scale = scale.max(v.norm());
        acc += v * u * r;
    }
    Ok((acc / m as f64, scale))
}

/// Largest `|s|` over the `+` lattice and smallest `|s|` over the `-` lattice.
pub fn pole_moduli_extremes(model: &GlsmModel, ctx: &QContext) -> (f64, f64) {
    let radius = |phase: Phase, k: usize| {
        let d = (model.weights()[k] * phase.sign()) as f64;
        let beta = rat::to_f64(model.r_charges()[k]) / (2.0 * d);
        let t = model.equiv()[k].norm().powf(-1.0 / d) * ctx.q().norm().powf(beta);
        if phase == Phase::Plus { t } else { 1.0 / t }
    };
    let inner = model.side(Phase::Plus).into_iter().map(|k| radius(Phase::Plus, k)).fold(0.0, f64::max);
    let outer = model.side(Phase::Minus).into_iter().map(|k| radius(Phase::Minus, k)).fold(f64::INFINITY, f64::min);
    (inner, outer)
}

/// Geometric mean of the two lattices' facing radii.
pub fn default_delta(model: &GlsmModel, ctx: &QContext) -> Result<f64> {
    let (inner, outer) = pole_moduli_extremes(model, ctx);
    if inner >= outer {
        return Err(Error::Contour(format!(
            "no annulus separates the pole lattices ({inner} >= {outer})"
        )));
    }
    Ok((inner * outer).sqrt())
}

/// `(1/2 pi i) \oint_{|s| = delta} ds/s Gamma_q E` by the trapezoid rule on
/// `M` and `2M` nodes; returns the `2M` value.
pub fn contour_integral(
    model: &GlsmModel,
    b: &BraneExpr,
    z: C64,
    delta: f64,
    m: usize,
    ctx: &QContext,
) -> Result<C64> {
    let (inner, outer) = pole_moduli_extremes(model, ctx);
    if !(inner < delta && delta < outer) {
        return Err(Error::Contour(format!(
            "|s| = {delta} does not separate the lattices (inner {inner}, outer {outer})"
        )));
    }
    let f = |s: C64| integrand(model, b, s, z, ctx);
    let sum = |offset: f64| -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..m {
            let u = C64::from_polar(delta, 2.0 * PI * (i as f64 + offset) / m as f64);
            let v = f(u)?;
            if !v.is_finite() {
                return Err(Error::Overflow(format!("integrand is not finite at s={u}")));
            }
            acc += v;
        }
        Ok(acc / m as f64)
    };
    let coarse = sum(0.0)?;
    let fine = (coarse + sum(0.5)?) * 0.5;
    let diff = (fine - coarse).norm();
    if diff > 1e-9 * fine.norm().max(ctx.tol_abs) {
        return Err(Error::NoConvergence(format!(
            "contour value changed by {diff:e} when doubling to {} nodes",
            2 * m
        )));
    }
    Ok(fine)
}

/// Residue sum with per-pole and per-degree breakdowns.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueSum {
    pub total: C64,
    pub per_pole: Vec<(PoleSpec, C64)>,
    pub per_beta: Vec<(String, C64)>,
}

/// Signed residues of `ds/s Gamma_q E` over the lattice of `phase` up to
/// `max_beta`: `+` for the contour shrinking to `0`, `-` when it grows.
pub fn residue_sum(
    model: &GlsmModel,
    b: &BraneExpr,
    z: C64,
    phase: Phase,
    max_beta: Rat,
    ctx: &QContext,
) -> Result<ResidueSum> {
    let poles = enumerate_poles(model, phase, max_beta, ctx);
    let guard: Vec<C64> = enumerate_poles(model, phase.flip(), max_beta + rat::one(), ctx)
        .into_iter()
        .map(|p| p.location)
        .chain(poles.iter().map(|p| p.location))
        .collect();
    let sign = phase.sign() as f64;
    let f = |s: C64| Ok(integrand(model, b, s, z, ctx)? / s);
    let mut per_pole = Vec::with_capacity(poles.len());
    let mut per_beta: BTreeMap<Rat, C64> = BTreeMap::new();
    let mut total = C64::new(0.0, 0.0);
    for p in poles {
        let radius = residue_radius(p.location, &guard);
        let r = numeric_residue(&f, p.location, radius, RESIDUE_NODES, ctx)? * sign;
        total += r;
        *per_beta.entry(p.beta).or_default() += r;
        per_pole.push((p, r));
    }
    let per_beta = per_beta.into_iter().map(|(b, v)| (rat::format(b), v)).collect();
    Ok(ResidueSum { total, per_pole, per_beta })
}

/// Circle radius for a residue at `s0`: a fixed fraction of `|s0|`, capped by
/// the distance to the nearest other pole.
pub fn residue_radius(s0: C64, others: &[C64]) -> f64 {
    let nearest = others
        .iter()
        .map(|o| (o - s0).norm())
        .filter(|&d| d > 1e-12 * s0.norm())
        .fold(f64::INFINITY, f64::min);
    (RESIDUE_RADIUS_REL * s0.norm()).min(0.3 * nearest)
}

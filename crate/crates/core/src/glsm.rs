//! Model data and its exact combinatorics.
//!
//! Degrees, ages and exponents are exact rationals. A model in the `-` phase
//! is handled through its mirror: weights negated, `s -> 1/s`, `z -> 1/z`,
//! which turns the `-` phase into a `+` phase with the same equivariant
//! parameters and R-charges.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qde::QDifferenceOperator;
use crate::qseries::QContext;
use crate::rat::{self, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Plus,
    Minus,
}

impl Phase {
    pub fn flip(self) -> Phase {
        match self {
            Phase::Plus => Phase::Minus,
            Phase::Minus => Phase::Plus,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Phase::Plus => 1,
            Phase::Minus => -1,
        }
    }

    pub fn parse(s: &str) -> Option<Phase> {
        match s.trim() {
            "+" | "plus" => Some(Phase::Plus),
            "-" | "\u{2212}" | "minus" => Some(Phase::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Plus => "+",
            Phase::Minus => "-",
        })
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Phase::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown phase {s:?}")))
    }
}

/// Weights, R-charges and equivariant parameters of a rank-one GLSM.
#[derive(Clone, Debug, PartialEq)]
pub struct GlsmModel {
    weights: Vec<i64>,
    r_charges: Vec<Rat>,
    equiv: Vec<C64>,
    phase: Phase,
}

impl GlsmModel {
    /// Validates that weights are nonzero, positive ones first, and both
    /// signs occur.
    pub fn new(weights: Vec<i64>, r_charges: Vec<Rat>, equiv: Vec<C64>, phase: Phase) -> Result<Self> {
        let n = weights.len();
        if r_charges.len() != n || equiv.len() != n {
            return Err(Error::Model(format!(
                "length mismatch: {} weights, {} R-charges, {} equivariant parameters",
                n,
                r_charges.len(),
                equiv.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::Model("weights must be nonzero".into()));
        }
        let n_plus = weights.iter().take_while(|&&d| d > 0).count();
        if weights[n_plus..].iter().any(|&d| d > 0) {
            return Err(Error::Model("positive weights must precede negative ones".into()));
        }
        if n_plus == 0 || n_plus == n {
            return Err(Error::Model("both positive and negative weights are required".into()));
        }
        if r_charges.iter().any(|q| *q < rat::zero()) {
            return Err(Error::Model("R-charges must be nonnegative".into()));
        }
        if equiv.iter().any(|a| a.norm() == 0.0 || !a.is_finite()) {
            return Err(Error::Model("equivariant parameters must be finite and nonzero".into()));
        }
        Ok(Self { weights, r_charges, equiv, phase })
    }

    /// The hypersurface family: `n` weights `1`, one weight `-r`, R-charges
    /// `(0, ..., 0, 2)`.
    pub fn hypersurface(n: usize, r: i64, equiv: Vec<C64>, phase: Phase) -> Result<Self> {
        let mut w = vec![1; n];
        w.push(-r);
        let mut qr = vec![rat::zero(); n];
        qr.push(rat::int(2));
        Self::new(w, qr, equiv, phase)
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn r_charges(&self) -> &[Rat] {
        &self.r_charges
    }

    pub fn equiv(&self) -> &[C64] {
        &self.equiv
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(&self, phase: Phase) -> GlsmModel {
        GlsmModel { phase, ..self.clone() }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Number of positive weights in the stored (unmirrored) ordering.
    pub fn n_plus(&self) -> usize {
        self.weights.iter().filter(|&&d| d > 0).count()
    }

    /// `(n, r)` when this is the hypersurface family.
    pub fn hypersurface_shape(&self) -> Option<(usize, i64)> {
        let n = self.len() - 1;
        let last = *self.weights.last()?;
        let shape_ok = self.weights[..n].iter().all(|&d| d == 1) && last < 0;
        shape_ok.then_some((n, -last))
    }

    /// Mirror frame: weights negated and phase flipped. Mirrored models keep
    /// the index order, so they need not satisfy the sign ordering.
    pub fn mirrored(&self) -> GlsmModel {
        GlsmModel {
            weights: self.weights.iter().map(|d| -d).collect(),
            r_charges: self.r_charges.clone(),
            equiv: self.equiv.clone(),
            phase: self.phase.flip(),
        }
    }

    /// The model seen from its own phase: unchanged for `+`, mirrored for `-`.
    pub fn frame(&self) -> GlsmModel {
        match self.phase {
            Phase::Plus => self.clone(),
            Phase::Minus => self.mirrored(),
        }
    }

    /// Indices with positive weight in the given phase's frame.
    pub fn side(&self, phase: Phase) -> Vec<usize> {
        let sgn = phase.sign();
        (0..self.len()).filter(|&i| self.weights[i] * sgn > 0).collect()
    }

    /// `U_i(s) = a_i^{-1} s^{-D_i}`.
    pub fn u(&self, i: usize, s: C64) -> C64 {
        crate::monomial::cpow(s, rat::int(-self.weights[i])) / self.equiv[i]
    }

    /// Checks that the pole lattice of `phase` up to `max_beta`, together
    /// with the opposite lattice, has no two points closer than `gap`
    /// relative to their size.
    pub fn check_genericity(&self, max_beta: Rat, gap: f64, ctx: &QContext) -> Result<()> {
        let mut pts: Vec<C64> = crate::integrals::enumerate_poles(self, Phase::Plus, max_beta, ctx)
            .into_iter()
            .chain(crate::integrals::enumerate_poles(self, Phase::Minus, max_beta, ctx))
            .map(|p| p.location)
            .collect();
        pts.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let size = pts[j].norm();
                if size - pts[i].norm() > gap * size {
                    break;
                }
                if (pts[j] - pts[i]).norm() <= gap * size {
                    return Err(Error::Degenerate(format!(
                        "poles {} and {} are closer than the relative genericity gap {gap}",
                        pts[i], pts[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A component of the inertia stack: `g = exp(2 pi i c)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sector {
    pub c: Rat,
    pub fixed: Vec<usize>,
    pub order: u64,
}

impl Sector {
    pub fn new(model: &GlsmModel, c: Rat) -> Sector {
        let c = rat::frac(c);
        let fixed = (0..model.len()).filter(|&i| (c * rat::int(model.weights[i])).is_integer()).collect();
        Sector { c, fixed, order: *c.denom() as u64 }
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed.contains(&i)
    }
}

/// Union of the lattices `(1/D_k) Z_{>=0}` over the positive side of the
/// model's phase, up to `max_beta`.
pub fn effective_classes(model: &GlsmModel, max_beta: Rat) -> Vec<Rat> {
    if max_beta < rat::zero() {
        return Vec::new();
    }
    let frame = model.frame();
    let mut out = BTreeSet::new();
    for k in frame.side(Phase::Plus) {
        let d = frame.weights[k];
        let top = rat::floor(max_beta * rat::int(d));
        for j in 0..=top {
            out.insert(rat::rat(j, d));
        }
    }
    out.into_iter().collect()
}

/// Box sectors `c = m / D_i` for the positive side of the model's phase.
pub fn box_sectors(model: &GlsmModel) -> Vec<Sector> {
    let frame = model.frame();
    let mut cs = BTreeSet::new();
    for k in frame.side(Phase::Plus) {
        let d = frame.weights[k];
        for m in 0..d {
            cs.insert(rat::rat(m, d));
        }
    }
    cs.into_iter().map(|c| Sector::new(model, c)).collect()
}

/// `d_i(beta) = D_i beta - q_i / 2` with the stored weights.
pub fn d_of(model: &GlsmModel, i: usize, beta: Rat) -> Rat {
    rat::int(model.weights[i]) * beta - model.r_charges[i] / rat::int(2)
}

pub fn sector_of_degree(model: &GlsmModel, beta: Rat) -> Sector {
    Sector::new(model, beta)
}

/// Age of the `i`-th coordinate line `a_i s^{D_i}` on sector `v`.
pub fn age(model: &GlsmModel, v: &Sector, i: usize) -> Rat {
    rat::frac(v.c * rat::int(model.weights[i]))
}

/// One torus weight `a_i s^{D_i} q^{q_exp}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub index: usize,
    pub s_exp: i64,
    pub q_exp: Rat,
}

/// Deformation (`def`) and obstruction (`obs`) weights at degree `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DefObs {
    pub def: Vec<Weight>,
    pub obs: Vec<Weight>,
}

pub fn def_obs_weights(model: &GlsmModel, beta: Rat) -> DefObs {
    let mut out = DefObs::default();
    for i in 0..model.len() {
        let d = d_of(model, i, beta);
        let fl = rat::floor(d);
        let fr = rat::frac(d);
        let s_exp = model.weights[i];
        if d >= rat::zero() {
            for k in 0..=fl {
                out.def.push(Weight { index: i, s_exp, q_exp: -rat::int(k) - fr });
            }
        }
        for k in 0..=(-fl - 2) {
            out.obs.push(Weight { index: i, s_exp, q_exp: rat::int(k + 1) - fr });
        }
    }
    out
}

/// Signed q-exponents of the Euler characteristic of `O(n/a)` on the
/// teardrop `P(a:1)`.
pub fn teardrop_euler(n: i64, a: i64) -> Vec<(Rat, i32)> {
    assert!(a >= 1, "teardrop order must be positive");
    let x = rat::rat(n, a);
    let fl = rat::floor(x);
    let fr = rat::frac(x);
    if n >= 0 {
        (0..=fl).map(|k| (-fr - rat::int(k), 1)).collect()
    } else {
        (0..=(-fl - 2)).map(|k| (rat::int(k + 1) - fr, -1)).collect()
    }
}

/// `sum sign * q^e` for a signed exponent list.
pub fn eval_signed_exponents(terms: &[(Rat, i32)], ctx: &QContext) -> C64 {
    terms.iter().map(|(e, sgn)| ctx.q_pow(*e) * (*sgn as f64)).sum()
}

/// The quantum q-difference operator of `model` in `phase`.
pub fn qde_operator(model: &GlsmModel, phase: Phase) -> QDifferenceOperator {
    QDifferenceOperator::for_model(model, phase)
}

//! JSON model documents.
//!
//! ```json
//! {
//!   "weights": [1, 1, 1, -2],
//!   "rCharges": ["0", "0", "0", "2"],
//!   "equivParams": [[0.955, 0.296], [-0.129, 0.992], [-0.971, 0.239], [0.697, 0.717]],
//!   "phase": "+",
//!   "q": 0.1,
//!   "productTerms": 60,
//!   "tolAbs": 1e-13,
//!   "tolRel": 1e-10,
//!   "genericityGap": 1e-6
//! }
//! ```
//!
//! `q` is a number or an `[re, im]` pair. Everything after `phase` is optional.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glsm::{GlsmModel, Phase};
use crate::qseries::{QContext, DEFAULT_PRODUCT_TERMS, DEFAULT_TOL_ABS, DEFAULT_TOL_REL};
use crate::rat::{self, Rat};

pub const DEFAULT_GENERICITY_GAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QValue {
    Real(f64),
    Complex([f64; 2]),
}

impl QValue {
    pub fn value(&self) -> C64 {
        match *self {
            QValue::Real(x) => C64::new(x, 0.0),
            QValue::Complex([re, im]) => C64::new(re, im),
        }
    }
}

fn default_q() -> QValue {
    QValue::Real(0.1)
}
fn default_terms() -> usize {
    DEFAULT_PRODUCT_TERMS
}
fn default_tol_abs() -> f64 {
    DEFAULT_TOL_ABS
}
fn default_tol_rel() -> f64 {
    DEFAULT_TOL_REL
}
fn default_gap() -> f64 {
    DEFAULT_GENERICITY_GAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModelConfig {
    pub weights: Vec<i64>,
    #[serde(with = "rat::vec_as_string")]
    pub r_charges: Vec<Rat>,
    pub equiv_params: Vec<[f64; 2]>,
    pub phase: Phase,
    #[serde(default = "default_q")]
    pub q: QValue,
    #[serde(default = "default_terms")]
    pub product_terms: usize,
    #[serde(default = "default_tol_abs")]
    pub tol_abs: f64,
    #[serde(default = "default_tol_rel")]
    pub tol_rel: f64,
    #[serde(default = "default_gap")]
    pub genericity_gap: f64,
}

/// A validated model with its numerical context.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub model: GlsmModel,
    pub ctx: QContext,
    pub gap: f64,
}

impl ModelConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(p: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
        Self::from_json(&text)
    }

    pub fn from_model(model: &GlsmModel, ctx: &QContext, gap: f64) -> Self {
        let q = ctx.q();
        Self {
            weights: model.weights().to_vec(),
            r_charges: model.r_charges().to_vec(),
            equiv_params: model.equiv().iter().map(|a| [a.re, a.im]).collect(),
            phase: model.phase(),
            q: if q.im == 0.0 { QValue::Real(q.re) } else { QValue::Complex([q.re, q.im]) },
            product_terms: ctx.product_terms(),
            tol_abs: ctx.tol_abs,
            tol_rel: ctx.tol_rel,
            genericity_gap: gap,
        }
    }

    /// Builds the model and context; rejects bad shapes, `|q| >= 1` and
    /// nonpositive tolerances.
    pub fn load(&self) -> Result<Loaded> {
        let equiv = self.equiv_params.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let model = GlsmModel::new(self.weights.clone(), self.r_charges.clone(), equiv, self.phase)?;
        let ctx = QContext::with_tolerances(self.q.value(), self.product_terms, self.tol_abs, self.tol_rel)?;
        if self.genericity_gap.is_nan() || self.genericity_gap <= 0.0 {
            return Err(Error::Config("genericityGap must be positive".into()));
        }
        Ok(Loaded { model, ctx, gap: self.genericity_gap })
    }
}

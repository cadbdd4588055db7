//! `check` subcommands: each produces a report of residuals against one threshold.

use anyhow::{bail, Result};
use kcharge::branes::{geometric_basis_brane, lg_basis_brane, BraneExpr, TorsionLabel};
use kcharge::central_charge::{geometric_closed_form, lg_example_series};
use kcharge::config::Loaded;
use kcharge::integrals::{contour_integral, default_delta, residue_sum};
use kcharge::qde::qde_residual;
use kcharge::{rat, GlsmModel, Phase, C64};
use serde::Serialize;

use crate::CheckKind;

/// Sample angles for `z` on each circle.
const ANGLES: [f64; 2] = [0.4, 2.5];
const NEAR: f64 = 0.05;
const FAR: f64 = 20.0;

#[derive(clap::Args)]
pub struct CheckOptions {
    /// Pass threshold on every relative residual.
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
    /// Degree cutoff for residue sums near `z = 0`.
    #[arg(long, default_value_t = 12)]
    max_beta_near: i64,
    /// Degree cutoff for residue sums near `z = infinity` (geometric branes).
    #[arg(long, default_value_t = 6)]
    max_beta_far: i64,
    /// Truncation of closed-form series for `check qde`.
    #[arg(long, default_value_t = 20)]
    max_n: i64,
    /// Trapezoid nodes for the contour (doubled once for the convergence check).
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    /// Contour radius; defaults to the geometric mean of the separating annulus.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Case {
    pub brane: String,
    pub z: [f64; 2],
    pub comparison: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub check: &'static str,
    pub phase: Phase,
    pub threshold: f64,
    pub max_residual: f64,
    pub passed: bool,
    pub cases: Vec<Case>,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn geometric_branes(model: &GlsmModel) -> Result<Vec<(String, BraneExpr)>> {
    let Some((n, _)) = model.hypersurface_shape() else {
        bail!("checks need a hypersurface model (unit positive weights, one negative weight)");
    };
    (0..n).map(|k| Ok((format!("geometric:{}", k + 1), geometric_basis_brane(model, k)?))).collect()
}

fn lg_branes(model: &GlsmModel) -> Result<Vec<(String, TorsionLabel, BraneExpr)>> {
    let Some((_, r)) = model.hypersurface_shape() else {
        bail!("checks need a hypersurface model (unit positive weights, one negative weight)");
    };
    TorsionLabel::all(r)
        .into_iter()
        .map(|l| Ok((format!("lg:{},{}", l.m, l.l), l, lg_basis_brane(model, l)?)))
        .collect()
}

fn samples(radius: f64) -> Vec<C64> {
    ANGLES.iter().map(|&t| C64::from_polar(radius, t)).collect()
}

struct Runner<'a> {
    loaded: &'a Loaded,
    opts: &'a CheckOptions,
    cases: Vec<Case>,
}

impl Runner<'_> {
    fn push(&mut self, brane: &str, z: C64, comparison: &str, residual: f64) {
        let passed = residual < self.opts.threshold;
        self.cases.push(Case { brane: brane.to_string(), z: [z.re, z.im], comparison: comparison.to_string(), residual, passed });
    }

    /// Contour integral against the residue sum of `phase` on the circle `|z| = radius`.
    fn contour_vs_residues(&mut self, name: &str, b: &BraneExpr, radius: f64, phase: Phase, max_beta: i64) -> Result<()> {
        let Loaded { model, ctx, .. } = self.loaded;
        let delta = match self.opts.delta {
            Some(d) => d,
            None => default_delta(model, ctx)?,
        };
        let label = format!("contour vs {phase} residues up to degree {max_beta}");
        for z in samples(radius) {
            let contour = contour_integral(model, b, z, delta, self.opts.nodes, ctx)?;
            let residues = residue_sum(model, b, z, phase, rat::int(max_beta), ctx)?.total;
            self.push(name, z, &label, rel(residues, contour));
        }
        Ok(())
    }
}

pub fn run(kind: CheckKind, loaded: &Loaded, opts: &CheckOptions) -> Result<Report> {
    let phase = loaded.model.phase();
    let mut runner = Runner { loaded, opts, cases: Vec::new() };
    let check = match kind {
        CheckKind::Contour => {
            match phase {
                Phase::Plus => {
                    for (name, b) in geometric_branes(&loaded.model)? {
                        runner.contour_vs_residues(&name, &b, NEAR, Phase::Plus, opts.max_beta_near)?;
                    }
                }
                Phase::Minus => {
                    for (name, _, b) in lg_branes(&loaded.model)? {
                        runner.contour_vs_residues(&name, &b, FAR, Phase::Minus, opts.max_beta_near)?;
                    }
                }
            }
            "contour"
        }
        CheckKind::Wallcross => {
            for (name, b) in geometric_branes(&loaded.model)? {
                runner.contour_vs_residues(&name, &b, NEAR, Phase::Plus, opts.max_beta_near)?;
                runner.contour_vs_residues(&name, &b, FAR, Phase::Minus, opts.max_beta_far)?;
            }
            "wallcross"
        }
        CheckKind::Qde => {
            let Loaded { model, ctx, .. } = loaded;
            let label = format!("operator residual, truncation {}", opts.max_n);
            match phase {
                Phase::Plus => {
                    for (k, (name, _)) in geometric_branes(model)?.into_iter().enumerate() {
                        let series = geometric_closed_form(model, k, opts.max_n, ctx)?;
                        for z in samples(NEAR) {
                            let r = qde_residual(model, Phase::Plus, &series, &[z], ctx)?;
                            runner.push(&name, z, &label, r);
                        }
                    }
                }
                Phase::Minus => {
                    for (name, l, _) in lg_branes(model)? {
                        let series = lg_example_series(model, l, opts.max_n, ctx)?;
                        for z in samples(FAR) {
                            let r = qde_residual(model, Phase::Minus, &series, &[z], ctx)?;
                            runner.push(&name, z, &label, r);
                        }
                    }
                }
            }
            "qde"
        }
    };
    let cases = runner.cases;
    let max_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    let passed = !cases.is_empty() && cases.iter().all(|c| c.passed);
    Ok(Report { check, phase, threshold: opts.threshold, max_residual, passed, cases })
}

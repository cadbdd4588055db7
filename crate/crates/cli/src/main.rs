//! `kcharge` command-line front end.

mod checks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kcharge::branes::{geometric_basis_brane, lg_basis_brane, BraneExpr, TorsionLabel};
use kcharge::central_charge::{central_charge_series, CentralChargeSeries};
use kcharge::config::{Loaded, ModelConfig};
use kcharge::qseries::{phi, pochhammer, theta};
use kcharge::{rat, GlsmModel, Phase, QContext, C64};
use serde::Serialize;

/// Built-in model used when `--model` is absent: the `n = 3`, `r = 2` hypersurface.
pub const DEFAULT_CONFIG: &str = include_str!("../../../configs/n3_r2.json");

#[derive(Parser)]
#[command(name = "kcharge", version, about = "Central charges of elliptic branes in rank-one GLSMs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate theta, phi and the q-Pochhammer symbol at a point.
    Theta {
        /// Nome, `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Argument, `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Length of the Pochhammer symbol.
        #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = kcharge::qseries::DEFAULT_PRODUCT_TERMS)]
        product_terms: usize,
    },
    /// Residue-assembled central-charge series of a brane.
    CentralCharge {
        #[command(flatten)]
        model: ModelArgs,
        /// `geometric:K` (1-based fixed point), `lg:M,L`, `empty`, or a brane JSON file.
        #[arg(long)]
        brane: String,
        #[arg(long, default_value = "8")]
        max_beta: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a consistency check and print a JSON report; exits 1 on failure.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        opts: checks::CheckOptions,
    },
}

#[derive(clap::Args)]
struct ModelArgs {
    /// Model JSON file; the built-in `n = 3`, `r = 2` model when absent.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Override the phase of the model file (`+` or `-`).
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CheckKind {
    Contour,
    Qde,
    Wallcross,
}

fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().with_context(|| format!("bad number {t:?}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => bail!("expected `re` or `re,im`, got {s:?}"),
    }
}

fn parse_phase(s: &str) -> Result<Phase> {
    Phase::parse(s).ok_or_else(|| anyhow!("phase must be `+` or `-`, got {s:?}"))
}

impl ModelArgs {
    fn load(&self) -> Result<Loaded> {
        let cfg = match &self.model {
            Some(p) => ModelConfig::from_path(p)?,
            None => ModelConfig::from_json(DEFAULT_CONFIG)?,
        };
        let mut loaded = cfg.load()?;
        if let Some(p) = &self.phase {
            loaded.model = loaded.model.with_phase(parse_phase(p)?);
        }
        Ok(loaded)
    }
}

fn cmd_theta(q: &str, x: &str, n: i64, terms: usize) -> Result<()> {
    let ctx = QContext::new(parse_complex(q)?, terms)?;
    let x = parse_complex(x)?;
    let rows = [
        ("theta(x)".to_string(), theta(x, &ctx)?),
        ("phi(x)".to_string(), phi(x, &ctx)),
        (format!("(x;q)_{n}"), pochhammer(x, n, &ctx)?),
    ];
    let mut out = std::io::stdout().lock();
    writeln!(out, "{:<12} {:>24} {:>24}", "function", "re", "im")?;
    for (name, v) in rows {
        writeln!(out, "{name:<12} {:>24.16e} {:>24.16e}", v.re, v.im)?;
    }
    Ok(())
}

/// Parses a brane selector against `model`.
pub fn parse_brane(spec: &str, model: &GlsmModel) -> Result<BraneExpr> {
    if spec == "empty" {
        return Ok(BraneExpr::zero(model.len()));
    }
    if let Some(k) = spec.strip_prefix("geometric:") {
        let k: usize = k.trim().parse().with_context(|| format!("bad fixed point in {spec:?}"))?;
        if k == 0 {
            bail!("fixed points are numbered from 1");
        }
        return Ok(geometric_basis_brane(model, k - 1)?);
    }
    if let Some(rest) = spec.strip_prefix("lg:") {
        let (m, l) = rest.split_once(',').ok_or_else(|| anyhow!("expected lg:M,L, got {spec:?}"))?;
        let label = TorsionLabel { m: m.trim().parse()?, l: l.trim().parse()? };
        return Ok(lg_basis_brane(model, label)?);
    }
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let b: BraneExpr = serde_json::from_str(&text).with_context(|| format!("{}: not a brane document", path.display()))?;
        if b.factors.iter().any(|f| f.a_exponents.len() != model.len()) || b.pref.a_exps.len() != model.len() {
            bail!("brane factors do not match the {} coordinates of the model", model.len());
        }
        return Ok(b);
    }
    bail!("unknown brane selector {spec:?}")
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SeriesDocument<'a> {
    brane: &'a str,
    phase: Phase,
    max_beta: String,
    series: &'a CentralChargeSeries,
}

fn write_csv(series: &CentralChargeSeries, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["component", "k", "m", "frac_shift", "prefactor_re", "prefactor_im", "n", "re", "im"])?;
    for (id, c) in series.components.iter().enumerate() {
        for (n, v) in &c.coeffs {
            w.write_record([
                id.to_string(),
                c.key.k.to_string(),
                c.key.m.to_string(),
                rat::format(c.key.frac_shift),
                format!("{:.16e}", c.prefactor_arg.re),
                format!("{:.16e}", c.prefactor_arg.im),
                n.to_string(),
                format!("{:.16e}", v.re),
                format!("{:.16e}", v.im),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_central_charge(model: &ModelArgs, brane: &str, max_beta: &str, format: Format) -> Result<()> {
    let Loaded { model, ctx, gap } = model.load()?;
    let max_beta = rat::parse(max_beta).ok_or_else(|| anyhow!("bad --max-beta {max_beta:?}"))?;
    if max_beta < rat::zero() {
        bail!("--max-beta must be nonnegative");
    }
    model.check_genericity(max_beta, gap, &ctx)?;
    let b = parse_brane(brane, &model)?;
    let series = central_charge_series(&model, &b, max_beta, &ctx)?;
    let out = std::io::stdout().lock();
    match format {
        Format::Json => {
            let doc = SeriesDocument { brane, phase: model.phase(), max_beta: rat::format(max_beta), series: &series };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(&series, out)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Theta { q, x, n, product_terms } => cmd_theta(&q, &x, n, product_terms).map(|_| true),
        Command::CentralCharge { model, brane, max_beta, format } => {
            cmd_central_charge(&model, &brane, &max_beta, format).map(|_| true)
        }
        Command::Check { kind, model, opts } => {
            let loaded = model.load()?;
            let report = checks::run(kind, &loaded, &opts)?;
            let mut out = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

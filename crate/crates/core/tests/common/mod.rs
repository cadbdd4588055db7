#![allow(dead_code)]

use kcharge::{GlsmModel, Phase, QContext, C64};

pub const ANGLES_N3: [f64; 4] = [0.3, 1.7, 2.9, 0.8];

/// Hypersurface model with `n = 3`, `r = 2` and parameters on the unit circle.
pub fn small_model(phase: Phase) -> GlsmModel {
    let equiv = ANGLES_N3.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    GlsmModel::hypersurface(3, 2, equiv, phase).unwrap()
}

pub fn ctx() -> QContext {
    QContext::real(0.1).unwrap()
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

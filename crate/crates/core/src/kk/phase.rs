//! Phase comparison of two representations of one state, modulo 2π.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{QpbError, Result};
use crate::grid::{Representation, UniformGrid, WaveFunction};
use crate::report::CheckReport;
use crate::transform::to_position;

pub const PHASE_TOLERANCE: f64 = 1e-6;

/// Window cutoff relative to the peak magnitude.
pub const WINDOW_FRACTION: f64 = 1e-3;

/// Largest sample-to-sample phase step accepted after unwrapping.
pub const MAX_UNWRAPPED_STEP: f64 = PI / 2.0;

/// Sequential unwrap: every jump larger than π is folded back by a multiple of 2π.
pub fn unwrap_phase(phase: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phase.len());
    let mut offset = 0.0;
    for (j, &p) in phase.iter().enumerate() {
        if j > 0 {
            let jump = p - phase[j - 1];
            if jump.abs() > PI {
                offset -= TAU * (jump / TAU).round();
            }
        }
        out.push(p + offset);
    }
    out
}

/// Distance from `x` to the nearest multiple of 2π.
pub fn distance_to_multiple_of_tau(x: f64) -> f64 {
    (x - TAU * (x / TAU).round()).abs()
}

/// Contiguous index span from the first to the last sample with
/// `mag >= fraction·max(mag)`.
fn window(mag: &[f64], fraction: f64) -> Option<(usize, usize)> {
    let peak = mag.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return None;
    }
    let cutoff = fraction * peak;
    let first = mag.iter().position(|&m| m >= cutoff)?;
    let last = mag.iter().rposition(|&m| m >= cutoff)?;
    Some((first, last))
}

pub fn phase_equivalence(mag: &[f64], phase_a: &[f64], phase_b: &[f64]) -> Result<CheckReport> {
    const ID: &str = "phase_equivalence";
    const REF: &str = "arg Psi(r) - arg chi(r) = 2 pi q";
    if mag.len() != phase_a.len() || mag.len() != phase_b.len() {
        return Err(QpbError::IncompatibleOperands(format!(
            "lengths differ: mag {}, phase_a {}, phase_b {}",
            mag.len(),
            phase_a.len(),
            phase_b.len()
        )));
    }
    let Some((first, last)) = window(mag, WINDOW_FRACTION) else {
        return Err(QpbError::DegenerateState(
            "magnitude vanishes everywhere".into(),
        ));
    };
    if let Some(offset) = mag[first..=last].iter().position(|&m| m <= 0.0) {
        return Err(QpbError::PhaseUndefined {
            index: first + offset,
        });
    }
    let a = unwrap_phase(&phase_a[first..=last]);
    let b = unwrap_phase(&phase_b[first..=last]);
    let steepest = a
        .windows(2)
        .chain(b.windows(2))
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0f64, f64::max);
    let residual = a
        .iter()
        .zip(&b)
        .map(|(x, y)| distance_to_multiple_of_tau(x - y))
        .fold(0.0f64, f64::max);
    let mut report = CheckReport::residual(ID, REF, residual, PHASE_TOLERANCE)
        .with("window_start", first)
        .with("window_end", last)
        .with("window_fraction", WINDOW_FRACTION)
        .with("max_unwrapped_step", steepest);
    if steepest > MAX_UNWRAPPED_STEP {
        report = report.fail_with("insufficient_resolution");
    }
    Ok(report)
}

/// Compares two sampled representations: magnitudes from `a`, phases from both.
pub fn phase_equivalence_states(a: &WaveFunction, b: &WaveFunction) -> Result<CheckReport> {
    a.check_compatible(b)?;
    if a.grid().dim() != 1 {
        return Err(QpbError::Configuration(
            "phase comparison runs on 1D slices".into(),
        ));
    }
    let mag: Vec<f64> = a.values().iter().map(|v| v.norm()).collect();
    let pa: Vec<f64> = a.values().iter().map(|v| v.arg()).collect();
    let pb: Vec<f64> = b.values().iter().map(|v| v.arg()).collect();
    let mag_gap = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0f64, f64::max);
    Ok(phase_equivalence(&mag, &pa, &pb)?
        .with("max_magnitude_gap", mag_gap)
        .with("n_points", a.grid().n_points())
        .with("half_extent", a.grid().half_extent()))
}

/// Momentum Gaussian `(πs²)^(-1/4) exp(-(p - p0)²/2s²)` carried to position by
/// the discrete transform, compared in phase with its closed-form image
/// `χ(r) = (2πħ)^(-1/2) (πs²)^(-1/4) s√(2π) exp(-s²r²/2ħ²) exp(i p0 r/ħ)`.
pub fn gaussian_phase_check(momentum_grid: UniformGrid, s: f64, p0: f64) -> Result<CheckReport> {
    let psi = WaveFunction::from_fn(momentum_grid, Representation::Momentum, |p| {
        let u = (p[0] - p0) / s;
        C64::new((PI * s * s).powf(-0.25) * (-0.5 * u * u).exp(), 0.0)
    });
    let transformed = to_position(&psi)?;
    let hbar = momentum_grid.hbar();
    let amplitude = (2.0 * PI * hbar).powf(-0.5) * (PI * s * s).powf(-0.25) * s * (2.0 * PI).sqrt();
    let closed = WaveFunction::from_fn(*transformed.grid(), Representation::Position, |r| {
        let env = amplitude * (-(s * r[0] / hbar).powi(2) / 2.0).exp();
        C64::from_polar(env, p0 * r[0] / hbar)
    });
    Ok(phase_equivalence_states(&closed, &transformed)?
        .with("sigma_p", s)
        .with("p0", p0)
        .with("hbar", hbar))
}

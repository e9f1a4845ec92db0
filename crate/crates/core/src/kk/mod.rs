//! Kramers-Kronig relations on sampled complex signals.
//!
//! For a signal analytic in the upper half-plane and decaying at infinity,
//! `Im f = H[Re f]` and `Re f = -H[Im f]` with
//! `H[s](z) = -(1/π) P.V.∫ s(u)/(u - z) du`. Analyticity in the lower
//! half-plane flips both signs. The pole `1/(u - i·a)` (pole above the axis)
//! is analytic below, and the reports state which convention they tested.

mod hilbert;
mod phase;
mod quadrature;

pub use hilbert::{hilbert_spectral, hilbert_transform, TailModel, EDGE_RATIO_LIMIT};
pub use phase::{
    distance_to_multiple_of_tau, gaussian_phase_check, phase_equivalence, phase_equivalence_states,
    unwrap_phase, MAX_UNWRAPPED_STEP, PHASE_TOLERANCE, WINDOW_FRACTION,
};
pub use quadrature::pv_quadrature;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{QpbError, Result};
use crate::grid::UniformGrid;
use crate::report::CheckReport;

pub const KK_TOLERANCE: f64 = 1e-5;

/// Residual above which a wrong-half-plane signal counts as rejected.
pub const WRONG_PLANE_THRESHOLD: f64 = 1e-2;

/// Residuals are taken over `|z| <= INTERIOR_FRACTION·L`.
pub const INTERIOR_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    Upper,
    Lower,
}

impl HalfPlane {
    pub fn opposite(self) -> Self {
        match self {
            HalfPlane::Upper => HalfPlane::Lower,
            HalfPlane::Lower => HalfPlane::Upper,
        }
    }

    /// Sign `σ` in `Im f = σ·H[Re f]`, `Re f = -σ·H[Im f]`.
    fn sign(self) -> f64 {
        match self {
            HalfPlane::Upper => 1.0,
            HalfPlane::Lower => -1.0,
        }
    }

    fn label(self) -> &'static str {
        match self {
            HalfPlane::Upper => "upper",
            HalfPlane::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    grid: UniformGrid,
    values: Vec<C64>,
    half_plane: HalfPlane,
}

impl AnalyticSignal {
    /// Builds the signal without verifying its declared analyticity.
    pub fn from_samples(
        grid: UniformGrid,
        values: Vec<C64>,
        half_plane: HalfPlane,
    ) -> Result<Self> {
        if grid.dim() != 1 || values.len() != grid.n_points() {
            return Err(QpbError::Configuration(format!(
                "analytic signals are 1D with {} samples, got {}",
                grid.n_points(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            half_plane,
        })
    }

    /// Builds the signal and rejects it unless its Kramers-Kronig pair holds
    /// for the declared half-plane.
    pub fn checked(grid: UniformGrid, values: Vec<C64>, half_plane: HalfPlane) -> Result<Self> {
        let signal = Self::from_samples(grid, values, half_plane)?;
        let report = kk_residual(&signal)?;
        if !report.pass {
            return Err(QpbError::Precondition(format!(
                "signal is not analytic in the {} half-plane (KK residual {:.3e})",
                half_plane.label(),
                report.residual
            )));
        }
        Ok(signal)
    }

    pub fn from_fn(
        grid: UniformGrid,
        half_plane: HalfPlane,
        f: impl Fn(f64) -> C64,
    ) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::from_samples(grid, values, half_plane)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn half_plane(&self) -> HalfPlane {
        self.half_plane
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    /// Complex conjugate, declared analytic in the same half-plane as before.
    pub fn conjugated(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.conj()).collect(),
            ..self.clone()
        }
    }

    pub fn with_half_plane(&self, half_plane: HalfPlane) -> Self {
        Self {
            half_plane,
            ..self.clone()
        }
    }
}

fn interior_indices(grid: &UniformGrid) -> impl Iterator<Item = usize> + '_ {
    let limit = INTERIOR_FRACTION * grid.half_extent();
    (0..grid.n_points()).filter(move |&j| grid.point(j).abs() <= limit)
}

/// Largest violation of both Kramers-Kronig lines over the interior.
pub fn kk_residual(f: &AnalyticSignal) -> Result<CheckReport> {
    const ID: &str = "kk_residual";
    const REF: &str =
        "Im f = -(1/pi) PV int Re f(u)/(u-z) du; Re f = (1/pi) PV int Im f(u)/(u-z) du";
    let re = f.real_part();
    let im = f.imag_part();
    hilbert::check_decay(&re)?;
    hilbert::check_decay(&im)?;
    let grid = f.grid;
    let sigma = f.half_plane.sign();
    let h_re = hilbert_transform(&re, &grid)?;
    let h_im = hilbert_transform(&im, &grid)?;
    let mut imag_line = 0.0f64;
    let mut real_line = 0.0f64;
    for j in interior_indices(&grid) {
        imag_line = imag_line.max((im[j] - sigma * h_re[j]).abs());
        real_line = real_line.max((re[j] + sigma * h_im[j]).abs());
    }
    Ok(
        CheckReport::residual(ID, REF, imag_line.max(real_line), KK_TOLERANCE)
            .with("half_plane", f.half_plane.label())
            .with(
                "sign_convention",
                "relations as written hold for analyticity in the upper half-plane",
            )
            .with("imag_from_real_residual", imag_line)
            .with("real_from_imag_residual", real_line)
            .with("interior_fraction", INTERIOR_FRACTION)
            .with("n_points", grid.n_points())
            .with("half_extent", grid.half_extent()),
    )
}

/// Worst disagreement between the spectral transform and the quadrature
/// oracle `-(1/π)·pv_quadrature` over the interior.
pub fn oracle_disagreement(samples: &[f64], grid: &UniformGrid) -> Result<f64> {
    let spectral = hilbert_spectral(samples, grid)?;
    Ok(interior_indices(grid)
        .map(|j| (spectral[j] + pv_quadrature(samples, grid, j) / std::f64::consts::PI).abs())
        .fold(0.0f64, f64::max))
}

/// The pole signal `1/(u - i·a)`, analytic in the lower half-plane for `a > 0`.
pub fn pole_signal(grid: UniformGrid, a: f64) -> Result<AnalyticSignal> {
    let half_plane = if a > 0.0 {
        HalfPlane::Lower
    } else {
        HalfPlane::Upper
    };
    AnalyticSignal::from_fn(grid, half_plane, |u| C64::new(1.0, 0.0) / C64::new(u, -a))
}

/// Poles used by the suite checks.
pub const POLE_FAMILY: [f64; 3] = [0.5, 1.0, 2.0];

fn pole_disagreement(grid: UniformGrid, poles: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &a in poles {
        let f = pole_signal(grid, a)?;
        worst = worst
            .max(oracle_disagreement(&f.real_part(), &grid)?)
            .max(oracle_disagreement(&f.imag_part(), &grid)?);
    }
    Ok(worst)
}

/// Spectral transform against the quadrature oracle on the pole family, at
/// `grid` and at the grid with both `n` and `L` doubled. The doubled grid
/// must not do worse.
pub fn pole_oracle_check(grid: UniformGrid, poles: &[f64]) -> Result<CheckReport> {
    let base = pole_disagreement(grid, poles)?;
    let doubled_grid = UniformGrid::new(
        1,
        2 * grid.n_points(),
        2.0 * grid.half_extent(),
        grid.hbar(),
    )?;
    let doubled = pole_disagreement(doubled_grid, poles)?;
    let mut report = CheckReport::residual(
        "hilbert_oracle_agreement",
        "H[s](z) = -(1/pi) PV int s(u)/(u-z) du",
        base,
        KK_TOLERANCE,
    )
    .with("poles", poles.to_vec())
    .with("n_points", grid.n_points())
    .with("half_extent", grid.half_extent())
    .with("doubled_residual", doubled)
    .with("monotone", doubled <= base);
    if doubled > base {
        report = report.fail_with("non_monotone");
    }
    Ok(report)
}

/// Full-line Kramers-Kronig residual over the pole family, each pole tested
/// against its own half-plane.
pub fn pole_kk_check(grid: UniformGrid, poles: &[f64]) -> Result<CheckReport> {
    let mut worst: Option<CheckReport> = None;
    let mut residuals = Vec::new();
    for &a in poles {
        let r = kk_residual(&pole_signal(grid, a)?)?;
        residuals.push(r.residual);
        if worst.as_ref().is_none_or(|w| r.residual > w.residual) {
            worst = Some(r);
        }
    }
    let report = worst.ok_or_else(|| QpbError::Configuration("empty pole family".into()))?;
    Ok(report
        .with("poles", poles.to_vec())
        .with("per_pole_residual", residuals))
}

/// The conjugated pole family tested against the half-plane of the original;
/// passes when every residual exceeds `WRONG_PLANE_THRESHOLD`.
pub fn wrong_half_plane_check(grid: UniformGrid, poles: &[f64]) -> Result<CheckReport> {
    let mut smallest = f64::INFINITY;
    let mut residuals = Vec::new();
    for &a in poles {
        let f = pole_signal(grid, a)?;
        let r = kk_residual(&f.conjugated())?;
        residuals.push(r.residual);
        smallest = smallest.min(r.residual);
    }
    Ok(CheckReport::exceeds(
        "kk_wrong_half_plane",
        "Im f = -(1/pi) PV int Re f(u)/(u-z) du; Re f = (1/pi) PV int Im f(u)/(u-z) du",
        smallest,
        WRONG_PLANE_THRESHOLD,
    )
    .with("poles", poles.to_vec())
    .with("per_pole_residual", residuals))
}

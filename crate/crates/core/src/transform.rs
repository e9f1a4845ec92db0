//! The ħ-scaled Fourier pair between momentum and position representations.
//!
//! Momentum → position uses the kernel `exp(+i r·p/ħ)`, position → momentum its
//! inverse, both with the symmetric `(2πħ)^(-1/2)` factor per axis. On a grid
//! pair satisfying `Δr·Δp = 2πħ/n` the Riemann sum of the continuum integral is
//! a centered DFT, so the discrete transform is exactly unitary.

use num_complex::Complex64 as C64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{QpbError, Result};
use crate::grid::{Representation, UniformGrid, WaveFunction};
use crate::report::CheckReport;

/// Sign and normalization of the transform pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConvention {
    /// Sign of the exponent for momentum → position.
    pub sign_forward: i8,
    /// Sign of the exponent for position → momentum.
    pub sign_inverse: i8,
    /// Power of `2πħ` applied per axis.
    pub normalization_exponent: f64,
}

pub const CONVENTION: TransformConvention = TransformConvention {
    sign_forward: 1,
    sign_inverse: -1,
    normalization_exponent: -0.5,
};

/// Cells next to each face counted as boundary when measuring leakage.
pub const BOUNDARY_CELLS: usize = 4;

pub const PARSEVAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    /// Kernel `exp(+i x·k/ħ)`.
    Plus,
    /// Kernel `exp(-i x·k/ħ)`.
    Minus,
}

/// Transforms raw samples along one axis in place. `grid` is the input grid;
/// the output lives on `grid.reciprocal()` along that axis.
///
/// With `x_j = -L_x + jΔx`, `k_m = -L_k + mΔk` and `Δx·Δk = 2πħ/n`, the phase
/// `x_j k_m/ħ` splits into `2πjm/n - πj - πm + πn/2`; the last term is a multiple
/// of 2π because `n` is a power of two >= 8, leaving checkerboard signs around
/// a plain DFT.
pub(crate) fn transform_axis(
    values: &mut [C64],
    grid: &UniformGrid,
    axis: usize,
    direction: Direction,
) {
    let n = grid.n_points();
    let stride = grid.stride(axis);
    let fft_direction = match direction {
        Direction::Plus => FftDirection::Inverse,
        Direction::Minus => FftDirection::Forward,
    };
    let fft = FftPlanner::<f64>::new().plan_fft(n, fft_direction);
    let scale = grid.spacing() / (2.0 * std::f64::consts::PI * grid.hbar()).sqrt();
    let checker = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };

    let block = stride * n;
    let mut line = vec![C64::new(0.0, 0.0); n];
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for outer in (0..values.len()).step_by(block) {
        for inner in 0..stride {
            let base = outer + inner;
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = values[base + j * stride] * checker(j);
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (m, v) in line.iter().enumerate() {
                values[base + m * stride] = v * (scale * checker(m));
            }
        }
    }
}

fn transform_all_axes(values: &mut [C64], grid: &UniformGrid, direction: Direction) {
    for axis in 0..grid.dim() {
        transform_axis(values, grid, axis, direction);
    }
}

fn require(psi: &WaveFunction, expected: Representation) -> Result<()> {
    if psi.representation() != expected {
        return Err(QpbError::Representation {
            expected,
            found: psi.representation(),
        });
    }
    Ok(())
}

fn require_reciprocal(input: &UniformGrid, output: &UniformGrid) -> Result<()> {
    if !output.is_reciprocal_of(input) {
        return Err(QpbError::Configuration(format!(
            "output grid spacing {} is not reciprocal to input spacing {} (need Δr·Δp = 2πħ/n)",
            output.spacing(),
            input.spacing()
        )));
    }
    Ok(())
}

/// Momentum → position on the reciprocal grid.
pub fn to_position(psi_p: &WaveFunction) -> Result<WaveFunction> {
    to_position_on(psi_p, psi_p.grid().reciprocal())
}

pub fn to_position_on(psi_p: &WaveFunction, out_grid: UniformGrid) -> Result<WaveFunction> {
    require(psi_p, Representation::Momentum)?;
    require_reciprocal(psi_p.grid(), &out_grid)?;
    let mut values = psi_p.values().to_vec();
    transform_all_axes(&mut values, psi_p.grid(), Direction::Plus);
    Ok(WaveFunction::from_parts_unchecked(
        out_grid,
        Representation::Position,
        values,
    ))
}

/// Position → momentum on the reciprocal grid.
pub fn to_momentum(chi_r: &WaveFunction) -> Result<WaveFunction> {
    to_momentum_on(chi_r, chi_r.grid().reciprocal())
}

pub fn to_momentum_on(chi_r: &WaveFunction, out_grid: UniformGrid) -> Result<WaveFunction> {
    require(chi_r, Representation::Position)?;
    require_reciprocal(chi_r.grid(), &out_grid)?;
    let mut values = chi_r.values().to_vec();
    transform_all_axes(&mut values, chi_r.grid(), Direction::Minus);
    Ok(WaveFunction::from_parts_unchecked(
        out_grid,
        Representation::Momentum,
        values,
    ))
}

/// Maps a state to its conjugate representation.
pub fn conjugate(psi: &WaveFunction) -> Result<WaveFunction> {
    match psi.representation() {
        Representation::Momentum => to_position(psi),
        Representation::Position => to_momentum(psi),
        other => Err(QpbError::Representation {
            expected: Representation::Position,
            found: other,
        }),
    }
}

/// Norm gap across the transform plus the mass either side holds next to the
/// domain faces.
pub fn check_parseval(psi: &WaveFunction) -> CheckReport {
    const ID: &str = "parseval";
    const REF: &str = "||F psi||^2 = ||psi||^2";
    let image = match conjugate(psi) {
        Ok(image) => image,
        Err(e) => return CheckReport::errored(ID, REF, PARSEVAL_TOLERANCE, &e),
    };
    let norm_gap = (image.norm_sqr() - psi.norm_sqr()).abs();
    let leak_in = psi.boundary_mass(BOUNDARY_CELLS);
    let leak_out = image.boundary_mass(BOUNDARY_CELLS);
    CheckReport::residual(ID, REF, norm_gap + leak_in + leak_out, PARSEVAL_TOLERANCE)
        .with("norm_gap", norm_gap)
        .with("boundary_mass_input", leak_in)
        .with("boundary_mass_output", leak_out)
        .with("n_points", psi.grid().n_points())
        .with("half_extent", psi.grid().half_extent())
        .with("conjugate_half_extent", image.grid().half_extent())
        .with("hbar", psi.grid().hbar())
}

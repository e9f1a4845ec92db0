//! Uniform periodic sampling grids and the wavefunction container built on them.
//!
//! A grid covers `[-L, L)` on each axis with `n` points (a power of two), so the
//! sample points are `x_j = -L + j·(2L/n)` and `+L` itself is excluded. Three
//! dimensional grids are tensor products of identical axes, stored row-major
//! with axis 0 varying slowest.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{QpbError, Result};

/// Relative tolerance used when deciding whether two grids describe the same axis.
const GRID_MATCH_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Position,
    Momentum,
    Energy,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    dim: usize,
    n_points: usize,
    half_extent: f64,
    hbar: f64,
}

impl UniformGrid {
    pub fn new(dim: usize, n_points: usize, half_extent: f64, hbar: f64) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(QpbError::Configuration(format!(
                "grid dimension must be 1 or 3, got {dim}"
            )));
        }
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(QpbError::Configuration(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(QpbError::Configuration(format!(
                "half extent must be positive, got {half_extent}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(QpbError::Configuration(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self {
            dim,
            n_points,
            half_extent,
            hbar,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n_points as f64
    }

    /// Volume element `spacing^dim` of the Riemann sum.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of samples, `n_points^dim`.
    pub fn len(&self) -> usize {
        self.n_points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> f64 {
        -self.half_extent + j as f64 * self.spacing()
    }

    /// Sample coordinates along one axis.
    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.point(j)).collect()
    }

    /// Flat-index stride of `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.n_points.pow((self.dim - 1 - axis) as u32)
    }

    /// Per-axis sample index of a flat index.
    pub fn axis_index(&self, flat: usize, axis: usize) -> usize {
        (flat / self.stride(axis)) % self.n_points
    }

    /// Coordinates of a flat index, one entry per axis.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (axis, c) in out.iter_mut().enumerate().take(self.dim) {
            *c = self.point(self.axis_index(flat, axis));
        }
        out
    }

    /// Same axis layout and the same ħ, up to floating rounding.
    pub fn matches(&self, other: &UniformGrid) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= GRID_MATCH_RTOL * a.abs().max(b.abs());
        self.dim == other.dim
            && self.n_points == other.n_points
            && close(self.half_extent, other.half_extent)
            && close(self.hbar, other.hbar)
    }

    /// Grid of the same size and ħ on which the ħ-scaled Fourier transform of
    /// data sampled here is exactly unitary: `Δx·Δk = 2πħ/n`.
    pub fn reciprocal(&self) -> UniformGrid {
        let half_extent = std::f64::consts::PI * self.hbar / self.spacing();
        Self {
            half_extent,
            ..*self
        }
    }

    pub fn is_reciprocal_of(&self, other: &UniformGrid) -> bool {
        self.dim == other.dim
            && self.n_points == other.n_points
            && (self.hbar - other.hbar).abs() <= GRID_MATCH_RTOL * self.hbar
            && {
                let product = self.spacing() * other.spacing();
                let expected = 2.0 * std::f64::consts::PI * self.hbar / self.n_points as f64;
                (product - expected).abs() <= GRID_MATCH_RTOL * expected
            }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: UniformGrid,
    representation: Representation,
    values: Vec<C64>,
}

impl WaveFunction {
    pub fn new(
        grid: UniformGrid,
        representation: Representation,
        values: Vec<C64>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(QpbError::Configuration(format!(
                "value array has {} samples, grid expects {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            representation,
            values,
        })
    }

    pub fn zeros(grid: UniformGrid, representation: Representation) -> Self {
        Self {
            grid,
            representation,
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every grid point; the slice holds one coordinate per axis.
    pub fn from_fn(
        grid: UniformGrid,
        representation: Representation,
        f: impl Fn(&[f64]) -> C64,
    ) -> Self {
        let dim = grid.dim();
        let values = (0..grid.len())
            .map(|flat| {
                let c = grid.coords(flat);
                f(&c[..dim])
            })
            .collect();
        Self {
            grid,
            representation,
            values,
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// Replaces the samples, keeping grid and representation.
    pub fn with_values(&self, values: Vec<C64>) -> Result<Self> {
        Self::new(self.grid, self.representation, values)
    }

    pub(crate) fn from_parts_unchecked(
        grid: UniformGrid,
        representation: Representation,
        values: Vec<C64>,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self {
            grid,
            representation,
            values,
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// `self + factor·other`
    pub fn axpy(&self, factor: C64, other: &WaveFunction) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + factor * b)
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    pub fn check_compatible(&self, other: &WaveFunction) -> Result<()> {
        if !self.grid.matches(&other.grid) {
            return Err(QpbError::IncompatibleOperands(format!(
                "grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        if self.representation != other.representation {
            return Err(QpbError::IncompatibleOperands(format!(
                "representations differ: {:?} vs {:?}",
                self.representation, other.representation
            )));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Probability mass within `width` cells of any face of the domain.
    pub fn boundary_mass(&self, width: usize) -> f64 {
        let n = self.grid.n_points();
        let dim = self.grid.dim();
        let near_face = |flat: usize| {
            (0..dim).any(|axis| {
                let j = self.grid.axis_index(flat, axis);
                j < width || j >= n - width
            })
        };
        self.values
            .iter()
            .enumerate()
            .filter(|(flat, _)| near_face(*flat))
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            * self.grid.cell_volume()
    }
}

/// Riemann-sum inner product `Σ conj(a_j)·b_j·Δ^dim`.
pub fn inner_product(a: &WaveFunction, b: &WaveFunction) -> Result<C64> {
    a.check_compatible(b)?;
    let sum: C64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid.cell_volume())
}

pub fn normalize(psi: &WaveFunction) -> Result<WaveFunction> {
    let norm = psi.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(QpbError::DegenerateState(format!(
            "cannot normalize a state with norm {norm}"
        )));
    }
    Ok(psi.scale(C64::new(1.0 / norm, 0.0)))
}

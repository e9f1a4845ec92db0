//! Reference state families used by the checks and the property tests.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::Result;
use crate::grid::{normalize, Representation, UniformGrid, WaveFunction};

/// Normalized `exp(-(x-c)²/2σ²)·exp(i k x)` on a 1D grid.
pub fn gaussian(
    grid: UniformGrid,
    representation: Representation,
    center: f64,
    sigma: f64,
    wavenumber: f64,
) -> Result<WaveFunction> {
    normalize(&WaveFunction::from_fn(grid, representation, |x| {
        let u = (x[0] - center) / sigma;
        C64::from_polar((-0.5 * u * u).exp(), wavenumber * x[0])
    }))
}

/// Normalized product Gaussian on a 3D grid, one width per axis.
pub fn gaussian_3d(grid: UniformGrid, centers: [f64; 3], sigmas: [f64; 3]) -> Result<WaveFunction> {
    normalize(&WaveFunction::from_fn(
        grid,
        Representation::Position,
        |x| {
            let e: f64 = (0..3)
                .map(|a| {
                    let u = (x[a] - centers[a]) / sigmas[a];
                    -0.5 * u * u
                })
                .sum();
            C64::new(e.exp(), 0.0)
        },
    ))
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite_polynomial(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite function `H_n(x) exp(-x²/2)` (oscillator eigenstate with m = ω = ħ = 1 scaling).
pub fn hermite_function(
    grid: UniformGrid,
    representation: Representation,
    n: usize,
) -> Result<WaveFunction> {
    normalize(&WaveFunction::from_fn(grid, representation, |x| {
        C64::new(
            hermite_polynomial(n, x[0]) * (-0.5 * x[0] * x[0]).exp(),
            0.0,
        )
    }))
}

/// Seeded smooth state: Gaussian envelope times a few low Fourier modes.
///
/// Envelope widths scale with the half extent; mode wavenumbers stay well
/// inside the reciprocal band.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSmoothState {
    pub sigma: f64,
    pub center: f64,
    pub base_wavenumber: f64,
    pub coefficients: Vec<C64>,
}

impl RandomSmoothState {
    pub fn sample<R: Rng + ?Sized>(grid: &UniformGrid, rng: &mut R) -> Self {
        let l = grid.half_extent();
        let sigma = l * rng.random_range(0.075..0.15);
        let center = l * rng.random_range(-0.05..0.05);
        let band = std::f64::consts::PI * grid.hbar() / grid.spacing();
        let base_wavenumber = rng.random_range(0.0..1.0) * (band / 40.0).min(1.5 / sigma);
        let modes = rng.random_range(1..=4);
        let coefficients = (0..modes)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Self {
            sigma,
            center,
            base_wavenumber,
            coefficients,
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let u = (x - self.center) / self.sigma;
        let envelope = (-0.5 * u * u).exp();
        let modes: C64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(m, c)| c * C64::from_polar(1.0, m as f64 * self.base_wavenumber * x))
            .sum();
        envelope * modes
    }

    pub fn on_grid(&self, grid: UniformGrid) -> Result<WaveFunction> {
        normalize(&WaveFunction::from_fn(
            grid,
            Representation::Position,
            |x| self.eval(x[0]),
        ))
    }
}

//! Discrete Hilbert transform `H[s](z) = -(1/π) P.V.∫ s(u)/(u - z) du`.
//!
//! The truncated part is an exact linear convolution of the samples with the
//! band-limited kernel `2/(πm)` (odd `m`), whose lattice symbol is
//! `-i·sgn(ω)`. It is evaluated with FFTs on a zero-padded buffer of twice the
//! length, so no periodic images enter. End samples carry half weight, which
//! matches the trapezoid domain `[x_0, x_{n-1}]` of the quadrature oracle.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{QpbError, Result};
use crate::grid::UniformGrid;

/// End samples larger than this fraction of the peak mark a signal that has
/// not decayed inside the window.
pub const EDGE_RATIO_LIMIT: f64 = 0.1;

/// Terms of the asymptotic tail model `Σ c_k (A/u)^k`.
const TAIL_ORDER: usize = 3;

pub(crate) fn check_decay(samples: &[f64]) -> Result<()> {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(());
    }
    let edge = samples[0].abs().max(samples[samples.len() - 1].abs());
    if edge > EDGE_RATIO_LIMIT * peak {
        return Err(QpbError::BoundaryContamination {
            measure: edge / peak,
            limit: EDGE_RATIO_LIMIT,
        });
    }
    Ok(())
}

fn check_length(samples: &[f64], grid: &UniformGrid) -> Result<()> {
    if grid.dim() != 1 || samples.len() != grid.n_points() {
        return Err(QpbError::Configuration(format!(
            "expected {} samples on a 1D grid, got {}",
            grid.n_points(),
            samples.len()
        )));
    }
    Ok(())
}

/// Hilbert transform of the samples restricted to the grid window.
pub fn hilbert_spectral(re_part: &[f64], grid: &UniformGrid) -> Result<Vec<f64>> {
    check_length(re_part, grid)?;
    check_decay(re_part)?;
    Ok(truncated_hilbert(re_part))
}

fn truncated_hilbert(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let size = 2 * n;
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut signal = vec![C64::new(0.0, 0.0); size];
    for (slot, &s) in signal.iter_mut().zip(samples) {
        *slot = C64::new(s, 0.0);
    }
    signal[0] *= 0.5;
    signal[n - 1] *= 0.5;

    let mut kernel = vec![C64::new(0.0, 0.0); size];
    for m in (1..n).step_by(2) {
        let h = 2.0 / (PI * m as f64);
        kernel[m] = C64::new(h, 0.0);
        kernel[size - m] = C64::new(-h, 0.0);
    }

    forward.process(&mut signal);
    forward.process(&mut kernel);
    for (s, k) in signal.iter_mut().zip(&kernel) {
        *s *= k;
    }
    inverse.process(&mut signal);
    signal[..n].iter().map(|v| v.re / size as f64).collect()
}

/// Least-squares fit of `s(u) ≈ Σ_k c_k (A/|u|)^k` on the outer eighth of
/// each side, used to close the transform over the unsampled tails.
#[derive(Debug, Clone, PartialEq)]
pub struct TailModel {
    /// Distance from the origin to the last sample on the right.
    pub right_edge: f64,
    pub right: [f64; TAIL_ORDER],
    /// Distance from the origin to the first sample on the left.
    pub left_edge: f64,
    pub left: [f64; TAIL_ORDER],
}

impl TailModel {
    pub fn fit(samples: &[f64], grid: &UniformGrid) -> Result<Self> {
        check_length(samples, grid)?;
        let n = samples.len();
        let width = (n / 8).max(2 * TAIL_ORDER);
        let points = grid.points();
        let right_edge = points[n - 1];
        let left_edge = -points[0];
        let right = fit_side(
            (n - width..n).map(|j| (right_edge / points[j], samples[j])),
            width,
        );
        let left = fit_side(
            (0..width).map(|j| (left_edge / -points[j], samples[j])),
            width,
        );
        Ok(Self {
            right_edge,
            right,
            left_edge,
            left,
        })
    }

    /// `-(1/π)` times the principal-value integral over both tails at `z`.
    /// `z` must lie inside the sampled window; the end samples themselves are
    /// evaluated half a cell inward, where the closed form stays finite.
    pub fn hilbert_correction(&self, z: f64, spacing: f64) -> f64 {
        let inward = |r: f64, edge: f64| r.min(1.0 - 0.5 * spacing / edge);
        let r_right = inward(z / self.right_edge, self.right_edge);
        let r_left = inward(-z / self.left_edge, self.left_edge);
        let mut integral = 0.0;
        for k in 1..=TAIL_ORDER {
            integral += self.right[k - 1] * tail_series(k, r_right);
            integral -= self.left[k - 1] * tail_series(k, r_left);
        }
        -integral / PI
    }
}

fn fit_side(rows: impl Iterator<Item = (f64, f64)>, width: usize) -> [f64; TAIL_ORDER] {
    let mut design = DMatrix::<f64>::zeros(width, TAIL_ORDER);
    let mut rhs = DVector::<f64>::zeros(width);
    for (row, (ratio, value)) in rows.enumerate() {
        for k in 0..TAIL_ORDER {
            design[(row, k)] = ratio.powi(k as i32 + 1);
        }
        rhs[row] = value;
    }
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .unwrap_or_else(|_| DVector::zeros(TAIL_ORDER));
    let mut out = [0.0; TAIL_ORDER];
    for (o, c) in out.iter_mut().zip(coeffs.iter()) {
        *o = *c;
    }
    out
}

/// `Σ_{m>=0} r^m / (k + m)`, which equals `A^k ∫_A^∞ du / (u^k (u - rA))`.
fn tail_series(k: usize, r: f64) -> f64 {
    if r.abs() <= 0.5 {
        let mut sum = 0.0;
        let mut power = 1.0;
        for m in 0..64 {
            sum += power / (k + m) as f64;
            power *= r;
        }
        sum
    } else {
        let partial: f64 = (1..k).map(|j| r.powi(j as i32) / j as f64).sum();
        (-(1.0 - r).ln() - partial) / r.powi(k as i32)
    }
}

/// Full-line Hilbert transform: truncated window plus the fitted tail closure.
pub fn hilbert_transform(samples: &[f64], grid: &UniformGrid) -> Result<Vec<f64>> {
    let window = hilbert_spectral(samples, grid)?;
    let tails = TailModel::fit(samples, grid)?;
    let spacing = grid.spacing();
    Ok(window
        .into_iter()
        .enumerate()
        .map(|(j, h)| h + tails.hilbert_correction(grid.point(j), spacing))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, l: f64) -> UniformGrid {
        UniformGrid::new(1, n, l, 1.0).unwrap()
    }

    #[test]
    fn tail_series_matches_closed_form_across_branch() {
        for k in 1..=3 {
            for &r in &[0.49, 0.5, 0.51, -0.6, 0.9] {
                // direct quadrature of A^k ∫_A^∞ du/(u^k (u - rA)) with A = 1, u = 1/s
                let steps = 200_000;
                let mut q = 0.0;
                for i in 0..steps {
                    let s = (i as f64 + 0.5) / steps as f64;
                    q += s.powi(k as i32 - 1) / (1.0 - r * s);
                }
                q /= steps as f64;
                assert!((tail_series(k, r) - q).abs() < 1e-8, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let g = grid(256, 16.0);
        let out = hilbert_spectral(&vec![0.0; 256], &g).unwrap();
        assert!(out.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn lorentzian_pair() {
        // H[1/(1+u²)] = u/(1+u²) on the full line
        let g = grid(4096, 64.0);
        let s: Vec<f64> = g.points().iter().map(|u| 1.0 / (1.0 + u * u)).collect();
        let h = hilbert_transform(&s, &g).unwrap();
        for (j, u) in g.points().iter().enumerate() {
            if u.abs() <= 32.0 {
                assert!((h[j] - u / (1.0 + u * u)).abs() < 1e-7, "u={u}");
            }
        }
    }

    #[test]
    fn rejects_undecayed_input() {
        let g = grid(64, 4.0);
        let s = vec![1.0; 64];
        assert!(matches!(
            hilbert_spectral(&s, &g),
            Err(QpbError::BoundaryContamination { .. })
        ));
        assert!(hilbert_spectral(&[0.0; 8], &g).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            // Lorentzians of any width and centre: applying the transform twice negates.
            #[test]
            fn full_line_transform_is_an_anti_involution(width in 0.5f64..2.0, centre in -2.0f64..2.0) {
                let g = grid(4096, 64.0);
                let s: Vec<f64> = g
                    .points()
                    .iter()
                    .map(|u| width / ((u - centre).powi(2) + width * width))
                    .collect();
                let once = hilbert_transform(&s, &g).unwrap();
                let twice = hilbert_transform(&once, &g).unwrap();
                for (j, u) in g.points().iter().enumerate() {
                    if u.abs() <= 32.0 {
                        prop_assert!((twice[j] + s[j]).abs() < 1e-4, "u={} gap {}", u, twice[j] + s[j]);
                    }
                }
            }
        }
    }
}

//! Brute-force principal-value quadrature, the independent oracle for the
//! spectral Hilbert transform.

use crate::grid::UniformGrid;

/// Highest half-width of the central-difference stencil for `s'(z)`.
const MAX_STENCIL: usize = 6;

/// Central-difference weights for the first derivative with half-width `p`
/// (order `2p`): `c_k = (-1)^{k+1} (p!)² / (k (p-k)! (p+k)!)`.
fn derivative_weights(p: usize) -> Vec<f64> {
    let factorial = |m: usize| (1..=m).fold(1.0f64, |acc, v| acc * v as f64);
    (1..=p)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * factorial(p).powi(2) / (k as f64 * factorial(p - k) * factorial(p + k))
        })
        .collect()
}

/// `P.V.∫_{x_0}^{x_{n-1}} s(u) / (u - z) du` at `z = x_{z_index}`.
///
/// The symmetric neighbourhood `[z - D, z + D]` that fits inside the window is
/// folded into `∫_0^D (s(z+t) - s(z-t))/t dt`, whose integrand is regular with
/// value `2 s'(z)` at `t = 0`; the remainder is a plain trapezoid sum. For an
/// end sample there is no symmetric neighbourhood and the singular cell is
/// dropped.
pub fn pv_quadrature(samples: &[f64], grid: &UniformGrid, z_index: usize) -> f64 {
    let n = samples.len();
    assert!(z_index < n, "z_index {z_index} outside {n} samples");
    let h = grid.spacing();
    let z = grid.point(z_index);
    let half = z_index.min(n - 1 - z_index);

    let mut total = 0.0;
    if half > 0 {
        let p = half.min(MAX_STENCIL);
        let derivative: f64 = derivative_weights(p)
            .iter()
            .enumerate()
            .map(|(k, c)| c * (samples[z_index + k + 1] - samples[z_index - k - 1]))
            .sum::<f64>()
            / h;
        let mut folded = derivative; // half weight times 2 s'(z)
        for m in 1..=half {
            let g = (samples[z_index + m] - samples[z_index - m]) / (m as f64 * h);
            folded += if m == half { 0.5 * g } else { g };
        }
        total += folded * h;
    }

    let trapezoid = |range: std::ops::RangeInclusive<usize>| -> f64 {
        let (lo, hi) = (*range.start(), *range.end());
        range
            .filter(|&j| j != z_index)
            .map(|j| {
                let w = if j == lo || j == hi { 0.5 } else { 1.0 };
                w * samples[j] / (grid.point(j) - z)
            })
            .sum::<f64>()
            * h
    };
    if z_index > half {
        total += trapezoid(0..=z_index - half);
    }
    if z_index + half < n - 1 {
        total += trapezoid(z_index + half..=n - 1);
    }
    total
}

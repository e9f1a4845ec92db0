//! Expectation values, spreads and uncertainty-product checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{QpbError, Result};
use crate::grid::{inner_product, WaveFunction};
use crate::operators::{apply, commutator_apply, GridOperator, MomentumBackend};
use crate::report::CheckReport;

pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;
pub const BOUND_TOLERANCE: f64 = 1e-8;
pub const VECTOR_BOUND_TOLERANCE: f64 = 1e-6;
pub const HERMITIAN_RESIDUE_LIMIT: f64 = 1e-10;
/// Negative variances down to this size are rounding and clamp to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub second_moment: f64,
    pub std_dev: f64,
    pub operator_tag: String,
    /// `|Im⟨ψ|Aψ⟩|`, zero for an exactly Hermitian operator.
    pub imaginary_residue: f64,
}

fn require_normalized(psi: &WaveFunction) -> Result<()> {
    let gap = (psi.norm() - 1.0).abs();
    if gap > NORMALIZATION_TOLERANCE {
        return Err(QpbError::Precondition(format!(
            "state norm deviates from 1 by {gap:.3e}"
        )));
    }
    Ok(())
}

pub fn expectation(op: &GridOperator, psi: &WaveFunction) -> Result<C64> {
    require_normalized(psi)?;
    inner_product(psi, &apply(op, psi)?)
}

/// `⟨A⟩`, `⟨Aψ|Aψ⟩` and `ΔA = ‖(A − ⟨A⟩)ψ‖`.
pub fn moments(op: &GridOperator, psi: &WaveFunction) -> Result<Moments> {
    require_normalized(psi)?;
    let a_psi = apply(op, psi)?;
    let mean_c = inner_product(psi, &a_psi)?;
    let mean = mean_c.re;
    let second_moment = a_psi.norm_sqr();
    let centered = a_psi.axpy(C64::new(-mean, 0.0), psi)?;
    let variance = centered.norm_sqr();
    Ok(Moments {
        mean,
        second_moment,
        std_dev: clamp_sqrt(variance),
        operator_tag: op.tag(),
        imaginary_residue: mean_c.im.abs(),
    })
}

fn clamp_sqrt(variance: f64) -> f64 {
    if (-VARIANCE_CLAMP..0.0).contains(&variance) {
        0.0
    } else {
        variance.max(0.0).sqrt()
    }
}

/// `ΔA·ΔB >= ½|⟨[A,B]⟩|` with a one-sided tolerance; the residual is the
/// amount by which the bound is violated.
pub fn uncertainty_check(
    a: &GridOperator,
    b: &GridOperator,
    psi: &WaveFunction,
) -> Result<CheckReport> {
    let ma = moments(a, psi)?;
    let mb = moments(b, psi)?;
    let comm = commutator_apply(a, b, psi)?;
    let bound = 0.5 * inner_product(psi, &comm)?.norm();
    let product = ma.std_dev * mb.std_dev;
    Ok(CheckReport::residual(
        "uncertainty_relation",
        "Delta a Delta b >= |<[A,B]>|/2",
        (bound - product).max(0.0),
        BOUND_TOLERANCE,
    )
    .with("product", product)
    .with("bound", bound)
    .with("margin", product - bound)
    .with("operator_a", ma.operator_tag)
    .with("operator_b", mb.operator_tag)
    .with("std_dev_a", ma.std_dev)
    .with("std_dev_b", mb.std_dev)
    .with(
        "imaginary_residue",
        ma.imaginary_residue.max(mb.imaginary_residue),
    ))
}

/// Per-axis `Δx_k·Δp_k` of a 3D state.
pub fn axis_products(psi: &WaveFunction) -> Result<[f64; 3]> {
    let grid = *psi.grid();
    if grid.dim() != 3 {
        return Err(QpbError::Configuration(format!(
            "vector uncertainty needs a 3D state, got dim {}",
            grid.dim()
        )));
    }
    let mut out = [0.0; 3];
    for (axis, slot) in out.iter_mut().enumerate() {
        let x = moments(&GridOperator::position(grid, axis)?, psi)?;
        let p = moments(
            &GridOperator::momentum(grid, axis, MomentumBackend::Spectral)?,
            psi,
        )?;
        *slot = x.std_dev * p.std_dev;
    }
    Ok(out)
}

/// `Δr·Δp = Σ_k Δx_k Δp_k >= 3ħ/2`.
pub fn vector_uncertainty_check(psi: &WaveFunction) -> Result<CheckReport> {
    let products = axis_products(psi)?;
    let total: f64 = products.iter().sum();
    let bound = 1.5 * psi.grid().hbar();
    Ok(CheckReport::residual(
        "uncertainty_vector_3d",
        "Delta r . Delta p >= (3/2) hbar",
        (bound - total).max(0.0),
        VECTOR_BOUND_TOLERANCE,
    )
    .with("product", total)
    .with("bound", bound)
    .with("axis_products", products.to_vec()))
}

/// Mean and spread of a Hermitian matrix in a normalized state vector.
pub fn matrix_moments(m: &DMatrix<C64>, v: &DVector<C64>) -> Result<(f64, f64)> {
    let gap = (v.norm() - 1.0).abs();
    if gap > NORMALIZATION_TOLERANCE {
        return Err(QpbError::Precondition(format!(
            "state norm deviates from 1 by {gap:.3e}"
        )));
    }
    let mv = m * v;
    let mean = v.dotc(&mv).re;
    let centered = mv - v * C64::new(mean, 0.0);
    Ok((mean, clamp_sqrt(centered.norm_squared())))
}

/// `ΔE·Δt` and `½|⟨[H,T]⟩|` for a state vector in the ladder basis.
pub fn energy_time_product(
    h: &DMatrix<C64>,
    t: &DMatrix<C64>,
    v: &DVector<C64>,
) -> Result<(f64, f64)> {
    let (_, de) = matrix_moments(h, v)?;
    let (_, dt) = matrix_moments(t, v)?;
    let comm = h * t - t * h;
    let bound = 0.5 * v.dotc(&(comm * v)).norm();
    Ok((de * dt, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Representation, UniformGrid};
    use crate::states::{gaussian, gaussian_3d, hermite_function, RandomSmoothState};
    use crate::transform::to_momentum;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> UniformGrid {
        UniformGrid::new(1, 256, 8.0, 1.0).unwrap()
    }

    fn x(g: UniformGrid) -> GridOperator {
        GridOperator::position(g, 0).unwrap()
    }

    fn p(g: UniformGrid) -> GridOperator {
        GridOperator::momentum(g, 0, MomentumBackend::Spectral).unwrap()
    }

    /// Quadrature oracle: `Σ x |ψ|² Δx` and `Σ x² |ψ|² Δx` straight from the samples.
    fn position_oracle(psi: &WaveFunction) -> (f64, f64) {
        let g = psi.grid();
        let (mut m1, mut m2) = (0.0, 0.0);
        for (j, v) in psi.values().iter().enumerate() {
            let w = v.norm_sqr() * g.spacing();
            m1 += g.point(j) * w;
            m2 += g.point(j).powi(2) * w;
        }
        (m1, m2)
    }

    #[test]
    fn expectation_examples() {
        let g = grid();
        let centered = gaussian(g, Representation::Position, 0.0, 1.0, 0.0).unwrap();
        assert!(expectation(&x(g), &centered).unwrap().norm() < 1e-10);
        let shifted = gaussian(g, Representation::Position, 0.5, 1.0, 0.0).unwrap();
        let mean = expectation(&x(g), &shifted).unwrap();
        assert!((mean.re - 0.5).abs() < 1e-8);
        assert!((mean.re - position_oracle(&shifted).0).abs() < 1e-12);
        assert!(expectation(&p(g), &centered).unwrap().norm() < 1e-10);
        let unnormalized = centered.scale(C64::new(2.0, 0.0));
        assert!(matches!(
            expectation(&x(g), &unnormalized),
            Err(QpbError::Precondition(_))
        ));
    }

    #[test]
    fn gaussian_moments_match_closed_form() {
        let g = grid();
        for sigma in [0.8, 1.0, 1.3] {
            let psi = gaussian(g, Representation::Position, 0.0, sigma, 0.0).unwrap();
            let mx = moments(&x(g), &psi).unwrap();
            let mp = moments(&p(g), &psi).unwrap();
            assert!((mx.std_dev - sigma / 2f64.sqrt()).abs() < 1e-8);
            assert!((mp.std_dev - 1.0 / (sigma * 2f64.sqrt())).abs() < 1e-8);
            let (m1, m2) = position_oracle(&psi);
            assert!((mx.second_moment - m2).abs() < 1e-12);
            assert!((mx.std_dev.powi(2) - (mx.second_moment - mx.mean.powi(2))).abs() < 1e-12);
            assert!((mx.mean - m1).abs() < 1e-12);
            let modulated = gaussian(g, Representation::Position, 0.0, sigma, 2.0).unwrap();
            assert!((moments(&x(g), &modulated).unwrap().std_dev - mx.std_dev).abs() < 1e-8);
            let mp2 = moments(&p(g), &modulated).unwrap();
            assert!((mp2.mean - 2.0).abs() < 1e-8);
            assert!(mp2.imaginary_residue < 1e-10);
        }
    }

    #[test]
    fn second_moment_forms_agree() {
        let g = grid();
        let psi = RandomSmoothState::sample(&g, &mut ChaCha8Rng::seed_from_u64(3))
            .on_grid(g)
            .unwrap();
        for op in [x(g), p(g)] {
            let once = moments(&op, &psi).unwrap().second_moment;
            let twice =
                inner_product(&psi, &apply(&op, &apply(&op, &psi).unwrap()).unwrap()).unwrap();
            assert!((once - twice.re).abs() < 1e-9);
        }
    }

    #[test]
    fn saturation_and_hermite_products() {
        let g = grid();
        let psi = gaussian(g, Representation::Position, 0.0, 1.0, 0.0).unwrap();
        let r = uncertainty_check(&x(g), &p(g), &psi).unwrap();
        assert!(r.pass);
        assert!((r.context["product"].as_f64().unwrap() - 0.5).abs() < 1e-8);
        let h1 = hermite_function(g, Representation::Position, 1).unwrap();
        let r = uncertainty_check(&x(g), &p(g), &h1).unwrap();
        assert!(r.pass);
        assert!((r.context["product"].as_f64().unwrap() - 1.5).abs() < 1e-6);
        let r = uncertainty_check(&x(g), &x(g), &h1).unwrap();
        assert!(r.pass);
        assert!(r.context["bound"].as_f64().unwrap() == 0.0);
    }

    #[test]
    fn momentum_representation_moments() {
        let g = grid();
        let psi = gaussian(g, Representation::Position, 0.0, 1.0, 0.0).unwrap();
        let phi = to_momentum(&psi).unwrap();
        let gp = *phi.grid();
        let mx = moments(&x(gp), &phi).unwrap();
        let mp = moments(&p(gp), &phi).unwrap();
        assert!((mx.std_dev * mp.std_dev - 0.5).abs() < 1e-8);
    }

    #[test]
    fn vector_examples() {
        let g = UniformGrid::new(3, 64, 8.0, 1.0).unwrap();
        let iso = gaussian_3d(g, [0.0; 3], [1.0; 3]).unwrap();
        let r = vector_uncertainty_check(&iso).unwrap();
        assert!(r.pass);
        assert!((r.context["product"].as_f64().unwrap() - 1.5).abs() < 1e-6);
        let aniso = gaussian_3d(g, [0.1, -0.2, 0.0], [0.8, 1.0, 1.25]).unwrap();
        let r = vector_uncertainty_check(&aniso).unwrap();
        assert!((r.context["product"].as_f64().unwrap() - 1.5).abs() < 1e-6);
        let flat = gaussian(grid(), Representation::Position, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            vector_uncertainty_check(&flat),
            Err(QpbError::Configuration(_))
        ));
    }

    #[test]
    fn energy_time_bound_on_low_states() {
        let sys = crate::ladder::LadderSystem::build(64, 1.0, 1.0).unwrap();
        let mut v = DVector::<C64>::zeros(64);
        v[0] = C64::new(1.0, 0.0);
        let (product, bound) = energy_time_product(&sys.h, &sys.t, &v).unwrap();
        assert!((product - 0.5).abs() < 1e-12);
        assert!((bound - 0.5).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_states_respect_bound(seed in any::<u64>()) {
            let g = grid();
            let psi = RandomSmoothState::sample(&g, &mut ChaCha8Rng::seed_from_u64(seed)).on_grid(g).unwrap();
            let r = uncertainty_check(&x(g), &p(g), &psi).unwrap();
            prop_assert!(r.context["product"].as_f64().unwrap() >= 0.5 - BOUND_TOLERANCE);
            prop_assert!(r.context["imaginary_residue"].as_f64().unwrap() < HERMITIAN_RESIDUE_LIMIT);
        }

        #[test]
        fn dilation_preserves_product(s in 0.7f64..1.4) {
            let g = grid();
            let base = gaussian(g, Representation::Position, 0.3, 1.0, 1.0).unwrap();
            let dilated = crate::grid::normalize(&WaveFunction::from_fn(g, Representation::Position, |x| {
                let u = s * x[0] - 0.3;
                C64::from_polar(s.sqrt() * (-0.5 * u * u).exp(), s * x[0])
            })).unwrap();
            let bx = moments(&x(g), &base).unwrap().std_dev;
            let bp = moments(&p(g), &base).unwrap().std_dev;
            let dx = moments(&x(g), &dilated).unwrap().std_dev;
            let dp = moments(&p(g), &dilated).unwrap().std_dev;
            prop_assert!((dx - bx / s).abs() < 1e-8);
            prop_assert!((dp - bp * s).abs() < 1e-8);
            prop_assert!((dx * dp - bx * bp).abs() < 1e-8);
        }
    }
}

//! Position and momentum operators on grid wavefunctions and the pointwise
//! checks of the canonical commutator.
//!
//! In the position representation `X` multiplies by the coordinate and `P` is
//! `-iħ ∂/∂x`, either spectrally (conjugating a multiplication by `p` with the
//! ħ-Fourier pair) or by second-order central differences. In the momentum
//! representation the roles swap: `P` multiplies by `p` and `X` acts as
//! `+iħ ∂/∂p`, obtained by conjugating with the transform pair.
//!
//! `[X,P] = iħ` has no finite-dimensional realization (the trace of a
//! commutator vanishes), so every check here is pointwise on the interior of a
//! boundary-clean state.

use num_complex::Complex64 as C64;

use crate::error::{QpbError, Result};
use crate::grid::{inner_product, Representation, UniformGrid, WaveFunction};
use crate::report::CheckReport;
use crate::transform::{transform_axis, Direction, BOUNDARY_CELLS};

/// Boundary mass above which a state is rejected by the commutator checks.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-6;

pub const DEFAULT_INTERIOR_THRESHOLD: f64 = 1e-6;

pub const SPECTRAL_TOLERANCE: f64 = 1e-6;

/// `C` in the finite-difference tolerance `C·ħ·Δx²`.
pub const FD_CONSTANT: f64 = 8.0;

pub const TENSOR_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    PositionMultiply,
    MomentumSpectral,
    MomentumFiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumBackend {
    Spectral,
    FiniteDifference,
}

impl MomentumBackend {
    pub fn kind(self) -> OperatorKind {
        match self {
            MomentumBackend::Spectral => OperatorKind::MomentumSpectral,
            MomentumBackend::FiniteDifference => OperatorKind::MomentumFiniteDifference,
        }
    }

    fn label(self) -> &'static str {
        match self {
            MomentumBackend::Spectral => "spectral",
            MomentumBackend::FiniteDifference => "finite_difference",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOperator {
    pub kind: OperatorKind,
    pub axis: usize,
    pub grid: UniformGrid,
}

impl GridOperator {
    pub fn new(kind: OperatorKind, axis: usize, grid: UniformGrid) -> Result<Self> {
        if axis >= grid.dim() {
            return Err(QpbError::Configuration(format!(
                "axis {axis} out of range for a {}-dimensional grid",
                grid.dim()
            )));
        }
        Ok(Self { kind, axis, grid })
    }

    pub fn position(grid: UniformGrid, axis: usize) -> Result<Self> {
        Self::new(OperatorKind::PositionMultiply, axis, grid)
    }

    pub fn momentum(grid: UniformGrid, axis: usize, backend: MomentumBackend) -> Result<Self> {
        Self::new(backend.kind(), axis, grid)
    }

    pub fn tag(&self) -> String {
        let name = match self.kind {
            OperatorKind::PositionMultiply => "X",
            OperatorKind::MomentumSpectral => "P_spectral",
            OperatorKind::MomentumFiniteDifference => "P_fd",
        };
        format!("{name}[{}]", self.axis)
    }
}

fn multiply_by_axis_coordinate(values: &mut [C64], grid: &UniformGrid, axis: usize) {
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= grid.point(grid.axis_index(flat, axis));
    }
}

/// Conjugates multiplication by the dual coordinate with the transform pair.
/// `Minus` first gives `-iħ∂/∂x` on position data, `Plus` gives `+iħ∂/∂p` on
/// momentum data.
fn spectral_derivative(values: &mut [C64], grid: &UniformGrid, axis: usize, to_dual: Direction) {
    let back = match to_dual {
        Direction::Plus => Direction::Minus,
        Direction::Minus => Direction::Plus,
    };
    let dual = grid.reciprocal();
    transform_axis(values, grid, axis, to_dual);
    multiply_by_axis_coordinate(values, &dual, axis);
    transform_axis(values, &dual, axis, back);
}

fn central_difference(values: &[C64], grid: &UniformGrid, axis: usize) -> Vec<C64> {
    let n = grid.n_points();
    let stride = grid.stride(axis);
    let h2 = 2.0 * grid.spacing();
    (0..values.len())
        .map(|flat| {
            let j = grid.axis_index(flat, axis);
            let base = flat - j * stride;
            let up = base + ((j + 1) % n) * stride;
            let down = base + ((j + n - 1) % n) * stride;
            (values[up] - values[down]) / h2
        })
        .collect()
}

pub fn apply(op: &GridOperator, psi: &WaveFunction) -> Result<WaveFunction> {
    if !op.grid.matches(psi.grid()) {
        return Err(QpbError::IncompatibleOperands(format!(
            "operator grid {:?} does not match state grid {:?}",
            op.grid,
            psi.grid()
        )));
    }
    let grid = psi.grid();
    let hbar = grid.hbar();
    let mut values = psi.values().to_vec();
    match (psi.representation(), op.kind) {
        (Representation::Position, OperatorKind::PositionMultiply)
        | (Representation::Momentum, OperatorKind::MomentumSpectral)
        | (Representation::Momentum, OperatorKind::MomentumFiniteDifference) => {
            multiply_by_axis_coordinate(&mut values, grid, op.axis);
        }
        (Representation::Position, OperatorKind::MomentumSpectral) => {
            spectral_derivative(&mut values, grid, op.axis, Direction::Minus);
        }
        (Representation::Position, OperatorKind::MomentumFiniteDifference) => {
            let minus_i_hbar = C64::new(0.0, -hbar);
            values = central_difference(&values, grid, op.axis)
                .into_iter()
                .map(|d| d * minus_i_hbar)
                .collect();
        }
        (Representation::Momentum, OperatorKind::PositionMultiply) => {
            spectral_derivative(&mut values, grid, op.axis, Direction::Plus);
        }
        (other, _) => {
            return Err(QpbError::Representation {
                expected: Representation::Position,
                found: other,
            })
        }
    }
    Ok(WaveFunction::from_parts_unchecked(
        *grid,
        psi.representation(),
        values,
    ))
}

/// `(AB - BA)ψ` by two applications per term, without simplification.
pub fn commutator_apply(
    a: &GridOperator,
    b: &GridOperator,
    psi: &WaveFunction,
) -> Result<WaveFunction> {
    if !a.grid.matches(&b.grid) {
        return Err(QpbError::IncompatibleOperands(
            "commutator operands live on different grids".into(),
        ));
    }
    let ab = apply(a, &apply(b, psi)?)?;
    let ba = apply(b, &apply(a, psi)?)?;
    ab.axpy(C64::new(-1.0, 0.0), &ba)
}

fn require_boundary_clean(psi: &WaveFunction) -> Result<f64> {
    let mass = psi.boundary_mass(BOUNDARY_CELLS);
    if mass > BOUNDARY_MASS_LIMIT {
        return Err(QpbError::BoundaryContamination {
            measure: mass,
            limit: BOUNDARY_MASS_LIMIT,
        });
    }
    Ok(mass)
}

/// Largest `|lhs_j - iħψ_j| / max|ψ|` over points with `|ψ_j| > threshold·max|ψ|`.
fn interior_residual(lhs: &WaveFunction, psi: &WaveFunction, threshold: f64) -> (f64, usize) {
    let scale = psi.max_abs();
    let i_hbar = C64::new(0.0, psi.grid().hbar());
    let cutoff = threshold * scale;
    let mut worst = 0.0f64;
    let mut count = 0;
    for (l, p) in lhs.values().iter().zip(psi.values()) {
        if p.norm() > cutoff {
            count += 1;
            worst = worst.max((l - i_hbar * p).norm() / scale);
        }
    }
    (worst, count)
}

fn backend_tolerance(backend: MomentumBackend, grid: &UniformGrid) -> f64 {
    match backend {
        MomentumBackend::Spectral => SPECTRAL_TOLERANCE,
        MomentumBackend::FiniteDifference => FD_CONSTANT * grid.hbar() * grid.spacing().powi(2),
    }
}

/// Pointwise `[X,P]ψ = iħψ` on the interior, spectral backend.
pub fn poisson_residual(psi: &WaveFunction, interior_mask_threshold: f64) -> Result<CheckReport> {
    poisson_residual_with(psi, interior_mask_threshold, MomentumBackend::Spectral)
}

pub fn poisson_residual_with(
    psi: &WaveFunction,
    interior_mask_threshold: f64,
    backend: MomentumBackend,
) -> Result<CheckReport> {
    if psi.representation() != Representation::Position {
        return Err(QpbError::Representation {
            expected: Representation::Position,
            found: psi.representation(),
        });
    }
    let boundary = require_boundary_clean(psi)?;
    let grid = *psi.grid();
    let tolerance = backend_tolerance(backend, &grid);
    let id = "poisson_residual";
    let relation = "[R,P] f(r) = i hbar I f(r)";
    if psi.max_abs() == 0.0 {
        return Ok(
            CheckReport::residual(id, relation, 0.0, tolerance).with_flag("degenerate_input")
        );
    }
    let mut worst = 0.0f64;
    let mut masked = 0;
    for axis in 0..grid.dim() {
        let x = GridOperator::position(grid, axis)?;
        let p = GridOperator::momentum(grid, axis, backend)?;
        let lhs = commutator_apply(&x, &p, psi)?;
        let (r, count) = interior_residual(&lhs, psi, interior_mask_threshold);
        worst = worst.max(r);
        masked = masked.max(count);
    }
    let mut report = CheckReport::residual(id, relation, worst, tolerance)
        .with("backend", backend.label())
        .with("interior_points", masked)
        .with("interior_mask_threshold", interior_mask_threshold)
        .with("boundary_mass", boundary)
        .with("n_points", grid.n_points())
        .with("half_extent", grid.half_extent())
        .with("spacing", grid.spacing())
        .with("hbar", grid.hbar())
        .with("dim", grid.dim());
    if backend == MomentumBackend::FiniteDifference {
        report = report.with("fd_constant", FD_CONSTANT);
    }
    Ok(report)
}

/// `[R,P]g = iħg` with `g` in the momentum representation: `R = +iħ∂/∂p`,
/// `P` multiplies by `p`.
pub fn corollary_residual_momentum(g: &WaveFunction) -> Result<CheckReport> {
    if g.representation() != Representation::Momentum {
        return Err(QpbError::Representation {
            expected: Representation::Momentum,
            found: g.representation(),
        });
    }
    let boundary = require_boundary_clean(g)?;
    let grid = *g.grid();
    let id = "corollary_momentum";
    let relation = "[R,P] g(p) = i hbar I g(p)";
    if g.max_abs() == 0.0 {
        return Ok(CheckReport::residual(id, relation, 0.0, SPECTRAL_TOLERANCE)
            .with_flag("degenerate_input"));
    }
    let mut worst = 0.0f64;
    for axis in 0..grid.dim() {
        let r = GridOperator::position(grid, axis)?;
        let p = GridOperator::momentum(grid, axis, MomentumBackend::Spectral)?;
        let lhs = commutator_apply(&r, &p, g)?;
        worst = worst.max(interior_residual(&lhs, g, DEFAULT_INTERIOR_THRESHOLD).0);
    }
    Ok(
        CheckReport::residual(id, relation, worst, SPECTRAL_TOLERANCE)
            .with("boundary_mass", boundary)
            .with("n_points", grid.n_points())
            .with("half_extent", grid.half_extent())
            .with("hbar", grid.hbar()),
    )
}

/// `⟨ψ|[X_m, P_n]|ψ⟩ / iħ` for every axis pair of a 3D state.
pub fn commutator_tensor(psi: &WaveFunction) -> Result<[[C64; 3]; 3]> {
    let grid = *psi.grid();
    if grid.dim() != 3 {
        return Err(QpbError::Configuration(format!(
            "commutator tensor needs a 3D state, got dim {}",
            grid.dim()
        )));
    }
    require_boundary_clean(psi)?;
    let i_hbar = C64::new(0.0, grid.hbar());
    let mut out = [[C64::new(0.0, 0.0); 3]; 3];
    for (m, row) in out.iter_mut().enumerate() {
        let x = GridOperator::position(grid, m)?;
        for (n, entry) in row.iter_mut().enumerate() {
            let p = GridOperator::momentum(grid, n, MomentumBackend::Spectral)?;
            let c = commutator_apply(&x, &p, psi)?;
            *entry = inner_product(psi, &c)? / i_hbar;
        }
    }
    Ok(out)
}

pub fn tensor_residual(psi: &WaveFunction) -> Result<CheckReport> {
    let t = commutator_tensor(psi)?;
    let mut worst = 0.0f64;
    let mut off_diagonal = 0.0f64;
    for (m, row) in t.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let delta = if m == n { 1.0 } else { 0.0 };
            let d = (v - delta).norm();
            worst = worst.max(d);
            if m != n {
                off_diagonal = off_diagonal.max(v.norm());
            }
        }
    }
    let grid = psi.grid();
    Ok(CheckReport::residual(
        "tensor_commutator",
        "[R_m,P_n] = i hbar delta_mn",
        worst,
        TENSOR_TOLERANCE,
    )
    .with("max_off_diagonal", off_diagonal)
    .with("n_points", grid.n_points())
    .with("half_extent", grid.half_extent())
    .with("hbar", grid.hbar()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{gaussian, hermite_function};

    fn grid() -> UniformGrid {
        UniformGrid::new(1, 256, 8.0, 1.0).unwrap()
    }

    #[test]
    fn position_multiply_is_exact() {
        let g = grid();
        let psi = gaussian(g, Representation::Position, 0.0, 1.0, 0.0).unwrap();
        let out = apply(&GridOperator::position(g, 0).unwrap(), &psi).unwrap();
        for (j, (o, p)) in out.values().iter().zip(psi.values()).enumerate() {
            assert_eq!(*o, p * g.point(j));
        }
    }

    #[test]
    fn plane_wave_is_momentum_eigenstate() {
        let g = grid();
        // resolvable wavenumber: integer multiple of 2π/(2L)
        let k = 5.0 * std::f64::consts::PI / g.half_extent();
        let wave = WaveFunction::from_fn(g, Representation::Position, |x| {
            C64::from_polar(1.0, k * x[0])
        });
        let out = apply(
            &GridOperator::momentum(g, 0, MomentumBackend::Spectral).unwrap(),
            &wave,
        )
        .unwrap();
        for (o, w) in out.values().iter().zip(wave.values()) {
            assert!((o - k * w).norm() < 1e-10);
        }
        // finite differences see the same eigenvalue up to O(h²): sin(kh)/h
        let fd = apply(
            &GridOperator::momentum(g, 0, MomentumBackend::FiniteDifference).unwrap(),
            &wave,
        )
        .unwrap();
        let h = g.spacing();
        let fd_eig = (k * h).sin() / h;
        for (o, w) in fd.values().iter().zip(wave.values()) {
            assert!((o - fd_eig * w).norm() < 1e-12);
        }
        assert!((fd_eig - k).abs() < k.powi(3) * h * h / 6.0 * 1.01);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = grid();
        let c = WaveFunction::from_fn(g, Representation::Position, |_| C64::new(0.3, -0.2));
        let out = apply(
            &GridOperator::momentum(g, 0, MomentumBackend::Spectral).unwrap(),
            &c,
        )
        .unwrap();
        assert!(out.max_abs() < 1e-12);
    }

    #[test]
    fn position_commutes_with_itself() {
        let g = grid();
        let psi = gaussian(g, Representation::Position, 0.3, 1.0, 1.0).unwrap();
        let x = GridOperator::position(g, 0).unwrap();
        let c = commutator_apply(&x, &x, &psi).unwrap();
        assert!(c.values().iter().all(|v| *v == C64::new(0.0, 0.0)));
    }

    #[test]
    fn canonical_commutator_on_gaussian() {
        let g = grid();
        let psi = gaussian(g, Representation::Position, 0.0, 1.0, 0.0).unwrap();
        let r = poisson_residual(&psi, DEFAULT_INTERIOR_THRESHOLD).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.residual <= 1e-6);
        let x = GridOperator::position(g, 0).unwrap();
        let p = GridOperator::momentum(g, 0, MomentumBackend::Spectral).unwrap();
        let c = commutator_apply(&x, &p, &psi).unwrap();
        let scale = psi.max_abs();
        for (cv, pv) in c.values().iter().zip(psi.values()) {
            if pv.norm() > 1e-6 * scale {
                assert!((cv - C64::i() * pv).norm() <= 1e-6 * scale);
            }
        }
    }

    #[test]
    fn canonical_commutator_on_hermite_states() {
        let g = grid();
        for n in 0..=4 {
            let psi = hermite_function(g, Representation::Position, n).unwrap();
            let r = poisson_residual(&psi, DEFAULT_INTERIOR_THRESHOLD).unwrap();
            assert!(r.pass, "n={n}: {r:?}");
        }
    }

    #[test]
    fn edge_gaussian_is_contaminated() {
        let g = grid();
        let psi = gaussian(g, Representation::Position, g.half_extent(), 1.0, 0.0).unwrap();
        assert!(matches!(
            poisson_residual(&psi, DEFAULT_INTERIOR_THRESHOLD),
            Err(QpbError::BoundaryContamination { .. })
        ));
    }

    #[test]
    fn finite_difference_residual_is_second_order() {
        let mut previous: Option<f64> = None;
        for n in [128, 256, 512] {
            let g = UniformGrid::new(1, n, 8.0, 1.0).unwrap();
            let psi = gaussian(g, Representation::Position, 0.0, 1.0, 0.0).unwrap();
            let r = poisson_residual_with(
                &psi,
                DEFAULT_INTERIOR_THRESHOLD,
                MomentumBackend::FiniteDifference,
            )
            .unwrap();
            assert!(r.pass, "{r:?}");
            // [X, D_h]ψ = -(ψ_{j+1}+ψ_{j-1})/2, so the residual is ħh²|ψ''|/2 to leading order
            let h = g.spacing();
            assert!(
                (r.residual - 0.5 * h * h).abs() < 0.05 * h * h,
                "{}",
                r.residual
            );
            if let Some(prev) = previous {
                assert!(prev / r.residual >= 3.5);
            }
            previous = Some(r.residual);
        }
    }

    #[test]
    fn momentum_side_corollary() {
        let g = grid().reciprocal();
        let gm = gaussian(g, Representation::Momentum, 0.0, 1.0, 0.0).unwrap();
        assert!(corollary_residual_momentum(&gm).unwrap().pass);
        let modulated = gaussian(g, Representation::Momentum, 0.5, 1.5, 2.0).unwrap();
        assert!(corollary_residual_momentum(&modulated).unwrap().pass);
        let zero = WaveFunction::zeros(g, Representation::Momentum);
        let r = corollary_residual_momentum(&zero).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.context["degenerate_input"], serde_json::Value::from(true));
    }

    #[test]
    fn hermiticity_of_momentum_backends() {
        let g = grid();
        let a = gaussian(g, Representation::Position, 0.4, 1.1, 0.7).unwrap();
        let b = hermite_function(g, Representation::Position, 2).unwrap();
        for backend in [MomentumBackend::Spectral, MomentumBackend::FiniteDifference] {
            let p = GridOperator::momentum(g, 0, backend).unwrap();
            let lhs = inner_product(&a, &apply(&p, &b).unwrap()).unwrap();
            let rhs = inner_product(&apply(&p, &a).unwrap(), &b).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_mismatched_grid() {
        let g = grid();
        let other = UniformGrid::new(1, 128, 8.0, 1.0).unwrap();
        let psi = WaveFunction::zeros(other, Representation::Position);
        assert!(matches!(
            apply(&GridOperator::position(g, 0).unwrap(), &psi),
            Err(QpbError::IncompatibleOperands(_))
        ));
        assert!(GridOperator::position(g, 1).is_err());
    }
}

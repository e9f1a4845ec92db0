//! Named verification suites assembled from the module checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use crate::error::{QpbError, Result};
use crate::grid::{Representation, UniformGrid, WaveFunction};
use crate::kk::{self, POLE_FAMILY};
use crate::ladder::{self, LadderSystem};
use crate::operators::{self, GridOperator, MomentumBackend, DEFAULT_INTERIOR_THRESHOLD};
use crate::report::CheckReport;
use crate::states::{gaussian, gaussian_3d, hermite_function, RandomSmoothState};
use crate::transform::{self, check_parseval, to_momentum, to_position};
use crate::uncertainty::{self, energy_time_product, uncertainty_check, BOUND_TOLERANCE};
use crate::weyl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Fourier,
    Poisson,
    Kk,
    Weyl,
    Uncertainty,
    Ladder,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "fourier",
        "poisson",
        "kk",
        "weyl",
        "uncertainty",
        "ladder",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fourier => "fourier",
            Suite::Poisson => "poisson",
            Suite::Kk => "kk",
            Suite::Weyl => "weyl",
            Suite::Uncertainty => "uncertainty",
            Suite::Ladder => "ladder",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Fourier,
                Suite::Poisson,
                Suite::Kk,
                Suite::Weyl,
                Suite::Uncertainty,
                Suite::Ladder,
            ],
            one => vec![one],
        }
    }

    /// Check ids this suite reports, one report each.
    pub fn check_ids(self) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = self
            .members()
            .into_iter()
            .flat_map(|s| match s {
                Suite::Fourier => &["parseval", "round_trip", "hbar_scaling"][..],
                Suite::Poisson => &[
                    "poisson_residual",
                    "poisson_fd_convergence",
                    "corollary_momentum",
                    "tensor_commutator",
                ][..],
                Suite::Kk => &[
                    "hilbert_oracle_agreement",
                    "kk_residual",
                    "kk_wrong_half_plane",
                    "phase_equivalence",
                ][..],
                Suite::Weyl => &[
                    "weyl_commutator_value",
                    "weyl_centrality",
                    "weyl_symmetrize_xp",
                    "weyl_hermiticity",
                    "weyl_matrix_oracle",
                    "weyl_energy_time",
                    "weyl_parser_round_trip",
                ][..],
                Suite::Uncertainty => &[
                    "uncertainty_gaussian_saturation",
                    "uncertainty_hermite_product",
                    "uncertainty_random_states",
                    "uncertainty_vector_3d",
                    "uncertainty_energy_time",
                ][..],
                Suite::Ladder => &[
                    "ladder_algebra",
                    "ladder_ht_commutator",
                    "ladder_k_quadratic",
                    "ladder_eigenstates",
                ][..],
                Suite::All => &[][..],
            })
            .copied()
            .collect();
        ids.sort_unstable();
        ids
    }
}

impl FromStr for Suite {
    type Err = QpbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(Suite::Fourier),
            "poisson" => Ok(Suite::Poisson),
            "kk" => Ok(Suite::Kk),
            "weyl" => Ok(Suite::Weyl),
            "uncertainty" => Ok(Suite::Uncertainty),
            "ladder" => Ok(Suite::Ladder),
            "all" => Ok(Suite::All),
            other => Err(QpbError::Configuration(format!(
                "unknown suite {other:?}; expected one of {}",
                Suite::NAMES.join(", ")
            ))),
        }
    }
}

/// Parameters for a run. `n_points` and `half_extent` set the 1D operator
/// grid; the Kramers-Kronig and 3D grids are fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n_points: usize,
    pub half_extent: f64,
    pub hbar: f64,
    pub n_trunc: usize,
    pub omega: f64,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub seed: u64,
}

pub const KK_N_POINTS: usize = 4096;
pub const KK_HALF_EXTENT: f64 = 64.0;
pub const GRID_3D_N_POINTS: usize = 64;
pub const GRID_3D_HALF_EXTENT: f64 = 8.0;
pub const RANDOM_FOURIER_STATES: usize = 100;
pub const RANDOM_UNCERTAINTY_STATES: usize = 500;
pub const RANDOM_LADDER_STATES: usize = 100;
pub const CENTRALITY_RANDOM_POLYS: usize = 50;
pub const LADDER_OMEGAS: [f64; 3] = [0.5, 1.0, 3.0];
pub const LADDER_HBARS: [f64; 2] = [0.5, 1.0];
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;
pub const HBAR_SCALING_TOLERANCE: f64 = 1e-10;
pub const SATURATION_TOLERANCE: f64 = 1e-8;
pub const HERMITE_TOLERANCE: f64 = 1e-6;
pub const FD_MIN_RATIO: f64 = 3.5;

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            n_points: 256,
            half_extent: 8.0,
            hbar: 1.0,
            n_trunc: 64,
            omega: 1.0,
            tolerance_overrides: BTreeMap::new(),
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn for_suite(suite: Suite) -> Self {
        Self {
            suite,
            ..Self::default()
        }
    }

    /// Every override must name a check id of the full suite.
    pub fn validate(&self) -> Result<()> {
        self.operator_grid()?;
        UniformGrid::new(3, GRID_3D_N_POINTS, GRID_3D_HALF_EXTENT, self.hbar)?;
        LadderSystem::build(self.n_trunc, self.omega, self.hbar)?;
        let known = Suite::All.check_ids();
        for (id, value) in &self.tolerance_overrides {
            if !known.contains(&id.as_str()) {
                return Err(QpbError::Configuration(format!(
                    "unknown check id {id:?} in tolerance override"
                )));
            }
            if !value.is_finite() || *value < 0.0 {
                return Err(QpbError::Configuration(format!(
                    "tolerance for {id} must be finite and nonnegative, got {value}"
                )));
            }
        }
        Ok(())
    }

    pub fn operator_grid(&self) -> Result<UniformGrid> {
        UniformGrid::new(1, self.n_points, self.half_extent, self.hbar)
    }

    fn grid_3d(&self) -> Result<UniformGrid> {
        UniformGrid::new(3, GRID_3D_N_POINTS, GRID_3D_HALF_EXTENT, self.hbar)
    }

    /// Per-check seed derived from the run seed and the check id.
    pub fn sub_seed(&self, check_id: &str) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in check_id.bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h ^ self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

type Check = fn(&SuiteConfig) -> Result<CheckReport>;

fn registry() -> Vec<(&'static str, &'static str, f64, Check)> {
    vec![
        (
            "parseval",
            "||F psi||^2 = ||psi||^2",
            transform::PARSEVAL_TOLERANCE,
            parseval as Check,
        ),
        (
            "round_trip",
            "F^-1 F psi = psi",
            ROUND_TRIP_TOLERANCE,
            round_trip,
        ),
        (
            "hbar_scaling",
            "psi(r) = (2 pi hbar)^(-1/2) int phi(p) exp(i r p/hbar) dp",
            HBAR_SCALING_TOLERANCE,
            hbar_scaling,
        ),
        (
            "poisson_residual",
            "[R,P] f(r) = i hbar I f(r)",
            operators::SPECTRAL_TOLERANCE,
            poisson,
        ),
        (
            "poisson_fd_convergence",
            "[R,P] f(r) = i hbar I f(r)",
            FD_MIN_RATIO,
            fd_convergence,
        ),
        (
            "corollary_momentum",
            "[R,P] g(p) = i hbar I g(p)",
            operators::SPECTRAL_TOLERANCE,
            corollary,
        ),
        (
            "tensor_commutator",
            "[R_m,P_n] = i hbar delta_mn",
            operators::TENSOR_TOLERANCE,
            tensor,
        ),
        (
            "hilbert_oracle_agreement",
            "H[s](z) = -(1/pi) PV int s(u)/(u-z) du",
            kk::KK_TOLERANCE,
            hilbert_oracle,
        ),
        (
            "kk_residual",
            "Im f = H[Re f]; Re f = -H[Im f]",
            kk::KK_TOLERANCE,
            kk_pole_family,
        ),
        (
            "kk_wrong_half_plane",
            "Im f = H[Re f]; Re f = -H[Im f]",
            kk::WRONG_PLANE_THRESHOLD,
            kk_wrong_plane,
        ),
        (
            "phase_equivalence",
            "arg Psi(r) - arg chi(r) = 2 pi q",
            kk::PHASE_TOLERANCE,
            phase,
        ),
        ("weyl_commutator_value", "[R,P] = i hbar I", 0.0, |_| {
            Ok(weyl::check_commutator_value())
        }),
        ("weyl_centrality", "[[R,P], S{R^n P^m}] = 0", 0.0, |cfg| {
            Ok(weyl::check_centrality(
                cfg.sub_seed("weyl_centrality"),
                CENTRALITY_RANDOM_POLYS,
            ))
        }),
        ("weyl_symmetrize_xp", "S{AB} = (AB + BA)/2", 0.0, |_| {
            Ok(weyl::check_symmetrize_xp())
        }),
        (
            "weyl_hermiticity",
            "S{R^n P^m} is self-adjoint",
            0.0,
            |_| Ok(weyl::check_hermiticity()),
        ),
        (
            "weyl_matrix_oracle",
            "[A,B] = AB - BA",
            weyl::ORACLE_TOLERANCE,
            |cfg| {
                Ok(weyl::check_matrix_oracle(
                    cfg.sub_seed("weyl_matrix_oracle"),
                    weyl::ORACLE_CASES,
                    weyl::ORACLE_N_TRUNC,
                    cfg.hbar,
                ))
            },
        ),
        ("weyl_energy_time", "[H,T] = i hbar", 0.0, |_| {
            Ok(weyl::check_energy_time_value())
        }),
        ("weyl_parser_round_trip", "[A,B] = AB - BA", 0.0, |_| {
            Ok(weyl::check_parser_round_trip())
        }),
        (
            "uncertainty_gaussian_saturation",
            "Delta x Delta p >= hbar/2",
            SATURATION_TOLERANCE,
            gaussian_saturation,
        ),
        (
            "uncertainty_hermite_product",
            "Delta x Delta p >= hbar/2",
            HERMITE_TOLERANCE,
            hermite_product,
        ),
        (
            "uncertainty_random_states",
            "Delta x Delta p >= hbar/2",
            BOUND_TOLERANCE,
            random_states,
        ),
        (
            "uncertainty_vector_3d",
            "Delta r . Delta p >= (3/2) hbar",
            uncertainty::VECTOR_BOUND_TOLERANCE,
            vector_3d,
        ),
        (
            "uncertainty_energy_time",
            "Delta E Delta t >= hbar/2",
            BOUND_TOLERANCE,
            energy_time,
        ),
        (
            "ladder_algebra",
            "[b,b^dagger] = 1",
            ladder::LADDER_TOLERANCE,
            |cfg| ladder_sweep(cfg, ladder::check_ladder_algebra),
        ),
        (
            "ladder_ht_commutator",
            "[H,T] = i hbar",
            ladder::HT_TOLERANCE,
            |cfg| ladder_sweep(cfg, ladder::ht_commutator_residual),
        ),
        (
            "ladder_k_quadratic",
            "K = b^dagger b + 1/2",
            ladder::LADDER_TOLERANCE,
            |cfg| ladder_sweep(cfg, ladder::check_k_quadratic),
        ),
        (
            "ladder_eigenstates",
            "chi_m(e) = <e|m>; phi_m(t) = <t|m>",
            ladder::EIGEN_TOLERANCE,
            eigenstates,
        ),
    ]
}

/// Runs every check of the configured suite, applies tolerance overrides and
/// returns the reports ordered by check id.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    run_checks(cfg, &cfg.suite.check_ids())
}

/// Runs the named checks only, with the same override and ordering rules as
/// `run_suite`.
pub fn run_checks(cfg: &SuiteConfig, ids: &[&str]) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    let known = Suite::All.check_ids();
    if let Some(bad) = ids.iter().find(|id| !known.contains(id)) {
        return Err(QpbError::Configuration(format!("unknown check id {bad:?}")));
    }
    let checks: Vec<_> = registry()
        .into_iter()
        .filter(|(id, ..)| ids.contains(id))
        .collect();
    let mut reports: Vec<CheckReport> = checks
        .par_iter()
        .map(|(id, relation, tolerance, check)| {
            let mut report = match check(cfg) {
                Ok(r) => r,
                Err(e) => CheckReport::errored(*id, *relation, *tolerance, &e),
            };
            report.check_id = id.to_string();
            report
        })
        .collect();
    for report in &mut reports {
        if let Some(&tol) = cfg.tolerance_overrides.get(&report.check_id) {
            report.retolerance(tol);
            report
                .context
                .insert("tolerance_overridden".into(), Value::from(true));
        }
    }
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(reports)
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Process exit status for a suite outcome.
pub fn exit_code(outcome: &Result<Vec<CheckReport>>) -> u8 {
    match outcome {
        Ok(reports) if reports.iter().all(|r| r.pass) => EXIT_PASS,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_USAGE,
    }
}

fn random_states(cfg: &SuiteConfig) -> Result<CheckReport> {
    let grid = cfg.operator_grid()?;
    let seed = cfg.sub_seed("uncertainty_random_states");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = GridOperator::position(grid, 0)?;
    let p = GridOperator::momentum(grid, 0, MomentumBackend::Spectral)?;
    let mut worst_violation = 0.0f64;
    let mut smallest_margin = f64::INFINITY;
    let mut worst_residue = 0.0f64;
    for _ in 0..RANDOM_UNCERTAINTY_STATES {
        let psi = RandomSmoothState::sample(&grid, &mut rng).on_grid(grid)?;
        let r = uncertainty_check(&x, &p, &psi)?;
        let product = r.context["product"].as_f64().unwrap_or(f64::NAN);
        let floor = 0.5 * grid.hbar();
        worst_violation = worst_violation.max(floor - product).max(r.residual);
        smallest_margin = smallest_margin.min(product - floor);
        worst_residue =
            worst_residue.max(r.context["imaginary_residue"].as_f64().unwrap_or(f64::NAN));
    }
    let report = CheckReport::residual(
        "uncertainty_random_states",
        "Delta x Delta p >= hbar/2",
        worst_violation.max(0.0),
        BOUND_TOLERANCE,
    )
    .with("states", RANDOM_UNCERTAINTY_STATES)
    .with("smallest_margin", smallest_margin)
    .with("max_imaginary_residue", worst_residue)
    .with("seed", seed)
    .with(
        "state_family",
        "gaussian envelope times 1-4 low fourier modes",
    )
    .with("n_points", grid.n_points())
    .with("half_extent", grid.half_extent())
    .with("hbar", grid.hbar());
    if worst_residue > uncertainty::HERMITIAN_RESIDUE_LIMIT {
        return Ok(report.fail_with("imaginary_residue_exceeded"));
    }
    Ok(report)
}

fn random_fourier_states(cfg: &SuiteConfig, id: &str) -> Result<(Vec<WaveFunction>, u64)> {
    let grid = cfg.operator_grid()?;
    let seed = cfg.sub_seed(id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = (0..RANDOM_FOURIER_STATES)
        .map(|_| RandomSmoothState::sample(&grid, &mut rng).on_grid(grid))
        .collect::<Result<Vec<_>>>()?;
    Ok((states, seed))
}

fn parseval(cfg: &SuiteConfig) -> Result<CheckReport> {
    let (states, seed) = random_fourier_states(cfg, "parseval")?;
    let mut worst: Option<CheckReport> = None;
    for psi in &states {
        let r = check_parseval(psi);
        if worst
            .as_ref()
            .is_none_or(|w| r.residual > w.residual || r.residual.is_nan())
        {
            worst = Some(r);
        }
    }
    let report = worst.ok_or_else(|| QpbError::Configuration("no states".into()))?;
    Ok(report.with("states", states.len()).with("seed", seed))
}

fn round_trip(cfg: &SuiteConfig) -> Result<CheckReport> {
    let (states, seed) = random_fourier_states(cfg, "round_trip")?;
    let mut worst = 0.0f64;
    for psi in &states {
        let back = to_position(&to_momentum(psi)?)?;
        for (a, b) in psi.values().iter().zip(back.values()) {
            worst = worst.max((a - b).norm());
        }
    }
    let grid = cfg.operator_grid()?;
    Ok(CheckReport::residual(
        "round_trip",
        "F^-1 F psi = psi",
        worst,
        ROUND_TRIP_TOLERANCE,
    )
    .with("norm", "max")
    .with("states", states.len())
    .with("seed", seed)
    .with("n_points", grid.n_points())
    .with("half_extent", grid.half_extent())
    .with("hbar", grid.hbar()))
}

/// Unit-width Gaussian against its closed-form momentum image
/// `(σ²/πħ²)^(1/4) exp(-σ²p²/2ħ²)` for several ħ.
fn hbar_scaling(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut hbars = vec![cfg.hbar, 0.5, 2.0];
    hbars.dedup();
    let sigma = 1.0;
    let mut worst = 0.0f64;
    for &hbar in &hbars {
        let grid = UniformGrid::new(1, cfg.n_points, cfg.half_extent, hbar)?;
        let psi = gaussian(grid, Representation::Position, 0.0, sigma, 0.0)?;
        let phi = to_momentum(&psi)?;
        let norm = (sigma * sigma / (PI * hbar * hbar)).powf(0.25);
        for (j, v) in phi.values().iter().enumerate() {
            let p = phi.grid().point(j);
            let exact = norm * (-(sigma * p / hbar).powi(2) / 2.0).exp();
            worst = worst.max((v - exact).norm());
        }
    }
    Ok(CheckReport::residual(
        "hbar_scaling",
        "psi(r) = (2 pi hbar)^(-1/2) int phi(p) exp(i r p/hbar) dp",
        worst,
        HBAR_SCALING_TOLERANCE,
    )
    .with("hbars", hbars)
    .with("sigma", sigma)
    .with("n_points", cfg.n_points)
    .with("half_extent", cfg.half_extent))
}

fn reference_states(grid: UniformGrid) -> Result<Vec<(String, WaveFunction)>> {
    let mut out = vec![(
        "gaussian".to_string(),
        gaussian(grid, Representation::Position, 0.0, 1.0, 0.0)?,
    )];
    for n in 0..=4 {
        out.push((
            format!("hermite_{n}"),
            hermite_function(grid, Representation::Position, n)?,
        ));
    }
    Ok(out)
}

fn worst_of(reports: Vec<(String, CheckReport)>) -> Result<CheckReport> {
    let per_state: serde_json::Map<String, Value> = reports
        .iter()
        .map(|(name, r)| (name.clone(), Value::from(r.residual)))
        .collect();
    let (name, worst) = reports
        .into_iter()
        .reduce(|a, b| if b.1.residual > a.1.residual { b } else { a })
        .ok_or_else(|| QpbError::Configuration("no states".into()))?;
    Ok(worst
        .with("worst_state", name)
        .with("per_state_residual", Value::Object(per_state)))
}

fn poisson(cfg: &SuiteConfig) -> Result<CheckReport> {
    let grid = cfg.operator_grid()?;
    let reports = reference_states(grid)?
        .into_iter()
        .map(|(name, psi)| {
            Ok((
                name,
                operators::poisson_residual(&psi, DEFAULT_INTERIOR_THRESHOLD)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    worst_of(reports)
}

/// Finite-difference residual on a Gaussian at `n`, `2n`, `4n` with `L` fixed:
/// each halving of the spacing must shrink it by at least `FD_MIN_RATIO`.
fn fd_convergence(cfg: &SuiteConfig) -> Result<CheckReport> {
    let mut residuals = Vec::new();
    let mut spacings = Vec::new();
    let mut within_constant = true;
    for factor in [1, 2, 4] {
        let grid = UniformGrid::new(1, cfg.n_points * factor, cfg.half_extent, cfg.hbar)?;
        let psi = gaussian(grid, Representation::Position, 0.0, 1.0, 0.0)?;
        let r = operators::poisson_residual_with(
            &psi,
            DEFAULT_INTERIOR_THRESHOLD,
            MomentumBackend::FiniteDifference,
        )?;
        within_constant &= r.pass;
        residuals.push(r.residual);
        spacings.push(grid.spacing());
    }
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let report = CheckReport::exceeds(
        "poisson_fd_convergence",
        "[R,P] f(r) = i hbar I f(r)",
        min_ratio,
        FD_MIN_RATIO,
    )
    .with("residuals", residuals)
    .with("spacings", spacings)
    .with("ratios", ratios)
    .with("fd_constant", operators::FD_CONSTANT);
    if !within_constant {
        return Ok(report.fail_with("fd_residual_above_c_hbar_h2"));
    }
    Ok(report)
}

fn corollary(cfg: &SuiteConfig) -> Result<CheckReport> {
    let grid = cfg.operator_grid()?;
    let reports = reference_states(grid)?
        .into_iter()
        .map(|(name, psi)| {
            Ok((
                name,
                operators::corollary_residual_momentum(&to_momentum(&psi)?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    worst_of(reports)
}

fn tensor(cfg: &SuiteConfig) -> Result<CheckReport> {
    let psi = gaussian_3d(cfg.grid_3d()?, [0.0; 3], [1.0; 3])?;
    operators::tensor_residual(&psi)
}

fn kk_grid() -> Result<UniformGrid> {
    UniformGrid::new(1, KK_N_POINTS, KK_HALF_EXTENT, 1.0)
}

fn hilbert_oracle(_: &SuiteConfig) -> Result<CheckReport> {
    kk::pole_oracle_check(kk_grid()?, &POLE_FAMILY)
}

fn kk_pole_family(_: &SuiteConfig) -> Result<CheckReport> {
    kk::pole_kk_check(kk_grid()?, &POLE_FAMILY)
}

fn kk_wrong_plane(_: &SuiteConfig) -> Result<CheckReport> {
    kk::wrong_half_plane_check(kk_grid()?, &POLE_FAMILY)
}

fn phase(cfg: &SuiteConfig) -> Result<CheckReport> {
    kk::gaussian_phase_check(cfg.operator_grid()?, 1.0, 1.0)
}

fn gaussian_saturation(cfg: &SuiteConfig) -> Result<CheckReport> {
    let grid = cfg.operator_grid()?;
    let psi = gaussian(grid, Representation::Position, 0.0, 1.0, 0.0)?;
    let x = GridOperator::position(grid, 0)?;
    let p = GridOperator::momentum(grid, 0, MomentumBackend::Spectral)?;
    let r = uncertainty_check(&x, &p, &psi)?;
    let product = r.context["product"].as_f64().unwrap_or(f64::NAN);
    let target = 0.5 * grid.hbar();
    let report = CheckReport::residual(
        "uncertainty_gaussian_saturation",
        "Delta x Delta p >= hbar/2",
        (product - target).abs(),
        SATURATION_TOLERANCE,
    )
    .with("product", product)
    .with("target", target)
    .with("bound_violation", r.residual);
    if !r.pass {
        return Ok(report.fail_with("bound_violated"));
    }
    Ok(report)
}

/// `H_1(x) exp(-x²/2)` has `Δx = √(3/2)` and `Δp = ħ√(3/2)`.
fn hermite_product(cfg: &SuiteConfig) -> Result<CheckReport> {
    let grid = cfg.operator_grid()?;
    let psi = hermite_function(grid, Representation::Position, 1)?;
    let x = GridOperator::position(grid, 0)?;
    let p = GridOperator::momentum(grid, 0, MomentumBackend::Spectral)?;
    let r = uncertainty_check(&x, &p, &psi)?;
    let product = r.context["product"].as_f64().unwrap_or(f64::NAN);
    let target = 1.5 * grid.hbar();
    let report = CheckReport::residual(
        "uncertainty_hermite_product",
        "Delta x Delta p >= hbar/2",
        (product - target).abs(),
        HERMITE_TOLERANCE,
    )
    .with("product", product)
    .with("target", target)
    .with("bound_violation", r.residual);
    if !r.pass {
        return Ok(report.fail_with("bound_violated"));
    }
    Ok(report)
}

fn vector_3d(cfg: &SuiteConfig) -> Result<CheckReport> {
    let psi = gaussian_3d(cfg.grid_3d()?, [0.0; 3], [1.0; 3])?;
    let bound = uncertainty::vector_uncertainty_check(&psi)?;
    let total = bound.context["product"].as_f64().unwrap_or(f64::NAN);
    let target = 1.5 * cfg.hbar;
    let report = CheckReport::residual(
        "uncertainty_vector_3d",
        "Delta r . Delta p >= (3/2) hbar",
        (total - target).abs(),
        uncertainty::VECTOR_BOUND_TOLERANCE,
    )
    .with("product", total)
    .with("target", target)
    .with("axis_products", bound.context["axis_products"].clone())
    .with("bound_violation", bound.residual)
    .with("n_points", GRID_3D_N_POINTS)
    .with("half_extent", GRID_3D_HALF_EXTENT);
    if !bound.pass {
        return Ok(report.fail_with("bound_violated"));
    }
    Ok(report)
}

/// Random states on the lowest `n_trunc / 2` ladder levels.
fn energy_time(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = LadderSystem::build(cfg.n_trunc, cfg.omega, cfg.hbar)?;
    let seed = cfg.sub_seed("uncertainty_energy_time");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = (cfg.n_trunc / 2).max(1);
    let floor = 0.5 * cfg.hbar;
    let mut violation = 0.0f64;
    let mut bound_gap = 0.0f64;
    for _ in 0..RANDOM_LADDER_STATES {
        let mut v = DVector::<C64>::zeros(cfg.n_trunc);
        for m in 0..support {
            v[m] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let norm = v.norm();
        v /= C64::new(norm, 0.0);
        let (product, bound) = energy_time_product(&sys.h, &sys.t, &v)?;
        violation = violation.max(floor - product);
        bound_gap = bound_gap.max((bound - floor).abs());
    }
    Ok(CheckReport::residual(
        "uncertainty_energy_time",
        "Delta E Delta t >= hbar/2",
        violation.max(0.0),
        BOUND_TOLERANCE,
    )
    .with("states", RANDOM_LADDER_STATES)
    .with("support_levels", support)
    .with("commutator_bound_gap", bound_gap)
    .with("seed", seed)
    .with("n_trunc", cfg.n_trunc)
    .with("omega", cfg.omega)
    .with("hbar", cfg.hbar))
}

/// Configured `(Ω, ħ)` plus the fixed sweep; the worst report is kept.
fn ladder_sweep(cfg: &SuiteConfig, check: fn(&LadderSystem) -> CheckReport) -> Result<CheckReport> {
    let mut params = vec![(cfg.omega, cfg.hbar)];
    for omega in LADDER_OMEGAS {
        for hbar in LADDER_HBARS {
            if !params.contains(&(omega, hbar)) {
                params.push((omega, hbar));
            }
        }
    }
    let mut worst: Option<CheckReport> = None;
    let mut sweep = Vec::new();
    let mut all_pass = true;
    for (omega, hbar) in params {
        let r = check(&LadderSystem::build(cfg.n_trunc, omega, hbar)?);
        all_pass &= r.pass;
        sweep.push(serde_json::json!({"omega": omega, "hbar": hbar, "residual": r.residual}));
        if worst.as_ref().is_none_or(|w| r.residual > w.residual) {
            worst = Some(r);
        }
    }
    let report = worst.ok_or_else(|| QpbError::Configuration("empty sweep".into()))?;
    let report = report.with("sweep", sweep);
    if !all_pass {
        return Ok(report.fail_with("sweep_member_failed"));
    }
    Ok(report)
}

fn eigenstates(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = LadderSystem::build(cfg.n_trunc, cfg.omega, cfg.hbar)?;
    let top = ladder::ORTHONORMALITY_MAX_INDEX.min(cfg.n_trunc - 2);
    let mut worst: Option<CheckReport> = None;
    for m in 0..=top {
        let r = ladder::eigenstate_representations(&sys, m)?;
        if worst.as_ref().is_none_or(|w| r.residual > w.residual) {
            worst = Some(r);
        }
    }
    let report = worst.ok_or_else(|| QpbError::Configuration("no eigenstates".into()))?;
    Ok(report.with("states_checked", top + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_suite_ids() {
        let mut ids: Vec<&str> = registry().iter().map(|(id, ..)| *id).collect();
        ids.sort_unstable();
        assert_eq!(ids, Suite::All.check_ids());
    }

    #[test]
    fn unknown_override_rejected() {
        let mut cfg = SuiteConfig::for_suite(Suite::Weyl);
        cfg.tolerance_overrides.insert("no_such_check".into(), 1.0);
        assert!(matches!(run_suite(&cfg), Err(QpbError::Configuration(_))));
        assert!("nope".parse::<Suite>().is_err());
        let bad_grid = SuiteConfig {
            n_points: 100,
            ..SuiteConfig::default()
        };
        assert!(run_suite(&bad_grid).is_err());
    }

    #[test]
    fn weyl_suite_is_exact() {
        let reports = run_suite(&SuiteConfig::for_suite(Suite::Weyl)).unwrap();
        assert_eq!(reports.len(), Suite::Weyl.check_ids().len());
        for r in &reports {
            assert!(r.pass, "{r:?}");
            if r.check_id != "weyl_matrix_oracle" {
                assert_eq!(r.residual, 0.0);
            }
        }
    }

    #[test]
    fn poisson_suite_passes_and_override_fails() {
        let reports = run_suite(&SuiteConfig::for_suite(Suite::Poisson)).unwrap();
        assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
        let mut cfg = SuiteConfig::for_suite(Suite::Poisson);
        cfg.tolerance_overrides
            .insert("poisson_residual".into(), 1e-15);
        let reports = run_suite(&cfg).unwrap();
        let target = reports
            .iter()
            .find(|r| r.check_id == "poisson_residual")
            .unwrap();
        assert!(!target.pass);
        assert!(reports
            .iter()
            .filter(|r| r.check_id != "poisson_residual")
            .all(|r| r.pass));
    }

    #[test]
    fn ladder_and_fourier_suites_pass() {
        for suite in [Suite::Ladder, Suite::Fourier, Suite::Uncertainty] {
            let reports = run_suite(&SuiteConfig::for_suite(suite)).unwrap();
            assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
        }
    }

    #[test]
    fn exit_codes() {
        let ok = run_checks(&SuiteConfig::default(), &["weyl_commutator_value"]);
        assert_eq!(exit_code(&ok), EXIT_PASS);
        let mut cfg = SuiteConfig::default();
        cfg.tolerance_overrides.insert("round_trip".into(), 0.0);
        assert_eq!(
            exit_code(&run_checks(&cfg, &["round_trip"])),
            EXIT_CHECK_FAILED
        );
        cfg.hbar = f64::NAN;
        assert_eq!(exit_code(&run_checks(&cfg, &["round_trip"])), EXIT_USAGE);
        assert_eq!(
            exit_code(&run_checks(&SuiteConfig::default(), &["bogus"])),
            EXIT_USAGE
        );
    }

    #[test]
    fn sub_seeds_differ_by_check() {
        let cfg = SuiteConfig::default();
        assert_ne!(cfg.sub_seed("parseval"), cfg.sub_seed("round_trip"));
        let other = SuiteConfig {
            seed: 1,
            ..SuiteConfig::default()
        };
        assert_ne!(cfg.sub_seed("parseval"), other.sub_seed("parseval"));
    }
}

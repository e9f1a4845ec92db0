//! Energy-time ladder algebra on a truncated number basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{QpbError, Result};
use crate::report::CheckReport;
use crate::weyl::annihilation;

pub const LADDER_TOLERANCE: f64 = 1e-12;
pub const HT_TOLERANCE: f64 = 1e-10;
pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const MIN_TRUNCATION: usize = 4;

/// Largest index whose eigen-representations are checked against each other.
pub const ORTHONORMALITY_MAX_INDEX: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct LadderSystem {
    pub n_trunc: usize,
    pub omega: f64,
    pub hbar: f64,
    pub b: DMatrix<C64>,
    pub b_dagger: DMatrix<C64>,
    pub k: DMatrix<C64>,
    pub h: DMatrix<C64>,
    pub t: DMatrix<C64>,
}

impl LadderSystem {
    /// `H = ħΩ(b + b†)/√2`, `T = (b − b†)/(i√2·Ω)`, `K = b†b + ½`.
    pub fn build(n_trunc: usize, omega: f64, hbar: f64) -> Result<Self> {
        if n_trunc < MIN_TRUNCATION {
            return Err(QpbError::Configuration(format!(
                "n_trunc must be at least {MIN_TRUNCATION}, got {n_trunc}"
            )));
        }
        if !(omega > 0.0 && omega.is_finite()) || !(hbar > 0.0 && hbar.is_finite()) {
            return Err(QpbError::Configuration(format!(
                "omega and hbar must be positive and finite, got omega={omega}, hbar={hbar}"
            )));
        }
        let b = annihilation(n_trunc);
        let b_dagger = b.adjoint();
        let k = &b_dagger * &b + DMatrix::identity(n_trunc, n_trunc) * C64::new(0.5, 0.0);
        let root2 = 2f64.sqrt();
        let h = (&b + &b_dagger)
            .map(|v| v * (hbar / root2))
            .map(|v| v * omega);
        let t = (&b - &b_dagger)
            .map(|v| v * C64::new(0.0, -1.0 / root2))
            .map(|v| v / omega);
        Ok(Self {
            n_trunc,
            omega,
            hbar,
            b,
            b_dagger,
            k,
            h,
            t,
        })
    }

    /// Rows and columns `< n_trunc - 1`, exact for first-order expressions.
    pub fn protected(&self) -> usize {
        self.n_trunc - 1
    }

    fn basis(&self, m: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.n_trunc);
        v[m] = C64::new(1.0, 0.0);
        v
    }

    /// `b` and `b†` rebuilt from `H` and `T` by the defining ladder formulas.
    pub fn ladder_from_h_t(&self) -> (DMatrix<C64>, DMatrix<C64>) {
        let s = (2.0 * self.hbar).sqrt().recip();
        let a = &self.h * C64::new(1.0 / (self.hbar.sqrt() * self.omega), 0.0);
        let c = &self.t * C64::new(0.0, self.hbar.sqrt() * self.omega);
        ((&a + &c) * C64::new(s, 0.0), (&a - &c) * C64::new(s, 0.0))
    }

    /// `K = H²/(2ħ²Ω²) + Ω²T²/2`.
    pub fn k_from_h_t(&self) -> DMatrix<C64> {
        let h2 = &self.h * &self.h;
        let t2 = &self.t * &self.t;
        h2 * C64::new(1.0 / (2.0 * (self.hbar * self.omega).powi(2)), 0.0)
            + t2 * C64::new(self.omega.powi(2) / 2.0, 0.0)
    }
}

fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.norm()))
}

fn block_gap(a: &DMatrix<C64>, b: &DMatrix<C64>, block: usize) -> f64 {
    max_entry(&(a.view((0, 0), (block, block)) - b.view((0, 0), (block, block))))
}

fn vector_gap(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

fn add_parameters(report: CheckReport, sys: &LadderSystem) -> CheckReport {
    report
        .with("n_trunc", sys.n_trunc)
        .with("omega", sys.omega)
        .with("hbar", sys.hbar)
        .with("protected_block", sys.protected())
}

/// Action of `b`, `b†`, `K` on basis vectors `|m⟩`, `m <= n_trunc - 2`,
/// `[b, b†] = 1` on the protected block, and substitution of `H`, `T` back
/// into the ladder definitions.
pub fn check_ladder_algebra(sys: &LadderSystem) -> CheckReport {
    let n = sys.n_trunc;
    let mut lowering = 0.0f64;
    let mut raising = 0.0f64;
    let mut number = 0.0f64;
    for m in 0..=n - 2 {
        let e = sys.basis(m);
        let expected_down = if m == 0 {
            DVector::zeros(n)
        } else {
            sys.basis(m - 1) * C64::new((m as f64).sqrt(), 0.0)
        };
        lowering = lowering.max(vector_gap(&(&sys.b * &e), &expected_down));
        let expected_up = sys.basis(m + 1) * C64::new(((m + 1) as f64).sqrt(), 0.0);
        raising = raising.max(vector_gap(&(&sys.b_dagger * &e), &expected_up));
        number = number.max(vector_gap(
            &(&sys.k * &e),
            &(e.clone() * C64::new(m as f64 + 0.5, 0.0)),
        ));
    }
    let comm = &sys.b * &sys.b_dagger - &sys.b_dagger * &sys.b;
    let identity = DMatrix::<C64>::identity(n, n);
    let canonical = block_gap(&comm, &identity, sys.protected());
    let corner = comm[(n - 1, n - 1)];
    let (b_back, bd_back) = sys.ladder_from_h_t();
    let substitution = max_entry(&(&b_back - &sys.b)).max(max_entry(&(&bd_back - &sys.b_dagger)));
    let hermitian =
        sys.h == sys.h.adjoint() && sys.t == sys.t.adjoint() && sys.k == sys.k.adjoint();
    let residual = lowering
        .max(raising)
        .max(number)
        .max(canonical)
        .max(substitution);
    let report = add_parameters(
        CheckReport::residual(
            "ladder_algebra",
            "[b,b^dagger] = 1; K|m> = (m+1/2)|m>; b|m> = sqrt(m)|m-1>; b^dagger|m> = sqrt(m+1)|m+1>",
            residual,
            LADDER_TOLERANCE,
        ),
        sys,
    )
    .with("lowering_residual", lowering)
    .with("raising_residual", raising)
    .with("number_residual", number)
    .with("canonical_residual", canonical)
    .with("substitution_residual", substitution)
    .with("truncation_defect_corner", corner.re)
    .with("expected_corner", -((n - 1) as f64))
    .with("hermitian_exact", hermitian);
    if !hermitian {
        return report.fail_with("not_hermitian");
    }
    report
}

/// `[H, T] = iħ` on the protected block; the corner defect is recorded.
pub fn ht_commutator_residual(sys: &LadderSystem) -> CheckReport {
    let n = sys.n_trunc;
    let comm = &sys.h * &sys.t - &sys.t * &sys.h;
    let target = DMatrix::<C64>::identity(n, n) * C64::new(0.0, sys.hbar);
    let inside = block_gap(&comm, &target, sys.protected());
    let outside = max_entry(&(&comm - &target));
    add_parameters(
        CheckReport::residual(
            "ladder_ht_commutator",
            "[H,T] = i hbar",
            inside,
            HT_TOLERANCE,
        ),
        sys,
    )
    .with("residual_outside_block", outside)
    .with("truncation_defect_corner_im", comm[(n - 1, n - 1)].im)
}

/// `K` rebuilt from `H²` and `T²` against `b†b + ½` on the degree-2 block.
pub fn check_k_quadratic(sys: &LadderSystem) -> CheckReport {
    let block = sys.n_trunc - 2;
    let residual = block_gap(&sys.k_from_h_t(), &sys.k, block);
    let spectrum = (0..block)
        .map(|m| (sys.k[(m, m)] - C64::new(m as f64 + 0.5, 0.0)).norm())
        .fold(0.0f64, f64::max);
    add_parameters(
        CheckReport::residual(
            "ladder_k_quadratic",
            "K = H^2/(2 hbar^2 Omega^2) + Omega^2 T^2/2 = b^dagger b + 1/2",
            residual.max(spectrum),
            LADDER_TOLERANCE,
        ),
        sys,
    )
    .with("quadratic_form_residual", residual)
    .with("spectrum_residual", spectrum)
    .with("degree_block", block)
}

/// Eigenvalues ascending and eigenvectors with their first nonzero component
/// real and positive, for a Hermitian matrix.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vectors = DMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let v = eig.eigenvectors.column(src);
        let pivot = v
            .iter()
            .find(|c| c.norm() > 1e-12)
            .copied()
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = pivot.conj() / pivot.norm();
        for row in 0..n {
            vectors[(row, col)] = v[row] * phase;
        }
    }
    (values, vectors)
}

/// Sampled representations of `|m⟩`: `φ_m(t_k) = ⟨t_k|m⟩` from the
/// `T`-eigenbasis and `χ_m(e_k) = ⟨e_k|m⟩` from the `H`-eigenbasis, both on
/// the protected block.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenRepresentations {
    pub time_eigenvalues: Vec<f64>,
    pub energy_eigenvalues: Vec<f64>,
    /// Columns are the `T` eigenvectors.
    pub time_basis: DMatrix<C64>,
    /// Columns are the `H` eigenvectors.
    pub energy_basis: DMatrix<C64>,
}

impl EigenRepresentations {
    pub fn new(sys: &LadderSystem) -> Self {
        let block = sys.protected();
        let t = sys.t.view((0, 0), (block, block)).into_owned();
        let h = sys.h.view((0, 0), (block, block)).into_owned();
        let (time_eigenvalues, time_basis) = hermitian_eigen(&t);
        let (energy_eigenvalues, energy_basis) = hermitian_eigen(&h);
        Self {
            time_eigenvalues,
            energy_eigenvalues,
            time_basis,
            energy_basis,
        }
    }

    /// `φ_m(t_k)` for every eigenvalue `t_k`.
    pub fn phi(&self, m: usize) -> DVector<C64> {
        self.time_basis.row(m).transpose().map(|c| c.conj())
    }

    /// `χ_m(e_k)` for every eigenvalue `e_k`.
    pub fn chi(&self, m: usize) -> DVector<C64> {
        self.energy_basis.row(m).transpose().map(|c| c.conj())
    }
}

fn unitarity_residual(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    max_entry(&(u.adjoint() * u - DMatrix::<C64>::identity(n, n)))
}

pub fn eigenstate_representations(sys: &LadderSystem, m: usize) -> Result<CheckReport> {
    let max = sys.n_trunc - 2;
    if m > max {
        return Err(QpbError::Range { index: m, max });
    }
    let reps = EigenRepresentations::new(sys);
    let phi = reps.phi(m);
    let chi = reps.chi(m);
    let norm_phi = (phi.norm() - 1.0).abs();
    let norm_chi = (chi.norm() - 1.0).abs();
    let overlap = reps.energy_basis.adjoint() * &reps.time_basis;
    let unitarity = unitarity_residual(&overlap)
        .max(unitarity_residual(&reps.time_basis))
        .max(unitarity_residual(&reps.energy_basis));
    let top = ORTHONORMALITY_MAX_INDEX.min(max);
    let mut orthonormality = 0.0f64;
    for a in 0..=top {
        for b in 0..=top {
            let delta = if a == b { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((reps.phi(a).dotc(&reps.phi(b)) - delta).norm());
            orthonormality = orthonormality.max((reps.chi(a).dotc(&reps.chi(b)) - delta).norm());
        }
    }
    let residual = norm_phi.max(norm_chi).max(unitarity).max(orthonormality);
    Ok(add_parameters(
        CheckReport::residual(
            "ladder_eigenstates",
            "chi_m(e) = <e|m>; phi_m(t) = <t|m>",
            residual,
            EIGEN_TOLERANCE,
        ),
        sys,
    )
    .with("m", m)
    .with("phi_norm_residual", norm_phi)
    .with("chi_norm_residual", norm_chi)
    .with("overlap_unitarity_residual", unitarity)
    .with("orthonormality_residual", orthonormality)
    .with("orthonormality_max_index", top))
}

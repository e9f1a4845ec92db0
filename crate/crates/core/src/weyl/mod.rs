//! Exact noncommutative algebra of conjugate operator pairs.
//!
//! Coefficients are Gaussian-rational polynomials in ħ, so every identity
//! checked here holds or fails exactly. Two registers exist, `(X, P)` and
//! `(H, T)`, each with the rewrite `BA = AB - iħ`; they never share a poly.

mod matrix;
mod parser;
mod poly;
mod scalar;
mod word;

pub use matrix::{
    annihilation, block_residual, letter_matrix, matrix_realize, protected_block,
    relative_block_residual, MIN_TRUNCATION,
};
pub use parser::{parse, Expr, ParseError, Rational, ScalarLit, Sign};
pub use poly::{
    commutator_poly, normal_order, structurally_equal, taylor_operator, weyl_symmetrize,
    weyl_symmetrize_poly, weyl_symmetrize_recursive, OperatorPoly, SYMMETRIZE_BOUND,
};
pub use scalar::{imag, rational, real, HbarPoly, Scalar};
pub use word::{Letter, Register, Word};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::CheckReport;

/// Truncation used by the matrix oracle.
pub const ORACLE_N_TRUNC: usize = 16;
pub const ORACLE_TOLERANCE: f64 = 1e-10;
pub const ORACLE_CASES: usize = 200;
/// Largest `n + m` in the exhaustive centrality and Hermiticity sweeps.
pub const SWEEP_DEGREE: usize = 8;

/// Random poly with up to `max_terms` words of length at most `max_degree`
/// and coefficients `(a + b·i)·ħ^k`, `a`, `b` small rationals, `k <= 2`.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    register: Register,
    max_degree: usize,
    max_terms: usize,
) -> OperatorPoly {
    let (lead, trail) = Letter::pair(register);
    let mut out = OperatorPoly::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let len = rng.random_range(0..=max_degree);
        let letters = (0..len)
            .map(|_| if rng.random_bool(0.5) { lead } else { trail })
            .collect();
        let word = Word::new(letters).expect("single register");
        let mut part = || rational(rng.random_range(-5..=5), rng.random_range(1..=4));
        let c = Scalar::new(part(), part());
        let k = rng.random_range(0..=2);
        let term = OperatorPoly::term(word, HbarPoly::monomial(c, k));
        out = out.try_add(&term).expect("single register");
    }
    out
}

fn mismatch_count(a: &OperatorPoly, b: &OperatorPoly) -> usize {
    let diff = normal_order(&a.try_sub(b).unwrap_or_else(|_| OperatorPoly::identity()));
    diff.len()
}

fn x() -> OperatorPoly {
    OperatorPoly::word(Word::normal(Register::PositionMomentum, 1, 0))
}

fn p() -> OperatorPoly {
    OperatorPoly::word(Word::normal(Register::PositionMomentum, 0, 1))
}

fn i_hbar() -> OperatorPoly {
    OperatorPoly::scalar(HbarPoly::i_hbar())
}

/// `[X,P]` normal-orders to `iħ·1`; residual counts differing terms.
pub fn check_commutator_value() -> CheckReport {
    let c = commutator_poly(&x(), &p()).expect("single register");
    CheckReport::residual(
        "weyl_commutator_value",
        "[R,P] = i hbar I",
        mismatch_count(&c, &i_hbar()) as f64,
        0.0,
    )
    .with("normal_form", c.to_string())
    .with("arithmetic", "exact")
}

/// `[H,T]` normal-orders to `iħ·1` in the energy-time register.
pub fn check_energy_time_value() -> CheckReport {
    let h = OperatorPoly::word(Word::normal(Register::EnergyTime, 1, 0));
    let t = OperatorPoly::word(Word::normal(Register::EnergyTime, 0, 1));
    let c = commutator_poly(&h, &t).expect("single register");
    CheckReport::residual(
        "weyl_energy_time",
        "[H,T] = i hbar",
        mismatch_count(&c, &i_hbar()) as f64,
        0.0,
    )
    .with("normal_form", c.to_string())
    .with("arithmetic", "exact")
}

/// `S{XP}` normal-orders to `XP - (iħ/2)·1`.
pub fn check_symmetrize_xp() -> CheckReport {
    let xp = Word::normal(Register::PositionMomentum, 1, 1);
    let s = normal_order(&weyl_symmetrize(&xp).expect("short word"));
    let expected = OperatorPoly::word(xp)
        .try_sub(&OperatorPoly::scalar(HbarPoly::monomial(imag(1, 2), 1)))
        .expect("single register");
    CheckReport::residual(
        "weyl_symmetrize_xp",
        "S{AB} = (AB + BA)/2",
        mismatch_count(&s, &expected) as f64,
        0.0,
    )
    .with("normal_form", s.to_string())
    .with("arithmetic", "exact")
}

/// `[[X,P], q] = 0` for every `S{X^n P^m}` with `n + m <= 8` and for
/// `random_cases` random polys of degree at most 6.
pub fn check_centrality(seed: u64, random_cases: usize) -> CheckReport {
    let xp = commutator_poly(&x(), &p()).expect("single register");
    let mut failures = 0usize;
    let mut swept = 0usize;
    for total in 0..=SWEEP_DEGREE {
        for n in 0..=total {
            let word = Word::normal(Register::PositionMomentum, n, total - n);
            let s = weyl_symmetrize(&word).expect("within bound");
            swept += 1;
            if !commutator_poly(&xp, &s).expect("single register").is_zero() {
                failures += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_cases {
        let q = random_poly(&mut rng, Register::PositionMomentum, 6, 4);
        if !commutator_poly(&xp, &q).expect("single register").is_zero() {
            failures += 1;
        }
    }
    CheckReport::residual(
        "weyl_centrality",
        "[[R,P], S{R^n P^m}] = 0",
        failures as f64,
        0.0,
    )
    .with("symmetrized_words", swept)
    .with("random_polys", random_cases)
    .with("max_symmetrized_degree", SWEEP_DEGREE)
    .with("seed", seed)
    .with("arithmetic", "exact")
}

/// Normal form of `S{X^n P^m}` equals the normal form of its formal adjoint.
pub fn check_hermiticity() -> CheckReport {
    let mut failures = 0usize;
    for total in 0..=SWEEP_DEGREE {
        for n in 0..=total {
            let s = weyl_symmetrize(&Word::normal(Register::PositionMomentum, n, total - n))
                .expect("within bound");
            if !structurally_equal(&normal_order(&s), &normal_order(&s.adjoint())) {
                failures += 1;
            }
        }
    }
    CheckReport::residual(
        "weyl_hermiticity",
        "S{R^n P^m} is self-adjoint",
        failures as f64,
        0.0,
    )
    .with("max_degree", SWEEP_DEGREE)
    .with("arithmetic", "exact")
}

/// Random polys of degree at most 4 realized before and after normal
/// ordering, plus the product and commutator of random pairs, compared on
/// their protected blocks.
pub fn check_matrix_oracle(seed: u64, cases: usize, n_trunc: usize, hbar: f64) -> CheckReport {
    const ID: &str = "weyl_matrix_oracle";
    const REF: &str = "[A,B] = AB - BA";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut worst_absolute = 0.0f64;
    let run = |rng: &mut ChaCha8Rng| -> crate::error::Result<(f64, f64)> {
        let a = random_poly(rng, Register::PositionMomentum, 4, 4);
        let b = random_poly(rng, Register::PositionMomentum, 4, 4);
        let ma = matrix_realize(&a, n_trunc, hbar)?;
        let mb = matrix_realize(&b, n_trunc, hbar)?;
        let normal = matrix_realize(&normal_order(&a), n_trunc, hbar)?;
        let ab = a.try_mul(&b)?;
        let product = matrix_realize(&normal_order(&ab), n_trunc, hbar)?;
        let comm = commutator_poly(&a, &b)?;
        let exact = matrix_realize(&comm, n_trunc, hbar)?;
        let pairs = [
            (ma.clone(), normal, protected_block(&a, n_trunc)),
            (&ma * &mb, product, protected_block(&ab, n_trunc)),
            (&ma * &mb - &mb * &ma, exact, protected_block(&ab, n_trunc)),
        ];
        let mut rel = 0.0f64;
        let mut abs = 0.0f64;
        for (lhs, rhs, block) in &pairs {
            rel = rel.max(relative_block_residual(lhs, rhs, *block));
            abs = abs.max(block_residual(lhs, rhs, *block));
        }
        Ok((rel, abs))
    };
    for _ in 0..cases {
        match run(&mut rng) {
            Ok((rel, abs)) => {
                worst = worst.max(rel);
                worst_absolute = worst_absolute.max(abs);
            }
            Err(e) => return CheckReport::errored(ID, REF, ORACLE_TOLERANCE, &e),
        }
    }
    CheckReport::residual(ID, REF, worst, ORACLE_TOLERANCE)
        .with("residual_scale", "max entry of exact block, floored at 1")
        .with("worst_absolute_gap", worst_absolute)
        .with("cases", cases)
        .with("max_degree", 4)
        .with("n_trunc", n_trunc)
        .with("hbar", hbar)
        .with("seed", seed)
        .with("protected_block", "n_trunc - degree")
}

/// Parses and evaluates a few canonical expressions, then checks that
/// printing and reparsing is a fixed point.
pub fn check_parser_round_trip() -> CheckReport {
    let sources = [
        "[X,P]",
        "S{X^2 P}",
        "X P \u{2212} P X \u{2212} i*hbar",
        "[[X,P], S{X^2 P}]",
        "3*i*hbar^2 (H T - T H)",
    ];
    let mut failures = 0usize;
    for src in sources {
        let ok = parse(src)
            .and_then(|e| parse(&e.to_string()).map(|again| again == e))
            .unwrap_or(false);
        if !ok {
            failures += 1;
        }
    }
    let zero_cases = [
        "X P - P X - i*hbar",
        "[[X,P], S{X^2 P}]",
        "T H - H T + i*hbar",
    ];
    for src in zero_cases {
        let zero = parse(src)
            .and_then(|e| e.eval())
            .map(|v| normal_order(&v).is_zero())
            .unwrap_or(false);
        if !zero {
            failures += 1;
        }
    }
    CheckReport::residual(
        "weyl_parser_round_trip",
        "[A,B] = AB - BA",
        failures as f64,
        0.0,
    )
    .with("expressions", sources.len() + zero_cases.len())
}

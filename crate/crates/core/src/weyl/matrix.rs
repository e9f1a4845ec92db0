//! Numerical realization of operator polys on a truncated oscillator basis.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::poly::OperatorPoly;
use super::word::Letter;
use crate::error::{QpbError, Result};

pub const MIN_TRUNCATION: usize = 4;

/// Annihilation matrix `a[m-1, m] = √m`.
pub fn annihilation(n_trunc: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(n_trunc, n_trunc);
    for m in 1..n_trunc {
        a[(m - 1, m)] = C64::new((m as f64).sqrt(), 0.0);
    }
    a
}

/// `X = √(ħ/2)(a + a†)`, `P = i√(ħ/2)(a† − a)`; the energy-time pair uses
/// `H = ħ(a + a†)/√2`, `T = i(a† − a)/√2`. Both pairs satisfy `[A,B] = iħ`
/// away from the top basis index.
pub fn letter_matrix(letter: Letter, n_trunc: usize, hbar: f64) -> DMatrix<C64> {
    let a = annihilation(n_trunc);
    let ad = a.adjoint();
    let sum = &a + &ad;
    let diff = &ad - &a;
    let i = C64::new(0.0, 1.0);
    match letter {
        Letter::X => sum * C64::from((hbar / 2.0).sqrt()),
        Letter::P => diff * (i * (hbar / 2.0).sqrt()),
        Letter::H => sum * C64::from(hbar / 2f64.sqrt()),
        Letter::T => diff * (i / 2f64.sqrt()),
    }
}

/// Evaluates the poly with the letter matrices substituted. Entries agree with
/// the untruncated operator only on the leading `protected_block` rows and
/// columns.
pub fn matrix_realize(p: &OperatorPoly, n_trunc: usize, hbar: f64) -> Result<DMatrix<C64>> {
    if n_trunc < MIN_TRUNCATION {
        return Err(QpbError::Configuration(format!(
            "n_trunc must be at least {MIN_TRUNCATION}, got {n_trunc}"
        )));
    }
    let mut letters: HashMap<Letter, DMatrix<C64>> = HashMap::new();
    let mut out = DMatrix::zeros(n_trunc, n_trunc);
    for (word, coeff) in p.terms() {
        let mut m = DMatrix::<C64>::identity(n_trunc, n_trunc);
        for letter in word.letters() {
            let factor = letters
                .entry(*letter)
                .or_insert_with(|| letter_matrix(*letter, n_trunc, hbar));
            m *= &*factor;
        }
        out += m * coeff.eval(hbar);
    }
    Ok(out)
}

/// Size of the leading block unaffected by truncation for a poly of this degree.
pub fn protected_block(p: &OperatorPoly, n_trunc: usize) -> usize {
    n_trunc.saturating_sub(p.degree())
}

/// Largest entrywise gap between two matrices on their leading `block` rows
/// and columns.
pub fn block_residual(a: &DMatrix<C64>, b: &DMatrix<C64>, block: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// `block_residual` scaled by the largest entry of `b` on the block, floored at 1.
pub fn relative_block_residual(a: &DMatrix<C64>, b: &DMatrix<C64>, block: usize) -> f64 {
    let scale = block_residual(b, &DMatrix::zeros(b.nrows(), b.ncols()), block).max(1.0);
    block_residual(a, b, block) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::poly::{commutator_poly, normal_order};
    use crate::weyl::scalar::HbarPoly;
    use crate::weyl::word::Word;

    fn poly(s: &str) -> OperatorPoly {
        OperatorPoly::word(Word::from_symbols(s).unwrap())
    }

    #[test]
    fn scalar_realizes_on_full_block() {
        let m = matrix_realize(&OperatorPoly::scalar(HbarPoly::i_hbar()), 16, 1.0).unwrap();
        let expected = DMatrix::<C64>::identity(16, 16) * C64::new(0.0, 1.0);
        assert_eq!(block_residual(&m, &expected, 16), 0.0);
        assert!(matrix_realize(&OperatorPoly::identity(), 3, 1.0).is_err());
    }

    #[test]
    fn normal_order_agrees_with_direct_product() {
        let px = poly("PX");
        let direct = &letter_matrix(Letter::P, 16, 1.0) * &letter_matrix(Letter::X, 16, 1.0);
        let normal = matrix_realize(&normal_order(&px), 16, 1.0).unwrap();
        assert!(block_residual(&direct, &normal, protected_block(&px, 16)) < 1e-10);
    }

    #[test]
    fn commutator_has_corner_defect() {
        for hbar in [0.5, 1.0] {
            let n = 16;
            let x = letter_matrix(Letter::X, n, hbar);
            let p = letter_matrix(Letter::P, n, hbar);
            let direct = &x * &p - &p * &x;
            let exact =
                matrix_realize(&commutator_poly(&poly("X"), &poly("P")).unwrap(), n, hbar).unwrap();
            assert!(block_residual(&direct, &exact, n - 1) < 1e-10);
            // truncated [a, a†] has -(n-1) in the corner
            let corner = direct[(n - 1, n - 1)];
            assert!((corner - C64::new(0.0, -hbar * (n as f64 - 1.0))).norm() < 1e-10);
        }
    }

    #[test]
    fn energy_time_pair_is_canonical() {
        let h = letter_matrix(Letter::H, 12, 0.5);
        let t = letter_matrix(Letter::T, 12, 0.5);
        let c = &h * &t - &t * &h;
        let expected = DMatrix::<C64>::identity(12, 12) * C64::new(0.0, 0.5);
        assert!(block_residual(&c, &expected, 11) < 1e-12);
    }
}

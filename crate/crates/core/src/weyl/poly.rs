//! Operator polynomials, normal ordering and Weyl symmetrization.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{real, HbarPoly, Scalar};
use super::word::{Register, Word};
use crate::error::{QpbError, Result};

/// Longest word `weyl_symmetrize` accepts.
pub const SYMMETRIZE_BOUND: usize = 10;

/// Finite map from words to nonzero coefficients. Words are kept as written;
/// equality compares normal forms.
#[derive(Debug, Clone, Default)]
pub struct OperatorPoly {
    terms: BTreeMap<Word, HbarPoly>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(HbarPoly::one())
    }

    pub fn scalar(c: HbarPoly) -> Self {
        Self::term(Word::identity(), c)
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, HbarPoly::one())
    }

    pub fn term(w: Word, c: HbarPoly) -> Self {
        let mut out = Self::zero();
        out.accumulate(w, &c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<Word, HbarPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn register(&self) -> Option<Register> {
        self.terms.keys().find_map(Word::register)
    }

    fn accumulate(&mut self, w: Word, c: &HbarPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn check_registers(&self, other: &OperatorPoly) -> Result<()> {
        match (self.register(), other.register()) {
            (Some(a), Some(b)) if a != b => Err(QpbError::MixedRegister),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, other: &OperatorPoly) -> Result<Self> {
        self.check_registers(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &OperatorPoly) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Noncommutative product, words concatenated as written.
    pub fn try_mul(&self, other: &OperatorPoly) -> Result<Self> {
        self.check_registers(other)?;
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.accumulate(wa.concat(wb)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn try_pow(&self, exponent: u32) -> Result<Self> {
        let mut out = Self::identity();
        for _ in 0..exponent {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &HbarPoly) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), &(v * c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&HbarPoly::constant(real(-1, 1)))
    }

    /// Formal adjoint: each word reversed, each coefficient conjugated.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.accumulate(w.reversed(), &c.conj());
        }
        out
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(Word::is_normal)
    }
}

impl PartialEq for OperatorPoly {
    fn eq(&self, other: &Self) -> bool {
        normal_order(self).terms == normal_order(other).terms
    }
}

/// Normal form of one word. Letters are multiplied in from the right using
/// `A^a B^b · A = A^{a+1} B^b - iħ·b·A^a B^{b-1}`, which follows from the
/// rewrite `BA = AB - iħ` for the register pair `(A, B)`.
fn normal_order_word(w: &Word) -> OperatorPoly {
    let Some(register) = w.register() else {
        return OperatorPoly::identity();
    };
    let mut acc: BTreeMap<(usize, usize), HbarPoly> = BTreeMap::new();
    acc.insert((0, 0), HbarPoly::one());
    let minus_i_hbar = -&HbarPoly::i_hbar();
    for letter in w.letters() {
        let mut next: BTreeMap<(usize, usize), HbarPoly> = BTreeMap::new();
        let mut add = |key: (usize, usize), c: HbarPoly| {
            let entry = next.entry(key).or_default();
            *entry = &*entry + &c;
        };
        for (&(a, b), c) in &acc {
            if letter.is_leading() {
                add((a + 1, b), c.clone());
                if b > 0 {
                    let factor = minus_i_hbar.scale(&real(b as i64, 1));
                    add((a, b - 1), c * &factor);
                }
            } else {
                add((a, b + 1), c.clone());
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    let mut out = OperatorPoly::zero();
    for ((a, b), c) in acc {
        let word = if a + b == 0 {
            Word::identity()
        } else {
            Word::normal(register, a, b)
        };
        out.accumulate(word, &c);
    }
    out
}

/// Unique normal form: every leading letter (X or H) before every trailing one.
pub fn normal_order(p: &OperatorPoly) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for (w, c) in &p.terms {
        for (nw, nc) in normal_order_word(w).terms {
            out.accumulate(nw, &(&nc * c));
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

/// Weyl-symmetrized word: the mean over distinct orderings of its letters.
/// A register has two letters, so the distinct orderings are the placements
/// of the leading letters among the positions.
pub fn weyl_symmetrize(w: &Word) -> Result<OperatorPoly> {
    let n = w.len();
    if n > SYMMETRIZE_BOUND {
        return Err(QpbError::ResourceBound {
            what: "word length",
            value: n,
            bound: SYMMETRIZE_BOUND,
        });
    }
    let Some(register) = w.register() else {
        return Ok(OperatorPoly::identity());
    };
    let (lead, trail) = super::word::Letter::pair(register);
    let (a, _) = w.counts();
    let weight = HbarPoly::constant(Scalar::new(
        num_rational::BigRational::new(1.into(), binomial(n, a).into()),
        num_traits::Zero::zero(),
    ));
    let mut out = OperatorPoly::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a {
            continue;
        }
        let letters = (0..n)
            .map(|j| if mask >> j & 1 == 1 { lead } else { trail })
            .collect();
        out.accumulate(Word::new(letters)?, &weight);
    }
    Ok(out)
}

/// Linear extension of `weyl_symmetrize` to a poly, acting on words as written.
pub fn weyl_symmetrize_poly(p: &OperatorPoly) -> Result<OperatorPoly> {
    let mut out = OperatorPoly::zero();
    for (w, c) in &p.terms {
        for (sw, sc) in weyl_symmetrize(w)?.terms {
            out.accumulate(sw, &(&sc * c));
        }
    }
    Ok(out)
}

/// Normal-ordered `ab - ba`.
pub fn commutator_poly(a: &OperatorPoly, b: &OperatorPoly) -> Result<OperatorPoly> {
    Ok(normal_order(&a.try_mul(b)?.try_sub(&b.try_mul(a)?)?))
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// `Σ c_{nm} S{X^n P^m} / (n! m!)`, where `c_{nm}` is the mixed derivative
/// `∂^{n+m} f / ∂r^n ∂p^m` at the origin. Entries with `n + m > order_cap`
/// are dropped.
pub fn taylor_operator(
    coeff_table: &BTreeMap<(u32, u32), HbarPoly>,
    order_cap: u32,
    register: Register,
) -> Result<OperatorPoly> {
    let mut out = OperatorPoly::zero();
    for (&(n, m), c) in coeff_table {
        if n + m > order_cap {
            continue;
        }
        let word = Word::normal(register, n as usize, m as usize);
        let denom = factorial(n) * factorial(m);
        let weight = Scalar::new(
            num_rational::BigRational::new(1.into(), denom.into()),
            num_traits::Zero::zero(),
        );
        let term = weyl_symmetrize(&word)?.scale(&c.scale(&weight));
        out = out.try_add(&term)?;
    }
    Ok(out)
}

impl fmt::Display for OperatorPoly {
    /// Parseable text such as `X P - 1/2*i*hbar`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            for part in c.parts() {
                match (first, part.negative) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                first = false;
                let literal = part.literal(w.is_empty());
                match (literal.is_empty(), w.is_empty()) {
                    (true, _) => write!(f, "{w}")?,
                    (false, true) => write!(f, "{literal}")?,
                    (false, false) => write!(f, "{literal} {w}")?,
                }
            }
        }
        Ok(())
    }
}

/// Recursive symmetrization `S{w} = (1/n) Σ_i w_i S{w without w_i}`, kept as
/// an oracle for the closed form.
pub fn weyl_symmetrize_recursive(w: &Word) -> Result<OperatorPoly> {
    let n = w.len();
    if n <= 1 {
        return Ok(OperatorPoly::word(w.clone()));
    }
    let mut out = OperatorPoly::zero();
    for (i, letter) in w.letters().iter().enumerate() {
        let head = OperatorPoly::word(Word::new(vec![*letter])?);
        out = out.try_add(&head.try_mul(&weyl_symmetrize_recursive(&w.without(i))?)?)?;
    }
    Ok(out.scale(&HbarPoly::constant(real(1, n as i64))))
}

/// True iff the coefficient maps agree without normal ordering.
pub fn structurally_equal(a: &OperatorPoly, b: &OperatorPoly) -> bool {
    a.terms == b.terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::scalar::imag;

    fn w(s: &str) -> Word {
        Word::from_symbols(s).unwrap()
    }

    fn poly(s: &str) -> OperatorPoly {
        OperatorPoly::word(w(s))
    }

    fn i_hbar_times(num: i64, den: i64) -> HbarPoly {
        HbarPoly::monomial(imag(num, den), 1)
    }

    #[test]
    fn rewrite_examples() {
        let px = normal_order(&poly("PX"));
        let expected = poly("XP")
            .try_sub(&OperatorPoly::scalar(HbarPoly::i_hbar()))
            .unwrap();
        assert!(structurally_equal(&px, &expected));
        assert!(structurally_equal(&normal_order(&poly("XP")), &poly("XP")));
        let ppx = normal_order(&poly("PPX"));
        let expected = poly("XPP")
            .try_sub(&OperatorPoly::term(w("P"), i_hbar_times(2, 1)))
            .unwrap();
        assert!(structurally_equal(&ppx, &expected));
    }

    #[test]
    fn energy_time_register_uses_same_rule() {
        let th = normal_order(&poly("TH"));
        let expected = poly("HT")
            .try_sub(&OperatorPoly::scalar(HbarPoly::i_hbar()))
            .unwrap();
        assert!(structurally_equal(&th, &expected));
    }

    #[test]
    fn symmetrize_examples() {
        let s = weyl_symmetrize(&w("XP")).unwrap();
        let half = HbarPoly::constant(real(1, 2));
        let expected = poly("XP")
            .scale(&half)
            .try_add(&poly("PX").scale(&half))
            .unwrap();
        assert!(structurally_equal(&s, &expected));
        let normal = poly("XP")
            .try_sub(&OperatorPoly::scalar(i_hbar_times(1, 2)))
            .unwrap();
        assert!(structurally_equal(&normal_order(&s), &normal));
        assert!(structurally_equal(
            &weyl_symmetrize(&w("X")).unwrap(),
            &poly("X")
        ));
        assert!(matches!(
            weyl_symmetrize(&w("XPXPXPXPXPX")),
            Err(QpbError::ResourceBound { value: 11, .. })
        ));
    }

    #[test]
    fn closed_form_matches_recursion() {
        for len in 0..=6usize {
            for mask in 0u32..(1 << len) {
                let letters: String = (0..len)
                    .map(|j| if mask >> j & 1 == 1 { 'X' } else { 'P' })
                    .collect();
                let word = w(&letters);
                let closed = weyl_symmetrize(&word).unwrap();
                let recursive = weyl_symmetrize_recursive(&word).unwrap();
                assert!(structurally_equal(&closed, &recursive), "{letters}");
            }
        }
    }

    #[test]
    fn commutator_values() {
        let xp = commutator_poly(&poly("X"), &poly("P")).unwrap();
        assert!(structurally_equal(
            &xp,
            &OperatorPoly::scalar(HbarPoly::i_hbar())
        ));
        assert!(commutator_poly(&xp, &poly("X")).unwrap().is_zero());
        let s = weyl_symmetrize(&w("XXP")).unwrap();
        assert!(commutator_poly(&xp, &s).unwrap().is_zero());
        assert!(commutator_poly(&poly("X"), &poly("H")).is_err());
    }

    #[test]
    fn taylor_examples() {
        let mut table = BTreeMap::new();
        table.insert((1, 1), HbarPoly::one());
        let op = taylor_operator(&table, 4, Register::PositionMomentum).unwrap();
        assert!(structurally_equal(&op, &weyl_symmetrize(&w("XP")).unwrap()));
        assert!(
            taylor_operator(&BTreeMap::new(), 4, Register::PositionMomentum)
                .unwrap()
                .is_zero()
        );
        let mut table = BTreeMap::new();
        table.insert((2, 0), HbarPoly::constant(real(2, 1)));
        table.insert((0, 2), HbarPoly::constant(real(2, 1)));
        let op = taylor_operator(&table, 4, Register::PositionMomentum).unwrap();
        assert!(structurally_equal(
            &op,
            &poly("XX").try_add(&poly("PP")).unwrap()
        ));
    }

    #[test]
    fn display_is_readable() {
        let s = normal_order(&weyl_symmetrize(&w("XP")).unwrap());
        assert_eq!(s.to_string(), "-1/2*i*hbar + X P");
        assert_eq!(OperatorPoly::zero().to_string(), "0");
        assert_eq!(OperatorPoly::identity().to_string(), "1");
    }

    #[test]
    fn adjoint_of_symmetrized_is_itself() {
        for n in 0..=4usize {
            for m in 0..=(8 - n).min(4) {
                let s = weyl_symmetrize(&Word::normal(Register::PositionMomentum, n, m)).unwrap();
                assert_eq!(normal_order(&s), normal_order(&s.adjoint()));
            }
        }
    }
}

//! Exact coefficients: polynomials in ħ over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64 as C64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b·i` with `a`, `b` rational.
pub type Scalar = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn real(num: i64, den: i64) -> Scalar {
    Scalar::new(rational(num, den), BigRational::zero())
}

pub fn imag(num: i64, den: i64) -> Scalar {
    Scalar::new(BigRational::zero(), rational(num, den))
}

/// `Σ_k c_k ħ^k`, stored sparsely with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HbarPoly {
    terms: BTreeMap<u32, Scalar>,
}

impl HbarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, hbar_power: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(hbar_power, c);
        }
        Self { terms }
    }

    /// `i·ħ`.
    pub fn i_hbar() -> Self {
        Self::monomial(imag(1, 1), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, hbar_power: u32) -> Scalar {
        self.terms
            .get(&hbar_power)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    fn accumulate(&mut self, hbar_power: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(hbar_power).or_insert_with(Scalar::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&hbar_power);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.accumulate(*k, v * c);
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect(),
        }
    }

    pub fn eval(&self, hbar: f64) -> C64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                let re = c.re.to_f64().unwrap_or(f64::NAN);
                let im = c.im.to_f64().unwrap_or(f64::NAN);
                C64::new(re, im) * hbar.powi(*k as i32)
            })
            .sum()
    }
}

impl Add<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;

    fn add(self, rhs: &HbarPoly) -> HbarPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }
}

impl Sub<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;

    fn sub(self, rhs: &HbarPoly) -> HbarPoly {
        self + &(-rhs)
    }
}

impl Neg for &HbarPoly {
    type Output = HbarPoly;

    fn neg(self) -> HbarPoly {
        HbarPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Mul<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;

    fn mul(self, rhs: &HbarPoly) -> HbarPoly {
        let mut out = HbarPoly::zero();
        for (ka, a) in &self.terms {
            for (kb, b) in &rhs.terms {
                out.accumulate(ka + kb, a * b);
            }
        }
        out
    }
}

/// One real-or-imaginary rational part of a coefficient: `sign`, `|q|`, `i`?, `ħ^k`.
pub(crate) struct Part {
    pub negative: bool,
    pub magnitude: BigRational,
    pub imaginary: bool,
    pub hbar_power: u32,
}

impl HbarPoly {
    pub(crate) fn parts(&self) -> Vec<Part> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            for (value, imaginary) in [(&c.re, false), (&c.im, true)] {
                if !value.is_zero() {
                    out.push(Part {
                        negative: value.is_negative(),
                        magnitude: value.abs(),
                        imaginary,
                        hbar_power: *k,
                    });
                }
            }
        }
        out
    }
}

impl Part {
    /// Scalar literal text for this part without its sign, e.g. `3/2*i*hbar^2`.
    /// `bare_one` controls whether a lone unit magnitude is spelled out.
    pub(crate) fn literal(&self, bare_one: bool) -> String {
        let mut pieces = Vec::new();
        if !self.magnitude.is_one() || (bare_one && !self.imaginary && self.hbar_power == 0) {
            pieces.push(self.magnitude.to_string());
        }
        if self.imaginary {
            pieces.push("i".to_string());
        }
        match self.hbar_power {
            0 => {}
            1 => pieces.push("hbar".to_string()),
            k => pieces.push(format!("hbar^{k}")),
        }
        pieces.join("*")
    }
}

impl fmt::Display for HbarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.parts();
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (j, part) in parts.iter().enumerate() {
            match (j, part.negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", part.literal(true))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let half = HbarPoly::constant(real(1, 2));
        let third = HbarPoly::constant(real(1, 3));
        let sum = &half + &third;
        assert_eq!(sum, HbarPoly::constant(real(5, 6)));
        assert!((&sum - &sum).is_zero());
        let sq = &HbarPoly::i_hbar() * &HbarPoly::i_hbar();
        assert_eq!(sq, HbarPoly::monomial(real(-1, 1), 2));
    }

    #[test]
    fn display_and_eval() {
        let p = &HbarPoly::constant(real(3, 2)) - &HbarPoly::monomial(imag(1, 2), 1);
        assert_eq!(p.to_string(), "3/2 - 1/2*i*hbar");
        let v = p.eval(2.0);
        assert_eq!(v, C64::new(1.5, -1.0));
        assert_eq!(HbarPoly::zero().to_string(), "0");
        assert_eq!(HbarPoly::i_hbar().conj(), -&HbarPoly::i_hbar());
    }
}

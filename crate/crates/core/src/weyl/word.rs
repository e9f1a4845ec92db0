//! Operator words over one conjugate register.

use std::fmt;

use serde::Serialize;

use crate::error::{QpbError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Register {
    /// Position and momentum, `[X,P] = iħ`.
    PositionMomentum,
    /// Energy and time, `[H,T] = iħ`.
    EnergyTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    P,
    H,
    T,
}

impl Letter {
    pub fn register(self) -> Register {
        match self {
            Letter::X | Letter::P => Register::PositionMomentum,
            Letter::H | Letter::T => Register::EnergyTime,
        }
    }

    /// X and H come first in normal order.
    pub fn is_leading(self) -> bool {
        matches!(self, Letter::X | Letter::H)
    }

    pub fn pair(register: Register) -> (Letter, Letter) {
        match register {
            Register::PositionMomentum => (Letter::X, Letter::P),
            Register::EnergyTime => (Letter::H, Letter::T),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::P => 'P',
            Letter::H => 'H',
            Letter::T => 'T',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A finite product of letters from a single register; empty is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if let Some(first) = letters.first() {
            if letters.iter().any(|l| l.register() != first.register()) {
                return Err(QpbError::MixedRegister);
            }
        }
        Ok(Self(letters))
    }

    /// Parses a run of letter symbols such as `"XPPX"`; whitespace is ignored.
    pub fn from_symbols(text: &str) -> Result<Self> {
        let letters = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'X' => Ok(Letter::X),
                'P' => Ok(Letter::P),
                'H' => Ok(Letter::H),
                'T' => Ok(Letter::T),
                other => Err(QpbError::Configuration(format!("unknown letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    /// `leading^a trailing^b` in the given register.
    pub fn normal(register: Register, a: usize, b: usize) -> Self {
        let (lead, trail) = Letter::pair(register);
        let mut letters = vec![lead; a];
        letters.extend(std::iter::repeat_n(trail, b));
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn register(&self) -> Option<Register> {
        self.0.first().map(|l| l.register())
    }

    /// Counts of leading and trailing letters.
    pub fn counts(&self) -> (usize, usize) {
        let lead = self.0.iter().filter(|l| l.is_leading()).count();
        (lead, self.0.len() - lead)
    }

    pub fn is_normal(&self) -> bool {
        self.0
            .windows(2)
            .all(|w| w[0].is_leading() || !w[1].is_leading())
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Result<Self> {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self::new(letters)
    }

    pub fn without(&self, index: usize) -> Self {
        let mut letters = self.0.clone();
        letters.remove(index);
        Self(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", symbols.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registers_do_not_mix() {
        assert!(Word::from_symbols("XPX").is_ok());
        assert_eq!(Word::from_symbols("XH"), Err(QpbError::MixedRegister));
        let xp = Word::from_symbols("XP").unwrap();
        assert!(xp.concat(&Word::from_symbols("T").unwrap()).is_err());
    }

    #[test]
    fn normal_shape() {
        assert!(Word::from_symbols("XXPP").unwrap().is_normal());
        assert!(!Word::from_symbols("PX").unwrap().is_normal());
        assert!(Word::identity().is_normal());
        assert_eq!(
            Word::normal(Register::EnergyTime, 1, 2),
            Word::from_symbols("HTT").unwrap()
        );
        assert_eq!(Word::from_symbols("PXP").unwrap().counts(), (1, 2));
    }
}

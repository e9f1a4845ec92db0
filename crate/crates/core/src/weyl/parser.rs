//! Text front end for operator expressions.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor factor*
//! factor := atom ('^' UINT)?
//! atom   := 'X' | 'P' | 'H' | 'T' | scalar | 'S{' expr '}' | '[' expr ',' expr ']' | '(' expr ')'
//! scalar := rational ['*'] ['i'] ['*' 'hbar' ['^' UINT]]   (any one part may stand alone)
//! ```

use std::fmt;

use thiserror::Error;

use super::poly::{commutator_poly, weyl_symmetrize_poly, OperatorPoly};
use super::scalar::{rational, HbarPoly, Scalar};
use super::word::{Letter, Word};
use crate::error::{QpbError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {}, found {found}", .expected.join(" | "))]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: u64,
    pub den: Option<u64>,
}

/// A scalar literal; at least one part is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarLit {
    pub rational: Option<Rational>,
    pub imag: bool,
    /// `None`: no ħ; `Some(None)`: `hbar`; `Some(Some(k))`: `hbar^k`.
    pub hbar: Option<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Symbol(Letter),
    Scalar(ScalarLit),
    Sum(Vec<(Sign, Expr)>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
    Weyl(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Letter(Letter),
    Uint(u64),
    Slash,
    Star,
    I,
    Hbar,
    Caret,
    Plus,
    Minus,
    WeylOpen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Letter(l) => write!(f, "'{l}'"),
            Tok::Uint(v) => write!(f, "integer {v}"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Star => write!(f, "'*'"),
            Tok::I => write!(f, "'i'"),
            Tok::Hbar => write!(f, "'hbar'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::WeylOpen => write!(f, "'S{{'"),
            Tok::LBrace => write!(f, "'{{'"),
            Tok::RBrace => write!(f, "'}}'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn syntax(position: usize, expected: &[&str], found: impl Into<String>) -> ParseError {
    ParseError {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.into(),
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut j = 0;
    while j < chars.len() {
        let c = chars[j];
        let start = j;
        j += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            'X' => Tok::Letter(Letter::X),
            'P' => Tok::Letter(Letter::P),
            'H' => Tok::Letter(Letter::H),
            'T' => Tok::Letter(Letter::T),
            'i' => Tok::I,
            'S' => {
                if chars.get(j) == Some(&'{') {
                    j += 1;
                    Tok::WeylOpen
                } else {
                    return Err(syntax(start, &["'S{'"], "'S'"));
                }
            }
            'h' => {
                let word: String = chars[start..chars.len().min(start + 4)].iter().collect();
                if word != "hbar" {
                    return Err(syntax(start, &["'hbar'"], format!("'{word}'")));
                }
                j = start + 4;
                Tok::Hbar
            }
            '0'..='9' => {
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[start..j].iter().collect();
                let value = digits
                    .parse()
                    .map_err(|_| syntax(start, &["integer below 2^64"], digits.clone()))?;
                Tok::Uint(value)
            }
            '/' => Tok::Slash,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(syntax(
                    start,
                    &["operator letter", "scalar", "'S{'", "'['", "'('"],
                    format!("'{other}'"),
                ))
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

const ATOM_START: &[&str] = &[
    "'X'", "'P'", "'H'", "'T'", "integer", "'i'", "'hbar'", "'S{'", "'['", "'('",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn position(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if tok != Tok::End {
            self.at += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        syntax(self.position(), expected, self.peek().to_string())
    }

    fn expect(&mut self, tok: Tok, name: &str) -> std::result::Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn uint(&mut self) -> std::result::Result<u64, ParseError> {
        match self.peek() {
            Tok::Uint(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn exponent(&mut self) -> std::result::Result<u32, ParseError> {
        let position = self.position();
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| syntax(position, &["exponent below 2^32"], v.to_string()))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Letter(_)
                | Tok::Uint(_)
                | Tok::I
                | Tok::Hbar
                | Tok::WeylOpen
                | Tok::LBracket
                | Tok::LParen
        )
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let lead = if *self.peek() == Tok::Minus {
            self.bump();
            Sign::Minus
        } else {
            Sign::Plus
        };
        terms.push((lead, self.term()?));
        loop {
            let sign = match self.peek() {
                Tok::Plus => Sign::Plus,
                Tok::Minus => Sign::Minus,
                _ => break,
            };
            self.bump();
            terms.push((sign, self.term()?));
        }
        if terms.len() == 1 && terms[0].0 == Sign::Plus {
            return Ok(terms.pop().map(|(_, e)| e).expect("one term"));
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        if !self.starts_atom() {
            return Err(self.error(ATOM_START));
        }
        let mut factors = vec![self.factor()?];
        while self.starts_atom() {
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().expect("one factor"));
        }
        Ok(Expr::Product(factors))
    }

    fn factor(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let k = self.exponent()?;
            return Ok(Expr::Power(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Letter(l) => {
                self.bump();
                Ok(Expr::Symbol(l))
            }
            Tok::Uint(_) | Tok::I | Tok::Hbar => self.scalar().map(Expr::Scalar),
            Tok::WeylOpen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RBrace, "'}'")?;
                Ok(Expr::Weyl(Box::new(inner)))
            }
            Tok::LBracket => {
                self.bump();
                let a = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.expr()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }

    fn scalar(&mut self) -> std::result::Result<ScalarLit, ParseError> {
        let mut lit = ScalarLit {
            rational: None,
            imag: false,
            hbar: None,
        };
        let mut any = false;
        if let Tok::Uint(num) = *self.peek() {
            self.bump();
            let den = if *self.peek() == Tok::Slash {
                self.bump();
                let position = self.position();
                let d = self.uint()?;
                if d == 0 {
                    return Err(syntax(position, &["nonzero denominator"], "0"));
                }
                Some(d)
            } else {
                None
            };
            lit.rational = Some(Rational { num, den });
            any = true;
        }
        if any && *self.peek() == Tok::Star {
            self.bump();
            if !matches!(self.peek(), Tok::I | Tok::Hbar) {
                return Err(self.error(&["'i'", "'hbar'"]));
            }
        }
        if *self.peek() == Tok::I {
            self.bump();
            lit.imag = true;
            if *self.peek() == Tok::Star {
                self.bump();
                if *self.peek() != Tok::Hbar {
                    return Err(self.error(&["'hbar'"]));
                }
            }
        }
        if *self.peek() == Tok::Hbar {
            self.bump();
            lit.hbar = Some(if *self.peek() == Tok::Caret {
                self.bump();
                Some(self.exponent()?)
            } else {
                None
            });
        }
        Ok(lit)
    }
}

/// Parses `text` into an expression tree. Symbols from both registers in one
/// expression are rejected.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        let mut expected: Vec<&str> = vec!["'+'", "'-'", "'^'"];
        expected.extend_from_slice(ATOM_START);
        expected.push("end of input");
        return Err(parser.error(&expected).into());
    }
    let mut registers = Vec::new();
    collect_registers(&expr, &mut registers);
    registers.sort();
    registers.dedup();
    if registers.len() > 1 {
        return Err(QpbError::MixedRegister);
    }
    Ok(expr)
}

fn collect_registers(e: &Expr, out: &mut Vec<super::word::Register>) {
    match e {
        Expr::Symbol(l) => out.push(l.register()),
        Expr::Scalar(_) => {}
        Expr::Sum(terms) => terms.iter().for_each(|(_, t)| collect_registers(t, out)),
        Expr::Product(fs) => fs.iter().for_each(|f| collect_registers(f, out)),
        Expr::Power(b, _) | Expr::Weyl(b) => collect_registers(b, out),
        Expr::Commutator(a, b) => {
            collect_registers(a, out);
            collect_registers(b, out);
        }
    }
}

impl ScalarLit {
    pub fn value(&self) -> HbarPoly {
        let q = match self.rational {
            Some(Rational { num, den }) => {
                num_rational::BigRational::new(num.into(), den.unwrap_or(1).into())
            }
            None => rational(1, 1),
        };
        let zero = rational(0, 1);
        let c = if self.imag {
            Scalar::new(zero, q)
        } else {
            Scalar::new(q, zero)
        };
        let k = match self.hbar {
            None => 0,
            Some(None) => 1,
            Some(Some(k)) => k,
        };
        HbarPoly::monomial(c, k)
    }
}

impl Expr {
    /// Exact operator poly. Products keep words as written; `S{..}` acts
    /// linearly on those words; commutators come back normal-ordered.
    pub fn eval(&self) -> Result<OperatorPoly> {
        match self {
            Expr::Symbol(l) => Ok(OperatorPoly::word(Word::new(vec![*l])?)),
            Expr::Scalar(s) => Ok(OperatorPoly::scalar(s.value())),
            Expr::Sum(terms) => {
                let mut acc = OperatorPoly::zero();
                for (sign, t) in terms {
                    let v = t.eval()?;
                    acc = match sign {
                        Sign::Plus => acc.try_add(&v)?,
                        Sign::Minus => acc.try_sub(&v)?,
                    };
                }
                Ok(acc)
            }
            Expr::Product(fs) => {
                let mut acc = OperatorPoly::identity();
                for f in fs {
                    acc = acc.try_mul(&f.eval()?)?;
                }
                Ok(acc)
            }
            Expr::Power(b, k) => b.eval()?.try_pow(*k),
            Expr::Commutator(a, b) => commutator_poly(&a.eval()?, &b.eval()?),
            Expr::Weyl(inner) => weyl_symmetrize_poly(&inner.eval()?),
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, Expr::Symbol(_) | Expr::Commutator(..) | Expr::Weyl(_))
    }
}

impl fmt::Display for ScalarLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(r) = self.rational {
            parts.push(match r.den {
                Some(d) => format!("{}/{d}", r.num),
                None => r.num.to_string(),
            });
        }
        if self.imag {
            parts.push("i".into());
        }
        match self.hbar {
            None => {}
            Some(None) => parts.push("hbar".into()),
            Some(Some(k)) => parts.push(format!("hbar^{k}")),
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for Expr {
    /// Canonical text; `parse` of the output rebuilds the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Symbol(l) => write!(f, "{l}"),
            Expr::Scalar(s) => write!(f, "{s}"),
            Expr::Sum(terms) => {
                for (j, (sign, t)) in terms.iter().enumerate() {
                    match (j, sign) {
                        (0, Sign::Plus) => {}
                        (0, Sign::Minus) => write!(f, "-")?,
                        (_, Sign::Plus) => write!(f, " + ")?,
                        (_, Sign::Minus) => write!(f, " - ")?,
                    }
                    if matches!(t, Expr::Sum(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            Expr::Product(fs) => {
                for (j, factor) in fs.iter().enumerate() {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    let after_scalar = j > 0 && matches!(fs[j - 1], Expr::Scalar(_));
                    let wrap = matches!(factor, Expr::Sum(_) | Expr::Product(_))
                        || (after_scalar && matches!(factor, Expr::Scalar(_)));
                    if wrap {
                        write!(f, "({factor})")?;
                    } else {
                        write!(f, "{factor}")?;
                    }
                }
                Ok(())
            }
            Expr::Power(base, k) => {
                if base.is_atom() {
                    write!(f, "{base}^{k}")
                } else {
                    write!(f, "({base})^{k}")
                }
            }
            Expr::Commutator(a, b) => write!(f, "[{a}, {b}]"),
            Expr::Weyl(inner) => write!(f, "S{{{inner}}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::poly::{normal_order, structurally_equal};
    use crate::weyl::scalar::real;

    fn sym(l: Letter) -> Expr {
        Expr::Symbol(l)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("[X,P]").unwrap(),
            Expr::Commutator(Box::new(sym(Letter::X)), Box::new(sym(Letter::P)))
        );
        assert_eq!(
            parse("S{X^2 P}").unwrap(),
            Expr::Weyl(Box::new(Expr::Product(vec![
                Expr::Power(Box::new(sym(Letter::X)), 2),
                sym(Letter::P)
            ])))
        );
        let e = parse("X P \u{2212} P X \u{2212} i*hbar").unwrap();
        let Expr::Sum(terms) = &e else {
            panic!("{e:?}")
        };
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[2].0, Sign::Minus);
        assert!(normal_order(&e.eval().unwrap()).is_zero());
    }

    #[test]
    fn scalar_forms() {
        let lit = |s: &str| match parse(s).unwrap() {
            Expr::Scalar(l) => l,
            other => panic!("{other:?}"),
        };
        assert_eq!(lit("3*i*hbar^2").to_string(), "3*i*hbar^2");
        assert_eq!(lit("3i hbar^2"), lit("3*i*hbar^2"));
        assert_eq!(lit("1/2").value(), HbarPoly::constant(real(1, 2)));
        assert_eq!(lit("i*hbar").value(), HbarPoly::i_hbar());
        assert_eq!(lit("hbar").to_string(), "hbar");
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let err = |s: &str| match parse(s) {
            Err(QpbError::Parse(e)) => e,
            other => panic!("{s}: {other:?}"),
        };
        let e = err("[X P");
        assert_eq!(e.position, 4);
        assert!(e.expected.contains(&"','".to_string()));
        let e = err("X + ");
        assert_eq!(e.position, 4);
        assert!(e.expected.contains(&"'X'".to_string()));
        assert_eq!(err("2*X").position, 2);
        assert_eq!(err("X^").expected, vec!["integer".to_string()]);
        assert_eq!(err("1/0").expected, vec!["nonzero denominator".to_string()]);
        assert_eq!(err("X % P").position, 2);
        assert_eq!(parse("X H"), Err(QpbError::MixedRegister));
    }

    #[test]
    fn evaluation() {
        let xp = parse("[X,P]").unwrap().eval().unwrap();
        assert!(structurally_equal(
            &xp,
            &OperatorPoly::scalar(HbarPoly::i_hbar())
        ));
        let s = parse("S{X P}").unwrap().eval().unwrap();
        let expected = parse("X P - 1/2*i*hbar").unwrap().eval().unwrap();
        assert!(structurally_equal(&normal_order(&s), &expected));
        assert!(parse("[[X,P], S{X^2 P}]")
            .unwrap()
            .eval()
            .unwrap()
            .is_zero());
        assert!(parse("X^0").unwrap().eval().unwrap() == OperatorPoly::identity());
    }

    #[test]
    fn printer_round_trips_tricky_shapes() {
        let two = Expr::Scalar(ScalarLit {
            rational: Some(Rational { num: 2, den: None }),
            imag: false,
            hbar: None,
        });
        let i = Expr::Scalar(ScalarLit {
            rational: None,
            imag: true,
            hbar: None,
        });
        let hbar = Expr::Scalar(ScalarLit {
            rational: None,
            imag: false,
            hbar: Some(None),
        });
        let cases = vec![
            Expr::Product(vec![two.clone(), i.clone()]),
            Expr::Power(Box::new(hbar.clone()), 2),
            Expr::Product(vec![
                Expr::Product(vec![sym(Letter::X), sym(Letter::P)]),
                sym(Letter::X),
            ]),
            Expr::Sum(vec![(Sign::Minus, sym(Letter::X))]),
            Expr::Sum(vec![
                (
                    Sign::Plus,
                    Expr::Sum(vec![(Sign::Plus, two.clone()), (Sign::Minus, hbar.clone())]),
                ),
                (Sign::Minus, Expr::Sum(vec![(Sign::Minus, i.clone())])),
            ]),
            Expr::Power(Box::new(Expr::Power(Box::new(sym(Letter::T)), 2)), 3),
            Expr::Product(vec![Expr::Power(Box::new(two), 3), i]),
        ];
        for e in cases {
            let text = e.to_string();
            assert_eq!(parse(&text).unwrap(), e, "{text}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scalar() -> impl Strategy<Value = Expr> {
            let rational = proptest::option::of((0u64..20, proptest::option::of(1u64..9)));
            let hbar = proptest::option::of(proptest::option::of(0u32..4));
            (rational, any::<bool>(), hbar)
                .prop_filter("empty literal", |(r, i, h)| {
                    r.is_some() || *i || h.is_some()
                })
                .prop_map(|(r, imag, hbar)| {
                    Expr::Scalar(ScalarLit {
                        rational: r.map(|(num, den)| Rational { num, den }),
                        imag,
                        hbar,
                    })
                })
        }

        fn expr() -> impl Strategy<Value = Expr> {
            let leaf = prop_oneof![
                Just(Expr::Symbol(Letter::X)),
                Just(Expr::Symbol(Letter::P)),
                scalar(),
            ];
            leaf.prop_recursive(3, 24, 3, |inner| {
                let sign = prop_oneof![Just(Sign::Plus), Just(Sign::Minus)];
                prop_oneof![
                    proptest::collection::vec((sign, inner.clone()), 1..4)
                        .prop_filter("single plus term has no surface form", |t| t.len() > 1
                            || t[0].0 == Sign::Minus,)
                        .prop_map(Expr::Sum),
                    proptest::collection::vec(inner.clone(), 2..4).prop_map(Expr::Product),
                    (inner.clone(), 0u32..3).prop_map(|(b, k)| Expr::Power(Box::new(b), k)),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Expr::Commutator(Box::new(a), Box::new(b))),
                    inner.prop_map(|e| Expr::Weyl(Box::new(e))),
                ]
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(256))]

            #[test]
            fn printed_ast_reparses_to_itself(e in expr()) {
                let text = e.to_string();
                prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
            }
        }
    }
}

//! Text grammar for phase-space functions.
//!
//! ```text
//! expr   := ["-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := "-" factor | base ("^" nonneg_int)?
//! base   := rational | "i" | q1..q3 | p1..p3 | "(" expr ")"
//!         | "exp" "(" "i" "*" "(" linp ")" ")"
//! linp   := rational "*" pvar (("+"|"-") rational "*" pvar)*
//! rational := ["-"] int ("/" posint)?
//! ```
//!
//! Whitespace is ignored between tokens.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use thiserror::Error;

use crate::expr::{Expr, Freq, Var};
use crate::scalar::Coeff;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("exponent must be a non-negative integer at most {MAX_EXPONENT}, found '{0}'")]
    BadExponent(String),
    #[error("exp argument must have the form i*(r1*p1+r2*p2+r3*p3): {0}")]
    ExpArgument(String),
    #[error("denominator must be a positive integer")]
    BadDenominator,
    #[error("number does not fit the coefficient representation")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

/// Parses an expression into its canonical form.
pub fn parse_expr<C: Coeff>(text: &str) -> Result<Expr<C>, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(ParseErrorKind::UnexpectedChar(p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(ParseErrorKind::UnexpectedChar(x as char))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn expr<C: Coeff>(&mut self) -> Result<Expr<C>, ParseError> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<Expr<C>, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor<C: Coeff>(&mut self) -> Result<Expr<C>, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let n = self.exponent()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        // anything glued to the exponent that would make it non-integral
        let tail_start = self.pos;
        while self.pos < self.src.len() && matches!(self.src[self.pos], b'/' | b'.' | b'a'..=b'z') {
            self.pos += 1;
            self.digits();
        }
        let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        if digits.is_empty() || self.pos != tail_start {
            self.pos = start;
            return Err(self.err(ParseErrorKind::BadExponent(text)));
        }
        match digits.parse::<u32>() {
            Ok(n) if n <= MAX_EXPONENT => Ok(n),
            _ => {
                self.pos = start;
                Err(self.err(ParseErrorKind::BadExponent(text)))
            }
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    /// `int ("/" posint)?` with the cursor on the first digit.
    fn unsigned_rational(&mut self) -> Result<BigRational, ParseError> {
        let num: BigInt = self.digits().parse().expect("digits");
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let d = self.digits();
            let den: BigInt = match d.parse() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = at;
                    return Err(self.err(ParseErrorKind::BadDenominator));
                }
            };
            if den.is_zero() {
                self.pos = at;
                return Err(self.err(ParseErrorKind::BadDenominator));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn signed_rational(&mut self) -> Result<BigRational, ParseError> {
        let neg = self.eat(b'-');
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.unsigned_rational()?;
                Ok(if neg { -r } else { r })
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c as char))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn base<C: Coeff>(&mut self) -> Result<Expr<C>, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.unsigned_rational()?;
                let c = C::from_parts(&r, &BigRational::zero())
                    .ok_or(ParseError { pos: start, kind: ParseErrorKind::Overflow })?;
                Ok(Expr::constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let id = self.ident();
                if id == "i" {
                    return Ok(Expr::i());
                }
                if id == "exp" {
                    return self.exp_body();
                }
                match Var::from_name(&id) {
                    Some(v) => Ok(Expr::var(v)),
                    None => {
                        self.pos = at;
                        Err(self.err(ParseErrorKind::UnknownIdentifier(id)))
                    }
                }
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }

    fn exp_body<C: Coeff>(&mut self) -> Result<Expr<C>, ParseError> {
        let bad = |p: &Self, msg: &str| p.err(ParseErrorKind::ExpArgument(msg.to_string()));
        self.expect(b'(')?;
        self.skip_ws();
        let at = self.pos;
        if self.ident() != "i" {
            self.pos = at;
            return Err(bad(self, "expected 'i'"));
        }
        if !self.eat(b'*') {
            return Err(bad(self, "expected '*' after 'i'"));
        }
        if !self.eat(b'(') {
            return Err(bad(self, "expected '(' opening the linear form"));
        }
        let mut freq = Freq::ZERO;
        let mut first = true;
        loop {
            let neg = if first || self.eat(b'+') {
                false
            } else if self.eat(b'-') {
                true
            } else {
                break;
            };
            first = false;
            let mut r = self.signed_rational().map_err(|_| bad(self, "expected a rational coefficient"))?;
            if neg {
                r = -r;
            }
            if !self.eat(b'*') {
                return Err(bad(self, "expected '*' between coefficient and momentum"));
            }
            self.skip_ws();
            let at = self.pos;
            let id = self.ident();
            let v = match Var::from_name(&id) {
                Some(v) if v.is_momentum() => v,
                _ => {
                    self.pos = at;
                    return Err(bad(self, &format!("'{id}' is not a momentum variable")));
                }
            };
            let small = to_small(&r).ok_or_else(|| self.err(ParseErrorKind::Overflow))?;
            freq.0[v.axis()] += small;
        }
        if !self.eat(b')') {
            return Err(bad(self, "expected ')' closing the linear form"));
        }
        self.expect(b')')?;
        Ok(Expr::exp_i(freq))
    }
}

fn to_small(r: &BigRational) -> Option<Ratio<i64>> {
    let n = i64::try_from(r.numer()).ok()?;
    let d = i64::try_from(r.denom()).ok()?;
    if d <= 0 || (n.is_negative() && n == i64::MIN) {
        return None;
    }
    Some(Ratio::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Expr, Scalar};

    fn parse(s: &str) -> Result<Expr, ParseError> {
        parse_expr::<Scalar>(s)
    }

    #[test]
    fn momentum_square() {
        let f = parse("p1^2+p2^2+p3^2").unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn exponential_sum() {
        let f = parse("exp(i*(1*p1))+exp(i*(1*p2))").unwrap();
        assert_eq!(f.len(), 2);
        let freqs: Vec<_> = f.terms().map(|(m, _)| m.freq.0).collect();
        assert!(freqs.contains(&[Ratio::from(1), Ratio::from(0), Ratio::from(0)]));
        assert!(freqs.contains(&[Ratio::from(0), Ratio::from(1), Ratio::from(0)]));
    }

    #[test]
    fn commutative_difference_is_zero() {
        assert!(parse("q1*p1 - p1*q1").unwrap().is_zero());
    }

    #[test]
    fn powers_of_groups_and_rationals() {
        assert_eq!(parse("(q1+p1)^2").unwrap(), parse("q1^2+2*q1*p1+p1^2").unwrap());
        assert_eq!(parse("2/4*q1").unwrap(), parse("1/2*q1").unwrap());
        assert_eq!(parse("i^2").unwrap(), parse("-1").unwrap());
        assert_eq!(parse("-q1^2").unwrap(), parse("0-q1*q1").unwrap());
        assert_eq!(parse(" q1 *  p2 ").unwrap(), parse("q1*p2").unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("q1 + * p1").unwrap_err();
        assert_eq!(e.pos, 5);
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('*'));
        let e = parse("q1 + x7").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(matches!(e.kind, ParseErrorKind::UnknownIdentifier(_)));
        assert_eq!(parse("(q1").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert!(matches!(parse("q1 p1").unwrap_err().kind, ParseErrorKind::UnexpectedChar('p')));
        assert_eq!(parse("1/0").unwrap_err().kind, ParseErrorKind::BadDenominator);
    }

    #[test]
    fn exponents_must_be_nonnegative_integers() {
        for bad in ["q1^1/2", "q1^-1", "q1^p1", "q1^", "q1^100"] {
            let e = parse(bad).unwrap_err();
            assert!(matches!(e.kind, ParseErrorKind::BadExponent(_)), "{bad}: {e}");
            assert_eq!(e.pos, 3, "{bad}");
        }
    }

    #[test]
    fn exp_arguments_are_checked() {
        for bad in ["exp(q1)", "exp(i*(1*q1))", "exp(i*p1)", "exp(i*(p1))", "exp(2*(1*p1))"] {
            let e = parse(bad).unwrap_err();
            assert!(matches!(e.kind, ParseErrorKind::ExpArgument(_)), "{bad}: {e}");
        }
        assert_eq!(
            parse("exp(i*(1*p1+2*p1))").unwrap(),
            parse("exp(i*(3*p1))").unwrap()
        );
        assert_eq!(parse("exp(i*(0*p2))").unwrap(), Expr::one());
    }

    #[test]
    fn print_parse_is_a_fixpoint() {
        for s in [
            "32/9*i*(p1*q1+p2*q2+p3*q3)",
            "-(2-3/5*i)*q1^3*p2*exp(i*(1/2*p1-3*p3)) + 7/11",
            "-i*q2 - 4*exp(i*(-1*p2))",
        ] {
            let f = parse(s).unwrap();
            let printed = f.to_string();
            let g = parse(&printed).unwrap();
            assert_eq!(f, g, "{s} -> {printed}");
            assert_eq!(g.to_string(), printed);
        }
    }
}

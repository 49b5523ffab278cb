//! Expression grammar for algebra elements.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)?
//! atom    := INT ('/' INT)? | 'X' INT | 'Y' INT | 'S' | 'Delta'
//!          | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//! `[a, b]` is the commutator `ab − ba`. Whitespace is ignored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{commutator, AlgebraElement};
use crate::error::{HeisenError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    X(usize),
    Y(usize),
    S,
    Delta,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn err(pos: usize, msg: impl Into<String>) -> HeisenError {
    HeisenError::Parse { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '0'..='9' => {
                let s = digits(&mut i);
                out.push((pos, Tok::Int(s.parse().map_err(|_| err(pos, "bad integer"))?)));
                continue;
            }
            'X' | 'Y' => {
                i += 1;
                let s = digits(&mut i);
                let idx: usize = s.parse().map_err(|_| err(pos, "generator needs an index"))?;
                if idx == 0 {
                    return Err(err(pos, "generator indices start at 1"));
                }
                out.push((pos, if c == 'X' { Tok::X(idx) } else { Tok::Y(idx) }));
                continue;
            }
            'S' => Tok::S,
            'D' if chars[i..].iter().take(5).collect::<String>() == "Delta" => {
                i += 5;
                out.push((pos, Tok::Delta));
                continue;
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    d: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<AlgebraElement> {
        if self.eat(&Tok::Minus) {
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let pos = self.pos();
            match self.toks.get(self.at).map(|(_, t)| t.clone()) {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let n: u32 = n.try_into().map_err(|_| err(pos, "exponent too large"))?;
                    return Ok(base.pow(n));
                }
                _ => return Err(err(pos, "expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<AlgebraElement> {
        let pos = self.pos();
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return Err(err(pos, "unexpected end of expression"));
        };
        self.at += 1;
        let d = self.d;
        match tok {
            Tok::Int(n) => {
                let mut den = BigInt::from(1);
                if self.eat(&Tok::Slash) {
                    let p = self.pos();
                    match self.toks.get(self.at).map(|(_, t)| t.clone()) {
                        Some(Tok::Int(m)) if !m.is_zero() => {
                            self.at += 1;
                            den = m;
                        }
                        _ => return Err(err(p, "expected nonzero denominator")),
                    }
                }
                Ok(AlgebraElement::scalar(d, BigRational::new(n, den)))
            }
            Tok::X(i) => Ok(AlgebraElement::x(d, i)),
            Tok::Y(i) => Ok(AlgebraElement::y(d, i)),
            Tok::S => Ok(AlgebraElement::s(d)),
            Tok::Delta => Ok(AlgebraElement::sub_laplacian(d)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::LBracket => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.expr()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(commutator(&a, &b))
            }
            _ => Err(err(pos, "unexpected token")),
        }
    }
}

/// Parses and normal-orders an expression. The dimension is `d` if given,
/// otherwise the largest generator index that appears (at least 1).
pub fn parse_expression(text: &str, d: Option<usize>) -> Result<AlgebraElement> {
    let toks = lex(text)?;
    let max_idx = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::X(i) | Tok::Y(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    let d = match d {
        Some(d) if d < max_idx => {
            return Err(err(0, format!("generator index {max_idx} exceeds d = {d}")));
        }
        Some(d) => d.max(1),
        None => max_idx,
    };
    let mut p = Parser { toks, at: 0, d, end: text.chars().count() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_expression() {
        assert_eq!(parse_expression("X1*Y1 - Y1*X1", None).unwrap().to_string(), "-S");
        assert_eq!(parse_expression("[X1, Y1]", None).unwrap().to_string(), "-S");
        assert_eq!(parse_expression("[X1, Y2]", None).unwrap().to_string(), "0");
    }

    #[test]
    fn delta_and_literals() {
        let e = parse_expression("Delta*X1 - X1*Delta", Some(1)).unwrap();
        assert_eq!(e.to_string(), "2*Y1*S");
        let f = parse_expression("3/4*S^2 - (1/4)*S*S", None).unwrap();
        assert_eq!(f.to_string(), "1/2*S^2");
        assert_eq!(parse_expression("-2", None).unwrap().to_string(), "-2");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_expression("X1 +", None).is_err());
        assert!(parse_expression("X0", None).is_err());
        assert!(parse_expression("Z1", None).is_err());
        assert!(parse_expression("X2", Some(1)).is_err());
        assert!(parse_expression("(X1", None).is_err());
        assert!(parse_expression("1/0", None).is_err());
    }
}

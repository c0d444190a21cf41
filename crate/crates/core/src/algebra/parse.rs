//! Parser for the textual polynomial format (`2*X1^2*Y1 + X2`), extended with
//! `-`, `/` and parentheses so rational functions can be written too.

use super::coeff::Fp;
use super::monomial::Block;
use super::params::MAX_E;
use super::poly::FpPoly;
use super::ratfun::RatFun;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Var(Block, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            'X' | 'Y' | 'Z' | 'x' | 'y' | 'z' => {
                let block = match c.to_ascii_uppercase() {
                    'X' => Block::X,
                    'Y' => Block::Y,
                    _ => Block::Z,
                };
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("variable {c} needs an index")))?;
                if idx == 0 || idx > MAX_E {
                    return Err(Error::Parse(format!("variable index {idx} outside 1..={MAX_E}")));
                }
                out.push(Tok::Var(block, idx));
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let n = chars[i..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse("integer literal too large".into()))?;
                out.push(Tok::Num(n));
                i = j;
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// Unreduced fraction used during evaluation.
#[derive(Debug, Clone)]
struct Frac {
    num: FpPoly,
    den: FpPoly,
}

impl Frac {
    fn poly(f: FpPoly) -> Frac {
        let one = FpPoly::one(*f.ring());
        Frac { num: f, den: one }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    ring: Fp,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            let minus = match t {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            let rhs_num = if minus { -&rhs.num } else { rhs.num };
            acc = Frac { num: &(&acc.num * &rhs.den) + &(&rhs_num * &acc.den), den: &acc.den * &rhs.den };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = Frac { num: &acc.num * &rhs.num, den: &acc.den * &rhs.den };
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.num.is_zero() {
                        return Err(Error::ZeroDenominator);
                    }
                    acc = Frac { num: &acc.num * &rhs.den, den: &acc.den * &rhs.num };
                }
                // juxtaposition: "2X1" or "X1 X2"
                Some(Tok::Var(..)) | Some(Tok::LParen) => {
                    let rhs = self.unary()?;
                    acc = Frac { num: &acc.num * &rhs.num, den: &acc.den * &rhs.den };
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Frac> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let f = self.unary()?;
            return Ok(Frac { num: -&f.num, den: f.den });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.next() {
            Some(Tok::Num(k)) => {
                let k = u32::try_from(k).map_err(|_| Error::Parse("exponent too large".into()))?;
                Ok(Frac { num: base.num.pow(k), den: base.den.pow(k) })
            }
            Some(Tok::Minus) => match self.next() {
                Some(Tok::Num(k)) => Err(Error::NegativeExponent(-(k as i64))),
                _ => Err(Error::Parse("expected exponent".into())),
            },
            _ => Err(Error::Parse("expected exponent".into())),
        }
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.next() {
            Some(Tok::Num(n)) => {
                let c = (n % self.ring.p() as u64) as u32;
                Ok(Frac::poly(FpPoly::constant(self.ring, c)))
            }
            Some(Tok::Var(b, i)) => Ok(Frac::poly(FpPoly::var(self.ring, b, i))),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

fn parse_frac(s: &str, p: u32) -> Result<Frac> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut parser = Parser { toks, pos: 0, ring: Fp::new(p) };
    let f = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", parser.pos)));
    }
    if f.den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(f)
}

/// Parses a polynomial over F_p. Division is allowed only by constants.
pub fn parse_poly(s: &str, p: u32) -> Result<FpPoly> {
    let f = parse_frac(s, p)?;
    match f.den.as_constant() {
        Some(c) if c != 0 => Ok(f.num.scale(&Fp::new(p).inv(c))),
        _ => Err(Error::Parse(format!("{s:?} is not a polynomial"))),
    }
}

/// Parses a rational function over F_p and normalizes it.
pub fn parse_ratfun(s: &str, p: u32) -> Result<RatFun> {
    let f = parse_frac(s, p)?;
    RatFun::new(f.num, f.den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textual_form_round_trips() {
        let f = parse_poly("2*X1^2*Y1 + X2 + 1", 3).unwrap();
        assert_eq!(f.to_string(), "2*X1^2*Y1 + X2 + 1");
        assert_eq!(parse_poly(&f.to_string(), 3).unwrap(), f);
    }

    #[test]
    fn arithmetic_in_the_field() {
        assert!(parse_poly("X1 + X1", 2).unwrap().is_zero());
        assert_eq!(parse_poly("(X1+X2)^3", 3).unwrap(), parse_poly("X1^3 + X2^3", 3).unwrap());
        assert_eq!(parse_poly("-X1", 5).unwrap().to_string(), "4*X1");
        assert_eq!(parse_poly("X1/2", 5).unwrap().to_string(), "3*X1");
    }

    #[test]
    fn rational_functions() {
        let r = parse_ratfun("X1^2/X1", 2).unwrap();
        assert_eq!(r.to_string(), "X1");
        let r = parse_ratfun("1/(1+X1)", 2).unwrap();
        assert_eq!(r.to_string(), "(1)/(X1 + 1)");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_poly("1/X1", 2), Err(Error::Parse(_))));
        assert_eq!(parse_poly("X1^-1", 2), Err(Error::NegativeExponent(-1)));
        assert_eq!(parse_ratfun("X1/0", 3), Err(Error::ZeroDenominator));
        assert!(parse_poly("X5", 2).is_err());
        assert!(parse_poly("X1 +", 2).is_err());
        assert!(parse_poly("(X1", 2).is_err());
    }
}

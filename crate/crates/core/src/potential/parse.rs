use num_complex::Complex64 as C;

use super::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    X,
    I,
    Op(char),
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' | '-' | '*' | '/' | '^' => {
                out.push((Tok::Op(ch), i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            'x' => {
                out.push((Tok::X, i));
                i += 1;
            }
            'i' => {
                out.push((Tok::I, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let s = &text[start..i];
                let v: f64 = s.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("malformed number '{s}'"),
                })?;
                out.push((Tok::Num(v), start));
            }
            _ => {
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character '{ch}'") })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.add(&rhs.scale(C::new(-1.0, 0.0))) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                acc = acc.mul(&rhs);
            } else {
                if rhs.degree() > 0 {
                    return Err(Error::DivisionByNonConstant { pos: at });
                }
                if rhs.coeffs[0].norm() == 0.0 {
                    return Err(Error::DivisionByZero { pos: at });
                }
                acc = acc.scale(1.0 / rhs.coeffs[0]);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.scale(C::new(-1.0, 0.0)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let at = self.here();
            let e = self.unary()?;
            if e.degree() > 0 || e.coeffs[0].im != 0.0 {
                return Err(Error::FractionalExponent { pos: at });
            }
            let v = e.coeffs[0].re;
            if v < 0.0 {
                return Err(Error::NegativeExponent { pos: at });
            }
            if v.fract() != 0.0 || v > 1000.0 {
                return Err(Error::FractionalExponent { pos: at });
            }
            let mut out = Polynomial::new(vec![C::new(1.0, 0.0)]);
            for _ in 0..v as usize {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(v)) => Ok(Polynomial::new(vec![C::new(v, 0.0)])),
            Some(Tok::X) => Ok(Polynomial::new(vec![C::new(0.0, 0.0), C::new(1.0, 0.0)])),
            Some(Tok::I) => Ok(Polynomial::new(vec![C::new(0.0, 1.0)])),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Syntax { pos: self.here(), msg: "expected ')'".into() });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(Error::Syntax { pos: at, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Syntax { pos: at, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses a polynomial in `x`; `i` denotes the imaginary unit.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let poly = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::Syntax { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(p: &Polynomial) -> Vec<f64> {
        p.coeffs.iter().map(|c| c.re).collect()
    }

    #[test]
    fn readings() {
        assert_eq!(re(&parse_polynomial("x^2/2").unwrap()), vec![0.0, 0.0, 0.5]);
        assert_eq!(re(&parse_polynomial("x^4 - 2*x").unwrap()), vec![0.0, -2.0, 0.0, 0.0, 1.0]);
        assert_eq!(re(&parse_polynomial("-(x+1)^2").unwrap()), vec![-1.0, -2.0, -1.0]);
        assert_eq!(re(&parse_polynomial("x^4/4 - x^2/2").unwrap()), vec![0.0, 0.0, -0.5, 0.0, 0.25]);
        let p = parse_polynomial("2*i*x").unwrap();
        assert_eq!(p.coeffs[1], C::new(0.0, 2.0));
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_polynomial("x^-1"), Err(Error::NegativeExponent { pos: 2 })));
        assert!(matches!(parse_polynomial("x^0.5"), Err(Error::FractionalExponent { .. })));
        assert!(matches!(parse_polynomial("1/x"), Err(Error::DivisionByNonConstant { pos: 1 })));
        assert!(matches!(parse_polynomial("x^x"), Err(Error::FractionalExponent { .. })));
        assert!(matches!(parse_polynomial("x + y"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_polynomial("(x+1"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_polynomial("x/0"), Err(Error::DivisionByZero { .. })));
    }
}

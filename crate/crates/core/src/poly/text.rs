//! Text format for polynomials: `3*x0^2*x1 - 1/2*x2^3`.
//!
//! Files may span several lines, use `#` comments, and pin the variable
//! count with a `vars: N` line (needed when trailing variables do not occur,
//! e.g. `x0^3` in three variables).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{format_rational, Monomial, Poly, Rational};
use crate::error::{Error, Result};

pub(super) fn print_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        let factors: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&format_rational(&a));
        } else {
            if !a.is_one() {
                out.push_str(&format_rational(&a));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

/// File form: a `vars:` line followed by the canonical polynomial text.
pub fn print_poly_file(p: &Poly) -> String {
    format!("vars: {}\n{}\n", p.n(), print_poly(p))
}

/// A coefficient with its `(variable, exponent)` factors.
type Term = (Rational, Vec<(usize, u32)>);

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Parser {
    chars: Vec<(char, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.0)
    }

    fn pos(&self) -> Pos {
        self.chars.get(self.at).map(|c| c.1).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Parse {
            line: p.line,
            column: p.column,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.at += 1;
            } else {
                break;
            }
        }
        if s.is_empty() {
            return self.err("expected digits");
        }
        Ok(s)
    }

    /// Returns the coefficient contribution and the variable powers.
    fn factor(&mut self, vars: &mut Vec<(usize, u32)>) -> Result<Rational> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits");
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.at += 1;
                    let den: BigInt = self.digits()?.parse().expect("digits");
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    Ok(Rational::new(num, den))
                } else {
                    Ok(Rational::from_integer(num))
                }
            }
            Some('x') => {
                self.at += 1;
                if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    return self.err("expected variable index after 'x'");
                }
                let idx: usize = self
                    .digits()?
                    .parse()
                    .map_err(|_| Error::Parse {
                        line: self.pos().line,
                        column: self.pos().column,
                        message: "variable index too large".into(),
                    })?;
                self.skip_ws();
                let mut exp = 1u32;
                if self.peek() == Some('^') {
                    self.at += 1;
                    exp = match self.digits()?.parse() {
                        Ok(e) if e <= u16::MAX as u32 => e,
                        _ => return self.err("exponent too large"),
                    };
                }
                vars.push((idx, exp));
                Ok(Rational::one())
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<(Rational, Vec<(usize, u32)>)> {
        let mut coeff = Rational::one();
        let mut vars = Vec::new();
        coeff *= self.factor(&mut vars)?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.at += 1;
                coeff *= self.factor(&mut vars)?;
            } else {
                break;
            }
        }
        Ok((coeff, vars))
    }

    fn poly(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut sign = Rational::one();
        match self.peek() {
            Some('-') => {
                self.at += 1;
                sign = -sign;
            }
            Some('+') => self.at += 1,
            None => return self.err("empty polynomial"),
            _ => {}
        }
        loop {
            let (c, v) = self.term()?;
            terms.push((sign * c, v));
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.at += 1;
                    sign = Rational::one();
                }
                Some('-') => {
                    self.at += 1;
                    sign = -Rational::one();
                }
                None => break,
                Some(c) => return self.err(format!("unexpected character '{c}'")),
            }
        }
        Ok(terms)
    }
}

fn build(
    terms: Vec<Term>,
    n: Option<usize>,
    end: Pos,
) -> Result<Poly> {
    let max_idx = terms
        .iter()
        .flat_map(|(_, v)| v.iter().map(|&(i, _)| i + 1))
        .max()
        .unwrap_or(0);
    let n = match n {
        Some(n) if max_idx > n => {
            return Err(Error::Parse {
                line: end.line,
                column: end.column,
                message: format!("variable x{} out of range for {n} variables", max_idx - 1),
            })
        }
        Some(n) => n,
        None => max_idx,
    };
    let mut p = Poly::zero(n);
    for (c, vars) in terms {
        let mut e = vec![0u32; n];
        for (i, k) in vars {
            e[i] += k;
        }
        if e.iter().any(|&k| k > u16::MAX as u32) {
            return Err(Error::Parse {
                line: end.line,
                column: end.column,
                message: "exponent too large".into(),
            });
        }
        p.add_term(Monomial::new(e.into_iter().map(|k| k as u16).collect()), c);
    }
    Ok(p)
}

/// Parses a single polynomial expression. With `n = None` the variable
/// count is one more than the largest index that occurs.
pub fn parse_poly(text: &str, n: Option<usize>) -> Result<Poly> {
    let mut chars = Vec::new();
    let mut end = Pos { line: 1, column: 1 };
    for (li, line) in text.split('\n').enumerate() {
        for (ci, c) in line.chars().enumerate() {
            chars.push((
                c,
                Pos {
                    line: li + 1,
                    column: ci + 1,
                },
            ));
        }
        end = Pos {
            line: li + 1,
            column: line.chars().count() + 1,
        };
    }
    let mut parser = Parser { chars, at: 0, end };
    let terms = parser.poly()?;
    build(terms, n, end)
}

/// Parses a polynomial file: `#` comments, an optional `vars: N` line, and
/// one polynomial possibly spread over several lines.
pub fn parse_poly_file(text: &str) -> Result<Poly> {
    let mut chars = Vec::new();
    let mut n = None;
    let mut end = Pos { line: 1, column: 1 };
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        end = Pos {
            line: li + 1,
            column: line.chars().count() + 1,
        };
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            let col = raw.find("vars:").unwrap_or(0) + 6;
            let v: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: li + 1,
                column: col,
                message: "expected a variable count after 'vars:'".into(),
            })?;
            if n.replace(v).is_some() {
                return Err(Error::Parse {
                    line: li + 1,
                    column: 1,
                    message: "duplicate 'vars:' line".into(),
                });
            }
            continue;
        }
        for (ci, c) in line.chars().enumerate() {
            chars.push((
                c,
                Pos {
                    line: li + 1,
                    column: ci + 1,
                },
            ));
        }
        // keep line breaks as whitespace between terms
        chars.push((' ', end));
    }
    let mut parser = Parser { chars, at: 0, end };
    let terms = parser.poly()?;
    build(terms, n, end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ratio, rat};

    #[test]
    fn prints_canonically() {
        let p = parse_poly("- 1/2*x2^3 + 3 * x0^2*x1", None).unwrap();
        assert_eq!(p.to_string(), "3*x0^2*x1 - 1/2*x2^3");
        let q = parse_poly("-x0^3 + x0*x1*x2 - 2", Some(3)).unwrap();
        assert_eq!(q.to_string(), "-x0^3 + x0*x1*x2 - 2");
        assert_eq!(Poly::zero(2).to_string(), "0");
    }

    #[test]
    fn coefficients_multiply_and_merge() {
        let p = parse_poly("2*x0*3*x0 + x0^2 - 7*x0^2", Some(1)).unwrap();
        assert!(p.is_zero());
        let q = parse_poly("2/4*x1", None).unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(q.coefficient(&Monomial::var(2, 1)), ratio(1, 2));
        let r = parse_poly("x0*x0*x0", None).unwrap();
        assert_eq!(r.coefficient(&Monomial::new(vec![3])), rat(1));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly_file("vars: 3\nx0^2*x1 +\n  x1 ** x2") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!((line, column), (3, 7));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_poly("x0 + y", None), Err(Error::Parse { column: 6, .. })));
        assert!(parse_poly("1/0*x0", None).is_err());
        assert!(parse_poly("", None).is_err());
        assert!(parse_poly("x3", Some(2)).is_err());
    }

    #[test]
    fn file_directive_and_comments() {
        let p = parse_poly_file("# a cone\nvars: 3\nx0^3 # only x0\n").unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(print_poly_file(&p), "vars: 3\nx0^3\n");
        assert_eq!(parse_poly_file(&print_poly_file(&p)).unwrap(), p);
    }
}

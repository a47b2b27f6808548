//! Text syntax for scalars, difference operators (`z[..]` is `t^lambda`)
//! and Novikov sums (`q[..]` is `q^beta`).
//!
//! ```text
//! expr    := ('+'|'-')? term (('+'|'-') term)*
//! term    := unary (('*'|'/') unary)*
//! unary   := ('+'|'-') unary | power
//! power   := primary ('^' '-'? int)?
//! primary := int | ident | 'z' '[' ints ']' | 'q' '[' ints ']' | '(' expr ')'
//! ```
//!
//! Products are taken in the twisted algebra: a scalar to the right of
//! `z[lambda]` is shifted when moved across it. Division is allowed by
//! single-term (invertible) factors only.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{phi_shift, Polynomial, RationalFunction, VariableSpace, Q};
use crate::coulomb::DiffOp;
use crate::error::{Error, Result};
use crate::shift::NovikovSum;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let (mut last_line, mut last_col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            last_line = line;
            last_col = col;
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            last_line = line;
            last_col = col;
            col += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: tl, column: tc });
            last_line = line;
            last_col = col;
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: tl,
                column: tc,
            });
            col += i - start;
            last_line = line;
            last_col = col - 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(s),
                line: tl,
                column: tc,
            });
            col += i - start;
            last_line = line;
            last_col = col - 1;
            continue;
        }
        return Err(Error::Syntax {
            line: tl,
            column: tc,
            message: format!("unexpected character `{c}`"),
        });
    }
    // End of input is reported at the last character.
    out.push(Token {
        tok: Tok::Eof,
        line: last_line,
        column: last_col,
    });
    Ok(out)
}

/// Sum of `c t^lambda q^beta` with `t` twisting scalars and `q` central.
type Mixed = BTreeMap<(Vec<i64>, Vec<i64>), RationalFunction>;

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    space: &'a Arc<VariableSpace>,
    z_rank: usize,
    q_rank: Option<usize>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.error(&t, format!("expected {what}, found {}", describe(&t.tok))))
        }
    }

    fn scalar(&self, c: RationalFunction) -> Mixed {
        let mut m = Mixed::new();
        if !c.is_zero() {
            m.insert((vec![0; self.z_rank], vec![0; self.q_rank.unwrap_or(0)]), c);
        }
        m
    }

    fn parse_all(&mut self) -> Result<Mixed> {
        let v = self.expr()?;
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return Err(self.error(&t, format!("unexpected {}", describe(&t.tok))));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Mixed> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    let t = self.term()?;
                    acc = add(&acc, &t);
                }
                Tok::Minus => {
                    self.next();
                    let t = self.term()?;
                    acc = add(&acc, &neg(&t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Mixed> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    let f = self.unary()?;
                    acc = mul(&acc, &f)?;
                }
                Tok::Slash => {
                    let at = self.next();
                    let f = self.unary()?;
                    let inv = invert(&f).ok_or_else(|| self.error(&at, "division by a non-invertible factor"))??;
                    acc = mul(&acc, &inv)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Mixed> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(neg(&self.unary()?))
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Mixed> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.next();
        let negative = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        let Tok::Int(n) = &t.tok else {
            return Err(self.error(&t, format!("expected integer exponent, found {}", describe(&t.tok))));
        };
        let e: u32 = n
            .try_into()
            .map_err(|_| self.error(&t, "exponent too large"))?;
        let b = if negative {
            invert(&base).ok_or_else(|| self.error(&caret, "negative power of a non-invertible factor"))??
        } else {
            base
        };
        let mut acc = self.scalar(RationalFunction::one(self.space));
        for _ in 0..e {
            acc = mul(&acc, &b)?;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Mixed> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(self.scalar(RationalFunction::constant(self.space, Q::from_integer(n.clone())))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Ident(name) if (name == "z" || name == "q") && self.peek().tok == Tok::LBracket => {
                let is_z = name == "z";
                self.next();
                let entries = self.int_list()?;
                let expected = if is_z {
                    self.z_rank
                } else {
                    match self.q_rank {
                        Some(m) => m,
                        None => {
                            return Err(Error::UnknownIdentifier {
                                name: name.clone(),
                                line: t.line,
                                column: t.column,
                            })
                        }
                    }
                };
                if entries.len() != expected {
                    return Err(Error::Arity {
                        line: t.line,
                        column: t.column,
                        expected,
                        got: entries.len(),
                    });
                }
                let key = if is_z {
                    (entries, vec![0; self.q_rank.unwrap_or(0)])
                } else {
                    (vec![0; self.z_rank], entries)
                };
                let mut m = Mixed::new();
                m.insert(key, RationalFunction::one(self.space));
                Ok(m)
            }
            Tok::Ident(name) => match self.space.index_of(name) {
                Some(v) => Ok(self.scalar(RationalFunction::from_poly(Polynomial::var(self.space, v)))),
                None => Err(Error::UnknownIdentifier {
                    name: name.clone(),
                    line: t.line,
                    column: t.column,
                }),
            },
            other => Err(self.error(&t, format!("unexpected {}", describe(other)))),
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        loop {
            let negative = if self.peek().tok == Tok::Minus {
                self.next();
                true
            } else {
                false
            };
            let t = self.next();
            let Tok::Int(n) = &t.tok else {
                return Err(self.error(&t, format!("expected integer, found {}", describe(&t.tok))));
            };
            let v: i64 = n.try_into().map_err(|_| self.error(&t, "integer too large"))?;
            out.push(if negative { -v } else { v });
            let t = self.next();
            match t.tok {
                Tok::Comma => continue,
                Tok::RBracket => return Ok(out),
                ref other => return Err(self.error(&t, format!("expected `,` or `]`, found {}", describe(other)))),
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Eof => "end of input".to_string(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::Comma => "`,`".into(),
    }
}

fn add_into(acc: &mut Mixed, key: (Vec<i64>, Vec<i64>), c: RationalFunction) {
    if c.is_zero() {
        return;
    }
    let sum = match acc.remove(&key) {
        Some(old) => &old + &c,
        None => c,
    };
    if !sum.is_zero() {
        acc.insert(key, sum);
    }
}

fn add(a: &Mixed, b: &Mixed) -> Mixed {
    let mut out = a.clone();
    for (k, c) in b {
        add_into(&mut out, k.clone(), c.clone());
    }
    out
}

fn neg(a: &Mixed) -> Mixed {
    a.iter().map(|(k, c)| (k.clone(), -c)).collect()
}

fn mul(a: &Mixed, b: &Mixed) -> Result<Mixed> {
    let mut out = Mixed::new();
    for ((l, b1), c) in a {
        for ((m, b2), d) in b {
            let shifted = phi_shift(d, l)?;
            let z: Vec<i64> = l.iter().zip(m).map(|(x, y)| x + y).collect();
            let q: Vec<i64> = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
            add_into(&mut out, (z, q), c * &shifted);
        }
    }
    Ok(out)
}

/// Inverse of a single term `c t^lambda q^beta`: `Phi_{-lambda}(1/c) t^{-lambda} q^{-beta}`.
fn invert(a: &Mixed) -> Option<Result<Mixed>> {
    if a.is_empty() {
        return Some(Err(Error::DivisionByZero));
    }
    if a.len() != 1 {
        return None;
    }
    let ((l, b), c) = a.iter().next()?;
    let inv = match c.inv() {
        Ok(x) => x,
        Err(e) => return Some(Err(e)),
    };
    let nl: Vec<i64> = l.iter().map(|x| -x).collect();
    let nb: Vec<i64> = b.iter().map(|x| -x).collect();
    Some(phi_shift(&inv, &nl).map(|s| {
        let mut m = Mixed::new();
        m.insert((nl, nb), s);
        m
    }))
}

fn run(text: &str, space: &Arc<VariableSpace>, q_rank: Option<usize>) -> Result<Mixed> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        space,
        z_rank: space.n_equiv(),
        q_rank,
    };
    p.parse_all()
}

pub fn parse_diffop(text: &str, space: &Arc<VariableSpace>) -> Result<DiffOp> {
    let m = run(text, space, None)?;
    let mut out = DiffOp::zero(space);
    for ((l, _), c) in m {
        out.add_term(l, c)?;
    }
    Ok(out)
}

pub fn parse_rational(text: &str, space: &Arc<VariableSpace>) -> Result<RationalFunction> {
    let m = run(text, space, None)?;
    let mut out = RationalFunction::zero(space);
    for ((l, _), c) in m {
        if l.iter().any(|x| *x != 0) {
            return Err(Error::InvalidInput(format!("expected a scalar expression: `{text}`")));
        }
        out = &out + &c;
    }
    Ok(out)
}

pub fn parse_polynomial(text: &str, space: &Arc<VariableSpace>) -> Result<Polynomial> {
    let r = parse_rational(text, space)?;
    if !r.is_polynomial() {
        return Err(Error::InvalidInput(format!("expected a polynomial: `{text}`")));
    }
    Ok(r.into_parts().0)
}

pub fn parse_novikov(text: &str, space: &Arc<VariableSpace>, curve_rank: usize) -> Result<NovikovSum> {
    let m = run(text, space, Some(curve_rank))?;
    let mut out = NovikovSum::zero(space, curve_rank);
    for ((l, b), c) in m {
        if l.iter().any(|x| *x != 0) {
            return Err(Error::InvalidInput(format!("`z[..]` is not allowed in a class expression: `{text}`")));
        }
        out.add_term(b, c)?;
    }
    Ok(out)
}

/// Parse `[1, -2, 0]` style integer vectors.
pub fn parse_int_vector(text: &str) -> Result<Vec<i64>> {
    let toks = tokenize(text)?;
    let space = VariableSpace::standard(0, 0, &[])?;
    let mut p = Parser {
        toks,
        pos: 0,
        space: &space,
        z_rank: 0,
        q_rank: None,
    };
    p.expect(Tok::LBracket, "`[`")?;
    if p.peek().tok == Tok::RBracket {
        p.next();
        p.expect(Tok::Eof, "end of input")?;
        return Ok(Vec::new());
    }
    let v = p.int_list()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2() -> Arc<VariableSpace> {
        VariableSpace::standard(2, 0, &[]).unwrap()
    }

    #[test]
    fn gl2_example_class() {
        let s = gl2();
        let x = parse_diffop("(a1-a2)*z[1,0] - (a1-a2)*z[0,1]", &s).unwrap();
        assert_eq!(x.num_terms(), 2);
        assert_eq!(x.to_string(), "(a1 - a2)*z[1,0] + (-a1 + a2)*z[0,1]");
        assert_eq!(parse_diffop(&x.to_string(), &s).unwrap(), x);
    }

    #[test]
    fn unit() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        assert_eq!(parse_diffop("z[0]", &s).unwrap(), DiffOp::one(&s));
    }

    #[test]
    fn eof_column() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        match parse_diffop("a1 + z[1", &s) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors() {
        let s = gl2();
        assert!(matches!(parse_diffop("a3", &s), Err(Error::UnknownIdentifier { column: 1, .. })));
        assert!(matches!(parse_diffop("z[1]", &s), Err(Error::Arity { expected: 2, got: 1, .. })));
        assert!(matches!(parse_diffop("1/(a1 + z[1,0])", &s), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_diffop("a1 $", &s), Err(Error::Syntax { column: 4, .. })));
        assert!(matches!(parse_diffop("1/0", &s), Err(Error::DivisionByZero)));
        match parse_diffop("a1 +\n  * a2", &s) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn twisted_parse() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let x = parse_diffop("z[1]*a1", &s).unwrap();
        assert_eq!(x, parse_diffop("(a1 + h)*z[1]", &s).unwrap());
        let y = parse_diffop("a1/z[1]", &s).unwrap();
        assert_eq!(y, parse_diffop("a1*z[-1]", &s).unwrap());
        let p = parse_rational("(a1^2 - h^2)/(a1 + h)", &s).unwrap();
        assert_eq!(p.to_string(), "a1 - h");
    }

    #[test]
    fn novikov_expressions() {
        let s = VariableSpace::standard(2, 0, &["x"]).unwrap();
        let n = parse_novikov("q[1,0]*(x + a2)/(a2 - a1) + q[-1,0]^2", &s, 2).unwrap();
        assert_eq!(n.num_terms(), 2);
        assert_eq!(parse_novikov(&n.to_string(), &s, 2).unwrap(), n);
        assert!(parse_novikov("z[1,0]", &s, 2).is_err());
    }

    #[test]
    fn int_vectors() {
        assert_eq!(parse_int_vector("[1, -2,0]").unwrap(), vec![1, -2, 0]);
        assert_eq!(parse_int_vector("[]").unwrap(), Vec::<i64>::new());
        assert!(parse_int_vector("[1,").is_err());
    }
}

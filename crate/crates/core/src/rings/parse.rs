//! Text form of ring elements.
//!
//! Grammar: sums and differences of products of powers of atoms, where an
//! atom is an integer, the coefficient generator `x`, the uniformizer `pi`,
//! a ring variable (`t0`, `t1`, ...; `t` abbreviates `t0`) or a
//! parenthesised expression. Printing uses the same form, one term per
//! monomial, e.g. `(3 + 2*x)*t0^2*t1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::algebra::{DeltaCtx, Elt};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<i64>().map_err(|_| Error::Parse {
                line: 1,
                col,
                msg: format!("integer {text} out of range"),
            })?;
            out.push((Tok::Int(v), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(Error::Parse { line: 1, col, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a Arc<DeltaCtx>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: 1, col: self.col(), msg: msg.into() }
    }

    fn expr(&mut self) -> Result<Elt> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Sym('-')) {
            self.pos += 1;
            neg = true;
        } else if self.peek() == Some(&Tok::Sym('+')) {
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if neg { -first } else { first };
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Elt> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Sym('*')) {
            self.pos += 1;
            let f = self.power()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Elt> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(k)) if k >= 0 => {
                    self.pos += 1;
                    return Ok(base.pow(k as u64));
                }
                _ => return Err(self.err("expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Elt> {
        let ctx = self.ctx;
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(ctx.int(v))
            }
            Some(Tok::Ident(name)) => {
                let alg = ctx.algebra();
                let v = alg.var_index(&name).or_else(|| (name == "t").then(|| alg.var_index("t0")).flatten());
                let e = match (v, name.as_str()) {
                    (Some(v), _) => ctx.var(v),
                    (None, "x") => ctx.constant(&ctx.coeff().x()),
                    (None, "pi") => ctx.pi(),
                    _ => return Err(self.err(format!("unknown symbol {name}"))),
                };
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses an element of `ctx`.
pub fn parse_elt(ctx: &Arc<DeltaCtx>, s: &str) -> Result<Elt> {
    let toks = lex(s)?;
    let mut p = Parser { ctx, toks, pos: 0, end_col: s.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Canonical text form of an element.
pub fn format_elt(a: &Elt) -> String {
    let ctx = a.ctx();
    let coeff = ctx.coeff();
    let alg = ctx.algebra();
    let mut terms: Vec<String> = Vec::new();
    for i in 0..alg.len() {
        let b = a.coeff_at(i);
        if b.iter().all(|&x| x == 0) {
            continue;
        }
        let cs = coeff.format(b);
        let mono = alg.format_mono(i);
        let compound = cs.contains(' ');
        terms.push(match (mono.is_empty(), cs.as_str(), compound) {
            (true, _, _) => cs,
            (false, "1", _) => mono,
            (false, "-1", _) => format!("-{mono}"),
            (false, _, true) => format!("({cs})*{mono}"),
            (false, _, false) => format!("{cs}*{mono}"),
        });
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::CoeffRing;

    #[test]
    fn round_trip() {
        let coeff = CoeffRing::unramified(2, 2, 3).unwrap();
        let ctx = DeltaCtx::series(coeff, 2, 5).unwrap();
        let a = parse_elt(&ctx, "(3 + 2*x)*t0^2*t1").unwrap();
        assert_eq!(format_elt(&a), "(3 + 2*x)*t0^2*t1");
        let b = parse_elt(&ctx, "-1 + t1 - 2*t0*t1 + (x - 1)^2").unwrap();
        assert_eq!(parse_elt(&ctx, &format_elt(&b)).unwrap().coeffs(), b.coeffs());
    }

    #[test]
    fn errors_carry_columns() {
        let ctx = DeltaCtx::series(CoeffRing::zp(2, 3).unwrap(), 1, 4).unwrap();
        match parse_elt(&ctx, "2 + t ^ y") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_elt(&ctx, "2 + s"), Err(Error::Parse { col: 5, .. })));
        assert_eq!(format_elt(&parse_elt(&ctx, "2 + t").unwrap()), "2 + t0");
    }
}

//! Warping functions: sums of terms `c·(b−t)^p` and constants.
//!
//! Accepted forms include `1`, `(b-t)^-4`, `0.5*(b-t)^(-4) + 2`, `3(b - t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    /// Exponent of `(b − t)`; zero for constants.
    pub power: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpExpr {
    pub terms: Vec<Term>,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    B,
    T,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => {}
            'b' => out.push(Tok::B),
            't' => out.push(Tok::T),
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' | '·' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i + 1 < cs.len() && (cs[i + 1].is_ascii_digit() || cs[i + 1] == '.' || cs[i + 1] == 'e') {
                    i += 1;
                }
                let lit: String = cs[start..=i].iter().collect();
                out.push(Tok::Num(lit.parse().map_err(|_| Error::Parse(format!("bad number `{lit}`")))?));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {t:?} at token {}", self.pos)))
        }
    }

    fn signed_number(&mut self) -> Result<f64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse(format!("expected number at token {}", self.pos))),
        }
    }

    fn exponent(&mut self) -> Result<f64> {
        if self.eat(&Tok::LParen) {
            let v = self.signed_number()?;
            self.expect(Tok::RParen)?;
            Ok(v)
        } else {
            self.signed_number()
        }
    }

    /// `(b - t)` with optional `^p`.
    fn base(&mut self) -> Result<f64> {
        self.expect(Tok::LParen)?;
        self.expect(Tok::B)?;
        self.expect(Tok::Minus)?;
        self.expect(Tok::T)?;
        self.expect(Tok::RParen)?;
        if self.eat(&Tok::Caret) {
            self.exponent()
        } else {
            Ok(1.0)
        }
    }

    fn term(&mut self, sign: f64) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let explicit = self.eat(&Tok::Star);
                if explicit || self.peek() == Some(&Tok::LParen) {
                    let p = self.base()?;
                    Ok(Term { coef: sign * v, power: p })
                } else {
                    Ok(Term { coef: sign * v, power: 0.0 })
                }
            }
            Some(Tok::LParen) => Ok(Term { coef: sign, power: self.base()? }),
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl WarpExpr {
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser { toks: lex(s)?, pos: 0 };
        let mut terms = Vec::new();
        let mut sign = if p.eat(&Tok::Minus) { -1.0 } else { 1.0 };
        loop {
            terms.push(p.term(sign)?);
            if p.eat(&Tok::Plus) {
                sign = 1.0;
            } else if p.eat(&Tok::Minus) {
                sign = -1.0;
            } else {
                break;
            }
        }
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        if terms.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        Ok(WarpExpr { terms, source: s.to_string() })
    }

    pub fn eval(&self, b: f64, t: f64) -> f64 {
        let s = b - t;
        self.terms.iter().map(|term| if term.power == 0.0 { term.coef } else { term.coef * s.powf(term.power) }).sum()
    }

    /// The term dominating as `t → b`.
    pub fn leading(&self) -> Term {
        *self
            .terms
            .iter()
            .filter(|t| t.coef != 0.0)
            .min_by(|a, b| a.power.total_cmp(&b.power))
            .unwrap_or(&self.terms[0])
    }

    /// Condition (*): `∫ f^{−1/2}` is finite up to `b` iff the leading exponent is below 2.
    pub fn star_holds(&self) -> bool {
        self.leading().power < 2.0
    }

    /// `∫_{t1}^{t2} f^{−1/2} dt` for `t1 ≤ t2 ≤ b`.
    pub fn inv_sqrt_integral(&self, b: f64, t1: f64, t2: f64) -> f64 {
        if t2 <= t1 {
            return 0.0;
        }
        let (lo, hi) = (b - t2, b - t1);
        if self.terms.len() == 1 {
            let Term { coef, power } = self.terms[0];
            return coef.powf(-0.5) * power_integral(-power / 2.0, lo, hi);
        }
        let lead = self.leading();
        let mut total = 0.0;
        let mut start = lo;
        if lo <= 0.0 {
            if !self.star_holds() {
                return f64::INFINITY;
            }
            let eps = hi * 1e-9;
            total += lead.coef.powf(-0.5) * power_integral(-lead.power / 2.0, 0.0, eps);
            start = eps;
        }
        // geometric panels in s = b − t, Simpson on each
        let integrand = |s: f64| self.eval(b, b - s).powf(-0.5);
        let mut a = start;
        while a < hi {
            let e = (a * 2.0).max(a + 1e-12).min(hi);
            let n = 64;
            let w = (e - a) / n as f64;
            let mut acc = integrand(a) + integrand(e);
            for k in 1..n {
                acc += integrand(a + k as f64 * w) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            total += acc * w / 3.0;
            a = e;
        }
        total
    }
}

/// `∫_lo^hi s^q ds` for `0 ≤ lo ≤ hi`.
fn power_integral(q: f64, lo: f64, hi: f64) -> f64 {
    if (q + 1.0).abs() < 1e-12 {
        if lo <= 0.0 {
            return f64::INFINITY;
        }
        return (hi / lo).ln();
    }
    if lo <= 0.0 && q + 1.0 < 0.0 {
        return f64::INFINITY;
    }
    (hi.powf(q + 1.0) - lo.max(0.0).powf(q + 1.0)) / (q + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_forms() {
        let e = WarpExpr::parse("(b-t)^-4").unwrap();
        assert_eq!(e.terms, vec![Term { coef: 1.0, power: -4.0 }]);
        let e = WarpExpr::parse("0.5*(b - t)^(-4) + 2").unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.eval(1.0, 0.5), 0.5 * 16.0 + 2.0);
        assert_eq!(WarpExpr::parse("3(b-t) - 1").unwrap().eval(2.0, 1.0), 2.0);
        assert!(WarpExpr::parse("(b-x)").is_err());
        assert!(WarpExpr::parse("1 +").is_err());
    }

    #[test]
    fn star_condition_by_leading_power() {
        assert!(WarpExpr::parse("1").unwrap().star_holds());
        assert!(WarpExpr::parse("(b-t)^-4").unwrap().star_holds());
        assert!(!WarpExpr::parse("(b-t)^2").unwrap().star_holds());
        assert!(!WarpExpr::parse("(b-t)^2 + (b-t)^3").unwrap().star_holds());
    }

    #[test]
    fn integrals_closed_form_and_quadrature() {
        let e = WarpExpr::parse("(b-t)^-4").unwrap();
        // ∫_c^b (b−t)² dt = (b−c)³/3
        assert!((e.inv_sqrt_integral(1.0, 0.0, 1.0) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(WarpExpr::parse("(b-t)^2").unwrap().inv_sqrt_integral(1.0, 0.0, 1.0), f64::INFINITY);
        let two = WarpExpr::parse("(b-t)^-4 + 0").unwrap();
        assert!((two.inv_sqrt_integral(1.0, 0.0, 1.0) - 1.0 / 3.0).abs() < 1e-6);
        let mixed = WarpExpr::parse("1 + (b-t)").unwrap();
        // ∫_0^1 (1+s)^{-1/2} ds = 2(√2 − 1)
        assert!((mixed.inv_sqrt_integral(1.0, 0.0, 1.0) - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-6);
    }
}

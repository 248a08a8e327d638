//! Text form of monomials.
//!
//! ```text
//! monomial  := "1" | factor (" * " factor)*
//! factor    := "dp(" vector ("⊗" | "@") B "," R ")"
//!            | "p(" I ",{" B ":" COUNT ("," B ":" COUNT)* "})"
//!            | "odd(" vector ("⊗" | "@") B ")"
//! vector    := "x[" ROOT ("," K)? "]"
//! ```
//!
//! ROOT is a root label (`ε1-ε2`, with `e` accepted for `ε`), a simple root
//! `a1`/`-a1` (1-based, in the order of the simple system), or a weight
//! tuple `(1,-1)`. I is a 1-based Cartan index or a label such as `h1`. B is
//! a label of the A-model, e.g. `1`, `t`, `t^2`.

use super::{IntegralGenerator as G, Monomial, ZContext};
use crate::combinatorics::Multiset;
use crate::exterior::Parity;
use crate::roots;
use crate::{Error, Result};

pub fn print_generator(ctx: &ZContext, g: &G) -> String {
    let root_label = |r: usize| ctx.cb.rs.roots[r].label.clone();
    let b = |x: usize| ctx.algebra.label(x).to_string();
    match g {
        G::EvenDivided { root, k, b: x, r } => format!("dp(x[{},{k}]⊗{},{r})", root_label(*root), b(*x)),
        G::Odd { root, n, c } => format!("odd(x[{},{n}]⊗{})", root_label(*root), b(*c)),
        G::CartanP { i, chi } => {
            let parts: Vec<String> = chi.iter().map(|(x, e)| format!("{}:{e}", b(*x))).collect();
            format!("p({},{{{}}})", i + 1, parts.join(","))
        }
    }
}

pub fn print_monomial(ctx: &ZContext, m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.factors().iter().map(|g| print_generator(ctx, g)).collect::<Vec<_>>().join(" * ")
}

pub fn parse_monomial(ctx: &ZContext, text: &str) -> Result<Monomial> {
    let mut p = Parser { ctx, s: text, pos: 0 };
    p.skip_ws();
    if p.rest().trim() == "1" {
        return Ok(Monomial::one());
    }
    let mut factors = vec![p.factor()?];
    loop {
        p.skip_ws();
        if p.rest().is_empty() {
            break;
        }
        p.expect("*")?;
        p.skip_ws();
        factors.push(p.factor()?);
    }
    Ok(Monomial::new(factors))
}

struct Parser<'a> {
    ctx: &'a ZContext,
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    /// Text up to (not including) the first of `stops` at bracket depth zero.
    fn until(&mut self, stops: &[char]) -> Result<&str> {
        let start = self.pos;
        let mut depth = 0i32;
        for (off, ch) in self.rest().char_indices() {
            match ch {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' if depth > 0 => depth -= 1,
                _ => {}
            }
            if depth == 0 && stops.contains(&ch) {
                self.pos = start + off;
                return Ok(self.s[start..self.pos].trim());
            }
        }
        self.err(format!("expected one of {stops:?}"))
    }

    fn number(&mut self) -> Result<u32> {
        let text = self.until(&[',', ')', ']', '}'])?.to_string();
        let pos = self.pos;
        text.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("expected a number, found `{text}`"),
        })
    }

    fn basis_element(&mut self, stops: &[char]) -> Result<usize> {
        let text = self.until(stops)?.to_string();
        self.ctx.algebra.find(&text).map_or_else(
            || self.err(format!("`{text}` is not a basis element of {}", self.ctx.algebra.name)),
            Ok,
        )
    }

    fn root(&self, text: &str) -> Result<usize> {
        let rs = &self.ctx.cb.rs;
        let normalized = text.replace('e', "ε");
        if let Some(i) = rs.roots.iter().position(|r| r.label == text || r.label == normalized) {
            return Ok(i);
        }
        let (neg, body) = match text.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, text),
        };
        if let Some(n) = body.strip_prefix('a').and_then(|n| n.parse::<usize>().ok()) {
            if let Some(&s) = n.checked_sub(1).and_then(|i| rs.simple.get(i)) {
                let w = &rs.roots[s].weight;
                let w = if neg { roots::neg(w) } else { w.clone() };
                if let Some(i) = rs.find(&w) {
                    return Ok(i);
                }
            }
        }
        if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let w: std::result::Result<Vec<i64>, _> = inner.split(',').map(|x| x.trim().parse::<i64>()).collect();
            if let Some(i) = w.ok().and_then(|w| rs.find(&w)) {
                return Ok(i);
            }
        }
        self.err(format!("`{text}` is not a root"))
    }

    /// `x[ROOT(,K)?]` followed by ⊗B.
    fn vector(&mut self) -> Result<(usize, usize, usize)> {
        self.expect("x[")?;
        let inner = self.until(&[']'])?.to_string();
        let start = self.pos;
        self.expect("]")?;
        let (root_text, k_text) = match inner.find(')').filter(|_| inner.starts_with('(')) {
            Some(close) => {
                let (r, rest) = inner.split_at(close + 1);
                (r.to_string(), rest.trim().strip_prefix(',').map(str::to_string))
            }
            None => match inner.rsplit_once(',') {
                Some((r, k)) => (r.trim().to_string(), Some(k.to_string())),
                None => (inner.clone(), None),
            },
        };
        let k = match k_text {
            Some(k) => match k.trim().parse::<usize>() {
                Ok(k) => k,
                Err(_) => return self.err(format!("`{k}` is not an index")),
            },
            None => 1,
        };
        let root = self.root(&root_text)?;
        if k == 0 || k > self.ctx.cb.multiplicity(root) {
            self.pos = start;
            return self.err(format!("index {k} out of range for root {root_text}"));
        }
        if !(self.eat("⊗") || self.eat("@")) {
            return self.err("expected `⊗` or `@`");
        }
        let b = self.basis_element(&[',', ')'])?;
        Ok((root, k, b))
    }

    fn factor(&mut self) -> Result<G> {
        if self.eat("dp(") {
            let (root, k, b) = self.vector()?;
            if self.ctx.cb.rs.roots[root].parity != Parity::Even {
                return self.err("dp(…) needs an even root");
            }
            self.expect(",")?;
            let r = self.number()?;
            self.expect(")")?;
            Ok(G::EvenDivided { root, k, b, r })
        } else if self.eat("odd(") {
            let (root, n, c) = self.vector()?;
            if self.ctx.cb.rs.roots[root].parity != Parity::Odd {
                return self.err("odd(…) needs an odd root");
            }
            self.expect(")")?;
            Ok(G::Odd { root, n, c })
        } else if self.eat("p(") {
            let idx = self.until(&[','])?.to_string();
            let labels = &self.ctx.cb.rs.cartan.labels;
            let i = match idx.parse::<usize>() {
                Ok(i) if i >= 1 && i <= labels.len() => i - 1,
                _ => match labels.iter().position(|l| *l == idx) {
                    Some(i) => i,
                    None => return self.err(format!("`{idx}` is not a Cartan index")),
                },
            };
            self.expect(",")?;
            self.expect("{")?;
            let mut chi = Multiset::new();
            self.skip_ws();
            if !self.eat("}") {
                loop {
                    self.skip_ws();
                    let b = self.basis_element(&[':'])?;
                    self.expect(":")?;
                    let e = self.number()?;
                    chi.insert(b, e);
                    self.skip_ws();
                    if self.eat("}") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            self.expect(")")?;
            Ok(G::CartanP { i, chi })
        } else {
            self.err("expected `dp(`, `p(` or `odd(`")
        }
    }
}

//! Checking the engine against the oracle: the straightening identities over
//! parameter grids, the degree-drop clauses, and the properties of pᵢ(χ).

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::identities::Identity;
use super::lift::{evaluate, evaluate_combination, evaluate_generator, lift_to_basis};
use super::{IntegralGenerator as G, Monomial, ZCombination, ZContext};
use crate::combinatorics::{factorial, gen_binomial, Multiset};
use crate::enveloping::{EnvElement, EnvelopingContext, Oracle};
use crate::exterior::Parity;
use crate::roots;
use crate::{Error, Result, Q};

use super::Engine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One line of a campaign report.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub identity: String,
    pub params: Value,
    pub status: Status,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub max_degree: Option<u32>,
    pub elapsed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn new(identity: impl Into<String>, params: Value) -> Self {
        Record {
            identity: identity.into(),
            params,
            status: Status::Pass,
            lhs_terms: 0,
            rhs_terms: 0,
            max_degree: None,
            elapsed: None,
            detail: None,
        }
    }

    pub fn fail(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.detail = Some(detail.into());
        self
    }

    pub fn error(mut self, e: &Error) -> Self {
        self.status = Status::Error;
        self.detail = Some(e.to_string());
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    /// Largest divided power r, s.
    pub r: u32,
    /// Largest |χ|.
    pub chi: u32,
    /// Keep at most this many root pairs per identity (evenly spaced).
    pub root_pairs: Option<usize>,
    /// Add one point per identity with r or |χ| one above the bound.
    pub stretch: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            r: 2,
            chi: 2,
            root_pairs: None,
            stretch: true,
        }
    }
}

/// All multisets over [0, dim) with 1 ≤ size ≤ max.
pub fn multisets(dim: usize, max: u32) -> Vec<Multiset<usize>> {
    fn go(start: usize, dim: usize, left: u32, cur: &mut Vec<usize>, out: &mut Vec<Multiset<usize>>) {
        if !cur.is_empty() {
            out.push(cur.iter().map(|&a| (a, 1)).collect());
        }
        if left == 0 {
            return;
        }
        for a in start..dim {
            cur.push(a);
            go(a, dim, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, dim, max, &mut Vec::new(), &mut out);
    out.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.cmp(y)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Even,
    Odd,
    Cartan,
}

fn kinds(id: Identity) -> (Kind, Kind) {
    use Identity::*;
    match id {
        PiPj => (Kind::Cartan, Kind::Cartan),
        XaXa | XPlusXMinus | XbXg | XaXt | XaXb => (Kind::Even, Kind::Even),
        XrPi => (Kind::Even, Kind::Cartan),
        PiXr => (Kind::Cartan, Kind::Even),
        XgPi => (Kind::Odd, Kind::Cartan),
        PiXg => (Kind::Cartan, Kind::Odd),
        TwoGamma | XdelXmdel | XgXz => (Kind::Odd, Kind::Odd),
        XalXg | XbetaXg => (Kind::Even, Kind::Odd),
    }
}

/// A generator shape without its A-label and exponent: (root, k) or i.
type Slot = (usize, usize);

fn slots(ctx: &ZContext, kind: Kind) -> Vec<Slot> {
    let cb = &ctx.cb;
    match kind {
        Kind::Cartan => ctx.cartan_indices().map(|i| (i, 0)).collect(),
        Kind::Even | Kind::Odd => {
            let want = if kind == Kind::Even { Parity::Even } else { Parity::Odd };
            (0..cb.rs.roots.len())
                .filter(|&r| cb.rs.roots[r].parity == want)
                .flat_map(|r| (1..=cb.multiplicity(r)).map(move |k| (r, k)))
                .collect()
        }
    }
}

/// Every generator filling a slot, with exponents/|χ| in 1..=max.
fn fill(kind: Kind, slot: Slot, dim: usize, max_r: u32, max_chi: u32) -> Vec<G> {
    let (x, k) = slot;
    match kind {
        Kind::Even => (1..=max_r)
            .flat_map(|r| (0..dim).map(move |b| G::EvenDivided { root: x, k, b, r }))
            .collect(),
        Kind::Odd => (0..dim).map(|c| G::Odd { root: x, n: k, c }).collect(),
        Kind::Cartan => multisets(dim, max_chi).into_iter().map(|chi| G::CartanP { i: x, chi }).collect(),
    }
}

fn shape(kind: Kind, slot: Slot) -> G {
    match kind {
        Kind::Even => G::EvenDivided {
            root: slot.0,
            k: slot.1,
            b: 0,
            r: 1,
        },
        Kind::Odd => G::Odd {
            root: slot.0,
            n: slot.1,
            c: 0,
        },
        Kind::Cartan => G::CartanP {
            i: slot.0,
            chi: Multiset::single(0),
        },
    }
}

fn spaced<T: Clone>(items: Vec<T>, cap: Option<usize>) -> Vec<T> {
    match cap {
        Some(c) if items.len() > c && c > 0 => (0..c).map(|j| items[j * items.len() / c].clone()).collect(),
        _ => items,
    }
}

/// Root-level pairs satisfying the hypotheses of the identity.
pub fn slot_pairs(ctx: &ZContext, id: Identity, cap: Option<usize>) -> Vec<(Slot, Slot)> {
    let (kl, kr) = kinds(id);
    let mut out = Vec::new();
    for l in slots(ctx, kl) {
        for r in slots(ctx, kr) {
            if id.check(ctx, &shape(kl, l), &shape(kr, r)).is_ok() {
                out.push((l, r));
            }
        }
    }
    spaced(out, cap)
}

/// All parameter points of an identity within the bounds.
pub fn grid(ctx: &ZContext, id: Identity, bounds: &Bounds) -> Vec<(G, G)> {
    let (kl, kr) = kinds(id);
    let dim = ctx.algebra.dim();
    let pairs = slot_pairs(ctx, id, bounds.root_pairs);
    let mut out = Vec::new();
    for &(l, r) in &pairs {
        for a in fill(kl, l, dim, bounds.r, bounds.chi) {
            for b in fill(kr, r, dim, bounds.r, bounds.chi) {
                if id.check(ctx, &a, &b).is_ok() {
                    out.push((a.clone(), b));
                }
            }
        }
    }
    if bounds.stretch {
        // one point past the bounds, on the first root pair
        let (r3, chi3) = (bounds.r + 1, bounds.chi + 1);
        let big = |kind: Kind, slot: Slot| match kind {
            Kind::Even => G::EvenDivided {
                root: slot.0,
                k: slot.1,
                b: 0,
                r: r3,
            },
            Kind::Odd => shape(kind, slot),
            Kind::Cartan => G::CartanP {
                i: slot.0,
                chi: [(0, 1), (dim - 1, chi3 - 1)].into_iter().collect(),
            },
        };
        if let Some(&(l, r)) = pairs.first() {
            let (a, b) = (big(kl, l), big(kr, r));
            let stretched = (a.clone(), b.clone()) != (shape(kl, l), shape(kr, r))
                && (kl != Kind::Odd || kr != Kind::Odd);
            if stretched && id.check(ctx, &a, &b).is_ok() {
                out.push((a, b));
            }
        }
    }
    out
}

fn params(ctx: &ZContext, left: &G, right: &G) -> Value {
    json!({
        "algebra": ctx.cb.rs.spec.to_string(),
        "a_model": ctx.algebra.name,
        "order": ctx.order.named.name(),
        "left": ctx.format_generator(left),
        "right": ctx.format_generator(right),
    })
}

/// Left-hand side in the oracle: the product, or ½(AB+BA) for 2γ.
fn lhs(oracle: &Oracle, ctx: &ZContext, id: Identity, left: &G, right: &G) -> Result<EnvElement> {
    let a = evaluate_generator(oracle, ctx, left)?;
    let b = evaluate_generator(oracle, ctx, right)?;
    let ab = oracle.mul(&a, &b);
    if id.is_product() {
        Ok(ab)
    } else {
        let ba = oracle.mul(&b, &a);
        Ok((&ab + &ba).scale(&Q::new(1.into(), 2.into())))
    }
}

/// Check one identity at one point.
pub fn verify_point(engine: &Engine, id: Identity, left: &G, right: &G) -> Record {
    let ctx = &engine.ctx;
    let start = Instant::now();
    let rec = Record::new(id.tag(), params(ctx, left, right));
    let run = || -> Result<(EnvElement, ZCombination, EnvElement)> {
        let l = lhs(engine.oracle(), ctx, id, left, right)?;
        let rhs = engine.identity_env().rhs(id, left, right)?;
        let r = evaluate_combination(engine.oracle(), ctx, &rhs)?;
        Ok((l, rhs, r))
    };
    let mut rec = match run() {
        Ok((l, rhs, r)) => {
            let mut rec = Record {
                lhs_terms: l.terms().len(),
                rhs_terms: rhs.len(),
                max_degree: rhs.max_degree(),
                ..rec
            };
            let diff = &l - &r;
            if !diff.is_zero() {
                rec = rec.fail(format!("lhs − rhs = {}", ctx.env.format(&diff)));
            }
            rec
        }
        Err(e) => rec.error(&e),
    };
    rec.elapsed = Some(start.elapsed().as_secs_f64());
    rec
}

pub fn verify_identity(engine: &Engine, id: Identity, bounds: &Bounds) -> Vec<Record> {
    grid(&engine.ctx, id, bounds)
        .iter()
        .map(|(l, r)| verify_point(engine, id, l, r))
        .collect()
}

/// The six degree-drop clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    OppositePair,
    EvenCartan,
    EvenEven,
    OddCartan,
    EvenOdd,
    OddOdd,
}

impl Clause {
    pub const ALL: [Clause; 6] = [
        Clause::OppositePair,
        Clause::EvenCartan,
        Clause::EvenEven,
        Clause::OddCartan,
        Clause::EvenOdd,
        Clause::OddOdd,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn name(self) -> String {
        format!("lemma-degree-{}", self.number())
    }

    fn kinds(self) -> (Kind, Kind) {
        match self {
            Clause::OppositePair | Clause::EvenEven => (Kind::Even, Kind::Even),
            Clause::EvenCartan => (Kind::Even, Kind::Cartan),
            Clause::OddCartan => (Kind::Odd, Kind::Cartan),
            Clause::EvenOdd => (Kind::Even, Kind::Odd),
            Clause::OddOdd => (Kind::Odd, Kind::Odd),
        }
    }

    fn admits(self, ctx: &ZContext, l: Slot, r: Slot) -> bool {
        let rs = &ctx.cb.rs;
        let opposite = || roots::add(&rs.roots[l.0].weight, &rs.roots[r.0].weight).iter().all(|&c| c == 0);
        match self {
            Clause::OppositePair => {
                opposite() && rs.roots[l.0].height == 0 && l.1 == 1 && r.1 == 1 && rs.is_positive(&rs.roots[l.0].weight)
            }
            Clause::EvenEven => !opposite(),
            _ => true,
        }
    }
}

pub fn clause_grid(ctx: &ZContext, clause: Clause, bounds: &Bounds) -> Vec<(G, G)> {
    let (kl, kr) = clause.kinds();
    let dim = ctx.algebra.dim();
    let mut pairs = Vec::new();
    for l in slots(ctx, kl) {
        for r in slots(ctx, kr) {
            if clause.admits(ctx, l, r) {
                pairs.push((l, r));
            }
        }
    }
    let mut out = Vec::new();
    for (l, r) in spaced(pairs, bounds.root_pairs) {
        for a in fill(kl, l, dim, bounds.r, bounds.chi) {
            for b in fill(kr, r, dim, bounds.r, bounds.chi) {
                out.push((a.clone(), b));
            }
        }
    }
    out
}

/// [A, B] has degree below deg A + deg B; for two odd generators it also
/// lies in the ℤ-span of ℬ.
pub fn verify_clause_point(engine: &Engine, clause: Clause, left: &G, right: &G) -> Record {
    let ctx = &engine.ctx;
    let oracle = engine.oracle();
    let start = Instant::now();
    let rec = Record::new(clause.name(), params(ctx, left, right));
    let run = || -> Result<Option<String>> {
        let a = evaluate_generator(oracle, ctx, left)?;
        let b = evaluate_generator(oracle, ctx, right)?;
        let c = oracle.supercommutator(&a, &b);
        let bound = left.degree() + right.degree();
        if let Ok(d) = c.degree() {
            if d as u32 >= bound {
                return Ok(Some(format!("degree {d} ≥ {bound}")));
            }
        }
        if clause == Clause::OddOdd {
            lift_to_basis(oracle, ctx, &c)?;
        }
        Ok(None)
    };
    let mut rec = match run() {
        Ok(None) => rec,
        Ok(Some(why)) => rec.fail(why),
        Err(e) => rec.error(&e),
    };
    rec.elapsed = Some(start.elapsed().as_secs_f64());
    rec
}

pub fn verify_clause(engine: &Engine, clause: Clause, bounds: &Bounds) -> Vec<Record> {
    clause_grid(&engine.ctx, clause, bounds)
        .iter()
        .map(|(l, r)| verify_clause_point(engine, clause, l, r))
        .collect()
}

/// Cartan elements h_α for positive α ∈ R₀ with −α ∈ R, plus the hᵢ.
fn cartan_probes(ctx: &ZContext) -> Vec<(String, Vec<(usize, Q)>)> {
    let cb = &ctx.cb;
    let rs = &cb.rs;
    let mut out: Vec<(String, Vec<(usize, Q)>)> = ctx
        .cartan_indices()
        .map(|i| (format!("h{}", i + 1), vec![(i, Q::one())]))
        .collect();
    for (a, root) in rs.roots.iter().enumerate() {
        if root.height != 0 || !rs.is_positive(&root.weight) {
            continue;
        }
        if let Some(h) = cb.h_alpha(a) {
            let h: Vec<(usize, Q)> = h.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            out.push((format!("h[{}]", root.label), h));
        }
    }
    out
}

fn h_letters(oracle: &Oracle, ctx: &ZContext, h: &[(usize, Q)], a: usize) -> EnvElement {
    let mut out = EnvElement::zero();
    for (i, c) in h {
        out.add_scaled(&oracle.letter(ctx.cb.h(*i), a), c);
    }
    out
}

fn p_record(name: &str, p: Value, result: Result<Option<String>>) -> Record {
    let rec = Record::new(name, p);
    match result {
        Ok(None) => rec,
        Ok(Some(why)) => rec.fail(why),
        Err(e) => rec.error(&e),
    }
}

/// Properties of p_h(χ) for |χ|, |φ| ≤ max_chi: the value on χ_b, the
/// leading term, commutation, and the product rule for a single pᵢ.
pub fn verify_p_suite(engine: &Engine, max_chi: u32) -> Vec<Record> {
    let ctx = &engine.ctx;
    let oracle = engine.oracle();
    let dim = ctx.algebra.dim();
    let probes = cartan_probes(ctx);
    let chis = multisets(dim, max_chi);
    let mut out = Vec::new();
    let fmt_chi = |chi: &Multiset<usize>| {
        let parts: Vec<String> = chi.iter().map(|(a, e)| format!("{}:{e}", ctx.algebra.label(*a))).collect();
        format!("{{{}}}", parts.join(","))
    };

    for (name, h) in &probes {
        for b in 0..dim {
            let got = oracle.p(h, &Multiset::single(b));
            let want = h_letters(oracle, ctx, h, b).scale(&-Q::one());
            let why = (!(&got - &want).is_zero()).then(|| format!("p({{{}}}) ≠ −h⊗b", ctx.algebra.label(b)));
            out.push(p_record("p-single", json!({"h": name, "b": ctx.algebra.label(b)}), Ok(why)));
        }
        for chi in &chis {
            // (−1)^{|χ|} Π (h⊗a)^{(χ(a))}
            let mut lead = EnvElement::one();
            for (a, e) in chi.iter() {
                let x = h_letters(oracle, ctx, h, *a);
                let mut pow = EnvElement::one();
                for _ in 0..e {
                    pow = oracle.mul(&pow, &x);
                }
                lead = oracle.mul(&lead, &pow.scale(&Q::from_integer(factorial(e)).recip()));
            }
            if chi.size() % 2 == 1 {
                lead = lead.scale(&-Q::one());
            }
            let got = oracle.p(h, chi);
            let diff = &got - &lead;
            let why = match diff.degree() {
                Ok(d) if d as u32 >= chi.size() => {
                    let top = diff.top();
                    let (w, c) = top.terms().iter().next().expect("nonzero");
                    Some(format!("coefficient of {w:?} off by {c}"))
                }
                _ => None,
            };
            out.push(p_record("p-leading", json!({"h": name, "chi": fmt_chi(chi)}), Ok(why)));
        }
    }

    let small = multisets(dim, max_chi.min(2));
    for (n1, h1) in &probes {
        for (n2, h2) in &probes {
            if n1 >= n2 {
                continue;
            }
            for chi in &small {
                for phi in &small {
                    let x = oracle.p(h1, chi);
                    let y = oracle.p(h2, phi);
                    let c = &oracle.mul(&x, &y) - &oracle.mul(&y, &x);
                    let why = (!c.is_zero()).then(|| "p's do not commute".to_string());
                    out.push(p_record(
                        "p-commute",
                        json!({"h": n1, "h'": n2, "chi": fmt_chi(chi), "phi": fmt_chi(phi)}),
                        Ok(why),
                    ));
                }
            }
        }
    }

    for i in ctx.cartan_indices() {
        for chi in &chis {
            for phi in &chis {
                if chi > phi {
                    continue;
                }
                let run = || -> Result<Option<String>> {
                    let prod = oracle.mul(&oracle.p_i(i, chi), &oracle.p_i(i, phi));
                    let sum = chi.add(phi);
                    let mut binom = crate::Z::one();
                    for (a, e) in sum.iter() {
                        binom *= gen_binomial(e as i64, chi.count(a));
                    }
                    let u = &prod - &oracle.p_i(i, &sum).scale(&Q::from_integer(binom));
                    if let Ok(d) = u.degree() {
                        if d as u32 >= sum.size() {
                            return Ok(Some(format!("remainder of degree {d}")));
                        }
                    }
                    let lifted = lift_to_basis(oracle, ctx, &u)?;
                    let single = lifted.terms().keys().all(|m| match m.factors() {
                        [] => true,
                        [G::CartanP { i: j, .. }] => *j == i,
                        _ => false,
                    });
                    Ok((!single).then(|| "remainder is not a ℤ-combination of single pᵢ(ψ)".to_string()))
                };
                out.push(p_record(
                    "p-product",
                    json!({"i": i + 1, "chi": fmt_chi(chi), "phi": fmt_chi(phi)}),
                    run(),
                ));
            }
        }
    }
    out
}

/// The products of pᵢ(χ) over all i are linearly independent in the
/// oracle: their leading words are distinct and nonzero.
pub fn verify_cartan_basis(engine: &Engine, max_chi: u32) -> Record {
    let ctx = &engine.ctx;
    let dim = ctx.algebra.dim();
    let mut words = BTreeSet::new();
    let mut count = 0usize;
    let chis = multisets(dim, max_chi);
    let mut why = None;
    let idx: Vec<usize> = ctx.cartan_indices().collect();
    for (n, i) in idx.iter().enumerate() {
        for j in &idx[n..] {
            for chi in &chis {
                for phi in &chis {
                    if i == j && chi > phi {
                        continue;
                    }
                    let m = if i == j {
                        Monomial::new(vec![G::CartanP { i: *i, chi: chi.add(phi) }])
                    } else {
                        Monomial::new(vec![G::CartanP { i: *i, chi: chi.clone() }, G::CartanP { i: *j, chi: phi.clone() }])
                    };
                    if !words.insert(super::lift::top_word(ctx, &m)) {
                        continue;
                    }
                    count += 1;
                    match evaluate(engine.oracle(), ctx, &m) {
                        Ok(u) if u.coefficient(&super::lift::top_word(ctx, &m)).is_zero() => {
                            why = Some(format!("{} has no leading word", ctx.format_monomial(&m)));
                        }
                        Ok(_) => {}
                        Err(e) => why = Some(e.to_string()),
                    }
                }
            }
        }
    }
    let rec = Record::new("p-basis", json!({"products": count}));
    match why {
        Some(w) => rec.fail(w),
        None => rec,
    }
}

/// (x_α⊗1)^{(|ψ|)} Π_a (x_{−α}⊗a)^{(ψ(a))} ≡ (−1)^{|ψ|} p_α(ψ) modulo the
/// left ideal generated by x_α⊗A, for positive α ∈ R₀.
pub fn verify_garland(engine: &Engine, max_chi: u32) -> Vec<Record> {
    let ctx = &engine.ctx;
    let cb = &ctx.cb;
    let rs = &cb.rs;
    let dim = ctx.algebra.dim();
    let unit = ctx.algebra.unit();
    let mut out = Vec::new();
    for (alpha, root) in rs.roots.iter().enumerate() {
        if root.height != 0 || !rs.is_positive(&root.weight) || root.parity != Parity::Even {
            continue;
        }
        let Some(minus) = rs.find(&roots::neg(&root.weight)) else { continue };
        let Some(h) = cb.h_alpha(alpha) else { continue };
        let h: Vec<(usize, Q)> = h.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let xa = cb.x(alpha, 1);
        // x_α letters last, so normal forms ending in them lie in the ideal
        let env = std::sync::Arc::new(EnvelopingContext::new(cb, &ctx.algebra, |lie, a| {
            (lie == xa, ctx.order.letter_key(cb, lie, a))
        }));
        let oracle = Oracle::new(env.clone());
        for psi in multisets(dim, max_chi) {
            let run = || -> Result<Option<String>> {
                let mut u = oracle.divided_power(xa, Some(unit), psi.size())?;
                for (a, e) in psi.iter() {
                    u = oracle.mul(&u, &oracle.divided_power(cb.x(minus, 1), Some(*a), e)?);
                }
                let mut reduced = EnvElement::zero();
                for (w, c) in u.terms() {
                    let in_ideal = w.iter().any(|&l| env.letter_info(l).lie == xa);
                    if !in_ideal {
                        reduced.add_term(w.clone(), c.clone());
                    }
                }
                let sign = if psi.size() % 2 == 1 { -Q::one() } else { Q::one() };
                let want = oracle.p(&h, &psi).scale(&sign);
                Ok((!(&reduced - &want).is_zero()).then(|| "not congruent modulo the ideal".to_string()))
            };
            let parts: Vec<String> = psi.iter().map(|(a, e)| format!("{}:{e}", ctx.algebra.label(*a))).collect();
            out.push(p_record(
                "garland",
                json!({"alpha": root.label, "psi": format!("{{{}}}", parts.join(","))}),
                run(),
            ));
        }
    }
    out
}

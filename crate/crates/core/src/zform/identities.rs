//! The straightening identities for pairs of generators.
//!
//! Each identity maps a pair of generators to its right-hand side, built
//! from the engine table alone. The exception is the sign family ε_ψ of the
//! (x_α, x_ζ) identity, which is left open by the identity itself and is
//! solved against the oracle.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cartan::CartanEngine;
use super::{lift, IntegralGenerator as G, Monomial, ZCombination, ZContext};
use crate::chevalley::{double_bracket_entry, BasisKind, Combination};
use crate::combinatorics::{
    enumerate_cp_k, enumerate_cs_k, enumerate_f, enumerate_f_k, gen_binomial, multinomial, weighted_sum, Multiset,
    ZeroParts,
};
use crate::enveloping::Oracle;
use crate::exterior::Parity;
use crate::roots;
use crate::{Error, Result, Q, Z};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Identity {
    PiPj,
    XaXa,
    XPlusXMinus,
    XrPi,
    PiXr,
    XbXg,
    XaXt,
    XaXb,
    XgPi,
    PiXg,
    TwoGamma,
    XdelXmdel,
    XgXz,
    XalXg,
    XbetaXg,
}

impl Identity {
    pub const ALL: [Identity; 15] = [
        Identity::PiPj,
        Identity::XaXa,
        Identity::XPlusXMinus,
        Identity::XrPi,
        Identity::PiXr,
        Identity::XbXg,
        Identity::XaXt,
        Identity::XaXb,
        Identity::XgPi,
        Identity::PiXg,
        Identity::TwoGamma,
        Identity::XdelXmdel,
        Identity::XgXz,
        Identity::XalXg,
        Identity::XbetaXg,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Identity::PiPj => "pipj",
            Identity::XaXa => "xaxa",
            Identity::XPlusXMinus => "x+x-",
            Identity::XrPi => "xrpi",
            Identity::PiXr => "pixr",
            Identity::XbXg => "xbmarxgnbs",
            Identity::XaXt => "xa1rxtqs",
            Identity::XaXb => "xaxb",
            Identity::XgPi => "xgammapi",
            Identity::PiXg => "pixgamma",
            Identity::TwoGamma => "2gam",
            Identity::XdelXmdel => "xdel1x-delk",
            Identity::XgXz => "xgammxzetn",
            Identity::XalXg => "xalqrxgamm",
            Identity::XbetaXg => "xbeta1rxgamm",
        }
    }

    /// Whether the left-hand side is the plain product of the pair. Only the
    /// 2γ identity is stated for the symmetrized product.
    pub fn is_product(self) -> bool {
        self != Identity::TwoGamma
    }

    /// Whether the pair satisfies the hypotheses of the identity.
    pub fn check(self, ctx: &ZContext, left: &G, right: &G) -> std::result::Result<(), String> {
        let rs = &ctx.cb.rs;
        let ht = |r: usize| rs.roots[r].height;
        let mu = |r: usize| ctx.cb.multiplicity(r);
        let sum = |x: usize, y: usize| rs.find(&roots::add(&rs.roots[x].weight, &rs.roots[y].weight));
        let twice_plus = |x: usize, y: usize| {
            let w = roots::add(&roots::scale(2, &rs.roots[x].weight), &rs.roots[y].weight);
            rs.find(&w)
        };
        let opposite = |x: usize, y: usize| roots::add(&rs.roots[x].weight, &rs.roots[y].weight).iter().all(|&c| c == 0);
        let fail = |s: &str| Err(s.to_string());
        match (self, left, right) {
            (Identity::PiPj, G::CartanP { .. }, G::CartanP { .. }) => Ok(()),
            (Identity::XaXa, G::EvenDivided { root, k, b, .. }, G::EvenDivided { root: r2, k: k2, b: b2, .. }) => {
                if (root, k, b) == (r2, k2, b2) {
                    Ok(())
                } else {
                    fail("factors differ")
                }
            }
            (Identity::XPlusXMinus, G::EvenDivided { root, k, .. }, G::EvenDivided { root: r2, k: k2, .. }) => {
                if !opposite(*root, *r2) {
                    fail("roots are not opposite")
                } else if ht(*root) != 0 {
                    fail("root is not of height zero")
                } else if *k != 1 || *k2 != 1 || mu(*root) != 1 || mu(*r2) != 1 {
                    fail("root of multiplicity above one")
                } else {
                    Ok(())
                }
            }
            (Identity::XrPi, G::EvenDivided { .. }, G::CartanP { .. }) => Ok(()),
            (Identity::PiXr, G::CartanP { .. }, G::EvenDivided { .. }) => Ok(()),
            (Identity::XbXg, G::EvenDivided { root, r, .. }, G::EvenDivided { root: r2, r: s, .. }) => {
                if sum(*root, *r2).is_none() {
                    fail("β+γ is not a root")
                } else if (*r, *s) != (1, 1) && (twice_plus(*root, *r2).is_some() || twice_plus(*r2, *root).is_some()) {
                    fail("2β+γ or β+2γ is a root")
                } else {
                    Ok(())
                }
            }
            (Identity::XaXt, G::EvenDivided { root, k, .. }, G::EvenDivided { root: r2, .. }) => {
                if ht(*root) != 0 || *k != 1 {
                    fail("left factor is not x_{α,1} with α of height zero")
                } else if ht(*r2) == 0 {
                    fail("right root has height zero")
                } else {
                    Ok(())
                }
            }
            (Identity::XaXb, G::EvenDivided { root, k, .. }, G::EvenDivided { root: r2, k: k2, .. }) => {
                if ht(*root) != 0 || ht(*r2) != 0 || *k != 1 || *k2 != 1 {
                    fail("factors are not x_{α,1}, x_{ζ,1} with α, ζ of height zero")
                } else if opposite(*root, *r2) {
                    fail("roots are opposite")
                } else {
                    Ok(())
                }
            }
            (Identity::XgPi, G::Odd { .. }, G::CartanP { .. }) => Ok(()),
            (Identity::PiXg, G::CartanP { .. }, G::Odd { .. }) => Ok(()),
            (Identity::TwoGamma, G::Odd { root, n, .. }, G::Odd { root: r2, n: n2, .. }) => {
                if (root, n) == (r2, n2) {
                    Ok(())
                } else {
                    fail("factors differ")
                }
            }
            (Identity::XdelXmdel, G::Odd { root, n, .. }, G::Odd { root: r2, .. }) => {
                if ht(*root) != -1 || *n != 1 {
                    fail("left factor is not x_{ϑ,1} with ϑ of height −1")
                } else if !opposite(*root, *r2) {
                    fail("roots are not opposite")
                } else {
                    Ok(())
                }
            }
            (Identity::XgXz, G::Odd { root, .. }, G::Odd { root: r2, .. }) => {
                if opposite(*root, *r2) {
                    fail("roots are opposite")
                } else {
                    Ok(())
                }
            }
            (Identity::XalXg, G::EvenDivided { root, r, .. }, G::Odd { root: r2, .. }) => {
                if *r > 1 && twice_plus(*root, *r2).is_some() {
                    fail("2α+γ is a root")
                } else {
                    Ok(())
                }
            }
            (Identity::XbetaXg, G::EvenDivided { root, k, .. }, G::Odd { .. }) => {
                if ht(*root) != 0 || *k != 1 {
                    fail("left factor is not x_{β,1} with β of height zero")
                } else {
                    Ok(())
                }
            }
            _ => fail("generator kinds do not match"),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| Error::UnknownName(format!("identity {s}")))
    }
}

/// What evaluating a right-hand side needs.
pub struct IdentityEnv<'a> {
    pub ctx: &'a ZContext,
    pub cartan: &'a CartanEngine,
    /// Used only for the ε_ψ signs.
    pub oracle: &'a Oracle,
}

pub(crate) fn integer(x: &Q, what: impl FnOnce() -> String) -> Result<Z> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NonIntegral {
            left: 0,
            right: 0,
            value: format!("{x} in {}", what()),
        })
    }
}

/// (x_{α,k}⊗b)^{(r)}; zero when b vanishes and r > 0.
pub fn dp(root: usize, k: usize, b: Option<usize>, r: u32) -> ZCombination {
    if r == 0 {
        return ZCombination::one();
    }
    match b {
        Some(b) => G::EvenDivided { root, k, b, r }.into(),
        None => ZCombination::zero(),
    }
}

pub fn odd(root: usize, n: usize, c: Option<usize>) -> ZCombination {
    match c {
        Some(c) => G::Odd { root, n, c }.into(),
        None => ZCombination::zero(),
    }
}

pub fn p(i: usize, chi: &Multiset<usize>) -> ZCombination {
    if chi.is_empty() {
        ZCombination::one()
    } else {
        G::CartanP { i, chi: chi.clone() }.into()
    }
}

fn z_pow(c: &Z, e: u32) -> Z {
    (0..e).fold(Z::one(), |acc, _| acc * c)
}

/// p_h(χ) for a Cartan element h over the hᵢ, as a ℤ-combination of
/// products of pᵢ's.
pub fn p_h(cartan: &CartanEngine, h: &[(usize, Q)], chi: &Multiset<usize>) -> Result<ZCombination> {
    if chi.is_empty() {
        return Ok(ZCombination::one());
    }
    let parts = cartan.expand(h, chi).map_err(|e| Error::IntegralityViolation {
        monomial: format!("{:?}", e.product),
        coefficient: e.coefficient.to_string(),
        trace: vec![format!("expanding p_h(χ) for h = {h:?}, χ = {chi}")],
    })?;
    let mut out = ZCombination::zero();
    for (c, prod) in parts {
        let m = Monomial::new(prod.into_iter().map(|(i, chi)| G::CartanP { i, chi }).collect());
        out.add_term(m, c);
    }
    Ok(out)
}

/// The Lie element `comb` ⊗ ab as an integral combination. Cartan parts
/// become −pᵢ(χ_{ab}).
pub fn lie_element(ctx: &ZContext, comb: &Combination, ab: Option<usize>) -> Result<ZCombination> {
    let mut out = ZCombination::zero();
    let Some(ab) = ab else { return Ok(out) };
    for (t, c) in comb {
        let c = integer(c, || format!("bracket entry on {}", ctx.cb.label(*t)))?;
        let piece = match ctx.cb.kinds[*t] {
            BasisKind::Cartan(i) => p(i, &Multiset::single(ab)).scale(&-Z::one()),
            BasisKind::Root { root, k } => match ctx.cb.rs.roots[root].parity {
                Parity::Even => dp(root, k, Some(ab), 1),
                Parity::Odd => odd(root, k, Some(ab)),
            },
        };
        out.add_scaled(&piece, &c);
    }
    Ok(out)
}

/// D^{α,1}_{j,k}(d,c); zero when c vanishes.
pub fn d_function(ctx: &ZContext, root: usize, j: u32, k: u32, d: Option<usize>, c: Option<usize>) -> ZCombination {
    let Some(c) = c else { return ZCombination::zero() };
    // d = 0: only the j = 0 term, (x⊗c)^{(k)}, survives
    let Some(d) = d else {
        return if j == 0 { dp(root, 1, Some(c), k) } else { ZCombination::zero() };
    };
    let alg = &ctx.algebra;
    let mut out = ZCombination::zero();
    for lambda in enumerate_cp_k(j, k) {
        let parts: Vec<ZCombination> = lambda
            .iter()
            .map(|(m, e)| {
                let b = if *m == 0 { Some(c) } else { alg.mul_opt(alg.pow(d, *m), Some(c)) };
                dp(root, 1, b, e)
            })
            .collect();
        out.add_scaled(&ZCombination::concat_all(&parts), &Z::one());
    }
    out
}

/// Σ_{ψ∈𝓕_j([μ])} Π_v c(v)^{ψ(v)} (x_{target,v}⊗e)^{(ψ(v))}.
fn root_sum_part(target: usize, c: &[Z], e: Option<usize>, j: u32) -> ZCombination {
    if j == 0 {
        return ZCombination::one();
    }
    let full: Multiset<usize> = (1..=c.len()).map(|v| (v, j)).collect();
    let mut out = ZCombination::zero();
    for psi in enumerate_f_k(&full, j) {
        let mut coeff = Z::one();
        let mut parts = Vec::new();
        for (v, e_v) in psi.iter() {
            coeff *= z_pow(&c[*v - 1], e_v);
            parts.push(dp(target, *v, e, e_v));
        }
        out.add_scaled(&ZCombination::concat_all(&parts), &coeff);
    }
    out
}

impl IdentityEnv<'_> {
    fn no_match(&self, id: Identity, left: &G, right: &G, reason: impl Into<String>) -> Error {
        Error::NoMatchingIdentity {
            left: self.ctx.format_generator(left),
            right: self.ctx.format_generator(right),
            reason: format!("{}: {}", id.tag(), reason.into()),
        }
    }

    fn constants(&self, alpha: usize, k: usize, beta: usize, m: usize) -> Result<Vec<Z>> {
        self.ctx
            .cb
            .c(alpha, k, beta, m)
            .iter()
            .map(|c| integer(c, || "structure constant".into()))
            .collect()
    }

    fn sum_root(&self, x: usize, y: usize) -> Option<usize> {
        let rs = &self.ctx.cb.rs;
        rs.find(&roots::add(&rs.roots[x].weight, &rs.roots[y].weight))
    }

    fn twice_plus(&self, x: usize, y: usize) -> Option<usize> {
        let rs = &self.ctx.cb.rs;
        rs.find(&roots::add(&roots::scale(2, &rs.roots[x].weight), &rs.roots[y].weight))
    }

    /// Right-hand side of the identity for `left · right` (for the 2γ
    /// identity, of the symmetrized product).
    pub fn rhs(&self, id: Identity, left: &G, right: &G) -> Result<ZCombination> {
        id.check(self.ctx, left, right).map_err(|r| self.no_match(id, left, right, r))?;
        let ctx = self.ctx;
        let cb = &ctx.cb;
        let alg = &ctx.algebra;
        let swapped = || ZCombination::from(right.clone()).concat(&ZCombination::from(left.clone()));
        Ok(match (id, left, right) {
            (Identity::PiPj, _, _) => swapped(),
            (Identity::XaXa, G::EvenDivided { root, k, b, r }, G::EvenDivided { r: s, .. }) => {
                dp(*root, *k, Some(*b), r + s).scale(&gen_binomial((r + s) as i64, *s))
            }
            (Identity::XPlusXMinus, G::EvenDivided { root: alpha, b: a, r, .. }, G::EvenDivided { root: minus, b, r: s, .. }) => {
                let h: Vec<(usize, Q)> = cb
                    .h_alpha(*alpha)
                    .ok_or_else(|| self.no_match(id, left, right, "[x_α, x_{−α}] is not in 𝔥"))?
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                let ab = alg.mul(*a, *b);
                let mut out = ZCombination::zero();
                let top = (*r).min(*s);
                for j in 0..=top {
                    for k in 0..=top - j {
                        for v in 0..=top - j - k {
                            let left_d = d_function(ctx, *minus, j, s - j - k - v, ab, Some(*b));
                            let right_d = d_function(ctx, *alpha, v, r - j - k - v, ab, Some(*a));
                            let mid = match (k, ab) {
                                (0, _) => ZCombination::one(),
                                (_, None) => ZCombination::zero(),
                                (_, Some(ab)) => p_h(self.cartan, &h, &Multiset::with(ab, k))?,
                            };
                            let sign = if (j + k + v) % 2 == 1 { -Z::one() } else { Z::one() };
                            out.add_scaled(&ZCombination::concat_all(&[left_d, mid, right_d]), &sign);
                        }
                    }
                }
                out
            }
            (Identity::XrPi, G::EvenDivided { root, k, b, r }, G::CartanP { i, chi }) => {
                self.x_pi(*root, *k, *b, *r, *i, chi, false)
            }
            (Identity::PiXr, G::CartanP { i, chi }, G::EvenDivided { root, k, b, r }) => {
                self.x_pi(*root, *k, *b, *r, *i, chi, true)
            }
            (Identity::XbXg, G::EvenDivided { root: beta, k: m, b: a, r }, G::EvenDivided { root: gamma, k: n, b, r: s }) => {
                let target = self.sum_root(*beta, *gamma).expect("checked");
                let c = self.constants(*beta, *m, *gamma, *n)?;
                let ab = alg.mul(*a, *b);
                let mut out = ZCombination::zero();
                for j in 0..=(*r).min(*s) {
                    let parts = [
                        dp(*gamma, *n, Some(*b), s - j),
                        root_sum_part(target, &c, ab, j),
                        dp(*beta, *m, Some(*a), r - j),
                    ];
                    out.add_scaled(&ZCombination::concat_all(&parts), &Z::one());
                }
                out
            }
            (Identity::XaXt, G::EvenDivided { root: alpha, b: a, r, .. }, G::EvenDivided { root: theta, k: q, b, r: s }) => {
                let two = self.twice_plus(*alpha, *theta);
                let entry = match two {
                    Some(t) => Some((
                        t,
                        double_bracket_entry(cb, *alpha, *theta, *q, t).ok_or_else(|| {
                            self.no_match(id, left, right, "[x_α,[x_α,x_ϑ]] is not 2ε x_{2α+ϑ,v′}")
                        })?,
                    )),
                    None => None,
                };
                let once = self.sum_root(*alpha, *theta);
                let c = match once {
                    Some(_) => self.constants(*alpha, 1, *theta, *q)?,
                    None => Vec::new(),
                };
                let ab = alg.mul(*a, *b);
                let aab = alg.mul_opt(alg.mul(*a, *a), Some(*b));
                let mut out = ZCombination::zero();
                for j1 in 0..=*s {
                    for j2 in 0..=(s - j1) {
                        if j1 + 2 * j2 > *r || (j2 > 0 && entry.is_none()) || (j1 > 0 && once.is_none()) {
                            continue;
                        }
                        let (two_part, eps) = match entry {
                            Some((t, (v, e))) => (dp(t, v, aab, j2), if e < 0 && j2 % 2 == 1 { -Z::one() } else { Z::one() }),
                            None => (ZCombination::one(), Z::one()),
                        };
                        let one_part = match once {
                            Some(t) => root_sum_part(t, &c, ab, j1),
                            None => ZCombination::one(),
                        };
                        let parts = [
                            dp(*theta, *q, Some(*b), s - j1 - j2),
                            two_part,
                            one_part,
                            dp(*alpha, 1, Some(*a), r - j1 - 2 * j2),
                        ];
                        out.add_scaled(&ZCombination::concat_all(&parts), &eps);
                    }
                }
                out
            }
            (Identity::XaXb, G::EvenDivided { root: alpha, b: a, r, .. }, G::EvenDivided { root: zeta, b, r: s, .. }) => {
                self.xaxb(left, right, *alpha, *a, *r, *zeta, *b, *s)?
            }
            (Identity::XgPi, G::Odd { root, n, c }, G::CartanP { i, chi }) => self.odd_pi(*root, *n, *c, *i, chi, false),
            (Identity::PiXg, G::CartanP { i, chi }, G::Odd { root, n, c }) => self.odd_pi(*root, *n, *c, *i, chi, true),
            (Identity::TwoGamma, G::Odd { root, n, c: a }, G::Odd { c: b, .. }) => {
                let c = self.constants(*root, *n, *root, *n)?;
                let target = self.sum_root(*root, *root);
                let two = Z::from(2);
                match (target, c.iter().position(|x| x == &two || x == &-two.clone())) {
                    (Some(t), Some(j)) => {
                        let sign = if c[j] == two { Z::one() } else { -Z::one() };
                        dp(t, j + 1, alg.mul(*a, *b), 1).scale(&sign)
                    }
                    _ => ZCombination::zero(),
                }
            }
            (Identity::XdelXmdel, G::Odd { root, n, c: a }, G::Odd { root: r2, n: k, c: b }) => {
                let bracket = cb.bracket(cb.x(*root, *n), cb.x(*r2, *k));
                if bracket.iter().any(|(t, _)| *t >= cb.cartan_len()) {
                    return Err(self.no_match(id, left, right, "[x_ϑ, x_{−ϑ,k}] leaves 𝔥"));
                }
                let mut out = swapped().scale(&-Z::one());
                out.add_scaled(&lie_element(ctx, bracket, alg.mul(*a, *b))?, &Z::one());
                out
            }
            (Identity::XgXz, G::Odd { root, n: m, c: a }, G::Odd { root: zeta, n, c: b }) => {
                let mut out = swapped().scale(&-Z::one());
                if let Some(t) = self.sum_root(*root, *zeta) {
                    let c = self.constants(*root, *m, *zeta, *n)?;
                    let ab = alg.mul(*a, *b);
                    for (j, cj) in c.iter().enumerate() {
                        out.add_scaled(&dp(t, j + 1, ab, 1), cj);
                    }
                }
                out
            }
            (Identity::XalXg | Identity::XbetaXg, G::EvenDivided { root: alpha, k: q, b: a, r }, G::Odd { root: gamma, n: m, c: b }) => {
                let mut out = swapped();
                if *r >= 1 {
                    if let Some(t) = self.sum_root(*alpha, *gamma) {
                        let c = self.constants(*alpha, *q, *gamma, *m)?;
                        let ab = alg.mul(*a, *b);
                        let rest = dp(*alpha, *q, Some(*a), r - 1);
                        for (j, cj) in c.iter().enumerate() {
                            out.add_scaled(&odd(t, j + 1, ab).concat(&rest), cj);
                        }
                    }
                }
                if id == Identity::XbetaXg && *r >= 2 {
                    if let Some(t) = self.twice_plus(*alpha, *gamma) {
                        let (s, eps) = double_bracket_entry(cb, *alpha, *gamma, *m, t).ok_or_else(|| {
                            self.no_match(id, left, right, "[x_β,[x_β,x_γ]] is not 2ε x_{2β+γ,s}")
                        })?;
                        let aab = alg.mul_opt(alg.mul(*a, *a), Some(*b));
                        let term = odd(t, s, aab).concat(&dp(*alpha, 1, Some(*a), r - 2));
                        out.add_scaled(&term, &Z::from(eps));
                    }
                }
                out
            }
            _ => unreachable!("hypotheses checked"),
        })
    }

    /// (x_{η,u}⊗a)^{(r)} pᵢ(χ) or, with `p_first`, pᵢ(χ)(x_{η,u}⊗a)^{(r)}.
    #[allow(clippy::too_many_arguments)]
    fn x_pi(&self, root: usize, k: usize, a: usize, r: u32, i: usize, chi: &Multiset<usize>, p_first: bool) -> ZCombination {
        let alg = &self.ctx.algebra;
        let eta = self.ctx.cb.eval(root, i);
        let eta = if p_first { -eta } else { eta };
        let mut out = ZCombination::zero();
        for psi in enumerate_cs_k(chi, r, ZeroParts::Included) {
            let rest = chi.sub(&weighted_sum(&psi)).expect("ψ fits in χ");
            let mut coeff = Z::one();
            let mut xs = Vec::new();
            for (phi, e) in psi.iter() {
                let size = phi.size();
                let c = gen_binomial(eta + size as i64 - 1, size) * multinomial(phi);
                coeff *= z_pow(&c, e);
                let b = if phi.is_empty() { Some(a) } else { alg.mul_opt(Some(a), alg.pi(phi)) };
                xs.push(dp(root, k, b, e));
            }
            let xs = ZCombination::concat_all(&xs);
            let term = if p_first { xs.concat(&p(i, &rest)) } else { p(i, &rest).concat(&xs) };
            out.add_scaled(&term, &coeff);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn odd_pi(&self, root: usize, n: usize, a: usize, i: usize, chi: &Multiset<usize>, p_first: bool) -> ZCombination {
        let alg = &self.ctx.algebra;
        let gamma = self.ctx.cb.eval(root, i);
        let gamma = if p_first { -gamma } else { gamma };
        let mut out = ZCombination::zero();
        for psi in enumerate_f(chi) {
            let size = psi.size();
            let coeff = gen_binomial(size as i64 - 1 + gamma, size) * multinomial(&psi);
            let b = if psi.is_empty() { Some(a) } else { alg.mul_opt(Some(a), alg.pi(&psi)) };
            let rest = p(i, &chi.sub(&psi).expect("ψ ≤ χ"));
            let term = if p_first { odd(root, n, b).concat(&rest) } else { rest.concat(&odd(root, n, b)) };
            out.add_scaled(&term, &coeff);
        }
        out
    }

    /// The (x_α, x_ζ) identity; ε_ψ is fixed by peeling leading words off the
    /// oracle's product, highest degree first.
    #[allow(clippy::too_many_arguments)]
    fn xaxb(&self, left: &G, right: &G, alpha: usize, a: usize, r: u32, zeta: usize, b: usize, s: u32) -> Result<ZCombination> {
        let ctx = self.ctx;
        let rs = &ctx.cb.rs;
        let alg = &ctx.algebra;
        let mut pairs = Vec::new();
        for j in 1..=r {
            for k in 1..=s {
                let w = roots::add(&roots::scale(j as i64, &rs.roots[alpha].weight), &roots::scale(k as i64, &rs.roots[zeta].weight));
                if let Some(t) = rs.find(&w) {
                    if ctx.cb.multiplicity(t) != 1 {
                        return Err(self.no_match(Identity::XaXb, left, right, "jα+kζ has multiplicity above one"));
                    }
                    pairs.push((j, k, t));
                }
            }
        }
        let mut psis: Vec<Vec<u32>> = Vec::new();
        enumerate_psi(&pairs, 0, r, s, &mut vec![0; pairs.len()], &mut psis);
        let mut terms: Vec<(u32, ZCombination)> = psis
            .iter()
            .map(|psi| {
                let used_j: u32 = psi.iter().zip(&pairs).map(|(e, (j, _, _))| e * j).sum();
                let used_k: u32 = psi.iter().zip(&pairs).map(|(e, (_, k, _))| e * k).sum();
                let mut parts = vec![dp(zeta, 1, Some(b), s - used_k)];
                for (e, (j, k, t)) in psi.iter().zip(&pairs) {
                    let coeff = alg.mul_opt(alg.pow(a, *j), alg.pow(b, *k));
                    parts.push(dp(*t, 1, coeff, *e));
                }
                parts.push(dp(alpha, 1, Some(a), r - used_j));
                let degree = (s - used_k) + (r - used_j) + psi.iter().sum::<u32>();
                (degree, ZCombination::concat_all(&parts))
            })
            .filter(|(_, t)| !t.is_zero())
            .collect();
        terms.sort_by(|x, y| y.0.cmp(&x.0));

        let oracle = self.oracle;
        let mut residual = oracle.mul(
            &lift::evaluate_generator(oracle, ctx, left)?,
            &lift::evaluate_generator(oracle, ctx, right)?,
        );
        let mut out = ZCombination::zero();
        for (_, term) in terms {
            let (m, _) = term.terms().iter().next().expect("single term");
            let value = lift::evaluate(oracle, ctx, m)?;
            let word = lift::top_word(ctx, m);
            let eps = residual.coefficient(&word) / value.coefficient(&word);
            if eps != Q::one() && eps != -Q::one() {
                return Err(self.no_match(Identity::XaXb, left, right, format!("ε_ψ solves to {eps}")));
            }
            residual.add_scaled(&value, &-eps.clone());
            out.add_scaled(&term, &eps.to_integer());
        }
        Ok(out)
    }
}

fn enumerate_psi(pairs: &[(u32, u32, usize)], at: usize, room_j: u32, room_k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if at == pairs.len() {
        out.push(cur.clone());
        return;
    }
    let (j, k, _) = pairs[at];
    let mut e = 0;
    while e * j <= room_j && e * k <= room_k {
        cur[at] = e;
        enumerate_psi(pairs, at + 1, room_j - e * j, room_k - e * k, cur, out);
        e += 1;
    }
    cur[at] = 0;
}

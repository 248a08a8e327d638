//! Rewriting monomials onto ℬ.
//!
//! The leftmost adjacent pair that is out of order (or has equal keys) is
//! replaced by the right-hand side of the matching identity or merge rule,
//! and every resulting monomial is rewritten in turn. Each replacement keeps
//! the degree and removes one inversion or one factor, or lowers the degree,
//! so the recursion terminates; a step limit guards against a bad table.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::cartan::CartanEngine;
use super::identities::{lie_element, Identity, IdentityEnv};
use super::{IntegralGenerator as G, Monomial, ZCombination, ZContext};
use crate::enveloping::Oracle;
use crate::roots;
use crate::{Error, Result, Q, Z};

/// How one pair was replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    Commute,
    Identity(Identity),
    /// The identity applied to the swapped pair and solved for this one.
    Inverted(Identity),
    MergeEven,
    MergeCartan,
    OddSquare,
}

impl Step {
    pub fn name(&self) -> String {
        match self {
            Step::Commute => "commute".into(),
            Step::Identity(id) => id.tag().into(),
            Step::Inverted(id) => format!("{}⁻¹", id.tag()),
            Step::MergeEven => "xaxa".into(),
            Step::MergeCartan => "p-product".into(),
            Step::OddSquare => "2gam".into(),
        }
    }
}

pub struct Engine {
    pub ctx: Arc<ZContext>,
    cartan: CartanEngine,
    oracle: Oracle,
    memo: HashMap<Monomial, ZCombination>,
    pub step_limit: usize,
    steps: usize,
    stack: Vec<Monomial>,
    pub usage: BTreeMap<Step, usize>,
}

impl Engine {
    pub fn new(ctx: Arc<ZContext>) -> Self {
        Engine {
            cartan: CartanEngine::new(ctx.algebra.clone()),
            oracle: Oracle::new(ctx.env.clone()),
            ctx,
            memo: HashMap::new(),
            step_limit: 2_000_000,
            steps: 0,
            stack: Vec::new(),
            usage: BTreeMap::new(),
        }
    }

    pub fn identity_env(&self) -> IdentityEnv<'_> {
        IdentityEnv {
            ctx: &self.ctx,
            cartan: &self.cartan,
            oracle: &self.oracle,
        }
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn cartan(&self) -> &CartanEngine {
        &self.cartan
    }

    pub fn rewrite(&mut self, m: &Monomial) -> Result<ZCombination> {
        let m = Monomial::new(m.0.clone());
        if let Some(hit) = self.memo.get(&m) {
            return Ok(hit.clone());
        }
        self.steps += 1;
        if self.steps > self.step_limit {
            return Err(Error::StepLimit(self.step_limit));
        }
        let f = m.factors();
        let ctx = self.ctx.clone();
        let pos = (0..f.len().saturating_sub(1)).find(|&i| ctx.key(&f[i]) >= ctx.key(&f[i + 1]));
        let out = match pos {
            None => ZCombination::single(m.clone(), Z::one()),
            Some(i) => {
                self.stack.push(m.clone());
                let (step, local) = match self.replace_pair(&f[i], &f[i + 1]) {
                    Ok(x) => x,
                    Err(e) => return Err(self.with_trace(e)),
                };
                *self.usage.entry(step).or_insert(0) += 1;
                let mut out = ZCombination::zero();
                for (seq, c) in local.terms() {
                    let mut nf = f[..i].to_vec();
                    nf.extend(seq.factors().iter().cloned());
                    nf.extend(f[i + 2..].iter().cloned());
                    let sub = self.rewrite(&Monomial::new(nf))?;
                    out.add_scaled(&sub, c);
                }
                self.stack.pop();
                out
            }
        };
        self.memo.insert(m, out.clone());
        Ok(out)
    }

    pub fn rewrite_combination(&mut self, z: &ZCombination) -> Result<ZCombination> {
        let mut out = ZCombination::zero();
        for (m, c) in z.terms() {
            out.add_scaled(&self.rewrite(m)?, c);
        }
        Ok(out)
    }

    fn with_trace(&mut self, e: Error) -> Error {
        let trace: Vec<String> = self.stack.iter().map(|m| self.ctx.format_monomial(m)).collect();
        self.stack.clear();
        match e {
            Error::IntegralityViolation {
                monomial,
                coefficient,
                trace: mut inner,
            } => {
                inner.extend(trace);
                Error::IntegralityViolation {
                    monomial,
                    coefficient,
                    trace: inner,
                }
            }
            other => other,
        }
    }

    /// Replacement for an adjacent pair with key(left) ≥ key(right).
    pub fn replace_pair(&mut self, left: &G, right: &G) -> Result<(Step, ZCombination)> {
        if self.ctx.key(left) == self.ctx.key(right) {
            self.merge(left, right)
        } else {
            self.straighten_pair(left, right)
        }
    }

    fn merge(&mut self, left: &G, right: &G) -> Result<(Step, ZCombination)> {
        let ctx = self.ctx.clone();
        match (left, right) {
            (G::EvenDivided { .. }, G::EvenDivided { .. }) => {
                Ok((Step::MergeEven, self.identity_env().rhs(Identity::XaXa, left, right)?))
            }
            (G::CartanP { i, chi }, G::CartanP { chi: phi, .. }) => {
                let parts = self.cartan.merge(*i, chi, phi).map_err(|e| Error::IntegralityViolation {
                    monomial: format!("{:?}", e.product),
                    coefficient: e.coefficient.to_string(),
                    trace: vec![format!("merging {} * {}", ctx.format_generator(left), ctx.format_generator(right))],
                })?;
                let mut out = ZCombination::zero();
                for (c, prod) in parts {
                    out.add_term(Monomial::new(prod.into_iter().map(|(i, chi)| G::CartanP { i, chi }).collect()), c);
                }
                Ok((Step::MergeCartan, out))
            }
            (G::Odd { root, n, c }, G::Odd { .. }) => {
                let cb = &ctx.cb;
                let x = cb.x(*root, *n);
                let half = Q::new(Z::one(), Z::from(2));
                let halved: Vec<(usize, Q)> = cb.bracket(x, x).iter().map(|(t, v)| (*t, v * &half)).collect();
                if let Some((_, bad)) = halved.iter().find(|(_, v)| !v.is_integer()) {
                    return Err(Error::IntegralityViolation {
                        monomial: format!("{} * {}", ctx.format_generator(left), ctx.format_generator(right)),
                        coefficient: bad.to_string(),
                        trace: vec!["odd square ½[x,x]⊗c²".into()],
                    });
                }
                let cc = ctx.algebra.mul(*c, *c);
                Ok((Step::OddSquare, lie_element(&ctx, &halved, cc)?))
            }
            _ => unreachable!("equal keys imply equal kinds"),
        }
    }

    fn no_match(&self, left: &G, right: &G, reason: &str) -> Error {
        Error::NoMatchingIdentity {
            left: self.ctx.format_generator(left),
            right: self.ctx.format_generator(right),
            reason: reason.into(),
        }
    }

    fn swapped(left: &G, right: &G, sign: i64) -> ZCombination {
        ZCombination::from(right.clone())
            .concat(&ZCombination::from(left.clone()))
            .scale(&Z::from(sign))
    }

    /// l·r from the identity stated for r·l = σ l·r + rest.
    fn inverted(&self, id: Identity, left: &G, right: &G, sigma: i64) -> Result<ZCombination> {
        let rhs = self.identity_env().rhs(id, right, left)?;
        let lr = ZCombination::from(left.clone()).concat(&ZCombination::from(right.clone()));
        let (lead, _) = lr.terms().iter().next().expect("two factors");
        if rhs.coefficient(lead) != Z::from(sigma) {
            return Err(self.no_match(left, right, &format!("{}: leading term of the swapped identity", id.tag())));
        }
        let mut out = lr;
        out.add_scaled(&Self::swapped(left, right, 1), &Z::from(sigma));
        out.add_scaled(&rhs, &Z::from(-sigma));
        Ok(out)
    }

    fn lie_index(&self, g: &G) -> Option<usize> {
        match g {
            G::EvenDivided { root, k, .. } => Some(self.ctx.cb.x(*root, *k)),
            G::Odd { root, n, .. } => Some(self.ctx.cb.x(*root, *n)),
            G::CartanP { .. } => None,
        }
    }

    fn coefficient_of(g: &G) -> usize {
        match g {
            G::EvenDivided { b, .. } => *b,
            G::Odd { c, .. } => *c,
            G::CartanP { .. } => unreachable!(),
        }
    }

    fn root_of(g: &G) -> usize {
        match g {
            G::EvenDivided { root, .. } | G::Odd { root, .. } => *root,
            G::CartanP { .. } => unreachable!(),
        }
    }

    /// Which identity straightens an even factor followed by an odd one.
    fn even_odd_identity(&self, even: &G, oddg: &G) -> Result<Identity> {
        let cb = &self.ctx.cb;
        let (G::EvenDivided { root, k, r, .. }, G::Odd { root: gamma, n, .. }) = (even, oddg) else { unreachable!() };
        let x = cb.x(*root, *k);
        let ad = |comb: &[(usize, Q)]| -> Vec<(usize, Q)> {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (t, c) in comb {
                for (u, d) in cb.bracket(x, *t) {
                    *acc.entry(*u).or_insert_with(Q::zero) += c * d;
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        let twice = ad(&ad(&[(cb.x(*gamma, *n), Q::one())]));
        if twice.is_empty() || *r == 1 {
            return Ok(Identity::XalXg);
        }
        if Identity::XbetaXg.check(&self.ctx, even, oddg).is_err() {
            return Err(self.no_match(even, oddg, "[x_α,[x_α,x_γ]] ≠ 0 outside height zero"));
        }
        if !ad(&twice).is_empty() {
            return Err(self.no_match(even, oddg, "(ad x_β)³ x_γ ≠ 0"));
        }
        Ok(Identity::XbetaXg)
    }

    pub fn straighten_pair(&mut self, left: &G, right: &G) -> Result<(Step, ZCombination)> {
        let ctx = self.ctx.clone();
        let cb = &ctx.cb;
        let rs = &cb.rs;
        let env = self.identity_env();
        let direct = |id: Identity| -> Result<(Step, ZCombination)> { Ok((Step::Identity(id), env.rhs(id, left, right)?)) };
        match (left, right) {
            (G::CartanP { .. }, G::CartanP { .. }) => direct(Identity::PiPj),
            (G::EvenDivided { .. }, G::CartanP { .. }) => direct(Identity::XrPi),
            (G::CartanP { .. }, G::EvenDivided { .. }) => direct(Identity::PiXr),
            (G::Odd { .. }, G::CartanP { .. }) => direct(Identity::XgPi),
            (G::CartanP { .. }, G::Odd { .. }) => direct(Identity::PiXg),
            _ => {
                let (Some(li), Some(ri)) = (self.lie_index(left), self.lie_index(right)) else { unreachable!() };
                let ab = ctx.algebra.mul(Self::coefficient_of(left), Self::coefficient_of(right));
                let both_odd = matches!((left, right), (G::Odd { .. }, G::Odd { .. }));
                let sigma = if both_odd { -1 } else { 1 };
                if ab.is_none() || cb.bracket(li, ri).is_empty() {
                    return Ok((Step::Commute, Self::swapped(left, right, sigma)));
                }
                let (beta, gamma) = (Self::root_of(left), Self::root_of(right));
                let bw = &rs.roots[beta].weight;
                let gw = &rs.roots[gamma].weight;
                let opposite = roots::add(bw, gw).iter().all(|&c| c == 0);
                match (left, right) {
                    (G::EvenDivided { .. }, G::EvenDivided { .. }) => {
                        if opposite {
                            return direct(Identity::XPlusXMinus);
                        }
                        let t1 = rs.contains(&roots::add(&roots::scale(2, bw), gw));
                        let t2 = rs.contains(&roots::add(bw, &roots::scale(2, gw)));
                        let xaxt_direct = Identity::XaXt.check(&ctx, left, right).is_ok();
                        let xaxt_swapped = Identity::XaXt.check(&ctx, right, left).is_ok();
                        let xaxb = Identity::XaXb.check(&ctx, left, right).is_ok();
                        let single = matches!((left, right), (G::EvenDivided { r: 1, .. }, G::EvenDivided { r: 1, .. }));
                        match (t1, t2) {
                            (false, false) => direct(Identity::XbXg),
                            // at r = s = 1 this is xy = yx + [x,y], whatever the string length
                            _ if single && !xaxt_direct && !xaxb => direct(Identity::XbXg),
                            (true, false) if xaxt_direct => direct(Identity::XaXt),
                            (false, true) if xaxt_swapped => {
                                Ok((Step::Inverted(Identity::XaXt), self.inverted(Identity::XaXt, left, right, 1)?))
                            }
                            _ if xaxb => direct(Identity::XaXb),
                            _ => Err(self.no_match(left, right, "root string of length above two outside height zero")),
                        }
                    }
                    (G::EvenDivided { .. }, G::Odd { .. }) => direct(self.even_odd_identity(left, right)?),
                    (G::Odd { .. }, G::EvenDivided { .. }) => {
                        let id = self.even_odd_identity(right, left)?;
                        Ok((Step::Inverted(id), self.inverted(id, left, right, 1)?))
                    }
                    (G::Odd { .. }, G::Odd { .. }) => {
                        if !opposite {
                            direct(Identity::XgXz)
                        } else if Identity::XdelXmdel.check(&ctx, left, right).is_ok() {
                            direct(Identity::XdelXmdel)
                        } else if Identity::XdelXmdel.check(&ctx, right, left).is_ok() {
                            Ok((Step::Inverted(Identity::XdelXmdel), self.inverted(Identity::XdelXmdel, left, right, -1)?))
                        } else {
                            Err(self.no_match(left, right, "opposite odd roots outside height ±1"))
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
}

//! Triangular decomposition and the tensor factorizations of 𝒰_ℤ.
//!
//! Both are read off rewritten monomials: under a suitable order every ℬ
//! element is a product of blocks, and rewriting a product of elements of
//! one block must stay inside the block.

use serde_json::json;

use super::verify::{Record, Status};
use super::{Engine, IntegralGenerator as G, Monomial, NamedOrder, ZCombination, ZContext};
use crate::exterior::Parity;
use crate::{Error, Result};

/// Block index of a generator for the triangular order: R⁻, I, R⁺.
fn triangular_block(ctx: &ZContext, g: &G) -> usize {
    match g {
        G::EvenDivided { root, .. } | G::Odd { root, .. } => {
            if ctx.cb.rs.positive[*root] {
                2
            } else {
                0
            }
        }
        G::CartanP { .. } => 1,
    }
}

fn parity_block(g: &G) -> usize {
    match g.parity() {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

/// (R₀ ∪ I), then even roots of positive height.
fn corollary3_block(ctx: &ZContext, g: &G) -> usize {
    match g {
        G::CartanP { .. } => 0,
        G::EvenDivided { root, .. } | G::Odd { root, .. } => match ctx.height(*root) {
            0 => 0,
            h if h > 0 => 1,
            _ => 2,
        },
    }
}

fn blocks_ascend(m: &Monomial, block: impl Fn(&G) -> usize) -> bool {
    m.factors().windows(2).all(|w| block(&w[0]) <= block(&w[1]))
}

/// 𝒰⁻ · 𝒰⁰ · 𝒰⁺ factors of a single ℬ element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangular {
    pub minus: Monomial,
    pub zero: Monomial,
    pub plus: Monomial,
}

pub fn split_triangular(ctx: &ZContext, m: &Monomial) -> Option<Triangular> {
    if !blocks_ascend(m, |g| triangular_block(ctx, g)) {
        return None;
    }
    let part = |b: usize| Monomial::new(m.factors().iter().filter(|g| triangular_block(ctx, g) == b).cloned().collect());
    Some(Triangular {
        minus: part(0),
        zero: part(1),
        plus: part(2),
    })
}

/// Rewrite under R⁻ ≼ I ≼ R⁺ and split every term.
pub fn triangular_decompose(engine: &mut Engine, m: &Monomial) -> Result<Vec<(crate::Z, Triangular)>> {
    if engine.ctx.order.named != NamedOrder::Triangular {
        return Err(Error::InvalidSpec("triangular decomposition needs the triangular order".into()));
    }
    let z = engine.rewrite(m)?;
    let ctx = engine.ctx.clone();
    z.terms()
        .iter()
        .map(|(t, c)| {
            split_triangular(&ctx, t)
                .map(|s| (c.clone(), s))
                .ok_or_else(|| Error::InvalidSpec(format!("{} is not of the form ℬ⁻ℬ⁰ℬ⁺", ctx.format_monomial(t))))
        })
        .collect()
}

/// The three factorizations, each checked on one monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factorization {
    /// 𝒰_ℤ(𝔤⊗A) ≅ 𝒰_ℤ(𝔤_0̄⊗A) ⊗ Λ_ℤ(𝔤_1̄⊗A).
    EvenOdd,
    /// The same restricted to 𝔤₀ ⊕ 𝔤₊.
    NonNegative,
    /// 𝒰_ℤ(𝔤_0̄⊗A) ≅ 𝒰_ℤ(𝔤₀⊗A) ⊗ 𝒰_ℤ(𝔤_0̄⁺⊗A).
    EvenPart,
}

impl Factorization {
    pub const ALL: [Factorization; 3] = [Factorization::EvenOdd, Factorization::NonNegative, Factorization::EvenPart];

    pub fn order(self) -> NamedOrder {
        match self {
            Factorization::EvenOdd | Factorization::NonNegative => NamedOrder::EvenFirst,
            Factorization::EvenPart => NamedOrder::Corollary3,
        }
    }

    pub fn pool(self) -> super::sample::Pool {
        use super::sample::Pool;
        match self {
            Factorization::EvenOdd => Pool::All,
            Factorization::NonNegative => Pool::NonNegative,
            Factorization::EvenPart => Pool::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Factorization::EvenOdd => "factorization-1",
            Factorization::NonNegative => "factorization-2",
            Factorization::EvenPart => "factorization-3",
        }
    }

    /// Whether a rewritten term has the factorized shape and stays in the
    /// subalgebra the input came from.
    fn admits(self, ctx: &ZContext, m: &Monomial) -> bool {
        match self {
            Factorization::EvenOdd => blocks_ascend(m, parity_block),
            Factorization::NonNegative => {
                blocks_ascend(m, parity_block)
                    && m.factors().iter().all(|g| match g {
                        G::EvenDivided { root, .. } | G::Odd { root, .. } => ctx.height(*root) >= 0,
                        G::CartanP { .. } => true,
                    })
            }
            Factorization::EvenPart => {
                m.factors().iter().all(|g| g.parity() == Parity::Even)
                    && blocks_ascend(m, |g| corollary3_block(ctx, g))
            }
        }
    }
}

fn shape_record(name: &str, ctx: &ZContext, m: &Monomial, z: Result<ZCombination>, ok: impl Fn(&Monomial) -> bool) -> Record {
    let mut rec = Record {
        identity: name.into(),
        params: json!({
            "algebra": ctx.cb.rs.spec.to_string(),
            "a_model": ctx.algebra.name,
            "order": ctx.order.named.name(),
            "monomial": ctx.format_monomial(m),
        }),
        status: Status::Pass,
        lhs_terms: 1,
        rhs_terms: 0,
        max_degree: None,
        elapsed: None,
        detail: None,
    };
    match z {
        Ok(z) => {
            rec.rhs_terms = z.len();
            rec.max_degree = z.max_degree();
            if let Some(bad) = z.terms().keys().find(|t| !ok(t)) {
                rec.status = Status::Fail;
                rec.detail = Some(format!("term {} has the wrong shape", ctx.format_monomial(bad)));
            }
        }
        Err(e) => {
            rec.status = Status::Error;
            rec.detail = Some(e.to_string());
        }
    }
    rec
}

/// Check one factorization on one monomial. The engine must use the
/// factorization's order.
pub fn factorization_check(engine: &mut Engine, which: Factorization, m: &Monomial) -> Record {
    let ctx = engine.ctx.clone();
    let z = if ctx.order.named == which.order() {
        engine.rewrite(m)
    } else {
        Err(Error::InvalidSpec(format!("{} needs the {} order", which.name(), which.order())))
    };
    shape_record(which.name(), &ctx, m, z, |t| which.admits(&ctx, t))
}

/// Check the triangular shape of the rewrite of one monomial.
pub fn triangular_check(engine: &mut Engine, m: &Monomial) -> Record {
    let ctx = engine.ctx.clone();
    let z = triangular_decompose(engine, m).and_then(|_| engine.rewrite(m));
    shape_record("triangular", &ctx, m, z, |t| split_triangular(&ctx, t).is_some())
}

/// ℬ⁺ (or ℬ⁻) is closed under products: rewriting a product of two
/// elements of the block stays inside it.
pub fn closure_check(engine: &mut Engine, x: &Monomial, y: &Monomial, block: usize) -> Record {
    let ctx = engine.ctx.clone();
    let mut factors = x.factors().to_vec();
    factors.extend(y.factors().iter().cloned());
    let m = Monomial::new(factors);
    let z = engine.rewrite(&m);
    let name = ["closure-minus", "closure-zero", "closure-plus"][block];
    shape_record(name, &ctx, &m, z, |t| t.factors().iter().all(|g| triangular_block(&ctx, g) == block))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{AlgebraSpec, Family};
    use crate::zform::sample::{random_monomial, Pool};
    use crate::zform::{context, AOrder};
    use rand::SeedableRng;

    #[test]
    fn triangular_terms_split_into_three_blocks() {
        let ctx = context(&AlgebraSpec::new(Family::W, 2), "trunc-poly-4", NamedOrder::Triangular, AOrder::Natural).unwrap();
        let mut engine = Engine::new(ctx.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = random_monomial(&ctx, &mut rng, Pool::All, 4);
            assert!(triangular_check(&mut engine, &m).passed());
        }
    }

    #[test]
    fn wrong_order_is_an_error() {
        let ctx = context(&AlgebraSpec::new(Family::W, 2), "C", NamedOrder::Height, AOrder::Natural).unwrap();
        let mut engine = Engine::new(ctx.clone());
        let m = Monomial::new(vec![G::CartanP {
            i: 0,
            chi: crate::combinatorics::Multiset::single(0),
        }]);
        assert_eq!(factorization_check(&mut engine, Factorization::EvenOdd, &m).status, Status::Error);
        assert!(triangular_decompose(&mut engine, &m).is_err());
    }
}

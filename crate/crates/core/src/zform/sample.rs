//! Random generators and monomials, for campaigns and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{IntegralGenerator as G, Monomial, ZContext};
use crate::combinatorics::Multiset;
use crate::exterior::Parity;

/// Which generators may be drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pool {
    All,
    /// Cartan generators and roots of height ≥ 0.
    NonNegative,
    /// Cartan generators and even roots.
    Even,
    /// Roots in R⁺ only.
    Positive,
    /// Roots in R⁻ only.
    Negative,
    Cartan,
}

impl Pool {
    fn admits_root(self, ctx: &ZContext, root: usize) -> bool {
        let rs = &ctx.cb.rs;
        let r = &rs.roots[root];
        match self {
            Pool::All => true,
            Pool::NonNegative => r.height >= 0,
            Pool::Even => r.parity == Parity::Even,
            Pool::Positive => rs.positive[root],
            Pool::Negative => !rs.positive[root],
            Pool::Cartan => false,
        }
    }

    fn admits_cartan(self) -> bool {
        matches!(self, Pool::All | Pool::NonNegative | Pool::Even | Pool::Cartan)
    }
}

/// A generator of degree at most `budget` (≥ 1).
pub fn random_generator<R: Rng>(ctx: &ZContext, rng: &mut R, pool: Pool, budget: u32) -> G {
    let cb = &ctx.cb;
    let roots: Vec<usize> = (0..cb.rs.roots.len()).filter(|&r| pool.admits_root(ctx, r)).collect();
    let cartan: Vec<usize> = if pool.admits_cartan() { ctx.cartan_indices().collect() } else { Vec::new() };
    let dim = ctx.algebra.dim();
    let take_cartan = !cartan.is_empty() && (roots.is_empty() || rng.gen_ratio(1, 4));
    if take_cartan {
        let i = *cartan.choose(rng).expect("nonempty");
        let size = rng.gen_range(1..=budget.min(3));
        let mut chi = Multiset::new();
        for _ in 0..size {
            chi.insert(rng.gen_range(0..dim), 1);
        }
        return G::CartanP { i, chi };
    }
    let root = *roots.choose(rng).expect("pool has generators");
    let k = rng.gen_range(1..=cb.multiplicity(root));
    let b = rng.gen_range(0..dim);
    match cb.rs.roots[root].parity {
        Parity::Odd => G::Odd { root, n: k, c: b },
        Parity::Even => G::EvenDivided {
            root,
            k,
            b,
            r: rng.gen_range(1..=budget.min(3)),
        },
    }
}

/// A monomial of degree between 1 and `max_degree`.
pub fn random_monomial<R: Rng>(ctx: &ZContext, rng: &mut R, pool: Pool, max_degree: u32) -> Monomial {
    let target = rng.gen_range(1..=max_degree);
    let mut factors = Vec::new();
    let mut used = 0;
    while used < target {
        let g = random_generator(ctx, rng, pool, target - used);
        used += g.degree();
        factors.push(g);
    }
    Monomial::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{AlgebraSpec, Family};
    use crate::zform::{context, AOrder, NamedOrder};
    use rand::SeedableRng;

    #[test]
    fn degrees_stay_within_bounds() {
        let ctx = context(&AlgebraSpec::new(Family::W, 3), "trunc-poly-4", NamedOrder::Height, AOrder::Natural).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = random_monomial(&ctx, &mut rng, Pool::All, 5);
            assert!((1..=5).contains(&m.degree()));
        }
    }

    #[test]
    fn pools_are_respected() {
        let ctx = context(&AlgebraSpec::new(Family::W, 2), "C", NamedOrder::Height, AOrder::Natural).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let m = random_monomial(&ctx, &mut rng, Pool::Positive, 4);
            assert!(m.factors().iter().all(|g| match g {
                G::EvenDivided { root, .. } | G::Odd { root, .. } => ctx.cb.rs.positive[*root],
                G::CartanP { .. } => false,
            }));
        }
    }
}

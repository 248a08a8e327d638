//! The integral form 𝒰_ℤ(𝔤⊗A): generators, monomials, the straightening
//! identities and the rewriting of monomials onto the basis ℬ.
//!
//! The engine here only ever consults the Chevalley structure-constant
//! table. The enveloping oracle is used to check its output, and in exactly
//! one place to fill in signs that the identities leave undetermined.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chevalley::ChevalleyBasis;
use crate::combinatorics::{MonoidAlgebra, Multiset};
use crate::enveloping::EnvelopingContext;
use crate::exterior::Parity;
use crate::{Result, Z};

pub mod cartan;
pub mod decompose;
pub mod expr;
pub mod identities;
pub mod lift;
pub mod order;
pub mod rewrite;
pub mod sample;
pub mod verify;

pub use identities::Identity;
pub use order::{AOrder, NamedOrder, Order};
pub use rewrite::Engine;

/// One generator of the integral form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IntegralGenerator {
    /// (x_{α,k}⊗b)^{(r)} for an even root α.
    EvenDivided { root: usize, k: usize, b: usize, r: u32 },
    /// pᵢ(χ).
    CartanP { i: usize, chi: Multiset<usize> },
    /// x_{γ,n}⊗c for an odd root γ.
    Odd { root: usize, n: usize, c: usize },
}

impl IntegralGenerator {
    pub fn degree(&self) -> u32 {
        match self {
            IntegralGenerator::EvenDivided { r, .. } => *r,
            IntegralGenerator::CartanP { chi, .. } => chi.size(),
            IntegralGenerator::Odd { .. } => 1,
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            IntegralGenerator::Odd { .. } => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Monomial(pub Vec<IntegralGenerator>);

impl Monomial {
    /// Unit factors (exponent zero, empty χ) are dropped.
    pub fn new(factors: Vec<IntegralGenerator>) -> Self {
        Monomial(factors.into_iter().filter(|g| !g.is_unit()).collect())
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn factors(&self) -> &[IntegralGenerator] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(IntegralGenerator::degree).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// An integer combination of monomials; after rewriting, of ℬ elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZCombination {
    terms: BTreeMap<Monomial, Z>,
}

impl ZCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(m: Monomial, c: Z) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Z) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ZCombination, c: &Z) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Z> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn coefficient(&self, m: &Monomial) -> Z {
        self.terms.get(m).cloned().unwrap_or_else(Z::zero)
    }

    pub fn one() -> Self {
        Self::single(Monomial::one(), Z::one())
    }

    pub fn scale(&self, c: &Z) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Product by concatenation of factors; nothing is reordered.
    pub fn concat(&self, other: &ZCombination) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                let mut f = m.0.clone();
                f.extend(n.0.iter().cloned());
                out.add_term(Monomial(f), x * y);
            }
        }
        out
    }

    pub fn concat_all(parts: &[ZCombination]) -> Self {
        parts.iter().fold(Self::one(), |acc, p| acc.concat(p))
    }
}

impl From<IntegralGenerator> for ZCombination {
    fn from(g: IntegralGenerator) -> Self {
        ZCombination::single(Monomial::new(vec![g]), Z::one())
    }
}

/// Everything the engine needs about one algebra, one A and one order.
#[derive(Debug)]
pub struct ZContext {
    pub cb: Arc<ChevalleyBasis>,
    pub algebra: MonoidAlgebra,
    pub order: Order,
    /// Oracle alphabet ordered compatibly with `order`.
    pub env: Arc<EnvelopingContext>,
}

pub type Key = (usize, usize, usize);

impl ZContext {
    pub fn new(cb: Arc<ChevalleyBasis>, algebra: MonoidAlgebra, named: NamedOrder, a_order: AOrder) -> Arc<Self> {
        let order = Order::new(named, a_order, &cb, algebra.dim());
        let env = {
            let order = &order;
            let cb2 = &cb;
            Arc::new(EnvelopingContext::new(cb2, &algebra, |lie, a| order.letter_key(cb2, lie, a)))
        };
        Arc::new(ZContext {
            cb,
            algebra,
            order,
            env,
        })
    }

    /// Same algebra and coefficient model under another order.
    pub fn reordered(&self, named: NamedOrder, a_order: AOrder) -> Arc<Self> {
        ZContext::new(self.cb.clone(), self.algebra.clone(), named, a_order)
    }

    pub fn key(&self, g: &IntegralGenerator) -> Key {
        let o = &self.order;
        match g {
            IntegralGenerator::EvenDivided { root, k, b, .. } => (o.root_rank(*root), o.b_rank(*b), *k),
            IntegralGenerator::Odd { root, n, c } => (o.root_rank(*root), o.b_rank(*c), *n),
            IntegralGenerator::CartanP { i, .. } => (o.cartan_rank(*i), 0, 0),
        }
    }

    /// Whether the monomial is an element of ℬ for this order.
    pub fn is_basis(&self, m: &Monomial) -> bool {
        m.0.iter().all(|g| !g.is_unit()) && m.0.windows(2).all(|w| self.key(&w[0]) < self.key(&w[1]))
    }

    pub fn format_generator(&self, g: &IntegralGenerator) -> String {
        expr::print_generator(self, g)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        expr::print_monomial(self, m)
    }

    pub fn format_combination(&self, z: &ZCombination) -> String {
        if z.is_zero() {
            return "0".into();
        }
        z.terms()
            .iter()
            .map(|(m, c)| {
                if m.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    self.format_monomial(m)
                } else if (-c).is_one() {
                    format!("-{}", self.format_monomial(m))
                } else {
                    format!("{c}·{}", self.format_monomial(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn even_roots(&self) -> Vec<usize> {
        (0..self.cb.rs.roots.len()).filter(|&r| self.cb.rs.roots[r].parity == Parity::Even).collect()
    }

    pub fn odd_roots(&self) -> Vec<usize> {
        (0..self.cb.rs.roots.len()).filter(|&r| self.cb.rs.roots[r].parity == Parity::Odd).collect()
    }

    /// Index set I (with h_δ when the algebra is extended).
    pub fn cartan_indices(&self) -> std::ops::Range<usize> {
        0..self.cb.cartan_len()
    }

    pub fn height(&self, root: usize) -> i32 {
        self.cb.rs.roots[root].height
    }
}

impl fmt::Display for IntegralGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralGenerator::EvenDivided { root, k, b, r } => write!(f, "dp(#{root},{k},{b},{r})"),
            IntegralGenerator::CartanP { i, chi } => write!(f, "p({i},{chi})"),
            IntegralGenerator::Odd { root, n, c } => write!(f, "odd(#{root},{n},{c})"),
        }
    }
}

/// Build a context for an algebra spec in one call.
pub fn context(
    spec: &crate::exterior::AlgebraSpec,
    algebra: &str,
    named: NamedOrder,
    a_order: AOrder,
) -> Result<Arc<ZContext>> {
    let rs = crate::roots::root_decomposition(spec)?;
    let cb = crate::chevalley::construct_chevalley(rs)?;
    Ok(ZContext::new(Arc::new(cb), MonoidAlgebra::by_name(algebra)?, named, a_order))
}

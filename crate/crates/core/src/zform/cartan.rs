//! Engine-side arithmetic in U(𝔥⊗A), which is commutative.
//!
//! Elements are polynomials in the variables y_{i,b} = hᵢ⊗b. Products of
//! pᵢ(ψ) are recovered by peeling off leading terms: the top-degree part of
//! Πᵢ pᵢ(ψᵢ) is the single monomial Π (−1)^{|ψᵢ|} y^{ψᵢ}/ψᵢ!, so elimination
//! by top-degree monomials is triangular.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::combinatorics::{enumerate_f, factorial, multinomial, MonoidAlgebra, Multiset};
use crate::{Q, Z};

/// (i, b) ↦ exponent, sorted.
type Mono = Vec<((usize, usize), u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut m: BTreeMap<(usize, usize), u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *m.entry(*v).or_insert(0) += e;
    }
    m.into_iter().collect()
}

fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|(_, e)| e).sum()
}

impl Poly {
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Q::one());
        Poly { terms }
    }

    pub fn var(i: usize, b: usize, c: Q) -> Self {
        let mut p = Poly::default();
        p.add(vec![((i, b), 1)], c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        for (m, x) in &other.terms {
            self.add(m.clone(), x * c);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add(mono_mul(a, b), x * y);
            }
        }
        out
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(mono_degree).max()
    }
}

/// A product Πᵢ pᵢ(ψᵢ), sorted by i, empty ψᵢ omitted.
pub type PProduct = Vec<(usize, Multiset<usize>)>;

pub struct CartanEngine {
    algebra: MonoidAlgebra,
    memo: RefCell<HashMap<(Vec<(usize, Q)>, Multiset<usize>), Poly>>,
}

#[derive(Debug, Clone)]
pub struct NonIntegralProjection {
    pub product: PProduct,
    pub coefficient: Q,
}

impl CartanEngine {
    pub fn new(algebra: MonoidAlgebra) -> Self {
        CartanEngine {
            algebra,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// p_h(χ) for h = Σ cᵢhᵢ.
    pub fn p(&self, h: &[(usize, Q)], chi: &Multiset<usize>) -> Poly {
        let key = (h.to_vec(), chi.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = if chi.is_empty() {
            Poly::one()
        } else {
            let mut acc = Poly::default();
            for psi in enumerate_f(chi).into_iter().filter(|p| !p.is_empty()) {
                let Some(c) = self.algebra.pi(&psi) else { continue };
                let mut hc = Poly::default();
                for (i, x) in h {
                    hc.add_scaled(&Poly::var(*i, c, Q::one()), x);
                }
                let rest = self.p(h, &chi.sub(&psi).expect("ψ ≤ χ"));
                acc.add_scaled(&hc.mul(&rest), &Q::from_integer(multinomial(&psi)));
            }
            let mut out = Poly::default();
            out.add_scaled(&acc, &-Q::new(Z::one(), Z::from(chi.size())));
            out
        };
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn product(&self, parts: &PProduct) -> Poly {
        parts
            .iter()
            .fold(Poly::one(), |acc, (i, psi)| acc.mul(&self.p(&[(*i, Q::one())], psi)))
    }

    /// Express a polynomial over the products of pᵢ's with integer coefficients.
    pub fn project(&self, poly: &Poly) -> Result<Vec<(Z, PProduct)>, NonIntegralProjection> {
        let mut rest = poly.clone();
        let mut out = Vec::new();
        while let Some(d) = rest.degree() {
            let (mono, coeff) = rest
                .terms
                .iter()
                .rev()
                .find(|(m, _)| mono_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .expect("degree attained");
            let mut parts: BTreeMap<usize, Multiset<usize>> = BTreeMap::new();
            for ((i, b), e) in &mono {
                parts.entry(*i).or_default().insert(*b, *e);
            }
            let parts: PProduct = parts.into_iter().collect();
            // leading coefficient of the product: Π (−1)^{|ψ|} / Π ψ(b)!
            let mut lead = Q::one();
            for (_, psi) in &parts {
                if psi.size() % 2 == 1 {
                    lead = -lead;
                }
                for (_, e) in psi.iter() {
                    lead /= Q::from_integer(factorial(e));
                }
            }
            let c = coeff / lead;
            if !c.is_integer() {
                return Err(NonIntegralProjection {
                    product: parts,
                    coefficient: c,
                });
            }
            rest.add_scaled(&self.product(&parts), &-c.clone());
            out.push((c.to_integer(), parts));
        }
        Ok(out)
    }

    /// pᵢ(χ)pᵢ(φ) over the pᵢ(ψ).
    pub fn merge(&self, i: usize, chi: &Multiset<usize>, phi: &Multiset<usize>) -> Result<Vec<(Z, PProduct)>, NonIntegralProjection> {
        let h = [(i, Q::one())];
        self.project(&self.p(&h, chi).mul(&self.p(&h, phi)))
    }

    /// p_h(χ) over products of pᵢ's, for h = Σ nᵢhᵢ.
    pub fn expand(&self, h: &[(usize, Q)], chi: &Multiset<usize>) -> Result<Vec<(Z, PProduct)>, NonIntegralProjection> {
        self.project(&self.p(h, chi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn eng() -> CartanEngine {
        CartanEngine::new(MonoidAlgebra::truncated(4))
    }

    #[test]
    fn p_of_a_single_element_is_minus_h() {
        let e = eng();
        let p = e.p(&[(0, q(1))], &Multiset::single(1));
        assert_eq!(p, Poly::var(0, 1, q(-1)));
    }

    #[test]
    fn merge_has_binomial_leading_coefficient() {
        let e = eng();
        // p(χ_t)p(χ_t) = 2 p(2χ_t) + lower
        let out = e.merge(0, &Multiset::single(1), &Multiset::single(1)).unwrap();
        let lead = out.iter().find(|(_, parts)| parts == &vec![(0, Multiset::with(1, 2))]).unwrap();
        assert_eq!(lead.0, Z::from(2));
        // p(χ_t)² = (h⊗t)² = 2·½(h⊗t)², and ½(h⊗t)² = p(2χ_t) + ½(h⊗t²)... the t² part is −p(χ_{t²})
        let low = out.iter().find(|(_, parts)| parts == &vec![(0, Multiset::single(2))]).unwrap();
        assert_eq!(low.0, Z::from(-1));
    }

    #[test]
    fn projection_round_trips() {
        let e = eng();
        let parts: PProduct = vec![(0, [(0, 1), (1, 2)].into_iter().collect()), (1, Multiset::single(2))];
        let poly = e.product(&parts);
        assert_eq!(e.project(&poly).unwrap(), vec![(Z::one(), parts)]);
    }

    #[test]
    fn combination_of_cartan_elements_splits() {
        let e = eng();
        // h = h0 + h1: p_h(χ_t) = −(h0⊗t) − (h1⊗t) = p0(χ_t) + p1(χ_t)
        let out = e.expand(&[(0, q(1)), (1, q(1))], &Multiset::single(1)).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|(c, _)| c.is_one()));
    }
}

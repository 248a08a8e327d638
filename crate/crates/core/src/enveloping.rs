//! The ground-truth oracle: U(𝔤⊗A) over ℚ in PBW normal form.
//!
//! Letters are pairs (Chevalley basis element, basis element of A), totally
//! ordered by an injected key. A word is a non-decreasing list of letter
//! indices in which no odd letter repeats. Brackets are recomputed here from
//! the superderivations themselves, so a corrupted engine table cannot leak
//! into the oracle.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chevalley::{ChevalleyBasis, Combination};
use crate::combinatorics::{enumerate_f, factorial, multinomial, MonoidAlgebra, Multiset};
use crate::exterior::{Parity, SuperDerivation};
use crate::linalg::CoordinateSolver;
use crate::{Error, Result, Q};

pub type Word = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub lie: usize,
    pub a: usize,
}

/// Everything that is shared and immutable: alphabet, parities, brackets.
#[derive(Debug)]
pub struct EnvelopingContext {
    pub algebra: MonoidAlgebra,
    letters: Vec<Letter>,
    index: HashMap<Letter, u16>,
    odd: Vec<bool>,
    labels: Vec<String>,
    // [letter, letter] as a combination of letters
    brackets: Vec<Vec<Vec<(u16, Q)>>>,
    // Cartan letters per A-basis element, for p-expansions
    cartan_lie: Vec<usize>,
}

impl EnvelopingContext {
    /// `key(lie, a)` fixes the alphabet order; it must be injective.
    pub fn new<K: Ord>(cb: &ChevalleyBasis, algebra: &MonoidAlgebra, key: impl Fn(usize, usize) -> K) -> Self {
        let mut letters: Vec<Letter> = (0..cb.dim())
            .flat_map(|lie| (0..algebra.dim()).map(move |a| Letter { lie, a }))
            .collect();
        letters.sort_by(|x, y| key(x.lie, x.a).cmp(&key(y.lie, y.a)));
        assert!(letters.len() < u16::MAX as usize);
        let index: HashMap<Letter, u16> = letters.iter().enumerate().map(|(i, l)| (*l, i as u16)).collect();
        let odd = letters.iter().map(|l| cb.parity[l.lie] == Parity::Odd).collect();
        let labels = letters
            .iter()
            .map(|l| format!("{}⊗{}", cb.label(l.lie), algebra.label(l.a)))
            .collect();

        let lie = lie_brackets(cb);
        let n = letters.len();
        let mut brackets = Vec::with_capacity(n);
        for x in &letters {
            let mut row = Vec::with_capacity(n);
            for y in &letters {
                let entry: Vec<(u16, Q)> = match algebra.mul(x.a, y.a) {
                    None => Vec::new(),
                    Some(ab) => lie[x.lie][y.lie]
                        .iter()
                        .map(|(t, c)| (index[&Letter { lie: *t, a: ab }], c.clone()))
                        .collect(),
                };
                row.push(entry);
            }
            brackets.push(row);
        }
        EnvelopingContext {
            algebra: algebra.clone(),
            letters,
            index,
            odd,
            labels,
            brackets,
            cartan_lie: (0..cb.cartan_len()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, lie: usize, a: usize) -> u16 {
        self.index[&Letter { lie, a }]
    }

    pub fn letter_info(&self, l: u16) -> Letter {
        self.letters[l as usize]
    }

    pub fn is_odd(&self, l: u16) -> bool {
        self.odd[l as usize]
    }

    pub fn label(&self, l: u16) -> &str {
        &self.labels[l as usize]
    }

    pub fn bracket(&self, x: u16, y: u16) -> &[(u16, Q)] {
        &self.brackets[x as usize][y as usize]
    }

    pub fn cartan_count(&self) -> usize {
        self.cartan_lie.len()
    }

    pub fn word_parity(&self, w: &[u16]) -> Parity {
        if w.iter().filter(|&&l| self.is_odd(l)).count() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn format(&self, u: &EnvElement) -> String {
        if u.is_zero() {
            return "0".into();
        }
        u.terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    return c.to_string();
                }
                let body: Vec<String> = runs(w)
                    .into_iter()
                    .map(|(l, e)| {
                        if e == 1 {
                            format!("({})", self.label(l))
                        } else {
                            format!("({})^{e}", self.label(l))
                        }
                    })
                    .collect();
                format!("{c}·{}", body.join(""))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn runs(w: &[u16]) -> Vec<(u16, usize)> {
    let mut out: Vec<(u16, usize)> = Vec::new();
    for &l in w {
        match out.last_mut() {
            Some((x, e)) if *x == l => *e += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

/// Brackets of the Chevalley basis read off the superderivations.
pub fn lie_brackets(cb: &ChevalleyBasis) -> Vec<Vec<Combination>> {
    let coords: Vec<Vec<Q>> = cb.elements.iter().map(SuperDerivation::coordinates).collect();
    let solver = CoordinateSolver::new(&coords).expect("Chevalley basis is a basis");
    let d = cb.dim();
    let mut out = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let b = cb.elements[i].supercommutator(&cb.elements[j]).expect("same rank");
            if b.is_zero() {
                continue;
            }
            let c = solver.solve(&b.coordinates()).expect("closed under bracket");
            out[i][j] = c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        }
    }
    out
}

/// An element of U(𝔤⊗A): rational combination of PBW words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnvElement {
    terms: BTreeMap<Word, Q>,
}

impl EnvElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new(), Q::one())
    }

    pub fn word(w: Word, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        EnvElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn coefficient(&self, w: &[u16]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    pub fn add_scaled(&mut self, other: &EnvElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Q) -> EnvElement {
        let mut out = EnvElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Filtration degree: longest word.
    pub fn degree(&self) -> Result<usize> {
        self.terms.keys().map(Vec::len).max().ok_or(Error::ZeroDegree)
    }

    /// Words of maximal length.
    pub fn top(&self) -> EnvElement {
        let Ok(d) = self.degree() else {
            return EnvElement::zero();
        };
        EnvElement {
            terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }
}

impl std::ops::Add for &EnvElement {
    type Output = EnvElement;
    fn add(self, rhs: &EnvElement) -> EnvElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl std::ops::Sub for &EnvElement {
    type Output = EnvElement;
    fn sub(self, rhs: &EnvElement) -> EnvElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl fmt::Display for EnvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}·{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A per-thread handle on a shared context, with its own memo tables.
pub struct Oracle {
    pub ctx: Arc<EnvelopingContext>,
    right: RefCell<HashMap<(Word, u16), Rc<EnvElement>>>,
    p_memo: RefCell<HashMap<(Vec<(usize, Q)>, Multiset<usize>), Rc<EnvElement>>>,
}

impl Oracle {
    pub fn new(ctx: Arc<EnvelopingContext>) -> Self {
        Oracle {
            ctx,
            right: RefCell::new(HashMap::new()),
            p_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn letter(&self, lie: usize, a: usize) -> EnvElement {
        EnvElement::word(vec![self.ctx.letter(lie, a)], Q::one())
    }

    /// g ⊗ a for a possibly vanishing product a.
    pub fn generator(&self, lie: usize, a: Option<usize>) -> EnvElement {
        match a {
            Some(a) => self.letter(lie, a),
            None => EnvElement::zero(),
        }
    }

    /// word · letter, normalized.
    fn right_mul(&self, w: &[u16], l: u16) -> Rc<EnvElement> {
        let key = (w.to_vec(), l);
        if let Some(hit) = self.right.borrow().get(&key) {
            return hit.clone();
        }
        let ctx = &*self.ctx;
        let out = match w.split_last() {
            None => EnvElement::word(vec![l], Q::one()),
            Some((&last, prefix)) => {
                if last < l || (last == l && !ctx.is_odd(l)) {
                    let mut v = w.to_vec();
                    v.push(l);
                    EnvElement::word(v, Q::one())
                } else if last == l {
                    // odd square: l·l = ½[l,l]
                    let half = Q::new(1.into(), 2.into());
                    let mut acc = EnvElement::zero();
                    for (z, c) in ctx.bracket(l, l).iter() {
                        acc.add_scaled(&self.right_mul(prefix, *z), &(c * &half));
                    }
                    acc
                } else {
                    // last·l = ±l·last + [last,l]
                    let sign = if ctx.is_odd(last) && ctx.is_odd(l) { -Q::one() } else { Q::one() };
                    let mut acc = EnvElement::zero();
                    let moved = self.right_mul(prefix, l);
                    for (v, c) in moved.terms() {
                        acc.add_scaled(&self.right_mul(v, last), &(c * &sign));
                    }
                    for (z, c) in ctx.bracket(last, l).iter() {
                        acc.add_scaled(&self.right_mul(prefix, *z), c);
                    }
                    acc
                }
            }
        };
        let out = Rc::new(out);
        self.right.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn mul(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        let mut out = EnvElement::zero();
        for (w, c) in u.terms() {
            let cur = EnvElement::word(w.clone(), c.clone());
            for (x, d) in v.terms() {
                let mut acc = cur.clone();
                for &l in x {
                    let mut next = EnvElement::zero();
                    for (y, e) in acc.terms() {
                        next.add_scaled(&self.right_mul(y, l), e);
                    }
                    acc = next;
                }
                out.add_scaled(&acc, d);
            }
        }
        out
    }

    pub fn product(&self, factors: &[EnvElement]) -> EnvElement {
        factors.iter().fold(EnvElement::one(), |acc, f| self.mul(&acc, f))
    }

    /// Super commutator of homogeneous elements.
    pub fn supercommutator(&self, u: &EnvElement, v: &EnvElement) -> EnvElement {
        let sign = if self.parity(u) == Parity::Odd && self.parity(v) == Parity::Odd {
            -Q::one()
        } else {
            Q::one()
        };
        let mut out = self.mul(u, v);
        out.add_scaled(&self.mul(v, u), &-sign);
        out
    }

    /// Parity of the first word (elements built here are homogeneous).
    pub fn parity(&self, u: &EnvElement) -> Parity {
        u.terms().keys().next().map_or(Parity::Even, |w| self.ctx.word_parity(w))
    }

    /// (g⊗a)^{(r)}.
    pub fn divided_power(&self, lie: usize, a: Option<usize>, r: u32) -> Result<EnvElement> {
        if r == 0 {
            return Ok(EnvElement::one());
        }
        let Some(a) = a else { return Ok(EnvElement::zero()) };
        let l = self.ctx.letter(lie, a);
        if self.ctx.is_odd(l) {
            return if r == 1 { Ok(self.letter(lie, a)) } else { Err(Error::OddDividedPower(r)) };
        }
        Ok(EnvElement::word(vec![l; r as usize], Q::new(1.into(), factorial(r))))
    }

    /// p_h(χ) for a Cartan element h = Σ cᵢhᵢ, by the defining recursion.
    pub fn p(&self, h: &[(usize, Q)], chi: &Multiset<usize>) -> EnvElement {
        let key = (h.to_vec(), chi.clone());
        if let Some(hit) = self.p_memo.borrow().get(&key) {
            return (**hit).clone();
        }
        let out = if chi.is_empty() {
            EnvElement::one()
        } else {
            let mut acc = EnvElement::zero();
            for psi in enumerate_f(chi).into_iter().filter(|p| !p.is_empty()) {
                let Some(c) = self.ctx.algebra.pi(&psi) else { continue };
                let mut hc = EnvElement::zero();
                for (i, x) in h {
                    hc.add_scaled(&self.letter(*i, c), x);
                }
                let rest = self.p(h, &chi.sub(&psi).expect("ψ ≤ χ"));
                acc.add_scaled(&self.mul(&hc, &rest), &Q::from_integer(multinomial(&psi)));
            }
            acc.scale(&-Q::new(1.into(), chi.size().into()))
        };
        self.p_memo.borrow_mut().insert(key, Rc::new(out.clone()));
        out
    }

    /// pᵢ(χ) for the i-th Cartan basis element.
    pub fn p_i(&self, i: usize, chi: &Multiset<usize>) -> EnvElement {
        self.p(&[(self.ctx.cartan_lie[i], Q::one())], chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::construct_chevalley;
    use crate::exterior::{AlgebraSpec, Family};
    use crate::roots::root_decomposition;
    use proptest::prelude::*;

    fn setup(f: Family, n: usize, a: &str) -> (ChevalleyBasis, Oracle) {
        let cb = construct_chevalley(root_decomposition(&AlgebraSpec::new(f, n)).unwrap()).unwrap();
        let alg = MonoidAlgebra::by_name(a).unwrap();
        let ctx = Arc::new(EnvelopingContext::new(&cb, &alg, |lie, a| (lie, a)));
        (cb, Oracle::new(ctx))
    }

    fn root(cb: &ChevalleyBasis, label: &str) -> usize {
        cb.rs.roots.iter().position(|r| r.label == label).unwrap()
    }

    #[test]
    fn one_swap_produces_the_bracket() {
        let (cb, o) = setup(Family::W, 2, "trunc-poly-4");
        let (a, m) = (root(&cb, "ε1-ε2"), root(&cb, "-ε1+ε2"));
        let (x, y) = (cb.x(a, 1), cb.x(m, 1));
        assert!(x > y);
        let t = o.ctx.algebra.find("t").unwrap();
        let lhs = o.mul(&o.letter(x, t), &o.letter(y, 0));
        let mut want = o.mul(&o.letter(y, 0), &o.letter(x, t));
        for (h, c) in &lie_brackets(&cb)[x][y] {
            want.add_scaled(&o.letter(*h, t), c);
        }
        assert_eq!(lhs, want);
        assert_eq!(lhs.degree().unwrap(), 2);
    }

    #[test]
    fn odd_generators_square_to_half_bracket() {
        let (cb, o) = setup(Family::W, 2, "C");
        let d1 = cb.x(root(&cb, "-ε1"), 1);
        assert!(o.mul(&o.letter(d1, 0), &o.letter(d1, 0)).is_zero());
    }

    #[test]
    fn divided_powers_merge_binomially() {
        let (cb, o) = setup(Family::W, 2, "cyclic-4");
        let x = cb.x(root(&cb, "ε1-ε2"), 1);
        for (r, s) in [(1, 1), (2, 1), (2, 3)] {
            let lhs = o.mul(&o.divided_power(x, Some(1), r).unwrap(), &o.divided_power(x, Some(1), s).unwrap());
            let c = Q::from_integer(crate::combinatorics::gen_binomial((r + s) as i64, s));
            assert_eq!(lhs, o.divided_power(x, Some(1), r + s).unwrap().scale(&c));
        }
        let d = cb.x(root(&cb, "-ε1"), 1);
        assert_eq!(o.divided_power(d, Some(0), 2), Err(Error::OddDividedPower(2)));
        assert_eq!(o.divided_power(x, Some(0), 0).unwrap(), EnvElement::one());
    }

    #[test]
    fn p_small_cases() {
        let (cb, o) = setup(Family::W, 2, "trunc-poly-4");
        let t = o.ctx.algebra.find("t").unwrap();
        let t2 = o.ctx.algebra.find("t^2").unwrap();
        assert_eq!(o.p_i(0, &Multiset::new()), EnvElement::one());
        assert_eq!(o.p_i(0, &Multiset::single(t)), o.letter(cb.h(0), t).scale(&-Q::one()));
        // p(2χ_t) = ½(h⊗t)² − ½(h⊗t²)
        let h = o.letter(cb.h(0), t);
        let half = Q::new(1.into(), 2.into());
        let mut want = o.mul(&h, &h).scale(&half);
        want.add_scaled(&o.letter(cb.h(0), t2), &-half);
        assert_eq!(o.p_i(0, &Multiset::with(t, 2)), want);
    }

    #[test]
    fn p_leading_term() {
        let (cb, o) = setup(Family::W, 2, "cyclic-4");
        let chi: Multiset<usize> = [(1, 2), (2, 1)].into_iter().collect();
        let p = o.p_i(1, &chi);
        assert_eq!(p.degree().unwrap(), 3);
        let want = o.product(&[
            o.divided_power(cb.h(1), Some(1), 2).unwrap(),
            o.divided_power(cb.h(1), Some(2), 1).unwrap(),
        ]);
        assert_eq!(p.top(), want.scale(&-Q::one()));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(EnvElement::zero().degree(), Err(Error::ZeroDegree));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn multiplication_is_associative(ws in proptest::collection::vec(proptest::collection::vec((0usize..24, 0usize..4), 1..3), 3)) {
            let (_, o) = setup(Family::W, 3, "trunc-poly-4");
            let el: Vec<EnvElement> = ws
                .iter()
                .map(|w| o.product(&w.iter().map(|&(l, a)| o.letter(l, a)).collect::<Vec<_>>()))
                .collect();
            let left = o.mul(&o.mul(&el[0], &el[1]), &el[2]);
            let right = o.mul(&el[0], &o.mul(&el[1], &el[2]));
            prop_assert_eq!(&left, &right);
            // parity is additive on every word
            let p: usize = ws.iter().flatten().filter(|&&(l, a)| o.ctx.is_odd(o.ctx.letter(l, a))).count();
            for w in left.terms().keys() {
                prop_assert_eq!(o.ctx.word_parity(w) == Parity::Odd, p % 2 == 1);
            }
            if !left.is_zero() {
                let bound: usize = ws.iter().map(Vec::len).sum();
                prop_assert!(left.degree().unwrap() <= bound);
            }
        }

        #[test]
        fn letters_satisfy_the_defining_relation(x in 0usize..17, y in 0usize..17, a in 0usize..4, b in 0usize..4) {
            let (cb, o) = setup(Family::S, 3, "cyclic-4");
            let (u, v) = (o.letter(x, a), o.letter(y, b));
            let lhs = o.supercommutator(&u, &v);
            let mut want = EnvElement::zero();
            let ab = o.ctx.algebra.mul(a, b);
            for (t, c) in &lie_brackets(&cb)[x][y] {
                want.add_scaled(&o.generator(*t, ab), c);
            }
            prop_assert_eq!(lhs, want);
        }
    }
}

//! Multisets, the index sets 𝓕, 𝓒𝓢, 𝓒𝓟, and the coefficient algebra A.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Z};

/// A finitely supported function S → ℤ≥0. Zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, u32>,
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Multiset { counts: BTreeMap::new() }
    }

    /// χ_s.
    pub fn single(s: T) -> Self {
        Self::with(s, 1)
    }

    pub fn with(s: T, count: u32) -> Self {
        let mut m = Self::new();
        m.insert(s, count);
        m
    }

    pub fn insert(&mut self, s: T, count: u32) {
        if count > 0 {
            *self.counts.entry(s).or_insert(0) += count;
        }
    }

    pub fn count(&self, s: &T) -> u32 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    /// |χ|.
    pub fn size(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u32)> {
        self.counts.iter().map(|(k, v)| (k, *v))
    }

    /// ψ ≤ χ pointwise.
    pub fn le(&self, other: &Self) -> bool {
        self.iter().all(|(s, c)| c <= other.count(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in other.iter() {
            out.insert(s.clone(), c);
        }
        out
    }

    /// χ − ψ, defined only when ψ ≤ χ.
    pub fn sub(&self, other: &Self) -> Option<Self> {
        if !other.le(self) {
            return None;
        }
        let mut out = self.clone();
        for (s, c) in other.iter() {
            let e = out.counts.get_mut(s).expect("le checked");
            *e -= c;
            if *e == 0 {
                out.counts.remove(s);
            }
        }
        Some(out)
    }

    /// k·χ.
    pub fn times(&self, k: u32) -> Self {
        let mut out = Self::new();
        for (s, c) in self.iter() {
            out.insert(s.clone(), c * k);
        }
        out
    }

    pub fn map<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> Multiset<U> {
        let mut out = Multiset::new();
        for (s, c) in self.iter() {
            out.insert(f(s), c);
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for s in iter {
            m.insert(s, 1);
        }
        m
    }
}

impl<T: Ord + Clone> FromIterator<(T, u32)> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = (T, u32)>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for (s, c) in iter {
            m.insert(s, c);
        }
        m
    }
}

impl<T: Ord + fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}:{c}")?;
        }
        write!(f, "}}")
    }
}

pub fn factorial(n: u32) -> Z {
    (1..=n).fold(Z::one(), |acc, k| acc * Z::from(k))
}

/// m(ψ) = |ψ|! / Π ψ(a)!.
pub fn multinomial<T: Ord + Clone>(psi: &Multiset<T>) -> Z {
    let den = psi.iter().fold(Z::one(), |acc, (_, c)| acc * factorial(c));
    factorial(psi.size()) / den
}

/// binom(t, r) = t(t−1)⋯(t−r+1)/r! for any integer t.
pub fn gen_binomial(t: i64, r: u32) -> Z {
    let mut num = Z::one();
    for j in 0..r {
        num *= Z::from(t - j as i64);
    }
    let (q, rem) = num.div_rem(&factorial(r));
    debug_assert!(rem.is_zero());
    q
}

/// 𝓕(χ): every sub-multiset of χ, smallest first, then lexicographically.
pub fn enumerate_f<T: Ord + Clone>(chi: &Multiset<T>) -> Vec<Multiset<T>> {
    let entries: Vec<(T, u32)> = chi.iter().map(|(s, c)| (s.clone(), c)).collect();
    let mut out = vec![Multiset::new()];
    for (s, c) in &entries {
        let mut next = Vec::with_capacity(out.len() * (*c as usize + 1));
        for base in &out {
            for k in 0..=*c {
                let mut m = base.clone();
                m.insert(s.clone(), k);
                next.push(m);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    out
}

/// 𝓕_k(χ).
pub fn enumerate_f_k<T: Ord + Clone>(chi: &Multiset<T>, k: u32) -> Vec<Multiset<T>> {
    enumerate_f(chi).into_iter().filter(|m| m.size() == k).collect()
}

/// Whether the zero multiset counts as a part in 𝓒𝓢.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroParts {
    #[default]
    Included,
    Excluded,
}

/// 𝓒𝓢_k(χ): multisets of k parts φ ∈ 𝓕 with Σ ψ(φ)φ ≤ χ.
pub fn enumerate_cs_k<T: Ord + Clone>(chi: &Multiset<T>, k: u32, zero: ZeroParts) -> Vec<Multiset<Multiset<T>>> {
    let parts: Vec<Multiset<T>> = enumerate_f(chi)
        .into_iter()
        .filter(|p| zero == ZeroParts::Included || !p.is_empty())
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    cs_rec(&parts, 0, k, chi, &mut chosen, &mut out);
    out
}

fn cs_rec<T: Ord + Clone>(
    parts: &[Multiset<T>],
    from: usize,
    left: u32,
    room: &Multiset<T>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Multiset<Multiset<T>>>,
) {
    if left == 0 {
        out.push(chosen.iter().map(|&i| parts[i].clone()).collect());
        return;
    }
    for i in from..parts.len() {
        if let Some(rest) = room.sub(&parts[i]) {
            chosen.push(i);
            cs_rec(parts, i, left - 1, &rest, chosen, out);
            chosen.pop();
        }
    }
}

/// Σ_φ ψ(φ)φ.
pub fn weighted_sum<T: Ord + Clone>(psi: &Multiset<Multiset<T>>) -> Multiset<T> {
    psi.iter().fold(Multiset::new(), |acc, (phi, c)| acc.add(&phi.times(c)))
}

/// 𝓒𝓟_k(j): multisets of k non-negative integers summing to j.
pub fn enumerate_cp_k(j: u32, k: u32) -> Vec<Multiset<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    cp_rec(j, k, 0, &mut cur, &mut out);
    out
}

fn cp_rec(left: u32, k: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Multiset<u32>>) {
    if k == 0 {
        if left == 0 {
            out.push(cur.iter().copied().collect());
        }
        return;
    }
    for m in min..=left {
        if m * k > left {
            break;
        }
        cur.push(m);
        cp_rec(left - m, k - 1, m, cur, out);
        cur.pop();
    }
}

/// A commutative monoid algebra: a finite basis closed under multiplication,
/// optionally with an absorbing zero (products that vanish map to `None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoidAlgebra {
    pub name: String,
    labels: Vec<String>,
    table: Vec<Vec<Option<usize>>>,
    unit: usize,
}

impl MonoidAlgebra {
    /// ℂ itself, basis {1}.
    pub fn scalars() -> Self {
        MonoidAlgebra {
            name: "C".into(),
            labels: vec!["1".into()],
            table: vec![vec![Some(0)]],
            unit: 0,
        }
    }

    /// ℂ[t]/(tᴺ), basis {1, …, t^{N−1}}.
    pub fn truncated(n: usize) -> Self {
        Self::powers(format!("trunc-poly-{n}"), n, |e| (e < n).then_some(e))
    }

    /// ℂ[t]/(tᴺ − 1), basis {1, …, t^{N−1}}.
    pub fn cyclic(n: usize) -> Self {
        Self::powers(format!("cyclic-{n}"), n, |e| Some(e % n))
    }

    fn powers(name: String, n: usize, reduce: impl Fn(usize) -> Option<usize>) -> Self {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| reduce(a + b)).collect()).collect();
        MonoidAlgebra {
            name,
            labels,
            table,
            unit: 0,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        if name == "C" || name == "scalars" {
            return Ok(Self::scalars());
        }
        let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok()).filter(|&n| n >= 1);
        if let Some(n) = parse("trunc-poly-") {
            Ok(Self::truncated(n))
        } else if let Some(n) = parse("cyclic-") {
            Ok(Self::cyclic(n))
        } else {
            Err(Error::UnknownName(format!("A-model {name}")))
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        let label = label.trim();
        let alt = match label {
            "t^1" => "t",
            "t^0" => "1",
            other => other,
        };
        self.labels.iter().position(|l| l == alt)
    }

    pub fn mul(&self, a: usize, b: usize) -> Option<usize> {
        self.table[a][b]
    }

    pub fn mul_opt(&self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        self.mul(a?, b?)
    }

    pub fn pow(&self, a: usize, m: u32) -> Option<usize> {
        (0..m).try_fold(self.unit, |acc, _| self.mul(acc, a))
    }

    /// π(ψ) = Π a^{ψ(a)}, with π(0) = 1.
    pub fn pi(&self, psi: &Multiset<usize>) -> Option<usize> {
        psi.iter().try_fold(self.unit, |acc, (a, c)| self.mul(acc, self.pow(*a, c)?))
    }

    /// Unit law, commutativity and associativity on the full table.
    pub fn check_axioms(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| self.mul(self.unit, a) == Some(a))
            && (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|c| self.mul_opt(self.mul(a, b), Some(c)) == self.mul_opt(Some(a), self.mul(b, c)))
                })
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(xs: &[(char, u32)]) -> Multiset<char> {
        xs.iter().copied().collect()
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&ms(&[('a', 1), ('b', 1)])), Z::from(2));
        assert_eq!(multinomial(&ms(&[('a', 2)])), Z::from(1));
        assert_eq!(multinomial(&ms(&[('a', 2), ('b', 1)])), Z::from(3));
    }

    #[test]
    fn binomial_with_negative_top() {
        assert_eq!(gen_binomial(-1, 2), Z::from(1));
        assert_eq!(gen_binomial(3, 0), Z::from(1));
        assert_eq!(gen_binomial(-2, 3), Z::from(-4));
        assert_eq!(gen_binomial(2, 3), Z::from(0));
    }

    #[test]
    fn pi_in_truncated_polynomials() {
        let a = MonoidAlgebra::truncated(4);
        let t = a.find("t").unwrap();
        let t2 = a.find("t^2").unwrap();
        assert_eq!(a.pi(&Multiset::new()), Some(a.unit()));
        assert_eq!(a.pi(&Multiset::with(t, 2)), Some(t2));
        assert_eq!(a.pi(&[t, t2].into_iter().collect()), a.find("t^3"));
        assert_eq!(a.pi(&Multiset::with(t2, 2)), None);
        assert_eq!(MonoidAlgebra::cyclic(4).pi(&Multiset::with(t2, 2)), Some(0));
    }

    #[test]
    fn models_satisfy_monoid_laws() {
        for name in ["C", "trunc-poly-4", "cyclic-4"] {
            assert!(MonoidAlgebra::by_name(name).unwrap().check_axioms(), "{name}");
        }
        assert!(MonoidAlgebra::by_name("poly").is_err());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_f_k(&ms(&[('a', 2)]), 1), vec![ms(&[('a', 1)])]);
        assert_eq!(enumerate_f_k(&ms(&[('a', 1), ('b', 1)]), 1).len(), 2);
        assert_eq!(enumerate_cp_k(2, 1), vec![Multiset::with(2, 1)]);
        assert_eq!(enumerate_cp_k(0, 0), vec![Multiset::new()]);
        let cp = enumerate_cp_k(3, 2);
        assert_eq!(cp, vec![[0, 3].into_iter().collect(), [1, 2].into_iter().collect()]);
    }

    #[test]
    fn cs_on_single_element() {
        let chi = ms(&[('a', 1)]);
        let with_zero = enumerate_cs_k(&chi, 1, ZeroParts::Included);
        assert_eq!(with_zero.len(), 2);
        assert!(with_zero.contains(&Multiset::single(Multiset::new())));
        assert_eq!(enumerate_cs_k(&chi, 1, ZeroParts::Excluded), vec![Multiset::single(chi.clone())]);
        let empty: Multiset<char> = Multiset::new();
        assert_eq!(enumerate_cs_k(&empty, 3, ZeroParts::Included), vec![Multiset::with(Multiset::new(), 3)]);
        assert!(enumerate_cs_k(&empty, 3, ZeroParts::Excluded).is_empty());
    }

    fn naive_sub(chi: &Multiset<char>) -> Vec<Multiset<char>> {
        let letters: Vec<char> = chi.iter().flat_map(|(s, c)| std::iter::repeat(*s).take(c as usize)).collect();
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << letters.len()) {
            let m: Multiset<char> = (0..letters.len()).filter(|i| mask >> i & 1 == 1).map(|i| letters[i]).collect();
            seen.insert(m);
        }
        seen.into_iter().collect()
    }

    fn chi_strategy() -> impl Strategy<Value = Multiset<char>> {
        (0u32..3, 0u32..3, 0u32..2).prop_map(|(a, b, c)| ms(&[('a', a), ('b', b), ('c', c)]))
    }

    proptest! {
        #[test]
        fn f_is_exhaustive(chi in chi_strategy()) {
            let mut ours = enumerate_f(&chi);
            ours.sort();
            prop_assert_eq!(ours, naive_sub(&chi));
        }

        #[test]
        fn f_k_counts_match_generating_function(chi in chi_strategy(), k in 0u32..6) {
            // coefficient of xᵏ in Π (1 + x + … + x^{χ(a)})
            let mut poly = vec![1u64];
            for (_, c) in chi.iter() {
                let mut next = vec![0u64; poly.len() + c as usize];
                for (i, p) in poly.iter().enumerate() {
                    for j in 0..=c as usize {
                        next[i + j] += p;
                    }
                }
                poly = next;
            }
            let want = poly.get(k as usize).copied().unwrap_or(0);
            prop_assert_eq!(enumerate_f_k(&chi, k).len() as u64, want);
        }

        #[test]
        fn cs_is_exhaustive_and_duplicate_free(chi in chi_strategy(), k in 0u32..4) {
            let got = enumerate_cs_k(&chi, k, ZeroParts::Included);
            let set: std::collections::BTreeSet<_> = got.iter().cloned().collect();
            prop_assert_eq!(set.len(), got.len());
            // brute force: all k-tuples of sub-multisets, sorted
            let subs = naive_sub(&chi);
            let mut brute = std::collections::BTreeSet::new();
            let mut idx = vec![0usize; k as usize];
            loop {
                let psi: Multiset<Multiset<char>> = idx.iter().map(|&i| subs[i].clone()).collect();
                if weighted_sum(&psi).le(&chi) {
                    brute.insert(psi);
                }
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < subs.len() { break; }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() { break; }
            }
            prop_assert_eq!(set, brute);
        }

        #[test]
        fn cs_one_matches_f(chi in chi_strategy()) {
            let parts: Vec<Multiset<char>> = enumerate_cs_k(&chi, 1, ZeroParts::Excluded)
                .into_iter()
                .map(|psi| weighted_sum(&psi))
                .collect();
            let mut f: Vec<_> = enumerate_f(&chi).into_iter().filter(|m| !m.is_empty()).collect();
            let mut p = parts.clone();
            p.sort();
            f.sort();
            prop_assert_eq!(p, f);
        }

        #[test]
        fn cp_matches_brute_force(j in 0u32..6, k in 0u32..6) {
            let got = enumerate_cp_k(j, k);
            let mut brute = std::collections::BTreeSet::new();
            let total = (j + 1).pow(k);
            for code in 0..total {
                let mut c = code;
                let parts: Vec<u32> = (0..k).map(|_| { let d = c % (j + 1); c /= j + 1; d }).collect();
                if parts.iter().sum::<u32>() == j {
                    brute.insert(parts.into_iter().collect::<Multiset<u32>>());
                }
            }
            prop_assert_eq!(got.len(), brute.len());
            prop_assert_eq!(got.into_iter().collect::<std::collections::BTreeSet<_>>(), brute);
        }

        #[test]
        fn multinomial_times_factorials(chi in chi_strategy()) {
            let den = chi.iter().fold(Z::one(), |acc, (_, c)| acc * factorial(c));
            prop_assert_eq!(multinomial(&chi) * den, factorial(chi.size()));
        }

        #[test]
        fn binomial_matches_pascal(t in -6i64..7, r in 1u32..6) {
            prop_assert_eq!(gen_binomial(t, r), gen_binomial(t - 1, r) + gen_binomial(t - 1, r - 1));
        }
    }
}

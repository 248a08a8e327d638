// Values from sources independent of the engine: closed-form dimensions,
// classical generating functions, and Kostant's formula in U(sl₂).

use cartan_zform::combinatorics::{enumerate_f, gen_binomial, Multiset};
use cartan_zform::enveloping::{EnvElement, Oracle};
use cartan_zform::exterior::{build_algebra, AlgebraSpec, Family};
use cartan_zform::roots::{neg, root_decomposition};
use cartan_zform::zform::lift::evaluate_combination;
use cartan_zform::zform::{context, AOrder, Engine, IntegralGenerator as G, Monomial, NamedOrder};
use cartan_zform::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[test]
fn algebra_dimensions_match_closed_forms() {
    for n in 2..=5usize {
        let p = 1usize << n;
        assert_eq!(build_algebra(AlgebraSpec::new(Family::W, n)).unwrap().dim(), n * p);
        if n >= 3 {
            assert_eq!(build_algebra(AlgebraSpec::new(Family::S, n)).unwrap().dim(), (n - 1) * p + 1);
        }
        if n >= 4 {
            assert_eq!(build_algebra(AlgebraSpec::new(Family::H, n)).unwrap().dim(), p - 2);
        }
    }
    assert_eq!(build_algebra(AlgebraSpec::new(Family::STilde, 4)).unwrap().dim(), 3 * 16 + 1);
}

#[test]
fn root_counts_of_small_algebras() {
    // W(n): weights of ξ_I∂_j are Σ_{i∈I} εᵢ − ε_j, counted without the zero weight
    let count = |n: usize| {
        let mut ws = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << n) {
            for j in 0..n {
                let w: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64 - (i == j) as i64).collect();
                if w.iter().any(|&x| x != 0) {
                    ws.insert(w);
                }
            }
        }
        ws.len()
    };
    for n in [2, 3] {
        let rs = root_decomposition(&AlgebraSpec::new(Family::W, n)).unwrap();
        assert_eq!(rs.roots.len(), count(n));
    }
}

#[test]
fn sub_multiset_count_is_a_product() {
    let mut chi = Multiset::new();
    chi.insert(0usize, 3);
    chi.insert(1, 1);
    chi.insert(4, 2);
    assert_eq!(enumerate_f(&chi).len(), 4 * 2 * 3);
}

#[test]
fn generalized_binomials() {
    assert_eq!(gen_binomial(5, 2), BigInt::from(10));
    assert_eq!(gen_binomial(-1, 3), BigInt::from(-1));
    assert_eq!(gen_binomial(-2, 2), BigInt::from(3));
    assert_eq!(gen_binomial(2, 5), BigInt::zero());
}

/// Coefficients of t(t−1)⋯(t−k+1) in powers of t.
fn falling(k: usize) -> Vec<Q> {
    let mut c = vec![Q::one()];
    for i in 0..k {
        let mut next = vec![Q::zero(); c.len() + 1];
        for (d, x) in c.iter().enumerate() {
            next[d + 1] += x.clone();
            next[d] -= x * q(i as i64);
        }
        c = next;
    }
    c
}

fn factorial(k: usize) -> Q {
    (1..=k as i64).fold(Q::one(), |acc, i| acc * q(i))
}

#[test]
fn p_over_scalars_is_a_signed_binomial() {
    // over A = ℂ the generating series is exp(−Σ h uʳ/r) = (1 − u)^h
    let ctx = context(&AlgebraSpec::new(Family::W, 2), "C", NamedOrder::Height, AOrder::Natural).unwrap();
    let oracle = Oracle::new(ctx.env.clone());
    let one = ctx.algebra.unit();
    let h = ctx.env.letter(ctx.cb.h(0), one);
    for k in 1..=4usize {
        let p = oracle.p_i(0, &Multiset::with(one, k as u32));
        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
        let mut expected = EnvElement::zero();
        for (d, c) in falling(k).into_iter().enumerate() {
            expected.add_term(vec![h; d], c * &sign / factorial(k));
        }
        assert_eq!(p, expected, "k = {k}");
    }
}

/// Σ_j y^(s−j) binom(h − r − s + 2j, j) x^(r−j) in U(sl₂).
fn kostant(oracle: &Oracle, x: usize, y: usize, h: &[(usize, Q)], a: usize, r: u32, s: u32) -> EnvElement {
    let hel = h.iter().fold(EnvElement::zero(), |mut acc, (i, c)| {
        acc.add_scaled(&oracle.letter(*i, a), c);
        acc
    });
    let mut out = EnvElement::zero();
    for j in 0..=r.min(s) {
        let shift = -(r as i64) - (s as i64) + 2 * j as i64;
        let mut binom = EnvElement::one();
        for i in 0..j as i64 {
            let mut factor = hel.clone();
            factor.add_term(Vec::new(), q(shift - i));
            binom = oracle.mul(&binom, &factor);
        }
        binom = binom.scale(&(Q::one() / factorial(j as usize)));
        let left = oracle.divided_power(y, Some(a), s - j).unwrap();
        let right = oracle.divided_power(x, Some(a), r - j).unwrap();
        out = &out + &oracle.product(&[left, binom, right]);
    }
    out
}

#[test]
fn opposite_divided_powers_follow_kostant() {
    for spec in [AlgebraSpec::new(Family::W, 2), AlgebraSpec::new(Family::H, 4)] {
        let ctx = context(&spec, "C", NamedOrder::Height, AOrder::Natural).unwrap();
        let mut engine = Engine::new(ctx.clone());
        let cb = &ctx.cb;
        let rs = &cb.rs;
        let one = ctx.algebra.unit();
        let alpha = (0..rs.roots.len())
            .find(|&a| rs.roots[a].height == 0 && rs.positive[a] && rs.contains(&neg(&rs.roots[a].weight)))
            .expect("an sl₂ inside 𝔤₀");
        let minus = rs.find(&neg(&rs.roots[alpha].weight)).unwrap();
        let h: Vec<(usize, Q)> = cb
            .h_alpha(alpha)
            .unwrap()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (cb.h(i), c))
            .collect();
        for r in 1..=3 {
            for s in 1..=3 {
                let m = Monomial::new(vec![
                    G::EvenDivided { root: alpha, k: 1, b: one, r },
                    G::EvenDivided { root: minus, k: 1, b: one, r: s },
                ]);
                let z = engine.rewrite(&m).unwrap();
                let got = evaluate_combination(engine.oracle(), &ctx, &z).unwrap();
                let want = kostant(engine.oracle(), cb.x(alpha, 1), cb.x(minus, 1), &h, one, r, s);
                assert_eq!(got, want, "{spec} r = {r}, s = {s}");
            }
        }
    }
}

#[test]
fn odd_square_is_half_the_bracket() {
    let ctx = context(&AlgebraSpec::new(Family::STilde, 4), "C", NamedOrder::Height, AOrder::Natural).unwrap();
    let oracle = Oracle::new(ctx.env.clone());
    let cb = &ctx.cb;
    let one = ctx.algebra.unit();
    let (i, _) = (0..cb.dim())
        .filter(|&i| cb.parity[i].is_odd())
        .map(|i| (i, cb.bracket(i, i)))
        .find(|(_, b)| !b.is_empty())
        .expect("an odd vector with nonzero square");
    let x = oracle.letter(i, one);
    let sq = oracle.mul(&x, &x);
    let mut half = EnvElement::zero();
    for (t, c) in cb.bracket(i, i) {
        half.add_scaled(&oracle.letter(*t, one), &(c / q(2)));
    }
    assert_eq!(sq, half);
}

//! Between the integral form and the oracle: evaluation of monomials, and
//! lifting of oracle elements back onto ℬ by leading-word elimination.


use super::{IntegralGenerator as G, Monomial, ZCombination, ZContext};
use crate::chevalley::BasisKind;
use crate::combinatorics::Multiset;
use crate::enveloping::{EnvElement, Oracle, Word};
use crate::exterior::Parity;
use crate::{Error, Result, Q};

pub fn evaluate_generator(oracle: &Oracle, ctx: &ZContext, g: &G) -> Result<EnvElement> {
    let cb = &ctx.cb;
    match g {
        G::EvenDivided { root, k, b, r } => oracle.divided_power(cb.x(*root, *k), Some(*b), *r),
        G::CartanP { i, chi } => Ok(oracle.p_i(*i, chi)),
        G::Odd { root, n, c } => Ok(oracle.letter(cb.x(*root, *n), *c)),
    }
}

pub fn evaluate(oracle: &Oracle, ctx: &ZContext, m: &Monomial) -> Result<EnvElement> {
    let mut acc = EnvElement::one();
    for g in m.factors() {
        acc = oracle.mul(&acc, &evaluate_generator(oracle, ctx, g)?);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

pub fn evaluate_combination(oracle: &Oracle, ctx: &ZContext, z: &ZCombination) -> Result<EnvElement> {
    let mut out = EnvElement::zero();
    for (m, c) in z.terms() {
        out.add_scaled(&evaluate(oracle, ctx, m)?, &Q::from_integer(c.clone()));
    }
    Ok(out)
}

/// The sorted word of all letters of a monomial: the leading word of a ℬ
/// element.
pub fn top_word(ctx: &ZContext, m: &Monomial) -> Word {
    let cb = &ctx.cb;
    let env = &ctx.env;
    let mut w = Vec::new();
    for g in m.factors() {
        match g {
            G::EvenDivided { root, k, b, r } => w.extend(std::iter::repeat(env.letter(cb.x(*root, *k), *b)).take(*r as usize)),
            G::Odd { root, n, c } => w.push(env.letter(cb.x(*root, *n), *c)),
            G::CartanP { i, chi } => {
                for (a, e) in chi.iter() {
                    w.extend(std::iter::repeat(env.letter(cb.h(*i), *a)).take(e as usize));
                }
            }
        }
    }
    w.sort_unstable();
    w
}

/// The ℬ element whose leading word is `w` (a PBW word).
pub fn basis_element_of_word(ctx: &ZContext, w: &[u16]) -> Monomial {
    let cb = &ctx.cb;
    let env = &ctx.env;
    let mut factors: Vec<G> = Vec::new();
    for &l in w {
        let letter = env.letter_info(l);
        match cb.kinds[letter.lie] {
            BasisKind::Cartan(i) => match factors.last_mut() {
                Some(G::CartanP { i: j, chi }) if *j == i => chi.insert(letter.a, 1),
                _ => factors.push(G::CartanP {
                    i,
                    chi: Multiset::single(letter.a),
                }),
            },
            BasisKind::Root { root, k } => {
                if cb.rs.roots[root].parity == Parity::Odd {
                    factors.push(G::Odd { root, n: k, c: letter.a });
                    continue;
                }
                match factors.last_mut() {
                    Some(G::EvenDivided { root: r0, k: k0, b, r }) if (*r0, *k0, *b) == (root, k, letter.a) => *r += 1,
                    _ => factors.push(G::EvenDivided { root, k, b: letter.a, r: 1 }),
                }
            }
        }
    }
    Monomial::new(factors)
}

/// Express an oracle element over ℬ. Fails if a coefficient is not an
/// integer, i.e. if the element is outside 𝒰_ℤ.
pub fn lift_to_basis(oracle: &Oracle, ctx: &ZContext, u: &EnvElement) -> Result<ZCombination> {
    let mut rest = u.clone();
    let mut out = ZCombination::zero();
    while !rest.is_zero() {
        let w = rest
            .terms()
            .keys()
            .max_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
            .cloned()
            .expect("nonzero");
        let m = basis_element_of_word(ctx, &w);
        let value = evaluate(oracle, ctx, &m)?;
        let c = rest.coefficient(&w) / value.coefficient(&w);
        if !c.is_integer() {
            return Err(Error::IntegralityViolation {
                monomial: ctx.format_monomial(&m),
                coefficient: c.to_string(),
                trace: vec![format!("lifting {}", ctx.env.format(u))],
            });
        }
        rest.add_scaled(&value, &-c.clone());
        out.add_term(m, c.to_integer());
    }
    Ok(out)
}

/// Whether two combinations agree in the oracle.
pub fn oracle_equal(oracle: &Oracle, ctx: &ZContext, lhs: &ZCombination, rhs: &ZCombination) -> Result<bool> {
    let l = evaluate_combination(oracle, ctx, lhs)?;
    let r = evaluate_combination(oracle, ctx, rhs)?;
    Ok((&l - &r).is_zero())
}

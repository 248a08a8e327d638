use std::sync::{Arc, OnceLock};

use cartan_zform::combinatorics::Multiset;
use cartan_zform::exterior::{build_algebra, random_homogeneous, AlgebraSpec, CartanAlgebra, Family, Parity};
use cartan_zform::zform::lift::oracle_equal;
use cartan_zform::zform::sample::{random_monomial, Pool};
use cartan_zform::zform::verify::{clause_grid, verify_clause_point, Bounds, Clause};
use cartan_zform::zform::{context, AOrder, Engine, NamedOrder, ZCombination, ZContext};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn contexts() -> &'static [Arc<ZContext>] {
    static CELL: OnceLock<Vec<Arc<ZContext>>> = OnceLock::new();
    CELL.get_or_init(|| {
        [(Family::W, 2, "trunc-poly-4"), (Family::S, 3, "cyclic-4"), (Family::H, 4, "trunc-poly-4")]
            .into_iter()
            .map(|(f, n, a)| context(&AlgebraSpec::new(f, n), a, NamedOrder::Height, AOrder::Natural).unwrap())
            .collect()
    })
}

fn algebras() -> &'static [CartanAlgebra] {
    static CELL: OnceLock<Vec<CartanAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| {
        [AlgebraSpec::new(Family::W, 3), AlgebraSpec::new(Family::S, 3), AlgebraSpec::new(Family::H, 4)]
            .into_iter()
            .map(|s| build_algebra(s).unwrap())
            .collect()
    })
}

fn multiset() -> impl Strategy<Value = Multiset<u8>> {
    prop::collection::vec((0u8..4, 1u32..3), 0..4).prop_map(|v| {
        let mut m = Multiset::new();
        for (s, c) in v {
            m.insert(s, c);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rewriting_lands_in_the_basis(which in 0usize..3, seed in any::<u64>(), reverse in any::<bool>()) {
        let ctx = &contexts()[which];
        let ctx = if reverse { ctx.reordered(NamedOrder::Reverse, AOrder::Reversed) } else { ctx.clone() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monomial(&ctx, &mut rng, Pool::All, 4);
        let mut engine = Engine::new(ctx.clone());
        let z = engine.rewrite(&m).unwrap();
        prop_assert!(z.terms().keys().all(|t| ctx.is_basis(t)));
        prop_assert!(oracle_equal(engine.oracle(), &ctx, &ZCombination::single(m, 1.into()), &z).unwrap());
    }

    #[test]
    fn rewriting_fixes_basis_elements(which in 0usize..3, seed in any::<u64>()) {
        let ctx = contexts()[which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut engine = Engine::new(ctx.clone());
        let z = engine.rewrite(&random_monomial(&ctx, &mut rng, Pool::All, 3)).unwrap();
        for t in z.terms().keys() {
            prop_assert_eq!(engine.rewrite(t).unwrap(), ZCombination::single(t.clone(), 1.into()));
        }
    }

    #[test]
    fn brackets_are_super_antisymmetric(which in 0usize..3, seed in any::<u64>(), px in any::<bool>(), py in any::<bool>()) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parity = |odd| if odd { Parity::Odd } else { Parity::Even };
        let x = random_homogeneous(alg, parity(px), &mut rng);
        let y = random_homogeneous(alg, parity(py), &mut rng);
        let xy = x.supercommutator(&y).unwrap();
        let yx = y.supercommutator(&x).unwrap();
        if px && py {
            prop_assert_eq!(xy, yx);
        } else {
            prop_assert!((&xy + &yx).is_zero());
        }
    }

    #[test]
    fn commutators_drop_degree(which in 0usize..3, pick in any::<prop::sample::Index>()) {
        let ctx = contexts()[which].clone();
        let bounds = Bounds { r: 2, chi: 1, ..Bounds::default() };
        let points: Vec<_> = Clause::ALL
            .into_iter()
            .flat_map(|c| clause_grid(&ctx, c, &bounds).into_iter().map(move |p| (c, p)))
            .collect();
        let (clause, (l, r)) = &points[pick.index(points.len())];
        let engine = Engine::new(ctx.clone());
        let rec = verify_clause_point(&engine, *clause, l, r);
        prop_assert!(rec.passed(), "{:?}", rec);
    }

    #[test]
    fn multiset_difference_undoes_sum(a in multiset(), b in multiset()) {
        let s = a.add(&b);
        prop_assert_eq!(s.size(), a.size() + b.size());
        prop_assert!(a.le(&s) && b.le(&s));
        prop_assert_eq!(s.sub(&b), Some(a.clone()));
        if !b.is_empty() {
            prop_assert_eq!(a.sub(&s), None);
        }
    }
}

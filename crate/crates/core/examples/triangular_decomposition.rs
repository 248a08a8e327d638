// 𝒰_ℤ = 𝒰⁻·𝒰⁰·𝒰⁺ and the even/odd factorizations, read off rewritten
// monomials.

use cartan_zform::exterior::{AlgebraSpec, Family};
use cartan_zform::zform::decompose::{factorization_check, triangular_decompose, Factorization};
use cartan_zform::zform::expr::parse_monomial;
use cartan_zform::zform::sample::random_monomial;
use cartan_zform::zform::{context, AOrder, Engine, NamedOrder};
use rand::SeedableRng;

pub fn run_example() -> cartan_zform::Result<()> {
    let spec = AlgebraSpec::new(Family::W, 2);
    let ctx = context(&spec, "trunc-poly-4", NamedOrder::Triangular, AOrder::Natural)?;
    let mut engine = Engine::new(ctx.clone());
    let m = parse_monomial(&ctx, "dp(x[a1,1]⊗t,1) * odd(x[-e1,1]⊗1) * dp(x[-a1,1]⊗t,1)")?;
    println!("{}", ctx.format_monomial(&m));
    for (c, t) in triangular_decompose(&mut engine, &m)? {
        let f = |x| ctx.format_monomial(x);
        println!("  {c:>3} · [{}] [{}] [{}]", f(&t.minus), f(&t.zero), f(&t.plus));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for which in Factorization::ALL {
        let c = ctx.reordered(which.order(), AOrder::Natural);
        let mut engine = Engine::new(c.clone());
        let ok = (0..40)
            .map(|_| random_monomial(&c, &mut rng, which.pool(), 4))
            .filter(|m| factorization_check(&mut engine, which, m).passed())
            .count();
        println!("{}: {ok}/40 under {}", which.name(), which.order());
        assert_eq!(ok, 40);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}

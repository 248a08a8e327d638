// Rewrite monomials of integral generators onto the basis ℬ, with integer
// coefficients, under two different orders.

use cartan_zform::exterior::{AlgebraSpec, Family};
use cartan_zform::zform::expr::parse_monomial;
use cartan_zform::zform::lift::oracle_equal;
use cartan_zform::zform::{context, AOrder, Engine, NamedOrder, ZCombination};

pub fn run_example() -> cartan_zform::Result<()> {
    let spec = AlgebraSpec::new(Family::S, 3);
    let inputs = [
        "dp(x[a1,1]⊗t,2) * dp(x[-a1,1]⊗t,2)",
        "odd(x[-e1,1]⊗t) * odd(x[e1,1]⊗t^2)",
        "p(1,{t:2}) * dp(x[a1,1]⊗1,1)",
    ];
    for named in [NamedOrder::Height, NamedOrder::Reverse] {
        let ctx = context(&spec, "trunc-poly-4", named, AOrder::Natural)?;
        let mut engine = Engine::new(ctx.clone());
        println!("order {named}:");
        for text in inputs {
            let m = parse_monomial(&ctx, text)?;
            let z = engine.rewrite(&m)?;
            let same = oracle_equal(engine.oracle(), &ctx, &ZCombination::single(m.clone(), 1.into()), &z)?;
            println!("  {}\n    = {}", ctx.format_monomial(&m), ctx.format_combination(&z));
            assert!(same && z.terms().keys().all(|t| ctx.is_basis(t)));
        }
        let used: Vec<String> = engine.usage.iter().map(|(s, n)| format!("{}×{n}", s.name())).collect();
        println!("  steps: {}", used.join(", "));
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

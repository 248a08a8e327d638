// Check straightening identities against the oracle, first at one point,
// then over a small grid for every identity.

use cartan_zform::zform::verify::{grid, verify_identity, verify_point, Bounds};
use cartan_zform::zform::{context, AOrder, Engine, Identity, NamedOrder};
use cartan_zform::exterior::{AlgebraSpec, Family};

pub fn run_example() -> cartan_zform::Result<()> {
    let ctx = context(&AlgebraSpec::new(Family::W, 3), "cyclic-4", NamedOrder::Height, AOrder::Natural)?;
    let engine = Engine::new(ctx.clone());
    let bounds = Bounds { r: 1, chi: 1, ..Bounds::default() };

    let points = grid(&ctx, Identity::XPlusXMinus, &bounds);
    let (l, r) = &points[points.len() / 2];
    let rec = verify_point(&engine, Identity::XPlusXMinus, l, r);
    println!("{}", serde_json::to_string_pretty(&rec).expect("serializable"));
    let rhs = engine.identity_env().rhs(Identity::XPlusXMinus, l, r)?;
    println!("{} · {} = {}", ctx.format_generator(l), ctx.format_generator(r), ctx.format_combination(&rhs));

    for id in Identity::ALL {
        let recs = verify_identity(&engine, id, &bounds);
        let pass = recs.iter().filter(|r| r.passed()).count();
        println!("{:<14} {pass:>5}/{:<5}", id.tag(), recs.len());
        assert_eq!(pass, recs.len());
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

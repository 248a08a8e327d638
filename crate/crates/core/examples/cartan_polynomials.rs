// The elements pᵢ(χ) of the Cartan part: the property suite, the ℤ-basis
// of 𝒰⁰, and Garland's identity.

use cartan_zform::exterior::{AlgebraSpec, Family};
use cartan_zform::zform::verify::{verify_cartan_basis, verify_garland, verify_p_suite};
use cartan_zform::zform::{context, AOrder, Engine, NamedOrder};

pub fn run_example() -> cartan_zform::Result<()> {
    let ctx = context(&AlgebraSpec::new(Family::H, 4), "trunc-poly-4", NamedOrder::Height, AOrder::Natural)?;
    let engine = Engine::new(ctx);
    let recs = verify_p_suite(&engine, 2);
    for name in ["p-single", "p-leading", "p-commute", "p-product"] {
        let of: Vec<_> = recs.iter().filter(|r| r.identity == name).collect();
        println!("{name:<10} {}/{}", of.iter().filter(|r| r.passed()).count(), of.len());
    }
    let basis = verify_cartan_basis(&engine, 2);
    println!("p-basis {:?}", basis.status);
    let garland = verify_garland(&engine, 2);
    println!("garland {}/{}", garland.iter().filter(|r| r.passed()).count(), garland.len());
    assert!(recs.iter().chain(&garland).all(|r| r.passed()) && basis.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}

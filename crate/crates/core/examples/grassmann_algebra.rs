// Grassmann arithmetic and superderivations of Λ(3), then the built
// algebras and their structural checks.

use cartan_zform::exterior::{build_algebra, structure_check, AlgebraSpec, ExteriorElement, Family, SuperDerivation};
use rand::SeedableRng;

pub fn run_example() -> cartan_zform::Result<()> {
    let n = 3;
    let x1 = ExteriorElement::generator(n, 1);
    let x2 = ExteriorElement::generator(n, 2);
    let x12 = x1.wedge(&x2)?;
    let x21 = x2.wedge(&x1)?;
    println!("ξ1ξ2 = {x12}, ξ2ξ1 = {x21}");
    assert!((&x12 + &x21).is_zero());

    // ξ1ξ2∂3 and ξ3∂1 (bit i of the mask is ξ_{i+1})
    let a = SuperDerivation::monomial(n, 0b011, 3);
    let b = SuperDerivation::monomial(n, 0b100, 1);
    println!("[{a}, {b}] = {}", a.supercommutator(&b)?);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for spec in [
        AlgebraSpec::new(Family::W, 2),
        AlgebraSpec::new(Family::S, 3),
        AlgebraSpec::new(Family::STilde, 4),
        AlgebraSpec::new(Family::H, 4),
    ] {
        let alg = build_algebra(spec)?;
        let rep = structure_check(&alg, 200, &mut rng);
        println!(
            "{:<12} dim {:>3}  degrees {:?}  jacobi failures {}  degree −1 exemptions {}",
            spec.to_string(),
            alg.dim(),
            alg.degrees(),
            rep.jacobi_failures,
            rep.minus_one_violations
        );
        assert!(rep.passed());
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

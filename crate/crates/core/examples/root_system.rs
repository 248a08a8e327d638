// Root decompositions: weights, heights, multiplicities and the simple
// system, with the root-property clauses.

use cartan_zform::exterior::{AlgebraSpec, Family};
use cartan_zform::roots::{root_decomposition, verify_root_properties};

pub fn run_example() -> cartan_zform::Result<()> {
    let rs = root_decomposition(&AlgebraSpec::new(Family::W, 2))?;
    for (i, r) in rs.roots.iter().enumerate() {
        let mark = if rs.simple.contains(&i) { " (simple)" } else { "" };
        println!("{:>8}  height {:>2}  {:?}  μ={}{}", r.label, r.height, r.parity, r.multiplicity(), mark);
    }
    assert_eq!(rs.roots.len(), 6);

    for spec in [AlgebraSpec::new(Family::W, 3), AlgebraSpec::new(Family::H, 4), AlgebraSpec::new(Family::STilde, 4)] {
        let rs = root_decomposition(&spec)?;
        let multi = rs.roots.iter().filter(|r| r.multiplicity() > 1).count();
        println!("{spec}: {} roots, {multi} of multiplicity above one", rs.roots.len());
        for c in verify_root_properties(&rs).clauses {
            let verdict = if c.passed { "holds" } else { "fails" };
            println!("  {:<10} {verdict}: {}", c.name, c.detail);
            if let Some(o) = c.offenders.first() {
                println!("             e.g. {o}");
            }
        }
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

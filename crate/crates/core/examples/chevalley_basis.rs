// A Chevalley-type basis: the axiom report and a few structure constants.

use cartan_zform::chevalley::{construct_chevalley, structure_constants, verify_axioms};
use cartan_zform::exterior::{AlgebraSpec, Family};
use cartan_zform::roots::root_decomposition;

pub fn run_example() -> cartan_zform::Result<()> {
    for spec in [AlgebraSpec::new(Family::W, 3), AlgebraSpec::new(Family::S, 3), AlgebraSpec::new(Family::H, 4)] {
        let cb = construct_chevalley(root_decomposition(&spec)?)?;
        let report = verify_axioms(&cb);
        println!("{spec}: dim {}, axioms {}", cb.dim(), if report.passed() { "PASS" } else { "FAIL" });
        for e in &report.entries {
            if let Some(c) = &e.counterexample {
                println!("  ({}) fails: {c}", e.axiom);
            }
        }
        for line in cb.log.iter().take(2) {
            println!("  note: {line}");
        }
        let sc = structure_constants(&cb)?;
        assert!(sc.entries.iter().all(|(_, _, c)| c.iter().all(|(_, x)| x.abs() <= 2)));
        for (i, j, c) in sc.entries.iter().filter(|(i, j, _)| i < j).take(3) {
            let terms: Vec<String> = c.iter().map(|(t, x)| format!("{x}·{}", sc.labels[*t])).collect();
            println!("  [{}, {}] = {}", sc.labels[*i], sc.labels[*j], terms.join(" + "));
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

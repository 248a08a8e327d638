// A full `verify` run as the binary performs it, summarized per record name.

use std::collections::BTreeMap;

use cartan_zform::campaign::{verify_all, RunConfig};

pub fn run_example() -> cartan_zform::Result<()> {
    let cfg = RunConfig {
        family: "H".into(),
        n: 4,
        samples: 50,
        max_degree: 4,
        seed: 42,
        ..RunConfig::default()
    };
    let mut by_name: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in verify_all(&cfg)? {
        let e = by_name.entry(r.identity).or_default();
        e.1 += 1;
        if r.status == cartan_zform::zform::verify::Status::Pass {
            e.0 += 1;
        }
    }
    for (name, (pass, total)) in &by_name {
        println!("{name:<18} {pass:>5}/{total}");
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

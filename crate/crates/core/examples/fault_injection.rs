// Corrupt one structure constant and watch the identity checks catch it.

use cartan_zform::campaign::{identity_campaign, tally, FaultKind, RunConfig};

pub fn run_example() -> cartan_zform::Result<()> {
    let clean = RunConfig { bound_r: 1, bound_chi: 1, ..RunConfig::default() };
    let (pass, fail, err) = tally(&identity_campaign(&clean, &clean.context()?)?);
    println!("clean table: {pass} pass, {fail} fail, {err} error");
    assert_eq!(fail + err, 0);

    for kind in [FaultKind::Constant, FaultKind::Sign, FaultKind::CartanSign] {
        let cfg = RunConfig { fault: Some(kind), ..clean.clone() };
        let ctx = cfg.context()?;
        let recs = identity_campaign(&cfg, &ctx)?;
        let (pass, fail, err) = tally(&recs);
        println!("{kind:?} ({}): {pass} pass, {fail} fail, {err} error", ctx.cb.log.last().map_or("", String::as_str));
        if let Some(r) = recs.iter().find(|r| !r.passed()) {
            println!("  first: {} at {}", r.identity, r.params);
        }
        assert!(fail > 0);
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

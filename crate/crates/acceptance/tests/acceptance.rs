// One line per acceptance criterion. Exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use cartan_zform::campaign::{
    axioms_campaign, clause_campaign, decompose_campaign, identity_campaign, p_campaign, roots_campaign,
    structure_campaign, tally, theorem_campaign, FaultKind, RunConfig,
};
use cartan_zform::chevalley::structure_constants;
use cartan_zform::zform::verify::{grid, Bounds, Record};
use cartan_zform::zform::{Identity, IntegralGenerator as G, NamedOrder};

const ALGEBRAS: [(&str, usize); 5] = [("W", 2), ("W", 3), ("S", 3), ("S_tilde", 4), ("H", 4)];
const A_MODELS: [&str; 2] = ["trunc-poly-4", "cyclic-4"];

fn cfg(family: &str, n: usize) -> RunConfig {
    RunConfig {
        family: family.into(),
        n,
        seed: 2024,
        ..RunConfig::default()
    }
}

struct Verdict {
    pass: bool,
    summary: String,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Verdict { pass, summary: summary.into() }
    }
}

fn first_bad(records: &[Record]) -> String {
    records
        .iter()
        .find(|r| !r.passed())
        .map(|r| format!("; first: {} {} {}", r.identity, r.params, r.detail.as_deref().unwrap_or("")))
        .unwrap_or_default()
}

fn counts(records: &[Record]) -> String {
    let (p, f, e) = tally(records);
    format!("{p} pass, {f} fail, {e} error")
}

fn structure() -> Verdict {
    let mut bad = Vec::new();
    for (f, n) in ALGEBRAS {
        let spec = cfg(f, n).spec().unwrap();
        let rec = structure_campaign(&spec, 1000, 1).unwrap();
        if !rec.passed() {
            bad.push(format!("{spec}: {}", rec.detail.unwrap_or_default()));
        }
    }
    Verdict::new(bad.is_empty(), if bad.is_empty() { "Jacobi, closure and grading hold on all five".into() } else { bad.join(" | ") })
}

fn roots() -> Verdict {
    let mut bad = Vec::new();
    for (f, n) in ALGEBRAS {
        let spec = cfg(f, n).spec().unwrap();
        for r in roots_campaign(&spec).unwrap() {
            if !r.passed() {
                let detail = r.detail.unwrap_or_default();
                // keep the count and the first offender
                let short = match detail.split_once(", ") {
                    Some((head, _)) => format!("{head}, ..."),
                    None => detail,
                };
                bad.push(format!("{spec} {}: {short}", r.identity));
            }
        }
    }
    let summary = if bad.is_empty() { "all clauses hold".into() } else { format!("{} clause failures: {}", bad.len(), bad.join(" | ")) };
    Verdict::new(bad.is_empty(), summary)
}

fn axioms() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for (f, n) in ALGEBRAS {
        let cb = cfg(f, n).chevalley().unwrap();
        let recs = axioms_campaign(&cb);
        let failed: Vec<&Record> = recs.iter().filter(|r| !r.passed()).collect();
        let must_pass = !matches!(f, "S_tilde" | "H");
        for r in &failed {
            // S̃ and H may fail with a serialized counterexample
            let documented = r.detail.as_deref().is_some_and(|d| !d.is_empty());
            pass &= !must_pass && documented;
            notes.push(format!("{}({n}) {}: {}", f, r.identity, r.detail.as_deref().unwrap_or("")));
        }
        let sc = structure_constants(&cb).unwrap();
        let outside: Vec<i64> = sc.entries.iter().flat_map(|(_, _, c)| c.iter().map(|(_, x)| *x)).filter(|x| x.abs() > 2).collect();
        if !outside.is_empty() {
            pass = false;
            notes.push(format!("{f}({n}) constants outside {{0, ±1, ±2}}: {outside:?}"));
        }
    }
    Verdict::new(pass, if notes.is_empty() { "all axioms hold, constants in {0, ±1, ±2}".into() } else { notes.join(" | ") })
}

fn p_suite() -> Verdict {
    let mut all = Vec::new();
    for (f, n) in ALGEBRAS {
        let c = RunConfig { bound_chi: 3, ..cfg(f, n) };
        let ctx = c.context().unwrap();
        all.extend(p_campaign(&c, &ctx));
    }
    let ok = all.iter().all(Record::passed);
    Verdict::new(ok, format!("{} over trunc-poly-4, |χ|, |φ| ≤ 3{}", counts(&all), first_bad(&all)))
}

fn identity_configs() -> Vec<RunConfig> {
    [("W", 2), ("W", 3)]
        .into_iter()
        .flat_map(|(f, n)| A_MODELS.into_iter().map(move |a| RunConfig { a_model: a.into(), ..cfg(f, n) }))
        .collect()
}

/// Whether a generator carries an r or a χ at all.
fn graded(g: &G) -> bool {
    !matches!(g, G::Odd { .. })
}

fn stretched(g: &G) -> bool {
    match g {
        G::EvenDivided { r, .. } => *r >= 3,
        G::CartanP { chi, .. } => chi.size() >= 3,
        G::Odd { .. } => false,
    }
}

fn identities() -> Verdict {
    let start = Instant::now();
    let mut all = Vec::new();
    // identity ↦ (has an r or χ slot, reaches r = 3 or |χ| = 3)
    let mut stretch: BTreeMap<&str, (bool, bool)> = BTreeMap::new();
    let bounds = Bounds::default();
    for c in identity_configs() {
        let ctx = c.context().unwrap();
        all.extend(identity_campaign(&c, &ctx).unwrap());
        for id in Identity::ALL {
            let points = grid(&ctx, id, &bounds);
            let e = stretch.entry(id.tag()).or_default();
            e.0 |= points.iter().any(|(l, r)| graded(l) || graded(r));
            e.1 |= points.iter().any(|(l, r)| stretched(l) || stretched(r));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let missing: Vec<&str> = stretch.iter().filter(|(_, (g, s))| *g && !*s).map(|(k, _)| *k).collect();
    let odd_only: Vec<&str> = stretch.iter().filter(|(_, (g, _))| !*g).map(|(k, _)| *k).collect();
    let ok = all.iter().all(Record::passed) && missing.is_empty() && secs < 600.0;
    let mut summary = format!("{} on W(2), W(3) × {A_MODELS:?} in {secs:.1}s", counts(&all));
    if !odd_only.is_empty() {
        summary.push_str(&format!("; {odd_only:?} have no r or χ to stretch"));
    }
    if !missing.is_empty() {
        summary.push_str(&format!("; no r = 3 or |χ| = 3 point for {missing:?}"));
    }
    summary.push_str(&first_bad(&all));
    Verdict::new(ok, summary)
}

fn theorem() -> Verdict {
    let mut all = Vec::new();
    let mut per = Vec::new();
    for (f, n) in ALGEBRAS {
        let c = RunConfig { samples: 500, max_degree: 5, ..cfg(f, n) };
        let ctx = c.context().unwrap();
        let recs = theorem_campaign(&c, &ctx, &[NamedOrder::Height, NamedOrder::Reverse]).unwrap();
        let (p, _, _) = tally(&recs);
        per.push(format!("{f}({n}) {p}/{}", recs.len()));
        all.extend(recs);
    }
    let ok = all.iter().all(Record::passed);
    Verdict::new(ok, format!("{}{}", per.join(", "), first_bad(&all)))
}

fn clauses() -> Verdict {
    let mut all = Vec::new();
    for c in identity_configs() {
        let ctx = c.context().unwrap();
        all.extend(clause_campaign(&c, &ctx).unwrap());
    }
    let ok = all.iter().all(Record::passed);
    Verdict::new(ok, format!("{} over the identity grids{}", counts(&all), first_bad(&all)))
}

fn decompositions() -> Verdict {
    let mut all = Vec::new();
    let mut per = Vec::new();
    for (f, n) in ALGEBRAS {
        let c = RunConfig {
            samples: 200,
            only: Some("triangular,factorization".into()),
            ..cfg(f, n)
        };
        let ctx = c.context().unwrap();
        let recs = decompose_campaign(&c, &ctx).unwrap();
        let (p, _, _) = tally(&recs);
        per.push(format!("{f}({n}) {p}/{}", recs.len()));
        all.extend(recs);
    }
    let ok = all.iter().all(Record::passed);
    Verdict::new(ok, format!("{}{}", per.join(", "), first_bad(&all)))
}

fn faults() -> Verdict {
    let mut caught = Vec::new();
    let mut missed = Vec::new();
    for (f, n) in [("W", 2), ("W", 3)] {
        for kind in [FaultKind::Constant, FaultKind::Sign, FaultKind::CartanSign] {
            let c = RunConfig { fault: Some(kind), samples: 500, ..cfg(f, n) };
            let ctx = c.context().unwrap();
            let mut recs = identity_campaign(&c, &ctx).unwrap();
            recs.extend(theorem_campaign(&c, &ctx, &[NamedOrder::Height]).unwrap());
            let (_, fail, err) = tally(&recs);
            let label = format!("{f}({n}) {kind:?}");
            if fail + err > 0 {
                caught.push(format!("{label}: {}", fail + err));
            } else {
                missed.push(label);
            }
        }
    }
    let summary = if missed.is_empty() { format!("every fault caught ({})", caught.join(", ")) } else { format!("undetected: {missed:?}") };
    Verdict::new(missed.is_empty(), summary)
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("algebra construction", structure),
        ("root properties", roots),
        ("Chevalley axioms", axioms),
        ("p suite", p_suite),
        ("straightening identities", identities),
        ("integral basis", theorem),
        ("degree drop", clauses),
        ("decompositions", decompositions),
        ("fault injection", faults),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} [{name}] ({:.1}s) {}", i + 1, start.elapsed().as_secs_f64(), v.summary);
        failed += !v.pass as usize;
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Batch drivers: build a context from a run configuration, run one family
//! of checks, and return report records in a deterministic order.
//!
//! Grid points and samples are fixed before any work starts; rayon then
//! evaluates them with one [`Engine`] per worker, and `collect` keeps the
//! input order, so output never depends on the thread count.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chevalley::{construct_chevalley, verify_axioms, ChevalleyBasis, Fault};
use crate::combinatorics::MonoidAlgebra;
use crate::exterior::{build_algebra, structure_check, AlgebraSpec, Family};
use crate::roots::{root_decomposition, verify_root_properties};
use crate::zform::decompose::{closure_check, factorization_check, triangular_check, Factorization};
use crate::zform::lift::oracle_equal;
use crate::zform::sample::{random_monomial, Pool};
use crate::zform::verify::{
    clause_grid, grid, verify_cartan_basis, verify_clause_point, verify_garland, verify_p_suite, verify_point, Bounds,
    Clause, Record, Status,
};
use crate::zform::{AOrder, Engine, Identity, Monomial, NamedOrder, ZCombination, ZContext};
use crate::{Error, Result};

/// Which table entry to corrupt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultKind {
    /// Off-by-one constant in the first root-to-root bracket.
    Constant,
    /// Flipped sign in the first root-to-root bracket.
    Sign,
    /// Flipped sign in the first bracket landing in the Cartan subalgebra.
    CartanSign,
}

impl std::str::FromStr for FaultKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(FaultKind::Constant),
            "sign" => Ok(FaultKind::Sign),
            "cartan-sign" => Ok(FaultKind::CartanSign),
            other => Err(Error::UnknownName(format!("fault {other}"))),
        }
    }
}

/// Everything a run needs. Also the shape of the optional config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    pub n: usize,
    pub euler: bool,
    pub a_model: String,
    pub bound_r: u32,
    pub bound_chi: u32,
    pub order: String,
    pub a_order: String,
    pub seed: u64,
    /// Comma-separated selectors; see [`selected`].
    pub only: Option<String>,
    pub samples: usize,
    pub max_degree: u32,
    pub timing: bool,
    pub root_pairs: Option<usize>,
    pub fault: Option<FaultKind>,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: "W".into(),
            n: 2,
            euler: false,
            a_model: "trunc-poly-4".into(),
            bound_r: 2,
            bound_chi: 2,
            order: "height".into(),
            a_order: "natural".into(),
            seed: 0,
            only: None,
            samples: 100,
            max_degree: 5,
            timing: false,
            root_pairs: None,
            fault: None,
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn spec(&self) -> Result<AlgebraSpec> {
        let family: Family = self.family.parse()?;
        let mut spec = AlgebraSpec::new(family, self.n);
        if self.euler {
            spec = spec.with_euler();
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            r: self.bound_r,
            chi: self.bound_chi,
            root_pairs: self.root_pairs,
            stretch: true,
        }
    }

    pub fn named_order(&self) -> Result<NamedOrder> {
        self.order.parse()
    }

    pub fn a_order(&self) -> Result<AOrder> {
        self.a_order.parse()
    }

    /// The Chevalley basis, corrupted if a fault is requested.
    pub fn chevalley(&self) -> Result<ChevalleyBasis> {
        let cb = construct_chevalley(root_decomposition(&self.spec()?)?)?;
        match self.fault {
            None => Ok(cb),
            Some(kind) => inject(&cb, kind),
        }
    }

    pub fn context(&self) -> Result<Arc<ZContext>> {
        let cb = Arc::new(self.chevalley()?);
        Ok(ZContext::new(cb, MonoidAlgebra::by_name(&self.a_model)?, self.named_order()?, self.a_order()?))
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn inject(cb: &ChevalleyBasis, kind: FaultKind) -> Result<ChevalleyBasis> {
    let missing = || Error::InvalidSpec("no bracket to corrupt".into());
    let fault = match kind {
        FaultKind::Constant => {
            let (left, right) = cb.first_root_bracket().ok_or_else(missing)?;
            Fault::Constant { left, right }
        }
        FaultKind::Sign => {
            let (left, right) = cb.first_root_bracket().ok_or_else(missing)?;
            Fault::Sign { left, right }
        }
        FaultKind::CartanSign => {
            let (left, right) = cb.first_cartan_bracket().ok_or_else(missing)?;
            Fault::Sign { left, right }
        }
    };
    cb.corrupted(fault)
}

/// A selector matches a group name exactly or a record name by prefix.
pub fn selected(only: Option<&str>, group: &str, name: &str) -> bool {
    match only {
        None => true,
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .any(|s| s == group || name.starts_with(s)),
    }
}

fn summary_record(name: &str, algebra: String, passed: bool, checked: usize, detail: Option<String>) -> Record {
    let mut rec = Record::new(name, json!({ "algebra": algebra }));
    rec.lhs_terms = checked;
    if !passed {
        rec = rec.fail(detail.unwrap_or_default());
    } else {
        rec.detail = detail;
    }
    rec
}

/// Super Jacobi on `triples` random triples, closure and grading.
pub fn structure_campaign(spec: &AlgebraSpec, triples: usize, seed: u64) -> Result<Record> {
    let alg = build_algebra(*spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = structure_check(&alg, triples, &mut rng);
    let detail = format!(
        "jacobi {}/{} failed, closure {} failed, grading {} failed over {} pairs, {} degree −1 exemptions",
        rep.jacobi_failures, rep.jacobi_triples, rep.closure_failures, rep.grading_failures, rep.pairs, rep.minus_one_violations
    );
    let detail = match &rep.first_failure {
        Some(f) => format!("{detail}; {f}"),
        None => detail,
    };
    Ok(summary_record("structure", rep.algebra.clone(), rep.passed(), rep.pairs + triples, Some(detail)))
}

/// One record per root-property clause.
pub fn roots_campaign(spec: &AlgebraSpec) -> Result<Vec<Record>> {
    let rs = root_decomposition(spec)?;
    let rep = verify_root_properties(&rs);
    Ok(rep
        .clauses
        .iter()
        .map(|c| {
            let mut detail = c.detail.clone();
            if !c.offenders.is_empty() {
                detail = format!("{detail}; offenders: {}", c.offenders.join(", "));
            }
            summary_record(&format!("roots-{}", c.name), rep.algebra.clone(), c.passed, c.offenders.len(), Some(detail))
        })
        .collect())
}

/// One record per Chevalley axiom.
pub fn axioms_campaign(cb: &ChevalleyBasis) -> Vec<Record> {
    let rep = verify_axioms(cb);
    rep.entries
        .iter()
        .map(|e| {
            let detail = e.counterexample.clone().unwrap_or_else(|| e.statement.clone());
            summary_record(&format!("axiom-{}", e.axiom), rep.algebra.clone(), e.passed, e.checked, Some(detail))
        })
        .collect()
}

fn run_points<T: Sync, F>(cfg: &RunConfig, ctx: &Arc<ZContext>, points: &[T], f: F) -> Result<Vec<Record>>
where
    F: Fn(&mut Engine, &T) -> Record + Sync,
{
    let pool = cfg.pool()?;
    let mut out: Vec<Record> = pool.install(|| {
        points
            .par_iter()
            .map_init(|| Engine::new(ctx.clone()), |engine, p| f(engine, p))
            .collect()
    });
    if !cfg.timing {
        for r in &mut out {
            r.elapsed = None;
        }
    }
    Ok(out)
}

/// Every identity over the configured grid.
pub fn identity_campaign(cfg: &RunConfig, ctx: &Arc<ZContext>) -> Result<Vec<Record>> {
    let bounds = cfg.bounds();
    let only = cfg.only.as_deref();
    let points: Vec<_> = Identity::ALL
        .into_iter()
        .filter(|id| selected(only, "identities", id.tag()))
        .flat_map(|id| grid(ctx, id, &bounds).into_iter().map(move |(l, r)| (id, l, r)))
        .collect();
    run_points(cfg, ctx, &points, |engine, (id, l, r)| verify_point(engine, *id, l, r))
}

/// The degree-drop clauses over the same grids.
pub fn clause_campaign(cfg: &RunConfig, ctx: &Arc<ZContext>) -> Result<Vec<Record>> {
    let bounds = cfg.bounds();
    let only = cfg.only.as_deref();
    let points: Vec<_> = Clause::ALL
        .into_iter()
        .filter(|c| selected(only, "lemma-degree", &c.name()))
        .flat_map(|c| clause_grid(ctx, c, &bounds).into_iter().map(move |(l, r)| (c, l, r)))
        .collect();
    run_points(cfg, ctx, &points, |engine, (c, l, r)| verify_clause_point(engine, *c, l, r))
}

/// Properties of pᵢ(χ), the Cartan part of the basis, and Garland's identity.
pub fn p_campaign(cfg: &RunConfig, ctx: &Arc<ZContext>) -> Vec<Record> {
    let engine = Engine::new(ctx.clone());
    let max = cfg.bound_chi.max(1);
    let mut out = verify_p_suite(&engine, max);
    out.push(verify_cartan_basis(&engine, max));
    out.extend(verify_garland(&engine, max));
    let only = cfg.only.as_deref();
    out.retain(|r| selected(only, "p", &r.identity));
    if !cfg.timing {
        for r in &mut out {
            r.elapsed = None;
        }
    }
    out
}

/// `count` random monomials, drawn before any work starts.
pub fn sample_monomials(ctx: &ZContext, pool: Pool, count: usize, max_degree: u32, seed: u64) -> Vec<Monomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_monomial(ctx, &mut rng, pool, max_degree)).collect()
}

/// Rewrite one monomial and check the result: every term in ℬ, integer
/// coefficients (enforced by the engine), equality in the oracle.
pub fn theorem_check(engine: &mut Engine, m: &Monomial) -> Record {
    let ctx = engine.ctx.clone();
    let mut rec = Record::new(
        "theorem",
        json!({
            "algebra": ctx.cb.rs.spec.to_string(),
            "a_model": ctx.algebra.name,
            "order": ctx.order.named.name(),
            "monomial": ctx.format_monomial(m),
        }),
    );
    rec.lhs_terms = 1;
    let start = std::time::Instant::now();
    let result = engine.rewrite(m).and_then(|z| {
        let eq = oracle_equal(engine.oracle(), &ctx, &ZCombination::single(m.clone(), 1.into()), &z)?;
        Ok((z, eq))
    });
    rec = match result {
        Ok((z, eq)) => {
            rec.rhs_terms = z.len();
            rec.max_degree = z.max_degree();
            if let Some(t) = z.terms().keys().find(|t| !ctx.is_basis(t)) {
                rec.fail(format!("{} is not a basis monomial", ctx.format_monomial(t)))
            } else if !eq {
                rec.fail(format!("oracle disagrees with {}", ctx.format_combination(&z)))
            } else {
                rec
            }
        }
        Err(e) => rec.error(&e),
    };
    rec.elapsed = Some(start.elapsed().as_secs_f64());
    rec
}

/// Random monomials rewritten under each of `orders`.
pub fn theorem_campaign(cfg: &RunConfig, ctx: &Arc<ZContext>, orders: &[NamedOrder]) -> Result<Vec<Record>> {
    let sample = sample_monomials(ctx, Pool::All, cfg.samples, cfg.max_degree, cfg.seed);
    let mut out = Vec::new();
    for &named in orders {
        let c = ctx.reordered(named, ctx.order.a_order);
        out.extend(run_points(cfg, &c, &sample, theorem_check)?);
    }
    Ok(out)
}

/// Triangular decomposition, the three factorizations and block closure.
pub fn decompose_campaign(cfg: &RunConfig, ctx: &Arc<ZContext>) -> Result<Vec<Record>> {
    let only = cfg.only.as_deref();
    let a_order = ctx.order.a_order;
    let mut out = Vec::new();
    if selected(only, "decompose", "triangular") {
        let c = ctx.reordered(NamedOrder::Triangular, a_order);
        let sample = sample_monomials(&c, Pool::All, cfg.samples, cfg.max_degree, cfg.seed);
        out.extend(run_points(cfg, &c, &sample, triangular_check)?);
    }
    for f in Factorization::ALL {
        if !selected(only, "decompose", f.name()) {
            continue;
        }
        let c = ctx.reordered(f.order(), a_order);
        let sample = sample_monomials(&c, f.pool(), cfg.samples, cfg.max_degree, cfg.seed);
        out.extend(run_points(cfg, &c, &sample, |e, m| factorization_check(e, f, m))?);
    }
    let c = ctx.reordered(NamedOrder::Triangular, a_order);
    for (block, pool) in [(0, Pool::Negative), (1, Pool::Cartan), (2, Pool::Positive)] {
        let name = ["closure-minus", "closure-zero", "closure-plus"][block];
        if !selected(only, "decompose", name) {
            continue;
        }
        let half = (cfg.max_degree / 2).max(1);
        let xs = sample_monomials(&c, pool, cfg.samples, half, cfg.seed);
        let ys = sample_monomials(&c, pool, cfg.samples, half, cfg.seed.wrapping_add(1));
        let pairs: Vec<_> = xs.into_iter().zip(ys).collect();
        out.extend(run_points(cfg, &c, &pairs, |e, (x, y)| closure_check(e, x, y, block))?);
    }
    Ok(out)
}

/// Everything `verify` runs, in a fixed group order.
pub fn verify_all(cfg: &RunConfig) -> Result<Vec<Record>> {
    let only = cfg.only.as_deref();
    let spec = cfg.spec()?;
    let group = |g: &str| match only {
        None => true,
        Some(list) => list.split(',').map(str::trim).any(|s| s == g || s.starts_with(g) || g.starts_with(s)),
    };
    let mut out = Vec::new();
    if group("structure") {
        out.push(structure_campaign(&spec, 1000, cfg.seed)?);
    }
    if group("roots") {
        out.extend(roots_campaign(&spec)?);
    }
    if group("axiom") {
        out.extend(axioms_campaign(&cfg.chevalley()?));
    }
    let ctx = cfg.context()?;
    let is_identity = |s: &str| s == "identities" || Identity::ALL.iter().any(|id| id.tag().starts_with(s));
    if only.map_or(true, |l| l.split(',').map(str::trim).any(is_identity)) {
        out.extend(identity_campaign(cfg, &ctx)?);
    }
    if group("lemma-degree") {
        out.extend(clause_campaign(cfg, &ctx)?);
    }
    if group("p") {
        out.extend(p_campaign(cfg, &ctx));
    }
    if group("theorem") {
        out.extend(theorem_campaign(cfg, &ctx, &[ctx.order.named])?);
    }
    if group("decompose") || group("triangular") || group("factorization") || group("closure") {
        out.extend(decompose_campaign(cfg, &ctx)?);
    }
    Ok(out)
}

/// Counts of (pass, fail, error).
pub fn tally(records: &[Record]) -> (usize, usize, usize) {
    records.iter().fold((0, 0, 0), |(p, f, e), r| match r.status {
        Status::Pass => (p + 1, f, e),
        Status::Fail => (p, f + 1, e),
        Status::Error => (p, f, e + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w2() -> RunConfig {
        RunConfig {
            samples: 10,
            max_degree: 3,
            threads: 2,
            ..RunConfig::default()
        }
    }

    #[test]
    fn selectors_match_groups_and_prefixes() {
        assert!(selected(None, "p", "p-single"));
        assert!(selected(Some("p"), "p", "garland"));
        assert!(selected(Some("x+x-,xaxa"), "identities", "xaxa"));
        assert!(!selected(Some("lemma-degree-2"), "lemma-degree", "lemma-degree-3"));
    }

    #[test]
    fn lemma_only_runs_clauses() {
        let cfg = RunConfig {
            only: Some("lemma-degree".into()),
            ..w2()
        };
        let recs = verify_all(&cfg).unwrap();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.identity.starts_with("lemma-degree-")));
    }

    #[test]
    fn output_does_not_depend_on_threads() {
        let one = RunConfig {
            threads: 1,
            only: Some("theorem".into()),
            ..w2()
        };
        let four = RunConfig { threads: 4, ..one.clone() };
        let a = serde_json::to_string(&verify_all(&one).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_all(&four).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn injected_sign_fault_is_caught() {
        let cfg = RunConfig {
            fault: Some(FaultKind::Sign),
            only: Some("identities".into()),
            bound_r: 1,
            bound_chi: 1,
            ..w2()
        };
        let recs = verify_all(&cfg).unwrap();
        assert!(tally(&recs).1 > 0);
    }
}

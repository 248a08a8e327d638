//! Command-line front end. Every command writes JSON lines; the exit code is
//! 0 when everything passed, 1 when a check failed, 2 on bad input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cartan_zform::campaign::{self, FaultKind, RunConfig};
use cartan_zform::chevalley::structure_constants;
use cartan_zform::roots::root_decomposition;
use cartan_zform::zform::decompose::triangular_decompose;
use cartan_zform::zform::expr::parse_monomial;
use cartan_zform::zform::lift::oracle_equal;
use cartan_zform::zform::verify::{Record, Status};
use cartan_zform::zform::{Engine, NamedOrder, ZCombination};
use cartan_zform::Error;

#[derive(Parser)]
#[command(name = "cartan-zform", version, about = "Integral forms of map superalgebras of Cartan type")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// W, S, S_tilde or H.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Adjoin the Euler derivation (S and H only).
    #[arg(long, global = true)]
    euler: bool,
    /// C, trunc-poly-N or cyclic-N.
    #[arg(long, global = true)]
    a_model: Option<String>,
    #[arg(long, global = true)]
    bound_r: Option<u32>,
    #[arg(long, global = true)]
    bound_chi: Option<u32>,
    /// height, triangular, reverse, even-first or corollary3.
    #[arg(long, global = true)]
    order: Option<String>,
    /// natural or reversed order on the basis of A.
    #[arg(long, global = true)]
    a_order: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated selectors: a group (structure, roots, axiom,
    /// identities, lemma-degree, p, theorem, decompose) or a name prefix.
    #[arg(long, global = true)]
    only: Option<String>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Record wall-clock time per line.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Corrupt the structure-constant table: constant, sign or cartan-sign.
    #[arg(long, global = true)]
    fault: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the roots of the algebra.
    Roots,
    /// Check the Chevalley axioms and list the structure constants.
    Chevalley,
    /// Run the verification campaigns.
    Verify,
    /// Rewrite a monomial onto the integral basis.
    Rewrite { expr: String },
    /// Triangular decomposition of a monomial, or the decomposition
    /// campaigns when no monomial is given.
    Decompose { expr: Option<String> },
}

/// A failure with its exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidSpec(_) | Error::UnknownName(_) | Error::Io(_) => 2,
            _ => 1,
        };
        Exit(code, e.to_string())
    }
}

impl Opts {
    fn config(&self) -> Result<RunConfig, Exit> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Exit(2, format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| Exit(2, format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = &self.$f { cfg.$f = v.clone(); })*};
        }
        take!(family, n, a_model, bound_r, bound_chi, order, a_order, seed, samples, max_degree, threads);
        if self.only.is_some() {
            cfg.only = self.only.clone();
        }
        cfg.euler |= self.euler;
        cfg.timing |= self.timing;
        if let Some(f) = &self.fault {
            cfg.fault = Some(f.parse::<FaultKind>()?);
        }
        Ok(cfg)
    }
}

struct Sink {
    out: Box<dyn Write>,
    failed: bool,
}

impl Sink {
    fn open(path: &Option<PathBuf>) -> Result<Self, Exit> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Exit(2, format!("{}: {e}", p.display())))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { out, failed: false })
    }

    fn line<T: Serialize>(&mut self, v: &T) -> Result<(), Exit> {
        let s = serde_json::to_string(v).map_err(|e| Exit(2, e.to_string()))?;
        match writeln!(self.out, "{s}") {
            // the reader went away (e.g. `| head`); stop quietly
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(self.failed as i32),
            r => r.map_err(|e| Exit(2, e.to_string())),
        }
    }

    fn record(&mut self, r: &Record) -> Result<(), Exit> {
        self.failed |= r.status != Status::Pass;
        self.line(r)
    }
}

fn base_params(cfg: &RunConfig) -> Value {
    json!({
        "family": cfg.family,
        "n": cfg.n,
        "euler": cfg.euler,
        "a_model": cfg.a_model,
        "order": cfg.order,
        "a_order": cfg.a_order,
    })
}

fn roots(cfg: &RunConfig, sink: &mut Sink) -> Result<(), Exit> {
    let rs = root_decomposition(&cfg.spec()?)?;
    for (i, r) in rs.roots.iter().enumerate() {
        sink.line(&json!({
            "root": r.label,
            "weight": r.weight,
            "height": r.height,
            "parity": r.parity,
            "multiplicity": r.multiplicity(),
            "positive": rs.positive[i],
            "simple": rs.simple.contains(&i),
        }))?;
    }
    Ok(())
}

fn chevalley(cfg: &RunConfig, sink: &mut Sink) -> Result<(), Exit> {
    let cb = cfg.chevalley()?;
    for r in campaign::axioms_campaign(&cb) {
        sink.record(&r)?;
    }
    let sc = structure_constants(&cb)?;
    let mut values: Vec<i64> = sc.entries.iter().flat_map(|(_, _, c)| c.iter().map(|(_, x)| *x)).collect();
    values.sort_unstable();
    values.dedup();
    let mut rec = Record::new("constants", json!({ "algebra": cb.rs.spec.to_string() }));
    rec.lhs_terms = sc.entries.len();
    rec.detail = Some(format!("distinct values {values:?}"));
    if values.iter().any(|x| x.abs() > 2) {
        rec = rec.fail(format!("constants outside {{0, ±1, ±2}}: {values:?}"));
    }
    sink.record(&rec)?;
    for (i, j, c) in &sc.entries {
        let terms: Vec<Value> = c.iter().map(|(t, x)| json!([sc.labels[*t], x])).collect();
        sink.line(&json!({ "left": sc.labels[*i], "right": sc.labels[*j], "bracket": terms }))?;
    }
    Ok(())
}

fn verify(cfg: &RunConfig, sink: &mut Sink) -> Result<(), Exit> {
    for r in campaign::verify_all(cfg)? {
        sink.record(&r)?;
    }
    Ok(())
}

fn rewrite(cfg: &RunConfig, expr: &str, sink: &mut Sink) -> Result<(), Exit> {
    let ctx = cfg.context()?;
    let m = parse_monomial(&ctx, expr)?;
    let mut engine = Engine::new(ctx.clone());
    let start = std::time::Instant::now();
    let z = match engine.rewrite(&m) {
        Ok(z) => z,
        Err(e) => {
            let mut params = base_params(cfg);
            params["input"] = json!(ctx.format_monomial(&m));
            let mut rec = Record::new("rewrite", params).error(&e);
            rec.lhs_terms = 1;
            sink.record(&rec)?;
            return Ok(());
        }
    };
    let oracle = oracle_equal(engine.oracle(), &ctx, &ZCombination::single(m.clone(), 1.into()), &z)?;
    let basis = z.terms().keys().all(|t| ctx.is_basis(t));
    let terms: Vec<Value> = z
        .terms()
        .iter()
        .map(|(t, c)| json!({ "coefficient": c.to_string(), "monomial": ctx.format_monomial(t) }))
        .collect();
    let status = if oracle && basis { Status::Pass } else { Status::Fail };
    sink.failed |= status != Status::Pass;
    sink.line(&json!({
        "identity": "rewrite",
        "params": base_params(cfg),
        "status": status,
        "lhs_terms": 1,
        "rhs_terms": z.len(),
        "max_degree": z.max_degree(),
        "elapsed": cfg.timing.then(|| start.elapsed().as_secs_f64()),
        "input": ctx.format_monomial(&m),
        "terms": terms,
        "basis": basis,
        "oracle_check": oracle,
    }))
}

fn decompose(cfg: &RunConfig, expr: Option<&str>, sink: &mut Sink) -> Result<(), Exit> {
    let Some(expr) = expr else {
        let ctx = cfg.context()?;
        for r in campaign::decompose_campaign(cfg, &ctx)? {
            sink.record(&r)?;
        }
        return Ok(());
    };
    let ctx = cfg.context()?.reordered(NamedOrder::Triangular, cfg.a_order()?);
    let m = parse_monomial(&ctx, expr)?;
    let mut engine = Engine::new(ctx.clone());
    let parts = triangular_decompose(&mut engine, &m)?;
    let terms: Vec<Value> = parts
        .iter()
        .map(|(c, t)| {
            json!({
                "coefficient": c.to_string(),
                "minus": ctx.format_monomial(&t.minus),
                "zero": ctx.format_monomial(&t.zero),
                "plus": ctx.format_monomial(&t.plus),
            })
        })
        .collect();
    sink.line(&json!({
        "identity": "triangular",
        "params": base_params(cfg),
        "status": Status::Pass,
        "lhs_terms": 1,
        "rhs_terms": parts.len(),
        "max_degree": parts.iter().map(|(_, t)| t.minus.degree() + t.zero.degree() + t.plus.degree()).max(),
        "elapsed": Value::Null,
        "input": ctx.format_monomial(&m),
        "terms": terms,
    }))
}

fn run(cli: Cli) -> Result<bool, Exit> {
    let cfg = cli.opts.config()?;
    let mut sink = Sink::open(&cli.opts.out)?;
    match &cli.command {
        Command::Roots => roots(&cfg, &mut sink)?,
        Command::Chevalley => chevalley(&cfg, &mut sink)?,
        Command::Verify => verify(&cfg, &mut sink)?,
        Command::Rewrite { expr } => rewrite(&cfg, expr, &mut sink)?,
        Command::Decompose { expr } => decompose(&cfg, expr.as_deref(), &mut sink)?,
    }
    match sink.out.flush() {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(Exit(2, e.to_string())),
        _ => {}
    }
    Ok(!sink.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

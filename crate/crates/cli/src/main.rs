mod checks;
mod output;
mod sweep;

use anyhow::{bail, Context, Result};
use checks::CheckOutcome;
use clap::{Parser, Subcommand};
use kacfusion_core::chars::{load_cache, save_cache};
use kacfusion_core::modular::modular_action;
use kacfusion_core::quotient::hong_quotient;
use kacfusion_core::rational::parse_q;
use kacfusion_core::twisted::twisted_verlinde;
use kacfusion_core::{affine_data, fusion::verlinde_algebra, AffineAlgebraData, AffineType, FiniteWeight};
use output::Format;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kacfusion", version, about = "Fusion algebras of affine Kac-Moody algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Untwisted fusion algebra by Kac-Walton.
    Fusion(Job),
    /// Twisted fusion algebra with the embedded source characters.
    Twisted(Job),
    /// Quotient by the primed affine Weyl group.
    Quotient(Job),
    /// S, T and u_21^r with relation residuals.
    Modular(Job),
    /// Run `--checks` on one cell; exits 1 if any fails.
    Check(Job),
    /// Run `--checks` over types and a level range.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Rational labels for the pairing shift, e.g. `1/2,0`.
    #[arg(long)]
    beta: Option<String>,
}

#[derive(clap::Args)]
struct Job {
    #[arg(long = "type")]
    atype: String,
    #[arg(long)]
    level: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Comma-separated types.
    #[arg(long = "type", value_delimiter = ',', required = true)]
    types: Vec<String>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    level_range: String,
    /// Defaults to `<out>.manifest.json` when `--out` is given.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    max_cells: usize,
    #[command(flatten)]
    common: Common,
}

fn parse_type(s: &str) -> Result<AffineType> {
    s.parse().with_context(|| format!("--type: cannot parse {s:?}"))
}

fn parse_level(k: i64) -> Result<i64> {
    if k < 1 {
        bail!("--level: must be at least 1, got {k}");
    }
    Ok(k)
}

fn parse_range(s: &str) -> Result<Vec<i64>> {
    let (a, b) = s.split_once("..").with_context(|| format!("--level-range: expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().with_context(|| format!("--level-range: bad start {a:?}"))?;
    let b: i64 = b.trim().parse().with_context(|| format!("--level-range: bad end {b:?}"))?;
    if a < 1 {
        bail!("--level-range: levels start at 1, got {a}");
    }
    Ok((a..=b).collect())
}

fn parse_beta(s: &Option<String>) -> Result<Option<FiniteWeight>> {
    let Some(s) = s else { return Ok(None) };
    let labels = s.split(',').map(|x| parse_q(x).map_err(anyhow::Error::msg)).collect::<Result<Vec<_>>>().context("--beta")?;
    Ok(Some(FiniteWeight::new(labels)))
}

fn configure(common: &Common) -> Result<()> {
    checks::validate_names(&common.checks)?;
    if let Some(n) = common.jobs {
        if n == 0 {
            bail!("--jobs: must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("--jobs")?;
    }
    Ok(())
}

fn run_checks(names: &[String], data: &AffineAlgebraData, k: i64, beta: Option<&FiniteWeight>) -> Result<BTreeMap<String, CheckOutcome>> {
    use rayon::prelude::*;
    let outs: Vec<CheckOutcome> = names.par_iter().map(|n| checks::run(n, data, k, beta)).collect::<Result<_>>()?;
    Ok(names.iter().cloned().zip(outs).collect())
}

fn attach(mut v: Value, checks: &BTreeMap<String, CheckOutcome>) -> Result<Value> {
    if !checks.is_empty() {
        v.as_object_mut().context("table is not a JSON object")?.insert("checks".into(), serde_json::to_value(checks)?);
    }
    Ok(v)
}

fn emit_table(common: &Common, value: Value, csv: impl FnOnce() -> Result<Vec<u8>>, checks: &BTreeMap<String, CheckOutcome>) -> Result<()> {
    let bytes = match common.format {
        Format::Json => output::json(&attach(value, checks)?)?,
        Format::Csv => {
            for (name, c) in checks {
                eprintln!("{name}: {}", if c.pass { "pass" } else { "FAIL" });
            }
            csv()?
        }
    };
    output::write_bytes(common.out.as_deref(), &bytes)
}

/// `Ok(true)` when every requested check passed.
fn run_job(kind: &Command, job: &Job) -> Result<bool> {
    let c = &job.common;
    configure(c)?;
    let k = parse_level(job.level)?;
    let data = affine_data(parse_type(&job.atype)?)?;
    let beta = parse_beta(&c.beta)?;
    let checks = run_checks(&c.checks, &data, k, beta.as_ref())?;
    let ok = checks.values().all(|o| o.pass);
    match kind {
        Command::Fusion(_) => {
            if !data.is_untwisted() {
                bail!("--type: {} is twisted; use the twisted command", data.atype);
            }
            let alg = verlinde_algebra(&data, k)?;
            emit_table(c, serde_json::to_value(&alg)?, || output::tensor_csv(&alg.basis.finite_weights(), &alg.entries()), &checks)?;
        }
        Command::Twisted(_) => {
            let t = twisted_verlinde(&data, k)?;
            let b = t.algebra.basis.finite_weights();
            emit_table(c, serde_json::to_value(&t)?, || output::tensor_csv(&b, &t.algebra.entries()), &checks)?;
        }
        Command::Quotient(_) => {
            let q = hong_quotient(&data, k)?;
            let b = q.basis.finite_weights();
            emit_table(c, serde_json::to_value(&q)?, || output::tensor_csv(&b, &q.entries()), &checks)?;
        }
        Command::Modular(_) => {
            let m = modular_action(&data, k)?;
            let mut v = serde_json::to_value(&m)?;
            v.as_object_mut().unwrap().insert("basis".into(), serde_json::to_value(&m.basis.weights)?);
            emit_table(c, v, || output::matrices_csv(&[("S", &m.s), ("T", &m.t), ("U21r", &m.u21r)]), &checks)?;
        }
        Command::Check(_) => {
            if c.checks.is_empty() {
                bail!("--checks: the check command needs at least one check");
            }
            let report = json!({ "type": data.atype.to_string(), "level": k, "version": sweep::VERSION, "checks": checks });
            let bytes = match c.format {
                Format::Json => output::json(&report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(vec![]);
                    w.write_record(["type", "level", "check", "pass"])?;
                    for (name, o) in &checks {
                        w.write_record([data.atype.to_string(), k.to_string(), name.clone(), o.pass.to_string()])?;
                    }
                    w.into_inner()?
                }
            };
            output::write_bytes(c.out.as_deref(), &bytes)?;
        }
        Command::Sweep(_) => unreachable!(),
    }
    Ok(ok)
}

fn run_sweep(a: &SweepArgs) -> Result<()> {
    let c = &a.common;
    configure(c)?;
    if c.checks.is_empty() {
        bail!("--checks: a sweep needs at least one check");
    }
    let cfg = sweep::SweepConfig {
        types: a.types.iter().map(|t| parse_type(t)).collect::<Result<_>>()?,
        levels: parse_range(&a.level_range)?,
        checks: c.checks.clone(),
        beta: parse_beta(&c.beta)?,
        manifest: a.manifest.clone().or_else(|| c.out.as_ref().map(|p| manifest_path(p))),
        max_cells: a.max_cells,
    };
    let (report, reused) = sweep::sweep(&cfg)?;
    if reused > 0 {
        eprintln!("reused {reused} of {} cells from the manifest", report.total);
    }
    let bytes = match c.format {
        Format::Json => output::json(&report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["type", "level", "check", "pass", "error"])?;
            for cell in &report.cells {
                let k = &cell.key;
                w.write_record([
                    k.atype.clone(),
                    k.level.to_string(),
                    k.check.clone(),
                    cell.pass.to_string(),
                    cell.error.clone().unwrap_or_default(),
                ])?;
            }
            w.into_inner()?
        }
    };
    output::write_bytes(c.out.as_deref(), &bytes)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("KACFUSION_CACHE_DIR").filter(|s| !s.is_empty()).map(PathBuf::from)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = cache_dir();
    if let Some(dir) = &cache {
        if let Err(e) = load_cache(dir) {
            eprintln!("warning: KACFUSION_CACHE_DIR: {e}");
        }
    }
    let result = match &cli.command {
        Command::Sweep(a) => run_sweep(a).map(|_| true),
        cmd @ (Command::Fusion(j) | Command::Twisted(j) | Command::Quotient(j) | Command::Modular(j) | Command::Check(j)) => {
            run_job(cmd, j)
        }
    };
    if let Some(dir) = &cache {
        if let Err(e) = save_cache(dir) {
            eprintln!("warning: KACFUSION_CACHE_DIR: {e}");
        }
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! `gaussmap`: browse the surface catalog and run the Gauss-map checks.
//!
//! Exit status: 0 when every requested check passes, 1 when one fails,
//! 2 on configuration or input errors.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use gaussmap_core::ambient::ModelSpace;
use gaussmap_core::exec::{configure_threads, Exec};
use gaussmap_core::report::{write_value, CheckReport};
use gaussmap_core::surface::catalog_entries;
use gaussmap_core::verify::suite::{run_suite, Profile};
use gaussmap_core::verify::{
    duality_check, hos_diagnostic, invariance_check, perp_subalgebra, quad_compare, ruh_vilms_residual,
};

use config::{parse_assignment, CheckKind, Format, GridSpec, KillingSpec, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "gaussmap", version)]
#[command(about = "Lie-algebra valued Gauss maps of surfaces in model spaces: catalog and verification checks")]
struct Cli {
    /// Run grid sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog surfaces.
    Catalog {
        /// Only surfaces in this space (r3, s3, h3, s2xr, h2xr).
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run one or more checks on a catalog surface.
    Check(CheckArgs),
    /// Run a fixed verification matrix.
    Suite {
        #[arg(value_parser = parse_profile)]
        profile: Profile,
        /// Restrict to surfaces of one space.
        #[arg(long)]
        only: Option<String>,
        /// Report directory (default reports/<profile>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write residual grids as CSV.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Checks to run; may be omitted when --config lists them.
    checks: Vec<CheckKind>,

    #[arg(long)]
    surface: Option<String>,

    /// JSON RunConfig; flags given here override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    kg: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Any surface parameter, as key=value.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,

    /// Nodes per axis, `N` or `NUxNV`.
    #[arg(long)]
    grid: Option<String>,
    /// Combine with a refined grid (the default).
    #[arg(long, conflicts_with = "no_richardson")]
    richardson: bool,
    #[arg(long)]
    no_richardson: bool,

    /// Preset name or comma-separated coefficients.
    #[arg(long)]
    killing: Option<String>,

    /// Per-field tolerance, as field=value.
    #[arg(long = "tol", value_name = "FIELD=VALUE")]
    tol: Vec<String>,

    /// Pin the Ricci scale s.
    #[arg(long)]
    s: Option<f64>,
    /// Pin the tangential coefficient c_t.
    #[arg(long = "c-t")]
    c_t: Option<f64>,

    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: bool,
}

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    s.parse().map_err(|e: gaussmap_core::GeomError| e.to_string())
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
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Ok(v) = std::env::var("GAUSSMAP_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("GAUSSMAP_THREADS must be a positive integer, got '{v}'"))?;
        configure_threads(n);
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Catalog { space, json } => catalog(space.as_deref(), json).map(|_| true),
        Command::Check(args) => check(args, exec),
        Command::Suite {
            profile,
            only,
            out,
            csv,
        } => suite(profile, only.as_deref(), out, csv, exec),
    }
}

fn parse_space(label: &str) -> Result<ModelSpace> {
    ModelSpace::from_label(label).ok_or_else(|| anyhow!("unknown space '{label}' (r3, s3, h3, s2xr, h2xr)"))
}

fn pretty_space(label: &str) -> String {
    label.to_uppercase().replace("XR", "xR")
}

fn catalog(space: Option<&str>, json: bool) -> Result<()> {
    let filter = space.map(parse_space).transpose()?.map(|s| s.label());
    let entries: Vec<_> = catalog_entries()
        .into_iter()
        .filter(|e| filter.as_ref().is_none_or(|f| &e.space == f))
        .collect();
    if json {
        let mut out = String::new();
        write_value(&mut out, &serde_json::to_value(&entries)?, 0);
        println!("{out}");
        return Ok(());
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    for e in &entries {
        let params = if e.params.is_empty() {
            "-".to_string()
        } else {
            e.params
                .iter()
                .map(|p| format!("{}={} ({})", p.name, p.default, p.range))
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!(
            "{} ({}) {}  params: {}  conformal: {}  cmc: {}  level set: {}",
            e.name,
            pretty_space(&e.space),
            e.h_formula,
            params,
            yn(e.conformal),
            yn(e.cmc),
            yn(e.level_set)
        );
    }
    Ok(())
}

fn build_config(args: &CheckArgs) -> Result<RunConfig> {
    let mut cfg = match (&args.config, &args.surface) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(name)) => RunConfig::new(name),
        (None, None) => return Err(anyhow!("either --surface or --config is required")),
    };
    if let Some(name) = &args.surface {
        cfg.surface = name.clone();
    }
    let named = [
        ("rho", args.rho),
        ("d", args.d),
        ("r", args.r),
        ("kg", args.kg),
        ("a", args.a),
        ("b", args.b),
        ("c", args.c),
    ];
    for (k, v) in named {
        if let Some(v) = v {
            cfg.params.insert(k.to_string(), v);
        }
    }
    for p in &args.params {
        let (k, v) = parse_assignment(p)?;
        cfg.params.insert(k, v);
    }
    if let Some(g) = &args.grid {
        cfg.grid = Some(GridSpec::parse(g)?);
    }
    if args.richardson {
        cfg.richardson = true;
    }
    if args.no_richardson {
        cfg.richardson = false;
    }
    if let Some(k) = &args.killing {
        cfg.killing_vector = Some(KillingSpec::parse(k));
    }
    for t in &args.tol {
        let (k, v) = parse_assignment(t)?;
        cfg.tolerances.insert(k, v);
    }
    if args.s.is_some() {
        cfg.s = args.s;
    }
    if args.c_t.is_some() {
        cfg.c_t = args.c_t;
    }
    if let Some(out) = &args.out {
        cfg.output.path = out.clone();
    }
    if args.csv {
        cfg.output.format = Format::JsonCsv;
    }
    if !args.checks.is_empty() {
        cfg.checks = args.checks.clone();
    }
    Ok(cfg)
}

fn check(args: CheckArgs, exec: Exec) -> Result<bool> {
    let cfg = build_config(&args)?;
    let mut prep = cfg.prepare()?;
    prep.opts.exec = exec;
    let s = &prep.surface;
    let csv = prep.output.format == Format::JsonCsv;
    let mut all = true;
    for kind in &prep.checks {
        let killing = || prep.killing.as_ref().expect("validated in prepare");
        let report = match kind {
            CheckKind::RuhVilms => ruh_vilms_residual(s, &prep.opts)?,
            CheckKind::Duality => duality_check(s, &prep.opts)?,
            CheckKind::Quadform => quad_compare(s, &prep.opts)?,
            CheckKind::Perp => {
                let samples = prep.opts.samples.max(s.space.algebra_kind().dim());
                perp_subalgebra(s, samples, &prep.opts)?.to_report(s, &prep.opts)?
            }
            CheckKind::Invariance => invariance_check(s, killing(), &prep.opts.t_grid, &prep.opts)?,
            CheckKind::Hos => hos_diagnostic(s, killing(), &prep.opts)?,
        };
        let stem = format!("{}-{}", report.check, report.surface);
        let written = output::write_report(&prep.output.path, &stem, &report, csv)?;
        print_report(&report);
        println!("  report: {}", written[0].display());
        all &= report.passed();
    }
    Ok(all)
}

fn meta_str(r: &CheckReport, key: &str) -> Option<String> {
    r.meta(key).map(|v| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    })
}

fn print_report(r: &CheckReport) {
    println!("{}", r.summary());
    match r.check.as_str() {
        "hos" => {
            for key in ["hemisphere_verdict", "threshold_verdict"] {
                if let Some(v) = meta_str(r, key) {
                    println!("  {}: {v}", key.replace('_', " "));
                }
            }
        }
        "quadform" | "holomorphy" => {
            if let Some(f) = r.field("cr") {
                println!("  CR residual: {:.3e}", f.max_abs);
            }
            if let Some(sig) = r.audit.ar_sign {
                println!("  sign: {}", if sig > 0.0 { "+" } else { "-" });
            }
        }
        "ruh-vilms" => {
            if let Some(s) = r.audit.s_fit {
                println!("  s fit: {s:.9}");
            }
            if let Some(c) = r.audit.c_t_fit {
                println!("  c_t fit: {c:.9}");
            }
        }
        "perp" => {
            if let (Some(d), Some(k)) = (meta_str(r, "dimension"), meta_str(r, "rank")) {
                println!("  perp dimension: {d} (rank {k})");
            }
        }
        _ => {}
    }
    for f in r.fields.iter().filter(|f| !f.pass) {
        eprintln!(
            "FAIL {} [{}]: field {} max_abs {:.3e} > tol {:.1e} at node [{}, {}]",
            r.check,
            r.surface,
            f.name,
            f.max_abs,
            f.tol.unwrap_or(f64::NAN),
            f.argmax.0,
            f.argmax.1
        );
    }
}

fn suite(profile: Profile, only: Option<&str>, out: Option<PathBuf>, csv: bool, exec: Exec) -> Result<bool> {
    let only = only.map(parse_space).transpose()?;
    let dir = out.unwrap_or_else(|| PathBuf::from("reports").join(profile.to_string()));
    let run = run_suite(profile, only, exec).context("running suite")?;
    for it in &run.items {
        output::write_report(&dir, &it.id, &it.report, csv)?;
        print_report(&it.report);
    }
    output::write_atomic(&dir.join("suite.json"), &run.to_json())?;
    let failed = run.failures().count();
    println!(
        "suite {profile}: {} reports, {} failed; written to {}",
        run.items.len(),
        failed,
        dir.display()
    );
    Ok(failed == 0)
}

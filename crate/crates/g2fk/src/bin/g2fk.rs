//! Command-line front end: build and cache group tables, run verification
//! suites, and emit machine-readable JSON reports.

use clap::{Args, Parser, Subcommand};
use g2fk::engine::{GroupTable, Model};
use g2fk::field::Fp;
use g2fk::report::{CheckResult, Report};
use g2fk::runner::{self, RunConfig, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "g2fk", version, about = "Exact verification toolkit for the Sylow p-subgroup of G_2(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Prime p (odd, 3 <= p <= 31; suites support 3, 5, 7).
    #[arg(long, default_value_t = 7)]
    p: u32,
    /// Construction model: poly | chevalley (default: poly, chevalley at p = 3).
    #[arg(long)]
    model: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Table cache directory (default: $G2FK_CACHE_DIR if set).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Report output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized property runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock timings in the report (off by default so reports
    /// are byte-stable).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build the group table and write it to the cache directory.
    Build(CommonOpts),
    /// Run verification suites and emit a JSON report.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// Suite: structure | aut | chevalley | p3 | all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Family and orbit censuses.
    Census {
        #[command(flatten)]
        common: CommonOpts,
        /// The 13-orbit census of nonempty subsets of {1..6} under F_7^x.
        #[arg(long)]
        subsets: bool,
    },
    /// Cross-model isomorphism check.
    Iso(CommonOpts),
    /// Run every suite (alias for verify --suite all).
    Report(CommonOpts),
}

fn usage_exit(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn resolve_model(opts: &CommonOpts) -> Result<Model, String> {
    match opts.model.as_deref() {
        None => Ok(if opts.p == 3 { Model::Chevalley } else { Model::Poly }),
        Some("poly") => Ok(Model::Poly),
        Some("chevalley") => Ok(Model::Chevalley),
        Some(other) => Err(format!("unknown model '{other}' (poly | chevalley)")),
    }
}

fn resolve_cache_dir(opts: &CommonOpts) -> Option<PathBuf> {
    opts.cache_dir
        .clone()
        .or_else(|| std::env::var_os("G2FK_CACHE_DIR").map(PathBuf::from))
}

fn config(opts: &CommonOpts, suite: Suite) -> Result<RunConfig, String> {
    Ok(RunConfig {
        p: opts.p,
        model: resolve_model(opts)?,
        suite,
        seed: opts.seed,
        cache_dir: resolve_cache_dir(opts),
        timings: opts.timings,
    })
}

fn emit(report: &Report, out: &Option<PathBuf>) -> std::io::Result<ExitCode> {
    let json = report.to_json();
    match out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(if report.any_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_and_emit(cfg: &RunConfig, out: &Option<PathBuf>) -> ExitCode {
    match runner::run(cfg) {
        Ok(report) => emit(&report, out).unwrap_or_else(|e| usage_exit(&format!("io: {e}"))),
        Err(e) => usage_exit(&e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Build(c) | Command::Iso(c) | Command::Report(c) => c.clone(),
        Command::Verify { common, .. } | Command::Census { common, .. } => common.clone(),
    };
    if let Some(jobs) = common.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            return usage_exit("worker pool already initialized");
        }
    }

    match &cli.command {
        Command::Build(opts) => {
            let model = match resolve_model(opts) {
                Ok(m) => m,
                Err(e) => return usage_exit(&e),
            };
            let fp = match Fp::new(opts.p) {
                Ok(fp) => fp,
                Err(e) => return usage_exit(&e.to_string()),
            };
            if opts.p == 3 && model == Model::Poly {
                return usage_exit("model requires p >= 5 (the coordinate model divides by 2 and 3)");
            }
            let table = match GroupTable::build(fp, model) {
                Ok(t) => t,
                Err(e) => return usage_exit(&e.to_string()),
            };
            let dir = match resolve_cache_dir(opts) {
                Some(d) => d,
                None => {
                    return usage_exit("build needs --cache-dir or G2FK_CACHE_DIR");
                }
            };
            let path = g2fk::cache::cache_path(&dir, opts.p, model);
            if let Err(e) = g2fk::cache::write_cache(&table, &path) {
                return usage_exit(&e.to_string());
            }
            println!(
                "built {} table for p = {} ({} elements) -> {}",
                model.name(),
                opts.p,
                table.n,
                path.display()
            );
            ExitCode::SUCCESS
        }
        Command::Verify { common, suite } => {
            let suite = match Suite::parse(suite) {
                Some(s) => s,
                None => return usage_exit(&format!("unknown suite '{suite}'")),
            };
            match config(common, suite) {
                Ok(cfg) => run_and_emit(&cfg, &common.out),
                Err(e) => usage_exit(&e),
            }
        }
        Command::Census { common, subsets } => {
            if *subsets {
                let checks = g2fk::verify::subset_orbit_census();
                let model = match resolve_model(common) {
                    Ok(m) => m.name().to_string(),
                    Err(e) => return usage_exit(&e),
                };
                let report = Report::new(common.p, &model, "census", common.seed, checks);
                return emit(&report, &common.out)
                    .unwrap_or_else(|e| usage_exit(&format!("io: {e}")));
            }
            // Family censuses run on the coordinate model.
            if common.p < 5 {
                return usage_exit("family censuses need p >= 5 (use --subsets at any p)");
            }
            let cfg = match config(common, Suite::Structure) {
                Ok(c) => c,
                Err(e) => return usage_exit(&e),
            };
            let (table, hit) = runner::acquire_table(&cfg, Model::Poly);
            let ctx = g2fk::verify::Structure::new(&table);
            let mut checks: Vec<CheckResult> = Vec::new();
            checks.extend(g2fk::verify::build_w_family(&ctx));
            checks.extend(g2fk::verify::build_u_family(&ctx));
            checks.extend(g2fk::verify::subset_orbit_census());
            let mut report = Report::new(common.p, "poly", "census", common.seed, checks);
            report.cache_hits = hit as usize;
            emit(&report, &common.out).unwrap_or_else(|e| usage_exit(&format!("io: {e}")))
        }
        Command::Iso(opts) => {
            if opts.p < 5 {
                return usage_exit("the isomorphism check needs p >= 5");
            }
            let iso = match g2fk::chevalley::iso_check(Fp::new(opts.p).unwrap()) {
                Ok(i) => i,
                Err(e) => return usage_exit(&e.to_string()),
            };
            let n = (opts.p as usize).pow(6);
            let check = CheckResult::expect(
                "chev.iso",
                iso.ok && iso.image_size == n,
                "x_r(l) -> x_phi(r)(l) extends to an isomorphism U -> S",
                format!("image {} of {n}, {} products checked", iso.image_size, iso.products_checked),
                format!("witness {:?}", iso.witness),
            );
            let report = Report::new(opts.p, "both", "iso", opts.seed, vec![check]);
            emit(&report, &opts.out).unwrap_or_else(|e| usage_exit(&format!("io: {e}")))
        }
        Command::Report(opts) => match config(opts, Suite::All) {
            Ok(cfg) => run_and_emit(&cfg, &opts.out),
            Err(e) => usage_exit(&e),
        },
    }
}

use clap::{Parser, Subcommand};
use fluxlab_cli::config::ScenarioConfig;
use fluxlab_cli::hn::{hn_csv, Method};
use fluxlab_cli::run::run_dir;
use fluxlab_cli::{
    emit_plots, load_config, manifest_exit, run_scenario, verify_run, RunError, RunManifest,
    RunOptions, EXIT_BOUND, EXIT_CONFIG, EXIT_OK, OUT_ENV,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "fluxlab", version, about = "Energy-flux experiments for dissipative PDEs")]
struct Cli {
    /// Scenario file (TOML); repeat to run a batch
    #[arg(long, global = true)]
    config: Vec<PathBuf>,
    /// Output root; runs go to <out>/<scenario name>
    #[arg(long, global = true, env = OUT_ENV)]
    out: Option<PathBuf>,
    /// Seed for random initial data, overriding the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Scenarios run concurrently in a batch
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Continue from the checkpoint in the run directory
    #[arg(long, global = true)]
    resume: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of h_N(r) as CSV `r,h,method,cross_check_error`
    Hn {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Run model scenarios and their flux diagnostics
    Simulate,
    /// Run vorticity scenarios on the cylinder
    Vorticity,
    /// Recompute diagnostics from a run's recorded history
    Verify {
        /// Run directory; taken from --config and --out when absent
        run: Option<PathBuf>,
    },
    /// Run a model scenario with a kink census
    Kinks,
    /// Render SVG figures from the CSVs of a run directory
    Plot { run: Option<PathBuf> },
    /// Check configs without running them
    Validate,
}

fn out_root(cli: &Cli) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from("runs"))
}

fn report(e: &RunError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn print_summary(dir: &Path, m: &RunManifest) {
    println!("{} -> {}", m.name, dir.display());
    for (kind, s) in &m.summary {
        let status = match (s.failed, s.asymptotic) {
            (0, _) => "pass",
            (_, true) => "fail (asymptotic, advisory)",
            _ => "FAIL",
        };
        let margin = s.worst_margin.map_or(String::from("-"), |v| format!("{v:.3e}"));
        println!(
            "  {kind:<18} {:>6} checked {:>5} failed  worst margin {margin:>11}  {status}",
            s.checked, s.failed
        );
    }
    if !m.passed {
        println!("  non-asymptotic failures: {}", m.failed_kinds().join(", "));
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Want {
    Model,
    Vorticity,
    Kinks,
}

fn admit(cfg: &ScenarioConfig, want: Want) -> Result<(), RunError> {
    let bad = |msg: &str| Err(RunError::Input(format!("{}: {msg}", cfg.name)));
    match want {
        Want::Model if cfg.is_vorticity() => bad("vorticity scenario; use `fluxlab vorticity`"),
        Want::Vorticity if !cfg.is_vorticity() => bad("model scenario; use `fluxlab simulate`"),
        Want::Kinks if cfg.diagnostics.kinks.is_none() || cfg.is_vorticity() => {
            bad("needs a model scenario with [diagnostics.kinks]")
        }
        _ => Ok(()),
    }
}

fn run_one(cli: &Cli, path: &Path, want: Want) -> i32 {
    let cfg = match load_config(path, cli.seed).and_then(|c| admit(&c, want).map(|_| c)) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    let opts = RunOptions {
        out_root: out_root(cli),
        resume: cli.resume,
    };
    match run_scenario(&cfg, &opts) {
        Ok(m) => {
            print_summary(&run_dir(&cfg, &opts), &m);
            manifest_exit(&m)
        }
        Err(e) => report(&e),
    }
}

fn run_batch(cli: &Cli, want: Want) -> i32 {
    if cli.config.is_empty() {
        eprintln!("error: --config is required");
        return EXIT_CONFIG;
    }
    let threads = cli.threads.max(1);
    let mut codes = Vec::new();
    for chunk in cli.config.chunks(threads) {
        std::thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|p| s.spawn(move || run_one(cli, p, want)))
                .collect();
            codes.extend(handles.into_iter().map(|h| h.join().unwrap_or(EXIT_CONFIG)));
        });
    }
    codes.into_iter().max().unwrap_or(EXIT_OK)
}

fn resolve_run(cli: &Cli, run: &Option<PathBuf>) -> Result<PathBuf, RunError> {
    if let Some(r) = run {
        return Ok(r.clone());
    }
    let path = cli
        .config
        .first()
        .ok_or_else(|| RunError::Input("give a run directory or --config".into()))?;
    let cfg = load_config(path, cli.seed)?;
    Ok(run_dir(
        &cfg,
        &RunOptions {
            out_root: out_root(cli),
            resume: false,
        },
    ))
}

fn verify(cli: &Cli, run: &Option<PathBuf>) -> i32 {
    let dir = match resolve_run(cli, run) {
        Ok(d) => d,
        Err(e) => return report(&e),
    };
    match verify_run(&dir) {
        Ok(r) => {
            for (kind, s) in &r.summary {
                println!("  {kind:<18} {:>6} checked {:>5} failed", s.checked, s.failed);
            }
            for f in &r.mismatched {
                println!("  recomputed {f} differs from the manifest");
            }
            for f in &r.stale {
                println!("  {f} changed on disk since the run");
            }
            if r.passed() {
                println!("verified {}", dir.display());
                EXIT_OK
            } else {
                EXIT_BOUND
            }
        }
        Err(e) => report(&e),
    }
}

fn plot(cli: &Cli, run: &Option<PathBuf>) -> i32 {
    let dir = match resolve_run(cli, run) {
        Ok(d) => d,
        Err(e) => return report(&e),
    };
    match emit_plots(&dir) {
        Ok(files) => {
            for f in files {
                println!("{}", dir.join(f).display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn validate(cli: &Cli) -> i32 {
    if cli.config.is_empty() {
        eprintln!("error: --config is required");
        return EXIT_CONFIG;
    }
    let mut code = EXIT_OK;
    for p in &cli.config {
        match load_config(p, cli.seed) {
            Ok(c) => println!("ok: {} ({})", p.display(), c.name),
            Err(e) => {
                eprintln!("{}: {e}", p.display());
                code = EXIT_CONFIG;
            }
        }
    }
    code
}

fn hn(cli: &Cli, dim: u32, rmin: f64, rmax: f64, points: usize, method: Method) -> i32 {
    let csv = match hn_csv(dim, rmin, rmax, points, method) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match &cli.out {
        Some(dir) => {
            let path = dir.join(format!("hn_N{dim}.csv"));
            if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| csv.write(&path)) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_CONFIG;
            }
            println!("{}", path.display());
        }
        None => print!("{}", csv.as_str()),
    }
    EXIT_OK
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Hn {
            dim,
            rmin,
            rmax,
            points,
            method,
        } => hn(&cli, *dim, *rmin, *rmax, *points, *method),
        Command::Simulate => run_batch(&cli, Want::Model),
        Command::Vorticity => run_batch(&cli, Want::Vorticity),
        Command::Kinks => run_batch(&cli, Want::Kinks),
        Command::Verify { run } => verify(&cli, run),
        Command::Plot { run } => plot(&cli, run),
        Command::Validate => validate(&cli),
    };
    ExitCode::from(code as u8)
}

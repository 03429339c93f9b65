use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qes::algebra::parse_expr;
use qes::experiments::{run_by_name, ExperimentConfig, ResultRecord};

#[derive(Parser)]
#[command(name = "qes", version, about = "Coulomb self-interaction experiments on a box-discretized Dirac field")]
struct Cli {
    /// Experiment file (TOML); defaults are used for anything it omits.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for the JSON and CSV outputs.
    #[arg(long, global = true, value_name = "DIR", default_value = "results")]
    out: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Also write an SVG chart per series.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// A lone electron under the fully normal-ordered Coulomb term.
    Immunity,
    /// Packet spreading under free, full and self-repelling dynamics.
    Spread,
    /// Signs of the ee, ep and pp interaction pieces.
    Signs,
    /// Pair creation out of the vacuum and the truncated ground state.
    Vacuum,
    /// Classical Coulomb energies and the two-electron decomposition.
    Classical,
    /// Read an operator from stdin and print it reordered.
    NormalOrder {
        #[arg(long, value_enum, default_value_t = Ordering::Normal)]
        mode: Ordering,
    },
    /// Print the effective experiment config as TOML.
    PrintConfig,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ordering {
    /// `:A:`, contractions dropped.
    Normal,
    /// Normal order with contractions kept, the same operator.
    Wick,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ExperimentConfig::from_toml(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn report(rec: &ResultRecord, written: &[PathBuf]) {
    println!("{} (config {})", rec.experiment, &rec.config_hash[..12]);
    for v in &rec.verdicts {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("  {tag} {}: {:e} {} {:e}", v.name, v.value, v.relation.symbol(), v.threshold);
    }
    println!(
        "  truncation: {} matrix elements dropped over {} builds",
        rec.total_dropped(),
        rec.truncation.len()
    );
    for p in written {
        println!("  wrote {}", p.display());
    }
}

fn experiment(name: &str, cfg: &ExperimentConfig, out: &Path, svg: bool) -> Result<bool> {
    let rec = run_by_name(name, cfg)?;
    let written = rec.write(out, svg).with_context(|| format!("writing to {}", out.display()))?;
    report(&rec, &written);
    Ok(rec.passed())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load(cli)?;
    let name = match &cli.command {
        Command::Immunity => "immunity",
        Command::Spread => "spread",
        Command::Signs => "signs",
        Command::Vacuum => "vacuum",
        Command::Classical => "classical",
        Command::NormalOrder { mode } => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            let a = parse_expr(text.trim())?;
            let b = match mode {
                Ordering::Normal => a.normal_order(),
                Ordering::Wick => a.wick_reorder(),
            };
            println!("{b}");
            return Ok(true);
        }
        Command::PrintConfig => {
            print!("{}", cfg.to_toml());
            return Ok(true);
        }
    };
    experiment(name, &cfg, &cli.out, cli.svg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

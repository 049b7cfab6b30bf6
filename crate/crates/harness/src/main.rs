use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use prefmax_core::descent::StepSchedule;
use prefmax_core::vip::VipKind;
use prefmax_harness::config::ConfigFile;
use prefmax_harness::experiment::{parse_suite, Check, VipMode, DEFAULT_SEED};
use prefmax_harness::trace_io::write_atomic;
use prefmax_harness::{registry, run_experiment, run_vip, DescentParams, Experiment, HarnessError, RunReport, VipRequest};

#[derive(Parser)]
#[command(name = "prefmax", version, about = "Maximal elements of preference relations: checks, VIPs and descent")]
struct Cli {
    /// key = value file supplying defaults for any flag not given.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the fixture registry.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Run a suite of checks against a fixture.
    Check {
        #[arg(long)]
        fixture: Option<String>,
        /// Comma list of checks; the fixture's default suite when absent.
        #[arg(long)]
        suite: Option<String>,
        /// Grid override, `lo:hi:step[,lo:hi:step...]`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the subgradient-type descent on a fixture with a gap function.
    Descend {
        #[arg(long)]
        fixture: Option<String>,
        /// Comma-separated starting point.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long)]
        theta0: Option<f64>,
        /// `harmonic` or `list:<path>` with one step per line.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        /// Trace destination; `.csv` or `.json`.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Enumerate Stampacchia or Minty solutions on a fixture grid.
    Vip {
        #[arg(long)]
        fixture: Option<String>,
        /// svip or mvip.
        #[arg(long)]
        kind: Option<String>,
        /// T or G.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Print every registered fixture with its description.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<HarnessError>().map_or(2, HarnessError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let argv = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match cli.command {
        Command::Fixtures { action: FixturesAction::List } => {
            for f in registry()?.iter() {
                let mut flags = Vec::new();
                if f.lsc {
                    flags.push("lsc");
                }
                if f.complete {
                    flags.push("complete");
                }
                if f.gap.is_some() {
                    flags.push("gap");
                }
                if f.cones.is_some() {
                    flags.push("closed-form cones");
                }
                let suite: Vec<&str> = f.default_suite.iter().map(|c| c.name()).collect();
                println!("{}  dim={} [{}]", f.name, f.relation.dim(), flags.join(", "));
                println!("    {}", f.notes);
                println!("    default suite: {}", suite.join(","));
            }
            Ok(0)
        }
        Command::Check { fixture, suite, grid, tol, seed, json } => {
            let fixture = required(fixture, cfg.string("fixture")?, "--fixture")?;
            let suite = match suite.or(cfg.string("suite")?) {
                Some(s) => Some(parse_suite(&s)?),
                None => None,
            };
            let exp = Experiment {
                command: argv,
                suite,
                grid: grid.or(cfg.string("grid")?),
                tol: tol.or(cfg.float("tol")?).unwrap_or(Experiment::new("").tol),
                seed: seed.or(cfg.uint("seed")?).unwrap_or(DEFAULT_SEED),
                ..Experiment::new(fixture)
            };
            let report = run_experiment(&exp)?;
            finish(report, json.or(cfg.string("json")?.map(PathBuf::from)))
        }
        Command::Descend { fixture, x0, theta0, schedule, max_iters, eps, trace, json } => {
            let fixture = required(fixture, cfg.string("fixture")?, "--fixture")?;
            let x0 = match x0.or(cfg.string("x0")?) {
                Some(s) => Some(parse_coords(&s)?),
                None => None,
            };
            let theta0 = theta0.or(cfg.float("theta0")?).unwrap_or(1.0);
            let max_iters = max_iters.or(cfg.uint("max_iters")?.map(|v| v as usize));
            let (schedule, max_iters) = match schedule.or(cfg.string("schedule")?).as_deref() {
                None | Some("harmonic") => (StepSchedule::harmonic(theta0), max_iters.unwrap_or(10_000)),
                Some(s) if s.starts_with("list:") => {
                    let steps = read_steps(Path::new(&s["list:".len()..]))?;
                    let n = max_iters.unwrap_or(steps.len());
                    (StepSchedule::Explicit { steps }, n)
                }
                Some(other) => {
                    return Err(HarnessError::Config(format!("--schedule must be harmonic or list:<path>, got {other}")).into())
                }
            };
            let exp = Experiment {
                command: argv,
                suite: Some(vec![Check::Descent]),
                descent: DescentParams { x0, schedule, max_iters, eps: eps.or(cfg.float("eps")?).unwrap_or(0.0) },
                trace: trace.or(cfg.string("trace")?.map(PathBuf::from)),
                ..Experiment::new(fixture)
            };
            let report = run_experiment(&exp)?;
            finish(report, json.or(cfg.string("json")?.map(PathBuf::from)))
        }
        Command::Vip { fixture, kind, mode, grid, tol, json } => {
            let fixture = required(fixture, cfg.string("fixture")?, "--fixture")?;
            let kind = match required(kind, cfg.string("kind")?, "--kind")?.as_str() {
                "svip" => VipKind::Stampacchia,
                "mvip" => VipKind::Minty,
                other => return Err(HarnessError::Config(format!("--kind must be svip or mvip, got {other}")).into()),
            };
            let mode = match mode.or(cfg.string("mode")?) {
                Some(m) => Some(m.parse::<VipMode>()?),
                None => None,
            };
            let req = VipRequest {
                command: argv,
                fixture,
                kind,
                mode,
                grid: grid.or(cfg.string("grid")?),
                tol: tol.or(cfg.float("tol")?).unwrap_or(Experiment::new("").tol),
            };
            let report = run_vip(&req)?;
            finish(report, json.or(cfg.string("json")?.map(PathBuf::from)))
        }
    }
}

fn required(flag: Option<String>, from_config: Option<String>, name: &str) -> Result<String, HarnessError> {
    flag.or(from_config).ok_or_else(|| HarnessError::Config(format!("{name} is required")))
}

fn parse_coords(s: &str) -> Result<Vec<f64>, HarnessError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| HarnessError::Config(format!("--x0 {s:?}: {e}"))))
        .collect()
}

fn read_steps(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading step list {}", path.display()))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| HarnessError::Config(format!("step list {}: {t:?}: {e}", path.display())).into()))
        .collect()
}

fn finish(mut report: RunReport, json: Option<PathBuf>) -> anyhow::Result<i32> {
    for v in &report.verdicts {
        let mark = if v.pass { "PASS" } else { "FAIL" };
        let polarity = if v.expected { "" } else { " (expected failure)" };
        println!("{mark} {}{polarity}: {}", v.check, v.detail);
    }
    if let Some(path) = json {
        report.artifacts.push(path.clone());
        let body = serde_json::to_string_pretty(&report)?;
        write_atomic(&path, body.as_bytes())?;
    }
    for a in &report.artifacts {
        println!("wrote {}", a.display());
    }
    Ok(report.exit_code())
}

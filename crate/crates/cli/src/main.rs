//! Batch frontend for projection, complexity estimation, risk experiments
//! and time-data benchmark tables.
//!
//! Exit codes: 0 success, 1 domain errors (infeasible anchor, inapplicable
//! bound, iteration budget, ...), 2 usage and config-parse errors. All
//! stochastic outputs are reproducible from the seed in the config file;
//! only the wall_ms column of tradeoff tables is exempt.

mod config;
mod plot;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use config::{CommandKind, ComplexityConfig, OutputFormat, RunConfig, TradeoffConfig};
use convexrelax_core::{cones, denoise, geometry, io as core_io, runtime, tradeoff};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "convexrelax",
    about = "Convex-relaxation denoising experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a point (CSV) onto a constraint body (JSON descriptor).
    Project {
        /// Body descriptor file, e.g. {"variant":"l1_ball","radius":1.0,"ambient_dim":4}
        #[arg(long)]
        body: PathBuf,
        /// Input point: one value per line, or one comma-separated row per
        /// matrix row.
        #[arg(long)]
        point: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte-Carlo Gaussian squared-complexity of a tangent cone.
    Complexity {
        /// JSON config with mode approx|exact, cone data, draws and seed.
        #[arg(long)]
        config: PathBuf,
        /// Output path for the JSON estimate (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo risk of the shrinkage estimator for one configuration.
    Risk {
        /// JSON config: signal, body, sigma, n, trials, seed.
        #[arg(long)]
        config: PathBuf,
        /// Output path for the JSON estimate (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample-complexity search over a grid: one record per (p, relaxation).
    Tradeoff {
        /// JSON config: example, m_grid, relaxations, trials, seed.
        #[arg(long)]
        config: PathBuf,
        /// Output path for the table (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Table format: csv (default) or json.
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        /// Also emit per-relaxation (n_star, total_ops) plot data here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Closed-form complexity bounds; prints the value.
    Bounds {
        /// Which bound: l1 | nuclear | volume | vertex | cap-volume | cap-angle
        #[arg(long)]
        which: String,
        /// Sparsity (l1).
        #[arg(long)]
        s: Option<usize>,
        /// Ambient dimension (l1, volume, vertex, cap-volume, cap-angle).
        #[arg(long)]
        p: Option<usize>,
        /// Rank (nuclear).
        #[arg(long)]
        r: Option<usize>,
        /// Row count (nuclear).
        #[arg(long)]
        m1: Option<usize>,
        /// Column count (nuclear).
        #[arg(long)]
        m2: Option<usize>,
        /// Normalized polar volume (volume, cap-angle).
        #[arg(long)]
        mu: Option<f64>,
        /// Vertex count (vertex).
        #[arg(long)]
        v: Option<u64>,
        /// Cap height (cap-volume).
        #[arg(long)]
        h: Option<f64>,
    },
    /// Re-emit plot data from a previously written records CSV.
    PlotData {
        /// Records CSV produced by the tradeoff command.
        #[arg(long)]
        records: PathBuf,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<convexrelax_core::Error>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// Worker cap from CONVEXRELAX_THREADS; 0 or unset means automatic.
fn init_workers() -> Result<(), String> {
    match std::env::var("CONVEXRELAX_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| format!("CONVEXRELAX_THREADS must be an integer, got `{raw}`"))?;
            runtime::set_worker_threads(n);
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<()> {
    let mut run = normalize(command)?;
    match run.command {
        CommandKind::Project => cmd_project(&run),
        CommandKind::Complexity => cmd_complexity(&mut run),
        CommandKind::Risk => cmd_risk(&mut run),
        CommandKind::Tradeoff => cmd_tradeoff(&mut run),
        CommandKind::Bounds => cmd_bounds(&run),
        CommandKind::PlotData => cmd_plot_data(&run),
    }
}

/// Folds the parsed argv into the uniform run description.
fn normalize(command: Command) -> anyhow::Result<RunConfig> {
    let cfg = match command {
        Command::Project { body, point, out } => RunConfig {
            command: CommandKind::Project,
            parameters: serde_json::json!({
                "body": body.to_string_lossy(),
                "point": point.to_string_lossy(),
            }),
            seed: None,
            output_path: Some(out),
            format: OutputFormat::Csv,
        },
        Command::Complexity { config, out } => RunConfig {
            command: CommandKind::Complexity,
            parameters: serde_json::json!({"config": config.to_string_lossy()}),
            seed: None,
            output_path: out,
            format: OutputFormat::Json,
        },
        Command::Risk { config, out } => RunConfig {
            command: CommandKind::Risk,
            parameters: serde_json::json!({"config": config.to_string_lossy()}),
            seed: None,
            output_path: out,
            format: OutputFormat::Json,
        },
        Command::Tradeoff {
            config,
            out,
            format,
            plot_data,
        } => RunConfig {
            command: CommandKind::Tradeoff,
            parameters: serde_json::json!({
                "config": config.to_string_lossy(),
                "plot_data": plot_data.map(|p| p.to_string_lossy().into_owned()),
            }),
            seed: None,
            output_path: out,
            format,
        },
        Command::Bounds {
            which,
            s,
            p,
            r,
            m1,
            m2,
            mu,
            v,
            h,
        } => RunConfig {
            command: CommandKind::Bounds,
            parameters: serde_json::json!({
                "which": which, "s": s, "p": p, "r": r,
                "m1": m1, "m2": m2, "mu": mu, "v": v, "h": h,
            }),
            seed: None,
            output_path: None,
            format: OutputFormat::Json,
        },
        Command::PlotData { records, out } => RunConfig {
            command: CommandKind::PlotData,
            parameters: serde_json::json!({"records": records.to_string_lossy()}),
            seed: None,
            output_path: out,
            format: OutputFormat::Csv,
        },
    };
    Ok(cfg)
}

fn param_path(run: &RunConfig, key: &str) -> PathBuf {
    PathBuf::from(run.parameters[key].as_str().expect("path parameter"))
}

fn read_file(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_output(run: &RunConfig, content: &str) -> anyhow::Result<()> {
    match &run.output_path {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_project(run: &RunConfig) -> anyhow::Result<()> {
    let body: geometry::ConvexBody = serde_json::from_str(&read_file(&param_path(run, "body"))?)
        .context("parsing body descriptor")?;
    let point = core_io::parse_point_csv(&read_file(&param_path(run, "point"))?)?;
    let projected = geometry::project(&body, &point)?;
    write_output(run, &core_io::format_point_csv(&projected, body.shape()))
}

fn cmd_complexity(run: &mut RunConfig) -> anyhow::Result<()> {
    let cfg = ComplexityConfig::from_json(&read_file(&param_path(run, "config"))?)?;
    run.seed = Some(cfg.seed);
    let estimate = cones::mc_squared_complexity(&cfg.spec, cfg.draws, cfg.seed)?;
    let mut text = serde_json::to_string(&estimate)?;
    text.push('\n');
    write_output(run, &text)
}

fn cmd_risk(run: &mut RunConfig) -> anyhow::Result<()> {
    let cfg: denoise::DenoiseTrialConfig =
        serde_json::from_str(&read_file(&param_path(run, "config"))?)
            .context("parsing risk config")?;
    cfg.validate()?;
    run.seed = Some(cfg.seed);
    let estimate = denoise::empirical_risk(&cfg)?;
    let mut text = serde_json::to_string(&estimate)?;
    text.push('\n');
    write_output(run, &text)
}

fn cmd_tradeoff(run: &mut RunConfig) -> anyhow::Result<()> {
    let cfg: TradeoffConfig = serde_json::from_str(&read_file(&param_path(run, "config"))?)
        .context("parsing tradeoff config")?;
    run.seed = Some(cfg.seed);
    let records = tradeoff::run_example(
        cfg.example,
        &cfg.resolved_grid(),
        &cfg.relaxations,
        cfg.trials,
        cfg.target_risk,
        cfg.seed,
        cfg.hull_limit,
    )?;
    debug_assert!(records.iter().all(|r| Some(r.seed) == run.seed));
    let rendered = match run.format {
        OutputFormat::Csv => tradeoff::records_to_csv(&records),
        OutputFormat::Json => {
            let mut t = serde_json::to_string(&records)?;
            t.push('\n');
            t
        }
    };
    write_output(run, &rendered)?;
    if let Some(path) = run.parameters["plot_data"].as_str() {
        let table = plot::emit_plot_data(&records)?;
        std::fs::write(path, table).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn cmd_bounds(run: &RunConfig) -> anyhow::Result<()> {
    let p = &run.parameters;
    let need_usize = |key: &str| -> anyhow::Result<usize> {
        p[key]
            .as_u64()
            .map(|v| v as usize)
            .with_context(|| format!("bound `{}` needs --{key}", p["which"]))
    };
    let need_f64 = |key: &str| -> anyhow::Result<f64> {
        p[key]
            .as_f64()
            .with_context(|| format!("bound `{}` needs --{key}", p["which"]))
    };
    let which = p["which"].as_str().unwrap_or_default();
    match which {
        "l1" => println!(
            "{}",
            cones::l1_tangent_bound(need_usize("s")?, need_usize("p")?)?
        ),
        "nuclear" => println!(
            "{}",
            cones::nuclear_tangent_bound(need_usize("r")?, need_usize("m1")?, need_usize("m2")?)?
        ),
        "volume" => println!(
            "{}",
            cones::volume_complexity_bound(need_f64("mu")?, need_usize("p")?)?
        ),
        "vertex" => {
            let v = p["v"].as_u64().context("bound `vertex` needs --v")?;
            println!("{}", cones::vertex_transitive_bound(v, need_usize("p")?)?)
        }
        "cap-volume" => {
            let (lo, hi) = cones::cap_volume_bounds(need_usize("p")?, need_f64("h")?)?;
            println!("{lo} {hi}");
        }
        "cap-angle" => println!(
            "{}",
            cones::cap_solid_angle_lower_bound(need_f64("mu")?, need_usize("p")?)?
        ),
        other => {
            bail!("unknown bound `{other}` (l1, nuclear, volume, vertex, cap-volume, cap-angle)")
        }
    }
    Ok(())
}

fn cmd_plot_data(run: &RunConfig) -> anyhow::Result<()> {
    let records = tradeoff::records_from_csv(&read_file(&param_path(run, "records"))?)?;
    let table = plot::emit_plot_data(&records)?;
    write_output(run, &table)
}

//! Config-file schemas. Parsing is strict everywhere: unknown keys are
//! rejected by name, and stochastic runs must carry an explicit seed.

use anyhow::{bail, Context};
use convexrelax_core::cones::TangentConeSpec;
use convexrelax_core::geometry::{ConvexBody, Point};
use convexrelax_core::tradeoff::{ExampleKind, RelaxationKind, DEFAULT_HULL_LIMIT};
use serde::Deserialize;

/// Normalized invocation: subcommand, raw parameters, seed, output target.
#[derive(Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub parameters: serde_json::Value,
    pub seed: Option<i64>,
    pub output_path: Option<std::path::PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Project,
    Complexity,
    Risk,
    Tradeoff,
    Bounds,
    PlotData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Monte-Carlo complexity run over a tangent cone.
#[derive(Debug)]
pub struct ComplexityConfig {
    pub spec: TangentConeSpec,
    pub draws: usize,
    pub seed: i64,
}

impl ComplexityConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Approx {
            body: ConvexBody,
            anchor: Point,
            step: Option<f64>,
            #[serde(default = "default_draws")]
            draws: usize,
            seed: i64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Exact {
            generators: Vec<Point>,
            #[serde(default = "default_draws")]
            draws: usize,
            seed: i64,
        }
        fn default_draws() -> usize {
            convexrelax_core::cones::DEFAULT_MC_DRAWS
        }

        let mut value: serde_json::Value =
            serde_json::from_str(text).context("parsing complexity config")?;
        let obj = value
            .as_object_mut()
            .context("complexity config must be a JSON object")?;
        let mode = obj
            .remove("mode")
            .context("missing field `mode` (approx or exact)")?;
        let mode = mode.as_str().context("`mode` must be a string")?.to_owned();
        let rest = serde_json::Value::Object(std::mem::take(obj));
        match mode.as_str() {
            "approx" => {
                let p: Approx = serde_json::from_value(rest).context("complexity config")?;
                let spec = match p.step {
                    Some(step) => TangentConeSpec::approx(p.body, p.anchor, step)?,
                    None => TangentConeSpec::approx_default(p.body, p.anchor)?,
                };
                Ok(ComplexityConfig {
                    spec,
                    draws: p.draws,
                    seed: p.seed,
                })
            }
            "exact" => {
                let p: Exact = serde_json::from_value(rest).context("complexity config")?;
                Ok(ComplexityConfig {
                    spec: TangentConeSpec::exact(p.generators)?,
                    draws: p.draws,
                    seed: p.seed,
                })
            }
            other => bail!("unknown mode `{other}` (expected approx or exact)"),
        }
    }
}

/// Time-data benchmark run: one example over a grid of matrix sides.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TradeoffConfig {
    pub example: ExampleKind,
    /// Matrix sides to run (p = m^2 each). Defaults to {4, 6, 8} when a
    /// hull relaxation is requested and {8, 12, 16, 24} otherwise.
    #[serde(default)]
    pub m_grid: Option<Vec<usize>>,
    pub relaxations: Vec<RelaxationKind>,
    /// Trial budget per risk evaluation inside the search.
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: i64,
    #[serde(default = "default_target_risk")]
    pub target_risk: f64,
    #[serde(default = "default_hull_limit")]
    pub hull_limit: usize,
}

impl TradeoffConfig {
    pub fn resolved_grid(&self) -> Vec<usize> {
        match &self.m_grid {
            Some(grid) => grid.clone(),
            None => {
                if self.relaxations.contains(&RelaxationKind::Hull) {
                    vec![4, 6, 8]
                } else {
                    vec![8, 12, 16, 24]
                }
            }
        }
    }
}

fn default_trials() -> usize {
    200
}

fn default_target_risk() -> f64 {
    1.0
}

fn default_hull_limit() -> usize {
    DEFAULT_HULL_LIMIT
}

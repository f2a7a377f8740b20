//! Empirical sample-complexity search per relaxation, runtime accounting
//! under the additive `n p + f_C(p)` model, and time-data records for the
//! four benchmark signal families.

use crate::denoise::{
    empirical_risk, empirical_risk_instrumented, enumerate_signals, DenoiseTrialConfig,
    RiskEstimate, SignalSet,
};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Point};
use crate::rng;
use serde::{Deserialize, Serialize};

/// Default cap for the sample-complexity search.
pub const DEFAULT_N_CAP: usize = 1_000_000;
/// Default enumeration limit for brute-force hull relaxations.
pub const DEFAULT_HULL_LIMIT: usize = 4096;

/// Exact CSV column set for tradeoff tables.
pub const CSV_HEADER: &str =
    "example,relaxation,p,n_star,risk_hat,risk_se,agg_ops,proj_ops,wall_ms,seed";

/// The four benchmark signal families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleKind {
    Cut,
    Ordering,
    SparsePca,
    Matching,
}

impl ExampleKind {
    pub fn label(self) -> &'static str {
        match self {
            ExampleKind::Cut => "cut",
            ExampleKind::Ordering => "ordering",
            ExampleKind::SparsePca => "sparse_pca",
            ExampleKind::Matching => "matching",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cut" => Ok(ExampleKind::Cut),
            "ordering" => Ok(ExampleKind::Ordering),
            "sparse_pca" => Ok(ExampleKind::SparsePca),
            "matching" => Ok(ExampleKind::Matching),
            other => Err(Error::InvalidParameter(format!(
                "unknown example `{other}`"
            ))),
        }
    }
}

/// The relaxations wired to the benchmark families. All radii are chosen so
/// the signal set lies on the boundary of the relaxation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxationKind {
    /// Brute-force convex hull of the enumerated signal set.
    Hull,
    Elliptope,
    Nuclear,
    L1,
    Hypersimplex,
    Euclidean,
}

impl RelaxationKind {
    pub fn label(self) -> &'static str {
        match self {
            RelaxationKind::Hull => "hull",
            RelaxationKind::Elliptope => "elliptope",
            RelaxationKind::Nuclear => "nuclear",
            RelaxationKind::L1 => "l1",
            RelaxationKind::Hypersimplex => "hypersimplex",
            RelaxationKind::Euclidean => "euclidean",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hull" => Ok(RelaxationKind::Hull),
            "elliptope" => Ok(RelaxationKind::Elliptope),
            "nuclear" => Ok(RelaxationKind::Nuclear),
            "l1" => Ok(RelaxationKind::L1),
            "hypersimplex" => Ok(RelaxationKind::Hypersimplex),
            "euclidean" => Ok(RelaxationKind::Euclidean),
            other => Err(Error::InvalidParameter(format!(
                "unknown relaxation `{other}`"
            ))),
        }
    }
}

/// The signal family of an example at matrix side m (`p = m^2`).
pub fn example_signal(example: ExampleKind, m: usize) -> Result<SignalSet> {
    match example {
        ExampleKind::Cut => SignalSet::cut_matrices(m),
        ExampleKind::Ordering => SignalSet::ordered_tridiagonal(m),
        ExampleKind::SparsePca => SignalSet::sparse_pca_block(m),
        ExampleKind::Matching => SignalSet::matchings(m),
    }
}

/// The constraint body realizing a relaxation of an example's signal set.
/// Rejects combinations where the body does not contain the signals.
pub fn relaxation_body(
    example: ExampleKind,
    relaxation: RelaxationKind,
    m: usize,
    hull_limit: usize,
) -> Result<ConvexBody> {
    let signal = example_signal(example, m)?;
    let p = signal.ambient_dim();
    let incompatible = || {
        Err(Error::InvalidParameter(format!(
            "relaxation `{}` does not contain the `{}` signals",
            relaxation.label(),
            example.label()
        )))
    };
    match relaxation {
        RelaxationKind::Hull => {
            let vertices: Vec<Vec<f64>> = enumerate_signals(&signal, hull_limit)?
                .into_iter()
                .map(Point::into_vec)
                .collect();
            Ok(ConvexBody::VertexHull { vertices })
        }
        RelaxationKind::Euclidean => Ok(ConvexBody::EuclideanBall {
            radius: m as f64,
            ambient_dim: p,
        }),
        RelaxationKind::Elliptope => match example {
            // Sign matrices have unit diagonal and are PSD.
            ExampleKind::Cut => Ok(ConvexBody::Elliptope { side: m }),
            _ => incompatible(),
        },
        RelaxationKind::Nuclear => match example {
            // Rank-one elements with nuclear norm m.
            ExampleKind::Cut | ExampleKind::SparsePca => Ok(ConvexBody::NuclearBall {
                rows: m,
                cols: m,
                radius: m as f64,
            }),
            _ => incompatible(),
        },
        RelaxationKind::L1 => match example {
            // Permutations preserve the entrywise l1 norm of the template.
            ExampleKind::Ordering => {
                let radius = match &signal {
                    SignalSet::OrderedTridiagonal { m, diag, offdiag } => {
                        *m as f64 * diag.abs() + 2.0 * (*m as f64 - 1.0) * offdiag.abs()
                    }
                    _ => unreachable!(),
                };
                Ok(ConvexBody::L1Ball {
                    radius,
                    ambient_dim: p,
                })
            }
            _ => incompatible(),
        },
        RelaxationKind::Hypersimplex => match example {
            // Scaled matching matrices are 0/1 matrices with m ones, scaled
            // by p^(1/4) = sqrt(m).
            ExampleKind::Matching => Ok(ConvexBody::Hypersimplex {
                k: m,
                scale: (m as f64).sqrt(),
                ambient_dim: p,
            }),
            _ => incompatible(),
        },
    }
}

/// One row of a time-data table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TradeoffRecord {
    pub example: ExampleKind,
    pub relaxation: String,
    pub p: usize,
    pub n_star: usize,
    pub risk_hat: f64,
    pub risk_se: f64,
    /// Aggregation operations of one estimator evaluation, exactly n_star*p.
    pub agg_ops: u64,
    /// Declared work units of one projection at this (body, p), averaged
    /// over the trials of the final risk evaluation.
    pub proj_ops: u64,
    /// Wall time of the final risk evaluation's projection and aggregation
    /// work, in milliseconds. Excluded from reproducibility guarantees.
    pub wall_ms: f64,
    pub seed: i64,
}

/// Smallest sample count whose estimated risk clears the target under the
/// conservative rule `mean + std_error <= target`, located by doubling and
/// bisection. Each candidate n is evaluated with a seed derived from
/// `(seed, n)`, so the search is deterministic.
pub fn find_sample_complexity(
    signal: &SignalSet,
    body: &ConvexBody,
    sigma: f64,
    target_risk: f64,
    trials: usize,
    seed: i64,
) -> Result<usize> {
    find_sample_complexity_with(
        signal,
        body,
        sigma,
        target_risk,
        trials,
        seed,
        DEFAULT_N_CAP,
    )
}

pub fn find_sample_complexity_with(
    signal: &SignalSet,
    body: &ConvexBody,
    sigma: f64,
    target_risk: f64,
    trials: usize,
    seed: i64,
    n_cap: usize,
) -> Result<usize> {
    search_minimal_n(target_risk, n_cap, |n| {
        empirical_risk(&DenoiseTrialConfig {
            signal: signal.clone(),
            body: body.clone(),
            sigma,
            n,
            trials,
            seed: search_seed(seed, n),
        })
    })
}

/// As [`find_sample_complexity`] at one fixed anchor instead of a resampled
/// signal.
pub fn find_sample_complexity_at(
    x_star: &Point,
    body: &ConvexBody,
    sigma: f64,
    target_risk: f64,
    trials: usize,
    seed: i64,
) -> Result<usize> {
    search_minimal_n(target_risk, DEFAULT_N_CAP, |n| {
        crate::denoise::empirical_risk_at(x_star, body, sigma, n, trials, search_seed(seed, n))
    })
}

fn search_minimal_n(
    target_risk: f64,
    n_cap: usize,
    eval: impl Fn(usize) -> Result<RiskEstimate>,
) -> Result<usize> {
    if !(target_risk.is_finite() && target_risk > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target risk must be strictly positive, got {target_risk}"
        )));
    }
    if n_cap == 0 {
        return Err(Error::InvalidParameter("n_cap must be positive".into()));
    }
    let accepts = |r: &RiskEstimate| r.mean_squared_error + r.std_error <= target_risk;

    if accepts(&eval(1)?) {
        return Ok(1);
    }
    // Doubling phase.
    let mut lo = 1usize; // known failing
    let mut hi = 2usize;
    loop {
        if hi >= n_cap {
            let r = eval(n_cap)?;
            if accepts(&r) {
                hi = n_cap;
                break;
            }
            return Err(Error::RiskTargetUnreachable {
                n_cap,
                risk: r.mean_squared_error,
            });
        }
        let r = eval(hi)?;
        if accepts(&r) {
            break;
        }
        lo = hi;
        hi *= 2;
    }
    // Bisection on the bracket (lo failing, hi passing).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if accepts(&eval(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Seed used for the risk evaluation at candidate n inside the search.
pub fn search_seed(seed: i64, n: usize) -> i64 {
    rng::derive(seed, rng::tag::SEARCH, n as u64) as i64
}

/// Total operation count of one estimator evaluation: aggregation plus
/// projection, `n p + f_C(p)`.
pub fn runtime_account(n: usize, p: usize, proj_ops: u64) -> u64 {
    (n as u64) * (p as u64) + proj_ops
}

/// Runs one example over a grid of matrix sides (`p = m^2` per entry),
/// producing one record per (side, relaxation).
pub fn run_example(
    example: ExampleKind,
    m_grid: &[usize],
    relaxations: &[RelaxationKind],
    trials: usize,
    target_risk: f64,
    seed: i64,
    hull_limit: usize,
) -> Result<Vec<TradeoffRecord>> {
    let mut records = Vec::with_capacity(m_grid.len() * relaxations.len());
    for &m in m_grid {
        let signal = example_signal(example, m)?;
        let p = signal.ambient_dim();
        for &relaxation in relaxations {
            let body = relaxation_body(example, relaxation, m, hull_limit)?;
            let n_star = find_sample_complexity(&signal, &body, 1.0, target_risk, trials, seed)?;
            // Re-evaluate at n_star with the search's own seed so the
            // recorded risk is the one that met the acceptance rule.
            let (risk, instr) = empirical_risk_instrumented(&DenoiseTrialConfig {
                signal: signal.clone(),
                body: body.clone(),
                sigma: 1.0,
                n: n_star,
                trials,
                seed: search_seed(seed, n_star),
            })?;
            records.push(TradeoffRecord {
                example,
                relaxation: relaxation.label().to_string(),
                p,
                n_star,
                risk_hat: risk.mean_squared_error,
                risk_se: risk.std_error,
                agg_ops: (n_star * p) as u64,
                proj_ops: instr.proj_work_units / instr.proj_calls.max(1),
                wall_ms: (instr.proj_wall_nanos + instr.agg_wall_nanos) as f64 / 1e6,
                seed,
            });
        }
    }
    Ok(records)
}

/// Per-record verdicts of membership in a time-data class with runtime
/// budget `t(p)`, sample budget `n(p)` and risk level `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TdVerdict {
    pub ops_ok: bool,
    pub samples_ok: bool,
    pub risk_ok: bool,
}

impl TdVerdict {
    pub fn passes(&self) -> bool {
        self.ops_ok && self.samples_ok && self.risk_ok
    }
}

pub fn td_membership(
    records: &[TradeoffRecord],
    t_of_p: impl Fn(usize) -> f64,
    n_of_p: impl Fn(usize) -> f64,
    eps: f64,
) -> Vec<TdVerdict> {
    records
        .iter()
        .map(|r| TdVerdict {
            ops_ok: runtime_account(r.n_star, r.p, r.proj_ops) as f64 <= t_of_p(r.p),
            samples_ok: r.n_star as f64 <= n_of_p(r.p),
            risk_ok: r.risk_hat <= eps,
        })
        .collect()
}

/// Least-squares fit of `n ~= c * p^exponent` over `(p, n)` pairs. Returns
/// the constant and the relative residual `||n - c p^e|| / ||n||`.
pub fn fit_power_scaling(points: &[(f64, f64)], exponent: f64) -> Result<(f64, f64)> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut xy = 0.0;
    let mut xx = 0.0;
    for &(p, n) in points {
        let x = p.powf(exponent);
        xy += x * n;
        xx += x * x;
    }
    if xx == 0.0 {
        return Err(Error::InvalidParameter("degenerate design".into()));
    }
    let c = xy / xx;
    let mut res = 0.0;
    let mut tot = 0.0;
    for &(p, n) in points {
        let fit = c * p.powf(exponent);
        res += (n - fit) * (n - fit);
        tot += n * n;
    }
    Ok((c, (res / tot.max(1e-300)).sqrt()))
}

fn format_f64(v: f64) -> String {
    // Shortest round-trip formatting keeps CSV output byte-stable.
    format!("{v}")
}

/// Renders records as CSV with the exact mandated header, LF line endings.
pub fn records_to_csv(records: &[TradeoffRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.example.label(),
            r.relaxation,
            r.p,
            r.n_star,
            format_f64(r.risk_hat),
            format_f64(r.risk_se),
            r.agg_ops,
            r.proj_ops,
            format_f64(r.wall_ms),
            r.seed,
        ));
    }
    out
}

/// Parses records produced by [`records_to_csv`]; the header must match
/// exactly.
pub fn records_from_csv(text: &str) -> Result<Vec<TradeoffRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::EmptyInput)?;
    if header.trim_end() != CSV_HEADER {
        return Err(Error::InvalidParameter(format!(
            "unexpected CSV header `{header}`"
        )));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::InvalidParameter(format!(
                "line {}: expected 10 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_err = |what: &str, v: &str| {
            Error::InvalidParameter(format!("line {}: bad {what} `{v}`", lineno + 2))
        };
        records.push(TradeoffRecord {
            example: ExampleKind::parse(fields[0])?,
            relaxation: fields[1].to_string(),
            p: fields[2].parse().map_err(|_| parse_err("p", fields[2]))?,
            n_star: fields[3]
                .parse()
                .map_err(|_| parse_err("n_star", fields[3]))?,
            risk_hat: fields[4]
                .parse()
                .map_err(|_| parse_err("risk_hat", fields[4]))?,
            risk_se: fields[5]
                .parse()
                .map_err(|_| parse_err("risk_se", fields[5]))?,
            agg_ops: fields[6]
                .parse()
                .map_err(|_| parse_err("agg_ops", fields[6]))?,
            proj_ops: fields[7]
                .parse()
                .map_err(|_| parse_err("proj_ops", fields[7]))?,
            wall_ms: fields[8]
                .parse()
                .map_err(|_| parse_err("wall_ms", fields[8]))?,
            seed: fields[9]
                .parse()
                .map_err(|_| parse_err("seed", fields[9]))?,
        });
    }
    Ok(records)
}

//! Signal families, Gaussian sampling, the projection shrinkage estimator,
//! Monte-Carlo risk estimation, and the closed-form risk bounds.
//!
//! Every signal family lives in the space of sqrt(p) x sqrt(p) matrices
//! (flattened row-major, p = m^2) and is scaled so each element has
//! Frobenius norm exactly m. Trials are independent given `(seed, trial)`
//! substreams and may run in parallel; results do not depend on scheduling.

use crate::error::{Error, Result};
use crate::geometry::{self, ConvexBody, Point};
use crate::rng;
use crate::runtime;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::time::Instant;

/// A structured signal family over sqrt(p) x sqrt(p) matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSet {
    /// Rank-one sign matrices `a a^T`, `a in {-1,+1}^m`.
    CutMatrices { m: usize },
    /// Symmetric permutations `P M P^T` of a fixed tridiagonal matrix with
    /// the given band values.
    OrderedTridiagonal { m: usize, diag: f64, offdiag: f64 },
    /// Symmetric permutations of the matrix with value m/k on a k x k
    /// principal block and zeros elsewhere.
    SparsePcaBlock { m: usize, k: usize },
    /// Adjacency matrices of perfect matchings on m nodes, scaled by
    /// sqrt(m) so elements have norm m.
    Matchings { m: usize },
}

impl SignalSet {
    pub fn cut_matrices(m: usize) -> Result<Self> {
        let set = SignalSet::CutMatrices { m };
        set.validate()?;
        Ok(set)
    }

    /// Tridiagonal family with the default band: off-diagonal equal to half
    /// the diagonal, scaled so the Frobenius norm is exactly m.
    pub fn ordered_tridiagonal(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let diag = m as f64 * (2.0 / (3.0 * m as f64 - 1.0)).sqrt();
        let set = SignalSet::OrderedTridiagonal {
            m,
            diag,
            offdiag: diag / 2.0,
        };
        set.validate()?;
        Ok(set)
    }

    /// Block family with the default block size `k = round(sqrt(m))`.
    pub fn sparse_pca_block(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let k = ((m as f64).sqrt().round() as usize).clamp(1, m);
        let set = SignalSet::SparsePcaBlock { m, k };
        set.validate()?;
        Ok(set)
    }

    pub fn sparse_pca_block_with(m: usize, k: usize) -> Result<Self> {
        let set = SignalSet::SparsePcaBlock { m, k };
        set.validate()?;
        Ok(set)
    }

    pub fn matchings(m: usize) -> Result<Self> {
        let set = SignalSet::Matchings { m };
        set.validate()?;
        Ok(set)
    }

    /// The matrix side `m = sqrt(p)`.
    pub fn side(&self) -> usize {
        match self {
            SignalSet::CutMatrices { m }
            | SignalSet::OrderedTridiagonal { m, .. }
            | SignalSet::SparsePcaBlock { m, .. }
            | SignalSet::Matchings { m } => *m,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.side() * self.side()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.side();
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        match self {
            SignalSet::OrderedTridiagonal { m, diag, offdiag } => {
                if !diag.is_finite() || !offdiag.is_finite() {
                    return Err(Error::NonFinite);
                }
                // Elements must land on the norm-m sphere.
                let mf = *m as f64;
                let norm2 = mf * diag * diag + 2.0 * (mf - 1.0) * offdiag * offdiag;
                if (norm2 - mf * mf).abs() > 1e-6 * mf * mf {
                    return Err(Error::InvalidParameter(format!(
                        "band values give Frobenius norm {:.6}, expected {m}",
                        norm2.sqrt()
                    )));
                }
                Ok(())
            }
            SignalSet::SparsePcaBlock { m, k } => {
                if *k == 0 || k > m {
                    return Err(Error::InvalidParameter(format!(
                        "block size k={k} outside 1..={m}"
                    )));
                }
                Ok(())
            }
            SignalSet::Matchings { m } => {
                if m % 2 != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "matchings need an even node count, got {m}"
                    )));
                }
                Ok(())
            }
            SignalSet::CutMatrices { .. } => Ok(()),
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            SignalSet::CutMatrices { .. } => "cut_matrices",
            SignalSet::OrderedTridiagonal { .. } => "ordered_tridiagonal",
            SignalSet::SparsePcaBlock { .. } => "sparse_pca_block",
            SignalSet::Matchings { .. } => "matchings",
        }
    }

    /// Number of distinct elements, if representable in u128.
    pub fn cardinality(&self) -> Option<u128> {
        let m = self.side();
        match self {
            SignalSet::CutMatrices { .. } => {
                // a and -a give the same matrix.
                1u128.checked_shl(m as u32 - 1)
            }
            SignalSet::OrderedTridiagonal { .. } => {
                // Relabelings of a path graph: a permutation and its reversal
                // coincide.
                if m <= 2 {
                    Some(1)
                } else {
                    let mut f = 1u128;
                    for i in 2..=m as u128 {
                        f = f.checked_mul(i)?;
                    }
                    Some(f / 2)
                }
            }
            SignalSet::SparsePcaBlock { k, .. } => binomial(m as u128, *k as u128),
            SignalSet::Matchings { .. } => {
                let mut f = 1u128;
                let mut i = m as u128;
                while i > 1 {
                    f = f.checked_mul(i - 1)?;
                    i -= 2;
                }
                Some(f)
            }
        }
    }

    pub(crate) fn sample_with_rng(&self, rng: &mut ChaCha12Rng) -> Vec<f64> {
        let m = self.side();
        let mut a = vec![0.0; m * m];
        match self {
            SignalSet::CutMatrices { .. } => {
                let signs: Vec<f64> = (0..m)
                    .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                    .collect();
                for i in 0..m {
                    for j in 0..m {
                        a[i * m + j] = signs[i] * signs[j];
                    }
                }
            }
            SignalSet::OrderedTridiagonal { diag, offdiag, .. } => {
                let mut perm: Vec<usize> = (0..m).collect();
                perm.shuffle(rng);
                tridiagonal_conjugate(&mut a, m, &perm, *diag, *offdiag);
            }
            SignalSet::SparsePcaBlock { k, .. } => {
                let mut idx: Vec<usize> = (0..m).collect();
                idx.shuffle(rng);
                block_matrix(&mut a, m, &idx[..*k]);
            }
            SignalSet::Matchings { .. } => {
                let mut pool: Vec<usize> = (0..m).collect();
                let w = (m as f64).sqrt();
                while !pool.is_empty() {
                    let i = pool.remove(0);
                    let j = pool.remove(rng.gen_range(0..pool.len()));
                    a[i * m + j] = w;
                    a[j * m + i] = w;
                }
            }
        }
        a
    }
}

fn tridiagonal_conjugate(a: &mut [f64], m: usize, perm: &[usize], diag: f64, offdiag: f64) {
    for i in 0..m {
        a[perm[i] * m + perm[i]] = diag;
    }
    for i in 0..m.saturating_sub(1) {
        a[perm[i] * m + perm[i + 1]] = offdiag;
        a[perm[i + 1] * m + perm[i]] = offdiag;
    }
}

fn block_matrix(a: &mut [f64], m: usize, support: &[usize]) {
    let value = m as f64 / support.len() as f64;
    for &i in support {
        for &j in support {
            a[i * m + j] = value;
        }
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut num = 1u128;
    for i in 0..k {
        num = num.checked_mul(n - i)?;
        num /= i + 1;
    }
    Some(num)
}

impl Serialize for SignalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("variant", self.variant_name())?;
        match self {
            SignalSet::CutMatrices { m } | SignalSet::Matchings { m } => {
                map.serialize_entry("m", m)?;
            }
            SignalSet::OrderedTridiagonal { m, diag, offdiag } => {
                map.serialize_entry("m", m)?;
                map.serialize_entry("diag", diag)?;
                map.serialize_entry("offdiag", offdiag)?;
            }
            SignalSet::SparsePcaBlock { m, k } => {
                map.serialize_entry("m", m)?;
                map.serialize_entry("k", k)?;
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SignalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;

        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct MOnly {
            m: usize,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Tridiag {
            m: usize,
            diag: Option<f64>,
            offdiag: Option<f64>,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Block {
            m: usize,
            k: Option<usize>,
        }

        let mut value = serde_json::Value::deserialize(d)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| DeError::custom("signal descriptor must be a JSON object"))?;
        let variant = obj
            .remove("variant")
            .ok_or_else(|| DeError::missing_field("variant"))?;
        let variant = variant
            .as_str()
            .ok_or_else(|| DeError::custom("`variant` must be a string"))?
            .to_owned();
        let rest = serde_json::Value::Object(std::mem::take(obj));

        let set = match variant.as_str() {
            "cut_matrices" => {
                let p: MOnly = serde_json::from_value(rest).map_err(DeError::custom)?;
                SignalSet::cut_matrices(p.m)
            }
            "ordered_tridiagonal" => {
                let p: Tridiag = serde_json::from_value(rest).map_err(DeError::custom)?;
                match (p.diag, p.offdiag) {
                    (None, None) => SignalSet::ordered_tridiagonal(p.m),
                    (Some(diag), Some(offdiag)) => {
                        let set = SignalSet::OrderedTridiagonal {
                            m: p.m,
                            diag,
                            offdiag,
                        };
                        set.validate().map(|_| set)
                    }
                    _ => Err(Error::InvalidParameter(
                        "specify both band values or neither".into(),
                    )),
                }
            }
            "sparse_pca_block" => {
                let p: Block = serde_json::from_value(rest).map_err(DeError::custom)?;
                match p.k {
                    None => SignalSet::sparse_pca_block(p.m),
                    Some(k) => SignalSet::sparse_pca_block_with(p.m, k),
                }
            }
            "matchings" => {
                let p: MOnly = serde_json::from_value(rest).map_err(DeError::custom)?;
                SignalSet::matchings(p.m)
            }
            other => return Err(DeError::custom(format!("unknown signal variant `{other}`"))),
        };
        set.map_err(DeError::custom)
    }
}

/// One uniform element of the signal set, reproducible from the seed.
pub fn sample_signal(set: &SignalSet, seed: i64) -> Result<Point> {
    set.validate()?;
    let mut stream = rng::substream(seed, rng::tag::SIGNAL, 0);
    Point::new(set.sample_with_rng(&mut stream))
}

/// All distinct elements of the set, or [`Error::SetTooLarge`] if there are
/// more than `limit`.
pub fn enumerate_signals(set: &SignalSet, limit: usize) -> Result<Vec<Point>> {
    set.validate()?;
    let size = set.cardinality().unwrap_or(u128::MAX);
    if size > limit as u128 {
        return Err(Error::SetTooLarge {
            size,
            limit: limit as u128,
        });
    }
    let m = set.side();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out: Vec<Point> = Vec::new();
    let mut push = |mat: Vec<f64>| {
        let key: Vec<u64> = mat.iter().map(|v| v.to_bits()).collect();
        if seen.insert(key) {
            out.push(Point::new(mat).expect("enumerated matrices are finite"));
        }
    };

    match set {
        SignalSet::CutMatrices { .. } => {
            // Fix the first sign to kill the a / -a duplication.
            for bits in 0u64..(1u64 << (m - 1)) {
                let mut signs = vec![1.0f64; m];
                for (i, s) in signs.iter_mut().enumerate().skip(1) {
                    if bits >> (i - 1) & 1 == 1 {
                        *s = -1.0;
                    }
                }
                let mut a = vec![0.0; m * m];
                for i in 0..m {
                    for j in 0..m {
                        a[i * m + j] = signs[i] * signs[j];
                    }
                }
                push(a);
            }
        }
        SignalSet::OrderedTridiagonal { diag, offdiag, .. } => {
            let mut perm: Vec<usize> = (0..m).collect();
            permutations(&mut perm, 0, &mut |p| {
                // A relabeling and its reversal give the same matrix.
                if m >= 2 && p[0] > p[m - 1] {
                    return;
                }
                let mut a = vec![0.0; m * m];
                tridiagonal_conjugate(&mut a, m, p, *diag, *offdiag);
                push(a);
            });
        }
        SignalSet::SparsePcaBlock { k, .. } => {
            let mut support = Vec::with_capacity(*k);
            subsets(m, *k, 0, &mut support, &mut |s| {
                let mut a = vec![0.0; m * m];
                block_matrix(&mut a, m, s);
                push(a);
            });
        }
        SignalSet::Matchings { .. } => {
            let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(m / 2);
            let mut free: Vec<usize> = (0..m).collect();
            let w = (m as f64).sqrt();
            matchings_rec(&mut free, &mut pairs, &mut |pairs| {
                let mut a = vec![0.0; m * m];
                for &(i, j) in pairs {
                    a[i * m + j] = w;
                    a[j * m + i] = w;
                }
                push(a);
            });
        }
    }
    Ok(out)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn subsets(
    m: usize,
    k: usize,
    start: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == k {
        visit(current);
        return;
    }
    let needed = k - current.len();
    for i in start..=(m - needed) {
        current.push(i);
        subsets(m, k, i + 1, current, visit);
        current.pop();
    }
}

fn matchings_rec(
    free: &mut Vec<usize>,
    pairs: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    if free.is_empty() {
        visit(pairs);
        return;
    }
    let i = free.remove(0);
    for idx in 0..free.len() {
        let j = free.remove(idx);
        pairs.push((i, j));
        matchings_rec(free, pairs, visit);
        pairs.pop();
        free.insert(idx, j);
    }
    free.insert(0, i);
}

/// Lazy stream of noisy observations `y_i = x* + sigma z_i`; draw `i` is
/// generated from substream `(seed, i)` regardless of consumption order.
pub struct SampleStream {
    x_star: Vec<f64>,
    sigma: f64,
    n: usize,
    seed: i64,
    next: usize,
}

impl Iterator for SampleStream {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.next >= self.n {
            return None;
        }
        let mut stream = rng::substream(self.seed, rng::tag::NOISE, self.next as u64);
        self.next += 1;
        let z = rng::standard_normal_vec(&mut stream, self.x_star.len());
        let y: Vec<f64> = self
            .x_star
            .iter()
            .zip(&z)
            .map(|(x, zi)| x + self.sigma * zi)
            .collect();
        Some(Point::new(y).expect("gaussian samples are finite"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.n - self.next;
        (left, Some(left))
    }
}

/// i.i.d. observations of the denoising model at `x_star`.
pub fn draw_samples(x_star: &Point, sigma: f64, n: usize, seed: i64) -> Result<SampleStream> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be a nonnegative real, got {sigma}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    Ok(SampleStream {
        x_star: x_star.coords().to_vec(),
        sigma,
        n,
        seed,
        next: 0,
    })
}

/// Arithmetic mean of a sample stream with its aggregation cost `n * p`.
#[derive(Debug, Clone)]
pub struct SampleMean {
    pub mean: Point,
    pub count: usize,
    pub agg_ops: u64,
}

pub fn sample_mean<I: IntoIterator<Item = Point>>(samples: I) -> Result<SampleMean> {
    let mut iter = samples.into_iter();
    let first = iter.next().ok_or(Error::EmptyInput)?;
    let dim = first.len();
    let mut sum = first.into_vec();
    let mut count = 1usize;
    for s in iter {
        if s.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.len(),
            });
        }
        for (acc, v) in sum.iter_mut().zip(s.coords()) {
            *acc += v;
        }
        count += 1;
    }
    for v in sum.iter_mut() {
        *v /= count as f64;
    }
    Ok(SampleMean {
        mean: Point::new(sum)?,
        count,
        agg_ops: (count * dim) as u64,
    })
}

/// The shrinkage estimator: project the sample mean onto the constraint set.
pub fn shrinkage_estimate(body: &ConvexBody, ybar: &Point) -> Result<Point> {
    geometry::project(body, ybar)
}

/// Configuration of one Monte-Carlo risk experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenoiseTrialConfig {
    pub signal: SignalSet,
    pub body: ConvexBody,
    /// Noise level; defaults to 1 when omitted from configs.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: i64,
}

fn default_sigma() -> f64 {
    1.0
}

impl DenoiseTrialConfig {
    pub fn validate(&self) -> Result<()> {
        self.signal.validate()?;
        self.body.validate()?;
        if self.signal.ambient_dim() != self.body.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.signal.ambient_dim(),
                actual: self.body.ambient_dim(),
            });
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be a nonnegative real, got {}",
                self.sigma
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if self.trials < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 trials, got {}",
                self.trials
            )));
        }
        Ok(())
    }
}

/// Monte-Carlo estimate of the mean squared error of the estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskEstimate {
    #[serde(rename = "mse")]
    pub mean_squared_error: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Operation counts and wall time accumulated over the trials of one risk
/// evaluation. Wall time covers the projection calls and the sample-mean
/// accumulation only; sample generation is the data, not the estimator.
#[derive(Debug, Clone, Default)]
pub struct RiskInstrumentation {
    pub proj_calls: u64,
    pub proj_iterations: u64,
    pub proj_work_units: u64,
    pub proj_wall_nanos: u64,
    pub agg_ops: u64,
    pub agg_wall_nanos: u64,
}

enum AnchorSource<'a> {
    Resample(&'a SignalSet),
    Fixed(&'a Point),
}

/// Risk with the signal resampled uniformly per trial (the signal families
/// here are vertex-transitive, so this equals the worst case over anchors).
pub fn empirical_risk(config: &DenoiseTrialConfig) -> Result<RiskEstimate> {
    empirical_risk_instrumented(config).map(|(r, _)| r)
}

pub fn empirical_risk_instrumented(
    config: &DenoiseTrialConfig,
) -> Result<(RiskEstimate, RiskInstrumentation)> {
    config.validate()?;
    risk_core(
        AnchorSource::Resample(&config.signal),
        &config.body,
        config.sigma,
        config.n,
        config.trials,
        config.seed,
    )
}

/// Risk at a fixed anchor (the anchor need not be feasible for the body).
pub fn empirical_risk_at(
    x_star: &Point,
    body: &ConvexBody,
    sigma: f64,
    n: usize,
    trials: usize,
    seed: i64,
) -> Result<RiskEstimate> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    risk_core(AnchorSource::Fixed(x_star), body, sigma, n, trials, seed).map(|(r, _)| r)
}

fn risk_core(
    source: AnchorSource<'_>,
    body: &ConvexBody,
    sigma: f64,
    n: usize,
    trials: usize,
    seed: i64,
) -> Result<(RiskEstimate, RiskInstrumentation)> {
    struct TrialOut {
        sq_err: f64,
        proj_iterations: u64,
        proj_work_units: u64,
        proj_nanos: u64,
        agg_ops: u64,
        agg_nanos: u64,
    }

    let dim = body.ambient_dim();
    if let AnchorSource::Fixed(p) = &source {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.len(),
            });
        }
    }

    let results: Vec<Result<TrialOut>> = runtime::parallel_map_indexed(trials, |t| {
        let x_star: Vec<f64> = match &source {
            AnchorSource::Resample(set) => {
                let mut stream = rng::substream(seed, rng::tag::SIGNAL, t as u64);
                set.sample_with_rng(&mut stream)
            }
            AnchorSource::Fixed(p) => p.coords().to_vec(),
        };
        let noise_seed = rng::derive(seed, rng::tag::TRIAL, t as u64) as i64;

        let mut sum = vec![0.0; dim];
        let mut agg_nanos = 0u64;
        for i in 0..n {
            let mut stream = rng::substream(noise_seed, rng::tag::NOISE, i as u64);
            let z = rng::standard_normal_vec(&mut stream, dim);
            let y: Vec<f64> = x_star
                .iter()
                .zip(&z)
                .map(|(x, zi)| x + sigma * zi)
                .collect();
            let tick = Instant::now();
            for (acc, v) in sum.iter_mut().zip(&y) {
                *acc += v;
            }
            agg_nanos += tick.elapsed().as_nanos() as u64;
        }
        let tick = Instant::now();
        for v in sum.iter_mut() {
            *v /= n as f64;
        }
        agg_nanos += tick.elapsed().as_nanos() as u64;
        let ybar = Point::new(sum)?;

        let tick = Instant::now();
        let (estimate, stats) = geometry::project_with_stats(body, &ybar)?;
        let proj_nanos = tick.elapsed().as_nanos() as u64;

        let sq_err: f64 = estimate
            .coords()
            .iter()
            .zip(&x_star)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(TrialOut {
            sq_err,
            proj_iterations: stats.iterations,
            proj_work_units: stats.work_units,
            proj_nanos,
            agg_ops: (n * dim) as u64,
            agg_nanos,
        })
    });

    let mut errs = Vec::with_capacity(trials);
    let mut instr = RiskInstrumentation::default();
    for r in results {
        let out = r?;
        errs.push(out.sq_err);
        instr.proj_calls += 1;
        instr.proj_iterations += out.proj_iterations;
        instr.proj_work_units += out.proj_work_units;
        instr.proj_wall_nanos += out.proj_nanos;
        instr.agg_ops += out.agg_ops;
        instr.agg_wall_nanos += out.agg_nanos;
    }
    let mean = errs.iter().sum::<f64>() / trials as f64;
    let var = errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (trials as f64 - 1.0);
    Ok((
        RiskEstimate {
            mean_squared_error: mean,
            std_error: (var / trials as f64).sqrt(),
            trials,
        },
        instr,
    ))
}

/// Risk bound for a feasible anchor: `sigma^2 g_hat / n`.
pub fn risk_bound_basic(sigma: f64, n: usize, g_hat: f64) -> Result<f64> {
    if !(g_hat.is_finite() && g_hat >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "complexity must be a nonnegative real, got {g_hat}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    Ok(sigma * sigma * g_hat / n as f64)
}

/// Decomposed risk bound around a surrogate anchor x~ with `C - x~` split
/// into orthogonal pieces Q1 (+ cone complexity) and Q2 (radius alpha):
/// `6 (sigma^2 g / n + ||x* - x~||^2 + alpha^2)`.
pub fn risk_bound_decomposed(
    sigma: f64,
    n: usize,
    g_cone_q1: f64,
    anchor_gap: f64,
    alpha: f64,
) -> Result<f64> {
    for (name, v) in [
        ("complexity", g_cone_q1),
        ("anchor gap", anchor_gap),
        ("alpha", alpha),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be a nonnegative real, got {v}"
            )));
        }
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    Ok(6.0 * (sigma * sigma * g_cone_q1 / n as f64 + anchor_gap * anchor_gap + alpha * alpha))
}

/// Samples sufficient for unit risk: `ceil(sigma^2 g_hat)`, at least one.
pub fn samples_for_unit_risk(sigma: f64, g_hat: f64) -> Result<usize> {
    if !(g_hat.is_finite() && g_hat >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "complexity must be a nonnegative real, got {g_hat}"
        )));
    }
    Ok(((sigma * sigma * g_hat).ceil() as usize).max(1))
}

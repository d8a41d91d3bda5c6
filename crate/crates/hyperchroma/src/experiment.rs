//! Seeded Monte Carlo experiments: colorability sweeps over an edge
//! density grid, and empirical validation of the bad-edge and
//! isolated-vertex laws.
//!
//! Trials run in parallel on disjoint RNG substreams and aggregate by
//! integer counts, so results are byte-identical across worker counts.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::is_k_colorable_with_deadline;
use crate::error::{Error, Result};
use crate::models::{
    asymptotic_no_bad_probability, classify_bad_edges, edge_count_for_density, isolated_vertices,
    sample_bernoulli, sample_multi, sample_uniform, Hypergraph, Seed,
};
use crate::numeric::binomial_u128;

/// Which random model supplies the instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Uniform,
    Multi,
    Bernoulli,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Uniform => "uniform",
            ModelKind::Multi => "multi",
            ModelKind::Bernoulli => "bernoulli",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(ModelKind::Uniform),
            "multi" => Ok(ModelKind::Multi),
            "bernoulli" => Ok(ModelKind::Bernoulli),
            other => Err(format!("unknown model '{other}' (uniform|multi|bernoulli)")),
        }
    }
}

/// Per-instance decision timeout inside sweeps; a grid point with any
/// timed-out instance is reported censored.
const INSTANCE_TIMEOUT: Duration = Duration::from_secs(10);

/// Sweep parameters. `c_grid` must be strictly increasing and positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub r: usize,
    pub k: usize,
    pub n: usize,
    pub c_grid: Vec<f64>,
    pub trials: u32,
    pub model: ModelKind,
    pub seed: Seed,
}

impl SweepConfig {
    /// Validate invariants and exactness guards. The vertex guard keeps
    /// the exact decision under ~1s per instance at the hardest grid
    /// point.
    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidParameter(format!("r={} must be >= 2", self.r)));
        }
        if self.k < 1 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.c_grid.is_empty() {
            return Err(Error::InvalidParameter("c_grid must be nonempty".into()));
        }
        if self.c_grid.iter().any(|&c| c <= 0.0 || !c.is_finite()) {
            return Err(Error::InvalidParameter("c_grid entries must be positive".into()));
        }
        if self.c_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("c_grid must be strictly increasing".into()));
        }
        let n_cap = match self.k {
            2 => 40,
            3 => 24,
            _ => 16,
        };
        if self.n > n_cap {
            return Err(Error::GuardExceeded(format!(
                "n={} above the exact-decision guard for k={} (cap {n_cap})",
                self.n, self.k
            )));
        }
        let total = binomial_u128(self.n as u64, self.r as u64)
            .ok_or_else(|| Error::GuardExceeded("subset count overflow".into()))?;
        let max_c = *self.c_grid.last().unwrap();
        let max_m = edge_count_for_density(self.n, max_c) as u128;
        match self.model {
            ModelKind::Uniform if max_m > total => Err(Error::InvalidParameter(format!(
                "m={max_m} exceeds C(n,r)={total} for the uniform model"
            ))),
            ModelKind::Bernoulli if max_c * self.n as f64 / total as f64 > 1.0 => {
                Err(Error::InvalidParameter(
                    "bernoulli model needs p = c*n/C(n,r) <= 1 at every grid point".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub c: f64,
    pub m: usize,
    pub trials: u32,
    pub colorable: u32,
    pub p_hat: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub censored: bool,
}

/// Deterministic sweep output: the config echo plus one row per density.
/// Volatile run metadata (wall time) lives outside this struct.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Fixed-schema CSV, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("r,k,n,model,c,m,trials,colorable,p_hat,wilson_low,wilson_high,censored\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{}\n",
                self.config.r,
                self.config.k,
                self.config.n,
                self.config.model.as_str(),
                p.c,
                p.m,
                p.trials,
                p.colorable,
                p.p_hat,
                p.wilson_low,
                p.wilson_high,
                p.censored
            ));
        }
        out
    }
}

/// Wilson 95% score interval for x successes out of n.
pub fn wilson_interval(successes: u32, trials: u32) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn sample_for(config: &SweepConfig, c: f64, m: usize, seed: Seed) -> Result<Hypergraph> {
    match config.model {
        ModelKind::Multi => sample_multi(config.n, config.r, m, seed),
        ModelKind::Uniform => sample_uniform(config.n, config.r, m, seed),
        ModelKind::Bernoulli => {
            let total = binomial_u128(config.n as u64, config.r as u64).unwrap() as f64;
            sample_bernoulli(config.n, config.r, (c * config.n as f64 / total).min(1.0), seed)
        }
    }
}

/// Run the sweep: for each density c, decide k-colorability exactly on
/// `trials` sampled instances and record the frequency with its Wilson
/// interval. Trial t of grid point g uses substream
/// seed.stream + g*trials + t.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut points = Vec::with_capacity(config.c_grid.len());
    for (gi, &c) in config.c_grid.iter().enumerate() {
        let m = edge_count_for_density(config.n, c);
        let outcomes: Vec<Option<bool>> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let stream = config
                    .seed
                    .stream
                    .wrapping_add(gi as u64 * config.trials as u64)
                    .wrapping_add(t as u64);
                let h = sample_for(config, c, m, config.seed.with_stream(stream))
                    .expect("config validated");
                let deadline = Instant::now() + INSTANCE_TIMEOUT;
                is_k_colorable_with_deadline(&h, config.k, Some(deadline))
            })
            .collect();
        let censored = outcomes.iter().any(|o| o.is_none());
        let colorable = outcomes.iter().filter(|o| matches!(o, Some(true))).count() as u32;
        let p_hat = colorable as f64 / config.trials as f64;
        let (wilson_low, wilson_high) = wilson_interval(colorable, config.trials);
        points.push(SweepPoint {
            c,
            m,
            trials: config.trials,
            colorable,
            p_hat,
            wilson_low,
            wilson_high,
            censored,
        });
    }
    Ok(SweepResult { config: config.clone(), points })
}

/// Empirical bad-edge statistics for the multiset model at density c.
#[derive(Debug, Clone, Serialize)]
pub struct BadEdgeSummary {
    pub r: usize,
    pub c: f64,
    pub n: usize,
    pub trials: u32,
    pub seed: Seed,
    pub m: usize,
    /// Fraction of trials with no bad edge.
    pub p_no_bad: f64,
    /// Limiting value exp(-c(c+1)) or exp(-c r(r-1)/2).
    pub p_no_bad_asymptotic: f64,
    pub mean_bad_edges: f64,
    /// Fraction of trials with more than 2 ln n bad edges.
    pub frac_exceeding_2ln_n: f64,
    pub threshold_2ln_n: f64,
}

pub fn bad_edge_experiment(
    r: usize,
    c: f64,
    n: usize,
    trials: u32,
    seed: Seed,
) -> Result<BadEdgeSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let m = edge_count_for_density(n, c);
    let threshold = 2.0 * (n as f64).ln();
    let stats: Vec<(bool, usize, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = sample_multi(n, r, m, seed.with_stream(seed.stream.wrapping_add(t as u64)))
                .expect("parameters validated");
            let report = classify_bad_edges(&h);
            let bad = report.bad_edge_count();
            (report.is_empty(), bad, (bad as f64) > threshold)
        })
        .collect();
    let no_bad = stats.iter().filter(|s| s.0).count();
    let total_bad: usize = stats.iter().map(|s| s.1).sum();
    let exceeding = stats.iter().filter(|s| s.2).count();
    Ok(BadEdgeSummary {
        r,
        c,
        n,
        trials,
        seed,
        m,
        p_no_bad: no_bad as f64 / trials as f64,
        p_no_bad_asymptotic: asymptotic_no_bad_probability(r, c),
        mean_bad_edges: total_bad as f64 / trials as f64,
        frac_exceeding_2ln_n: exceeding as f64 / trials as f64,
        threshold_2ln_n: threshold,
    })
}

/// Empirical isolated-vertex statistics for the multiset model.
#[derive(Debug, Clone, Serialize)]
pub struct IsolatedVertexSummary {
    pub r: usize,
    pub c: f64,
    pub n: usize,
    pub trials: u32,
    pub m: usize,
    pub mean_isolated: f64,
    /// Exact expectation n (1 - 1/n)^(r m).
    pub expected_mean: f64,
    pub min_isolated: usize,
    pub max_isolated: usize,
    /// Per-trial isolated-vertex counts, for distribution queries.
    #[serde(skip)]
    pub counts: Vec<usize>,
}

impl IsolatedVertexSummary {
    /// Fraction of trials with at least `x` isolated vertices.
    pub fn frac_at_least(&self, x: usize) -> f64 {
        self.counts.iter().filter(|&&c| c >= x).count() as f64 / self.counts.len() as f64
    }
}

pub fn isolated_vertex_experiment(
    r: usize,
    c: f64,
    n: usize,
    trials: u32,
    seed: Seed,
) -> Result<IsolatedVertexSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let m = edge_count_for_density(n, c);
    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = sample_multi(n, r, m, seed.with_stream(seed.stream.wrapping_add(t as u64)))
                .expect("parameters validated");
            isolated_vertices(&h).len()
        })
        .collect();
    let total: usize = counts.iter().sum();
    let expected_mean = n as f64 * (1.0 - 1.0 / n as f64).powi((r * m) as i32);
    Ok(IsolatedVertexSummary {
        r,
        c,
        n,
        trials,
        m,
        mean_isolated: total as f64 / trials as f64,
        expected_mean,
        min_isolated: counts.iter().copied().min().unwrap(),
        max_isolated: counts.iter().copied().max().unwrap(),
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> SweepConfig {
        SweepConfig {
            r: 3,
            k: 2,
            n: 20,
            c_grid: vec![0.5, 2.0, 5.0],
            trials: 60,
            model: ModelKind::Uniform,
            seed: Seed::new(9, 0),
        }
    }

    #[test]
    fn config_validation() {
        assert!(base_config().validate().is_ok());

        let mut cfg = base_config();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.c_grid = vec![2.0, 1.0];
        assert!(cfg.validate().is_err());

        let mut cfg = base_config();
        cfg.n = 60;
        assert!(matches!(cfg.validate(), Err(Error::GuardExceeded(_))));

        let mut cfg = base_config();
        cfg.k = 3;
        cfg.n = 30;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn wilson_interval_contains_p_hat() {
        for (x, n) in [(0u32, 10u32), (10, 10), (3, 10), (250, 500)] {
            let (lo, hi) = wilson_interval(x, n);
            let p = x as f64 / n as f64;
            // At x = 0 (or x = n) the bound touches p exactly; allow
            // rounding noise there.
            assert!(lo <= p + 1e-12 && p <= hi + 1e-12, "x={x} n={n}");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn sweep_extremes_behave() {
        let cfg = SweepConfig {
            r: 3,
            k: 2,
            n: 24,
            c_grid: vec![0.3, 6.0],
            trials: 80,
            model: ModelKind::Uniform,
            seed: Seed::new(31, 0),
        };
        let result = run_sweep(&cfg).unwrap();
        assert!(result.points[0].p_hat > 0.9, "low density: {}", result.points[0].p_hat);
        assert!(result.points[1].p_hat < 0.1, "high density: {}", result.points[1].p_hat);
        assert!(!result.points[0].censored);
        let csv = result.to_csv();
        assert!(csv.starts_with("r,k,n,model,c,m,trials,colorable,p_hat,wilson_low,wilson_high,censored\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn sweep_is_reproducible() {
        let cfg = base_config();
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn models_agree_at_low_density() {
        // The multiset model conditioned on no bad edge is the uniform
        // model; conditioned colorability frequencies must overlap the
        // uniform sweep's Wilson intervals at each grid point.
        let (r, k, n) = (3usize, 2usize, 18usize);
        let grid = [1.0f64, 2.0];
        let uni = run_sweep(&SweepConfig {
            r,
            k,
            n,
            c_grid: grid.to_vec(),
            trials: 200,
            model: ModelKind::Uniform,
            seed: Seed::new(77, 0),
        })
        .unwrap();
        for (gi, &c) in grid.iter().enumerate() {
            let m = edge_count_for_density(n, c);
            let mut kept = 0u32;
            let mut colorable = 0u32;
            let mut t = 0u64;
            while kept < 200 {
                let h = sample_multi(n, r, m, Seed::new(78, gi as u64 * 1_000_000 + t)).unwrap();
                t += 1;
                if !classify_bad_edges(&h).is_empty() {
                    continue;
                }
                kept += 1;
                if crate::coloring::is_k_colorable(&h, k) {
                    colorable += 1;
                }
            }
            let (lo, hi) = wilson_interval(colorable, kept);
            let u = &uni.points[gi];
            assert!(
                lo <= u.wilson_high && u.wilson_low <= hi,
                "intervals disjoint at c={c}: [{lo}, {hi}] vs [{}, {}]",
                u.wilson_low,
                u.wilson_high
            );
        }
    }

    #[test]
    fn bad_edge_summary_smoke() {
        let s = bad_edge_experiment(3, 1.0, 2000, 800, Seed::new(5, 0)).unwrap();
        let p = s.p_no_bad_asymptotic;
        let sigma = (p * (1.0 - p) / 800.0).sqrt();
        assert!((s.p_no_bad - p).abs() < 4.0 * sigma, "{} vs {}", s.p_no_bad, p);
        assert!(s.frac_exceeding_2ln_n < 0.01);
    }

    #[test]
    fn isolated_summary_matches_expectation() {
        let s = isolated_vertex_experiment(2, 1.0, 1000, 400, Seed::new(8, 0)).unwrap();
        assert!((s.mean_isolated / s.expected_mean - 1.0).abs() < 0.02);
        assert!(s.frac_at_least(4) >= 0.99);
        // c = 0: everything isolated.
        let s = isolated_vertex_experiment(2, 0.0, 50, 5, Seed::new(8, 0)).unwrap();
        assert_eq!(s.min_isolated, 50);
    }
}

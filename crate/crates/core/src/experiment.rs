//! Seeded Monte Carlo harness.
//!
//! Every trial is identified by `(master_seed, n, trial_index)`. The cloud for
//! a trial is sampled from a seed mixed out of those three values alone, so
//! any trial can be rerun in isolation, trials may run in any order or in
//! parallel, and different topology kinds with the same master seed are
//! evaluated on exactly the same clouds (paired comparisons).
//!
//! Aggregation folds trial results in `trial_index` order, which keeps the
//! floating-point sums bit-identical between serial and parallel runs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{pairwise_rankings, sample_uniform_points, NeighborRanking, PointCloud};
use crate::graph::{degree_stats, is_connected, DegreeStats, UndirectedGraph};
use crate::topology::{
    build_composite, build_rgg, build_symmetric_kj, build_symmetric_knn, critical_radius, PruneRule,
    TopologyParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyKind {
    #[serde(rename = "sym-knn")]
    SymKnn,
    #[serde(rename = "kj-nn")]
    KjNn,
    #[serde(rename = "rgg")]
    Rgg,
    #[serde(rename = "kj-nn-rgg")]
    KjNnRgg,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::SymKnn,
        TopologyKind::KjNn,
        TopologyKind::Rgg,
        TopologyKind::KjNnRgg,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            TopologyKind::SymKnn => "sym-knn",
            TopologyKind::KjNn => "kj-nn",
            TopologyKind::Rgg => "rgg",
            TopologyKind::KjNnRgg => "kj-nn-rgg",
        }
    }

    pub fn uses_k(self) -> bool {
        self != TopologyKind::Rgg
    }

    pub fn uses_j(self) -> bool {
        matches!(self, TopologyKind::KjNn | TopologyKind::KjNnRgg)
    }

    pub fn uses_radius(self) -> bool {
        matches!(self, TopologyKind::Rgg | TopologyKind::KjNnRgg)
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TopologyKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| invalid(format!("unknown topology `{s}`")))
    }
}

/// Where the transmission radius of `rgg` and `kj-nn-rgg` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMode {
    /// [`critical_radius`] for each `n`, with the configuration's `k`.
    Formula { sigma: f64 },
    Fixed { r: f64 },
}

impl Default for RadiusMode {
    fn default() -> Self {
        RadiusMode::Formula { sigma: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: TopologyKind,
    pub k: usize,
    /// Ignored for `sym-knn` and `rgg`.
    pub j: usize,
    pub rule: PruneRule,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    /// Ignored for `sym-knn` and `kj-nn`.
    pub radius_mode: RadiusMode,
}

impl ExperimentConfig {
    /// A configuration over the default sweep `n = 100, 200, ..., 1000` with
    /// 100 trials, master seed 0 and the formula radius with `sigma = 3`.
    pub fn new(kind: TopologyKind, k: usize, j: usize) -> Self {
        ExperimentConfig {
            kind,
            k,
            j,
            rule: PruneRule::default(),
            n_values: (1..=10).map(|i| i * 100).collect(),
            trials: 100,
            master_seed: 0,
            radius_mode: RadiusMode::default(),
        }
    }

    pub fn with_n_values(mut self, n_values: Vec<usize>) -> Self {
        self.n_values = n_values;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn with_radius(mut self, radius_mode: RadiusMode) -> Self {
        self.radius_mode = radius_mode;
        self
    }

    pub fn with_rule(mut self, rule: PruneRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(invalid("n_values must not be empty"));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return Err(invalid(format!("every n must be at least 2, got {n}")));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.kind.uses_k() && self.k < 1 {
            return Err(invalid("k must be at least 1"));
        }
        if self.kind.uses_j() {
            TopologyParams::new(self.k, self.j)?;
        }
        if self.kind.uses_radius() {
            match self.radius_mode {
                RadiusMode::Fixed { r } if r.is_nan() || r <= 0.0 => {
                    return Err(invalid(format!("radius must be positive, got {r}")));
                }
                RadiusMode::Formula { sigma } => {
                    for &n in &self.n_values {
                        critical_radius(n, self.k, sigma)?;
                    }
                }
                RadiusMode::Fixed { .. } => {}
            }
        }
        Ok(())
    }

    /// The radius used at node count `n`, or `None` for rank-only kinds.
    pub fn radius_for(&self, n: usize) -> Result<Option<f64>> {
        if !self.kind.uses_radius() {
            return Ok(None);
        }
        Ok(Some(match self.radius_mode {
            RadiusMode::Fixed { r } => r,
            RadiusMode::Formula { sigma } => critical_radius(n, self.k, sigma)?.r_n,
        }))
    }

    fn params(&self) -> Result<TopologyParams> {
        Ok(TopologyParams::new(self.k, self.j)?.with_rule(self.rule))
    }

    /// Builds this configuration's topology on a prepared cloud.
    pub fn build(&self, cloud: &PointCloud, ranking: &NeighborRanking) -> Result<UndirectedGraph> {
        let n = cloud.len();
        match self.kind {
            TopologyKind::SymKnn => build_symmetric_knn(ranking, self.k),
            TopologyKind::KjNn => build_symmetric_kj(ranking, self.params()?),
            TopologyKind::Rgg => build_rgg(cloud, self.radius_for(n)?.expect("rgg has a radius")),
            TopologyKind::KjNnRgg => build_composite(
                cloud,
                ranking,
                self.params()?,
                self.radius_for(n)?.expect("composite has a radius"),
            ),
        }
    }
}

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the cloud used by trial `trial_index` at node count `n`:
/// `mix(mix(mix(master_seed) ^ n) ^ trial_index)` with SplitMix64 mixing.
pub fn trial_seed(master_seed: u64, n: usize, trial_index: usize) -> u64 {
    mix64(mix64(mix64(master_seed) ^ n as u64) ^ trial_index as u64)
}

/// The cloud and its neighbor ranking for one `(master_seed, n, trial)`.
pub fn trial_cloud(master_seed: u64, n: usize, trial_index: usize) -> Result<(PointCloud, NeighborRanking)> {
    let cloud = sample_uniform_points(n, trial_seed(master_seed, n, trial_index))?;
    let ranking = pairwise_rankings(&cloud);
    Ok((cloud, ranking))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub n: usize,
    pub trial_index: usize,
    pub connected: bool,
    pub degree_stats: DegreeStats,
    pub edge_count: usize,
    pub radius_used: Option<f64>,
}

fn measure(config: &ExperimentConfig, cloud: &PointCloud, ranking: &NeighborRanking, trial_index: usize) -> Result<TrialResult> {
    let n = cloud.len();
    let graph = config.build(cloud, ranking)?;
    Ok(TrialResult {
        n,
        trial_index,
        connected: is_connected(&graph),
        degree_stats: degree_stats(&graph)?,
        edge_count: graph.edge_count(),
        radius_used: config.radius_for(n)?,
    })
}

/// Runs a single trial of `config` at node count `n`.
pub fn run_trial(config: &ExperimentConfig, n: usize, trial_index: usize) -> Result<TrialResult> {
    config.validate()?;
    if !config.n_values.contains(&n) {
        return Err(invalid(format!("n = {n} is not part of the configured sweep")));
    }
    if trial_index >= config.trials {
        return Err(invalid(format!(
            "trial index {trial_index} out of range for {} trials",
            config.trials
        )));
    }
    let (cloud, ranking) = trial_cloud(config.master_seed, n, trial_index)?;
    measure(config, &cloud, &ranking, trial_index)
}

/// Summary of all trials at one node count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub n: usize,
    pub kind: TopologyKind,
    pub k: Option<usize>,
    pub j: Option<usize>,
    pub connectivity_probability: f64,
    pub mean_degree: f64,
    pub mean_min_degree: f64,
    pub mean_max_degree: f64,
    /// Degree to proportion of nodes, averaged over trials.
    pub degree_histogram: BTreeMap<usize, f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub radius: Option<f64>,
}

/// Folds trial results (in the given order) into an [`AggregateResult`].
pub fn aggregate(config: &ExperimentConfig, n: usize, trials: &[TrialResult]) -> Result<AggregateResult> {
    if trials.is_empty() {
        return Err(invalid("cannot aggregate zero trials"));
    }
    if trials.iter().any(|t| t.n != n) {
        return Err(invalid(format!("trial results mix node counts other than {n}")));
    }
    let count = trials.len() as f64;
    let connected = trials.iter().filter(|t| t.connected).count();
    let mut histogram: BTreeMap<usize, f64> = BTreeMap::new();
    let (mut mean, mut min, mut max) = (0.0, 0.0, 0.0);
    for t in trials {
        mean += t.degree_stats.mean;
        min += t.degree_stats.min as f64;
        max += t.degree_stats.max as f64;
        for (&d, &p) in &t.degree_stats.histogram {
            *histogram.entry(d).or_default() += p;
        }
    }
    histogram.values_mut().for_each(|p| *p /= count);
    Ok(AggregateResult {
        n,
        kind: config.kind,
        k: config.kind.uses_k().then_some(config.k),
        j: config.kind.uses_j().then_some(config.j),
        connectivity_probability: connected as f64 / count,
        mean_degree: mean / count,
        mean_min_degree: min / count,
        mean_max_degree: max / count,
        degree_histogram: histogram,
        trials: trials.len(),
        master_seed: config.master_seed,
        radius: config.radius_for(n)?,
    })
}

fn trial_grid(configs: &[ExperimentConfig]) -> Result<Vec<(usize, usize)>> {
    let first = configs.first().ok_or_else(|| invalid("no configurations given"))?;
    for c in configs {
        c.validate()?;
        if c.n_values != first.n_values || c.trials != first.trials || c.master_seed != first.master_seed {
            return Err(invalid(
                "paired configurations must share n_values, trials and master_seed",
            ));
        }
    }
    Ok(first
        .n_values
        .iter()
        .flat_map(|&n| (0..first.trials).map(move |t| (n, t)))
        .collect())
}

fn trials_for(configs: &[ExperimentConfig], parallel: bool) -> Result<Vec<Vec<TrialResult>>> {
    let grid = trial_grid(configs)?;
    let one = |&(n, t): &(usize, usize)| -> Result<Vec<TrialResult>> {
        let (cloud, ranking) = trial_cloud(configs[0].master_seed, n, t)?;
        configs.iter().map(|c| measure(c, &cloud, &ranking, t)).collect()
    };
    let rows: Vec<Vec<TrialResult>> = if parallel {
        grid.par_iter().map(one).collect::<Result<_>>()?
    } else {
        grid.iter().map(one).collect::<Result<_>>()?
    };
    // Transpose to one list per configuration, ordered by (n, trial_index).
    let mut per_config: Vec<Vec<TrialResult>> = vec![Vec::with_capacity(rows.len()); configs.len()];
    for row in rows {
        for (slot, r) in per_config.iter_mut().zip(row) {
            slot.push(r);
        }
    }
    Ok(per_config)
}

fn aggregate_all(config: &ExperimentConfig, trials: &[TrialResult]) -> Result<Vec<AggregateResult>> {
    trials
        .chunks(config.trials)
        .zip(&config.n_values)
        .map(|(chunk, &n)| aggregate(config, n, chunk))
        .collect()
}

/// Every trial of `config`, ordered by `(n, trial_index)`, run in parallel on
/// the current rayon pool.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    Ok(trials_for(std::slice::from_ref(config), true)?.remove(0))
}

/// Runs every trial and returns one aggregate per entry of `n_values`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<AggregateResult>> {
    aggregate_all(config, &run_trials(config)?)
}

/// Same as [`run_experiment`] on the calling thread only.
pub fn run_experiment_serial(config: &ExperimentConfig) -> Result<Vec<AggregateResult>> {
    let trials = trials_for(std::slice::from_ref(config), false)?.remove(0);
    aggregate_all(config, &trials)
}

/// Runs several configurations on shared clouds. All configurations must
/// agree on `n_values`, `trials` and `master_seed`; each cloud is sampled and
/// ranked once and every topology is built on it.
pub fn run_paired_trials(configs: &[ExperimentConfig]) -> Result<Vec<Vec<TrialResult>>> {
    trials_for(configs, true)
}

/// Aggregated form of [`run_paired_trials`], one result list per configuration.
pub fn run_paired(configs: &[ExperimentConfig]) -> Result<Vec<Vec<AggregateResult>>> {
    run_paired_trials(configs)?
        .iter()
        .zip(configs)
        .map(|(trials, c)| aggregate_all(c, trials))
        .collect()
}

/// Links saved per node when moving from `base` to `reduced`: the
/// coefficient `c` in a saving of `c * n` links.
pub fn link_gain(base: &AggregateResult, reduced: &AggregateResult) -> Result<f64> {
    if base.n != reduced.n {
        return Err(invalid(format!(
            "link gain needs matching node counts, got {} and {}",
            base.n, reduced.n
        )));
    }
    Ok((base.mean_degree - reduced.mean_degree) / 2.0)
}

/// Degree distribution at node count `n`, averaged over the configured trials.
pub fn degree_distribution(config: &ExperimentConfig, n: usize) -> Result<BTreeMap<usize, f64>> {
    if !config.n_values.contains(&n) {
        return Err(invalid(format!("n = {n} is not part of the configured sweep")));
    }
    let single = ExperimentConfig {
        n_values: vec![n],
        ..config.clone()
    };
    Ok(run_experiment(&single)?.remove(0).degree_histogram)
}

/// Unweighted average of `metric` across the points of a sweep.
pub fn sweep_mean(results: &[AggregateResult], metric: impl Fn(&AggregateResult) -> f64) -> f64 {
    results.iter().map(metric).sum::<f64>() / results.len() as f64
}

use std::io::Write;
use std::time::Instant;

use serde_json::json;

use super::{monte_carlo_risk, AnyDistribution, Predictor, Pt, SyntheticDistribution};
use crate::bounds::{ceil_sqrt, Schedules};
use crate::error::{Error, Result};
use crate::harness::majority_vote_baseline;
use crate::learners::{countable_med_net, ctbl_unbdd, fin_med_net, medoid_net, MedoidModel, SweepConfig};
use crate::par;
use crate::sample::LabeledSample;

/// Column order of [`ExperimentResult::write_csv`].
pub const CSV_HEADER: [&str; 9] =
    ["n", "trial", "learner", "estimated_risk", "alpha_star", "q_star", "selected_gamma", "d", "wall_time"];

pub const LEARNER_IDS: &str = "fin, countable, unbounded, separable, knn1, knn_sqrt";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LearnerId {
    Fin,
    Countable,
    Unbounded,
    Separable,
    /// 1-NN on the raw sample.
    Knn1,
    /// `⌈√n⌉`-NN plurality vote.
    KnnSqrt,
}

impl LearnerId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "fin" => LearnerId::Fin,
            "countable" => LearnerId::Countable,
            "unbounded" => LearnerId::Unbounded,
            "separable" => LearnerId::Separable,
            "knn1" => LearnerId::Knn1,
            "knn_sqrt" => LearnerId::KnnSqrt,
            _ => return Err(Error::UnknownId { id: s.to_string(), valid: LEARNER_IDS.to_string() }),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LearnerId::Fin => "fin",
            LearnerId::Countable => "countable",
            LearnerId::Unbounded => "unbounded",
            LearnerId::Separable => "separable",
            LearnerId::Knn1 => "knn1",
            LearnerId::KnnSqrt => "knn_sqrt",
        }
    }
}

/// Learner parameters and evaluation settings of an experiment.
///
/// `fin`, `countable` and `unbounded` use `delta` (default 0.05) and, where
/// they take them, `bits` and `l_trunc` (defaults from the schedules at the
/// sample size). `separable` uses the schedules with any overrides applied.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub schedules: Schedules,
    pub fixed_delta: f64,
    /// Draws per Monte Carlo risk estimate.
    pub mc_draws: usize,
    pub record_wall_time: bool,
    pub sweep: SweepConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schedules: Schedules::default(),
            fixed_delta: 0.05,
            mc_draws: 100_000,
            record_wall_time: false,
            sweep: SweepConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub trial: usize,
    pub learner: LearnerId,
    pub estimated_risk: f64,
    /// Monte Carlo half-width; `None` for exact risks.
    pub risk_half_width: Option<f64>,
    pub alpha_star: Option<f64>,
    pub q_star: Option<f64>,
    pub selected_gamma: Option<f64>,
    pub d: Option<usize>,
    /// Seconds spent training and evaluating.
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExperimentResult {
    /// Sorted by `(n, trial)`, then learner in the requested order.
    pub rows: Vec<ExperimentRow>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentResult {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.trial.to_string(),
                r.learner.as_str().to_string(),
                r.estimated_risk.to_string(),
                opt(r.alpha_star),
                opt(r.q_star),
                opt(r.selected_gamma),
                opt(r.d),
                opt(r.wall_time),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per row; an infinite scale is written as `"inf"`.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.rows {
            let gamma = r.selected_gamma.map(|g| if g.is_finite() { json!(g) } else { json!("inf") });
            let line = json!({
                "n": r.n,
                "trial": r.trial,
                "learner": r.learner.as_str(),
                "estimated_risk": r.estimated_risk,
                "risk_half_width": r.risk_half_width,
                "alpha_star": r.alpha_star,
                "q_star": r.q_star,
                "selected_gamma": gamma,
                "d": r.d,
                "wall_time": r.wall_time,
            });
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Median estimated risk per `(n, learner)`, in row order.
    pub fn medians(&self) -> Vec<(usize, LearnerId, f64)> {
        let mut keys: Vec<(usize, LearnerId)> = Vec::new();
        for r in &self.rows {
            if !keys.contains(&(r.n, r.learner)) {
                keys.push((r.n, r.learner));
            }
        }
        keys.into_iter()
            .map(|(n, l)| {
                let mut v: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.n == n && r.learner == l)
                    .map(|r| r.estimated_risk)
                    .collect();
                (n, l, median(&mut v))
            })
            .collect()
    }
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len();
    if m == 0 {
        f64::NAN
    } else if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `seed ⊕ hash(n, trial)`: the generator seed of one experiment cell.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    seed ^ splitmix64(splitmix64(n as u64) ^ trial as u64)
}

/// For each `(n, trial)`: draws a fresh sample, trains every learner on it and
/// records its risk — exact where the distribution allows, otherwise a Monte
/// Carlo estimate over `cfg.mc_draws` draws.
pub fn convergence_experiment(
    learners: &[LearnerId],
    dist: &AnyDistribution,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<ExperimentResult> {
    if n_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::pre("n grid must be sorted ascending"));
    }
    match dist {
        AnyDistribution::Table(d) => run_grid(learners, d, n_grid, trials, seed, cfg),
        AnyDistribution::Real(d) => run_grid(learners, d, n_grid, trials, seed, cfg),
    }
}

fn run_grid<D: SyntheticDistribution>(
    learners: &[LearnerId],
    dist: &D,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<ExperimentResult> {
    let cells: Vec<(usize, usize)> = n_grid.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let per_cell = par::map_slice(&cells, |&(n, trial)| -> Result<Vec<ExperimentRow>> {
        let s = trial_seed(seed, n, trial);
        let sample = dist.sample(s, n);
        learners
            .iter()
            .map(|&l| run_cell(dist, l, &sample, trial, splitmix64(s), cfg))
            .collect()
    });
    let mut rows = Vec::with_capacity(cells.len() * learners.len());
    for cell in per_cell {
        rows.extend(cell?);
    }
    Ok(ExperimentResult { rows })
}

type Model<D> = MedoidModel<Pt<<D as SyntheticDistribution>::XS>, Pt<<D as SyntheticDistribution>::YS>>;
type PredictFn<'a, D> =
    dyn Fn(&Pt<<D as SyntheticDistribution>::XS>) -> Pt<<D as SyntheticDistribution>::YS> + Sync + 'a;

fn run_cell<D: SyntheticDistribution>(
    dist: &D,
    learner: LearnerId,
    sample: &LabeledSample<Pt<D::XS>, Pt<D::YS>>,
    trial: usize,
    eval_seed: u64,
    cfg: &ExperimentConfig,
) -> Result<ExperimentRow> {
    let start = Instant::now();
    let n = sample.len();
    let (xs, ys) = (dist.x_space(), dist.y_space());
    let sched = &cfg.schedules;
    let bits = sched.bits_n(n);
    let l_trunc = sched.l_n(n);
    let delta = sched.delta.unwrap_or(cfg.fixed_delta);
    let model: Option<Model<D>> = match learner {
        LearnerId::Fin => Some(fin_med_net(sample, delta, xs, ys, &cfg.sweep)?),
        LearnerId::Countable => Some(countable_med_net(sample, delta, bits, xs, ys, &cfg.sweep)?),
        LearnerId::Unbounded => Some(ctbl_unbdd(sample, delta, bits, l_trunc, xs, ys, &cfg.sweep)?),
        LearnerId::Separable => Some(medoid_net(sample, sched, xs, ys, &cfg.sweep)?),
        LearnerId::Knn1 | LearnerId::KnnSqrt => None,
    };
    let (risk, half_width) = match &model {
        Some(m) => evaluate(dist, &|x: &Pt<D::XS>| m.predict(x, xs), eval_seed, cfg)?,
        None => {
            let k = if learner == LearnerId::Knn1 { 1 } else { ceil_sqrt(n as u64) as usize };
            let knn = majority_vote_baseline(sample, k, xs, ys)?;
            evaluate(dist, &|x: &Pt<D::XS>| knn.predict(x), eval_seed, cfg)?
        }
    };
    Ok(ExperimentRow {
        n,
        trial,
        learner,
        estimated_risk: risk,
        risk_half_width: half_width,
        alpha_star: model.as_ref().map(|m| m.alpha_star),
        q_star: model.as_ref().map(|m| m.q_star),
        selected_gamma: model.as_ref().map(|m| m.selected_gamma),
        d: model.as_ref().map(|m| m.d()),
        wall_time: cfg.record_wall_time.then(|| start.elapsed().as_secs_f64()),
    })
}

fn evaluate<D: SyntheticDistribution>(
    dist: &D,
    f: &PredictFn<'_, D>,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<(f64, Option<f64>)> {
    if dist.has_exact_risk() {
        Ok((dist.exact_risk(Predictor::Custom(f))?, None))
    } else {
        let mc = monte_carlo_risk(dist, Predictor::Custom(f), cfg.mc_draws, seed)?;
        Ok((mc.estimate, Some(mc.half_width)))
    }
}

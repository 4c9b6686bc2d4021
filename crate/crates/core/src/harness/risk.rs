use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Predictor, Pt, SyntheticDistribution, TableDistribution};
use crate::bounds::empirical_bernstein_bound;
use crate::error::{Error, Result};
use crate::par;
use crate::sample::LabeledSample;
use crate::space::Space;

/// Confidence level of the Monte Carlo half-width.
pub const MC_DELTA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloRisk {
    pub estimate: f64,
    /// Empirical Bernstein half-width at confidence `1 − 0.05`.
    pub half_width: f64,
    /// Loss range used for the half-width.
    pub cap: f64,
    /// True when `cap` is the observed 0.999-quantile rather than a bound.
    pub heuristic_cap: bool,
}

/// Mean loss over `m` fresh draws, with an empirical Bernstein half-width.
///
/// Distributions without a loss cap use the 0.999-quantile of the observed
/// losses instead, flagged in [`MonteCarloRisk::heuristic_cap`].
pub fn monte_carlo_risk<D: SyntheticDistribution>(
    dist: &D,
    predictor: Predictor<'_, Pt<D::XS>, Pt<D::YS>>,
    m: usize,
    seed: u64,
) -> Result<MonteCarloRisk> {
    if m < 2 {
        return Err(Error::pre("Monte Carlo risk needs m >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<_> = (0..m).map(|_| dist.draw(&mut rng)).collect();
    if matches!(predictor, Predictor::Bayes) && dist.bayes_predict(&draws[0].0).is_none() {
        return Err(Error::Unsupported(format!("`{}` has no Bayes predictor", dist.id())));
    }
    let y_space = dist.y_space();
    let losses = par::map_slice(&draws, |(x, y)| {
        let p = match predictor {
            Predictor::Bayes => dist.bayes_predict(x).expect("checked above"),
            Predictor::Custom(f) => f(x),
        };
        y_space.dist(&p, y)
    });
    let estimate = losses.iter().sum::<f64>() / m as f64;
    let (cap, heuristic_cap) = match dist.loss_cap() {
        Some(c) => (c, false),
        None => {
            let mut sorted = losses.clone();
            sorted.sort_by(f64::total_cmp);
            let q = sorted[((0.999 * m as f64).ceil() as usize).clamp(1, m) - 1];
            (q.max(estimate), true)
        }
    };
    let half_width = empirical_bernstein_bound(estimate.min(cap), m as u64, MC_DELTA, cap)?;
    Ok(MonteCarloRisk { estimate, half_width, cap, heuristic_cap })
}

/// Plurality vote among the `k` nearest sample points.
///
/// Neighbors at equal distance are taken in sample order; equal vote counts
/// go to the order-first label. Only observed labels can be predicted.
pub struct KnnVote<'a, SX: Space, SY: Space> {
    sample: &'a LabeledSample<SX::Point, SY::Point>,
    k: usize,
    x_space: &'a SX,
    y_space: &'a SY,
}

pub fn majority_vote_baseline<'a, SX: Space, SY: Space>(
    sample: &'a LabeledSample<SX::Point, SY::Point>,
    k: usize,
    x_space: &'a SX,
    y_space: &'a SY,
) -> Result<KnnVote<'a, SX, SY>> {
    if k == 0 || k > sample.len() {
        return Err(Error::pre(format!("k must lie in 1..={}, got {k}", sample.len())));
    }
    Ok(KnnVote { sample, k, x_space, y_space })
}

impl<SX: Space, SY: Space> KnnVote<'_, SX, SY> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn predict(&self, x: &SX::Point) -> SY::Point {
        let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        let mut near: Vec<(f64, usize)> = self
            .sample
            .instances()
            .iter()
            .enumerate()
            .map(|(i, p)| (self.x_space.dist(x, p), i))
            .collect();
        if self.k < near.len() {
            near.select_nth_unstable_by(self.k - 1, by_distance);
            near.truncate(self.k);
        }
        let labels = self.sample.labels();
        let mut votes: Vec<&SY::Point> = near.iter().map(|&(_, i)| &labels[i]).collect();
        votes.sort_by(|a, b| self.y_space.order(a, b));
        let mut best: (&SY::Point, usize) = (votes[0], 0);
        let mut run: (&SY::Point, usize) = (votes[0], 0);
        for v in votes {
            if self.y_space.order(v, run.0) == Ordering::Equal {
                run.1 += 1;
            } else {
                run = (v, 1);
            }
            // runs come in label order, so only a strictly larger count wins
            if run.1 > best.1 {
                best = run;
            }
        }
        best.0.clone()
    }
}

/// The label minimizing expected loss over `region` (instance indices),
/// ties to the order-first label.
pub fn true_medoid_oracle(dist: &TableDistribution, region: &[usize]) -> Result<usize> {
    dist.pointwise_medoid(region)
}

/// Fraction of `m` fresh instance draws at distance `≥ γ` from every
/// instance in `instances`.
pub fn estimate_missing_mass<D: SyntheticDistribution>(
    dist: &D,
    instances: &[Pt<D::XS>],
    gamma: f64,
    m: usize,
    seed: u64,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::pre("missing-mass estimate needs m >= 1"));
    }
    if !(gamma > 0.0) {
        return Err(Error::pre(format!("gamma must be positive, got {gamma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<_> = (0..m).map(|_| dist.draw(&mut rng).0).collect();
    let x_space = dist.x_space();
    let missed = par::map_slice(&draws, |x| instances.iter().all(|p| x_space.dist(x, p) >= gamma));
    Ok(missed.iter().filter(|&&b| b).count() as f64 / m as f64)
}

//! The scale sweep shared by every learner: for each γ ∈ Γ build the γ-net,
//! relabel its cells with medoids, measure the empirical risk and keep the
//! scale minimizing `Q`.
//!
//! [`SweepStrategy::Pruned`] visits scales from `+∞` downward and evaluates
//! one representative per run of scales that share the same greedy net. It
//! skips everything below `γ/2` once a γ-packing is too large to win: a net
//! at `γ' ≤ γ/2` has at least as many centers as any γ-packing, and `Q` is
//! increasing in the center count. The result is identical to
//! [`SweepStrategy::Exhaustive`], which evaluates every scale.

use crate::bounds::{q_bound, BoundParams};
use crate::error::{Error, Result};
use crate::medoid::cell_medoids;
use crate::net::{assign_cells, candidate_scales, trace_net, Distances, DEFAULT_MATRIX_CAP};
use crate::sample::LabeledSample;
use crate::space::Space;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepStrategy {
    Pruned,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    /// Largest `n` for which the pairwise distance table is cached.
    pub matrix_cap: usize,
    pub strategy: SweepStrategy,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { matrix_cap: DEFAULT_MATRIX_CAP, strategy: SweepStrategy::Pruned }
    }
}

/// Everything `Q` needs besides `α` and the net size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QContext {
    pub n: u64,
    pub bits: u32,
    pub ln_delta: f64,
    pub l: f64,
}

impl QContext {
    pub fn q(&self, alpha: f64, d: usize) -> Result<f64> {
        q_bound(&BoundParams::with_ln_delta(self.n, alpha, d as u64, self.bits as u64, self.ln_delta, self.l))
    }
}

/// Diagnostics for one evaluated scale.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleEval<Y> {
    pub gamma: f64,
    pub centers: Vec<usize>,
    pub labels: Vec<Y>,
    pub alpha: f64,
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome<Y> {
    pub best: ScaleEval<Y>,
    /// Number of nets evaluated in full.
    pub evaluated: usize,
}

/// Medoid relabeling and empirical risk for a fixed center list.
pub(crate) fn evaluate_centers<SX: Space, SY: Space>(
    dist: &Distances<'_, SX>,
    centers: &[usize],
    labels: &[SY::Point],
    candidates: &[SY::Point],
    y_space: &SY,
) -> Result<(Vec<SY::Point>, f64)> {
    let assignment = assign_cells(dist, centers);
    let medoids: Vec<SY::Point> = cell_medoids(labels, &assignment, centers.len(), candidates, y_space)?
        .into_iter()
        .map(|(y, _)| y)
        .collect();
    // summed in sample order, as an independent re-evaluation would
    let total: f64 = assignment
        .cell_of
        .iter()
        .zip(labels)
        .map(|(&c, y)| y_space.dist(&medoids[c], y))
        .sum();
    Ok((medoids, total / labels.len() as f64))
}

/// `argmin_γ Q` over `(γ, α, d)` triples; exact ties go to the smaller γ.
pub fn select_scale(per_scale: &[(f64, f64, usize)], ctx: &QContext) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for &(gamma, alpha, d) in per_scale {
        let q = ctx.q(alpha, d)?;
        let better = match best {
            None => true,
            Some((bg, bq)) => q < bq || (q == bq && gamma < bg),
        };
        if better {
            best = Some((gamma, q));
        }
    }
    best.ok_or_else(|| Error::pre("no scales to select from"))
}

pub fn sweep<SX: Space, SY: Space>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    x_space: &SX,
    y_space: &SY,
    candidates: &[SY::Point],
    ctx: &QContext,
    cfg: &SweepConfig,
) -> Result<SweepOutcome<SY::Point>> {
    if sample.is_empty() {
        return Err(Error::pre("empty sample"));
    }
    if candidates.is_empty() {
        return Err(Error::pre("empty medoid candidate set"));
    }
    let dist = Distances::new(x_space, sample.instances(), cfg.matrix_cap);
    match cfg.strategy {
        SweepStrategy::Exhaustive => sweep_exhaustive(&dist, sample.labels(), y_space, candidates, ctx),
        SweepStrategy::Pruned => sweep_pruned(&dist, sample.labels(), y_space, candidates, ctx),
    }
}

fn sweep_exhaustive<SX: Space, SY: Space>(
    dist: &Distances<'_, SX>,
    labels: &[SY::Point],
    y_space: &SY,
    candidates: &[SY::Point],
    ctx: &QContext,
) -> Result<SweepOutcome<SY::Point>> {
    let order = dist.sorted_indices();
    let scales = candidate_scales(dist.points(), dist.space());
    let mut evals = Vec::with_capacity(scales.len());
    for gamma in scales.iter() {
        let centers = trace_net(&order, dist, gamma, usize::MAX).centers;
        let (medoids, alpha) = evaluate_centers(dist, &centers, labels, candidates, y_space)?;
        let q = ctx.q(alpha, centers.len())?;
        evals.push(ScaleEval { gamma, centers, labels: medoids, alpha, q });
    }
    let triples: Vec<_> = evals.iter().map(|e| (e.gamma, e.alpha, e.centers.len())).collect();
    let (gamma, _) = select_scale(&triples, ctx)?;
    let evaluated = evals.len();
    let best = evals.into_iter().find(|e| e.gamma == gamma).expect("selected scale was evaluated");
    Ok(SweepOutcome { best, evaluated })
}

fn sweep_pruned<SX: Space, SY: Space>(
    dist: &Distances<'_, SX>,
    labels: &[SY::Point],
    y_space: &SY,
    candidates: &[SY::Point],
    ctx: &QContext,
) -> Result<SweepOutcome<SY::Point>> {
    let n = dist.len();
    let order = dist.sorted_indices();
    // (eval, floor of its run of scales)
    let mut best: Option<(ScaleEval<SY::Point>, f64)> = None;
    let mut prune_floor = 0.0_f64;
    let mut evaluated = 0;
    let mut gamma = f64::INFINITY;
    loop {
        let limit = match &best {
            None => usize::MAX,
            Some((b, _)) => max_competitive_size(ctx, b.q, n)?,
        };
        let trace = trace_net(&order, dist, gamma, limit);
        if trace.complete {
            let (medoids, alpha) = evaluate_centers(dist, &trace.centers, labels, candidates, y_space)?;
            let d = trace.centers.len();
            let q = ctx.q(alpha, d)?;
            evaluated += 1;
            // visited in decreasing γ, so an equal Q here belongs to a smaller γ
            if best.as_ref().is_none_or(|(b, _)| q <= b.q) {
                best = Some((ScaleEval { gamma, centers: trace.centers, labels: medoids, alpha, q }, trace.floor));
            } else if ctx.q(0.0, d)? > best.as_ref().expect("set above").0.q {
                prune_floor = prune_floor.max(gamma / 2.0);
            }
        } else {
            prune_floor = prune_floor.max(gamma / 2.0);
        }
        if trace.floor <= prune_floor {
            break;
        }
        gamma = trace.floor;
    }
    let (mut eval, floor) = best.expect("at least the scale +∞ is evaluated");
    // report the smallest scale sharing the winning net
    eval.gamma = dist.next_distance_above(floor).min(eval.gamma);
    Ok(SweepOutcome { best: eval, evaluated })
}

/// Largest center count `k ≤ n` with `Q(0, k) ≤ best_q`.
fn max_competitive_size(ctx: &QContext, best_q: f64, n: usize) -> Result<usize> {
    if ctx.q(0.0, n)? <= best_q {
        return Ok(n);
    }
    let (mut lo, mut hi) = (0usize, n);
    // invariant: Q(0, lo) ≤ best_q < Q(0, hi), or lo = 0 unchecked
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ctx.q(0.0, mid)? <= best_q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Euclidean, FiniteSpace};

    fn ctx(n: usize) -> QContext {
        QContext { n: n as u64, bits: 2, ln_delta: 0.05f64.ln(), l: 1.0 }
    }

    #[test]
    fn select_scale_rules() {
        let c = ctx(100);
        assert_eq!(select_scale(&[(0.3, 0.2, 4)], &c).unwrap().0, 0.3);
        let tie = [(f64::INFINITY, 0.1, 2), (0.7, 0.1, 2), (0.2, 0.1, 2)];
        assert_eq!(select_scale(&tie, &c).unwrap().0, 0.2);
        let rising = [(0.1, 0.3, 3), (0.5, 0.1, 3), (0.9, 0.2, 3)];
        assert_eq!(select_scale(&rising, &c).unwrap().0, 0.5);
        assert!(select_scale(&[], &c).is_err());
    }

    #[test]
    fn pruned_matches_exhaustive_on_a_small_line() {
        let xs: Vec<f64> = vec![0.0, 0.1, 0.15, 0.4, 0.42, 0.9, 1.0, 1.3, 2.0, 2.05];
        let ys = [0usize, 0, 0, 1, 1, 2, 2, 2, 3, 3];
        let sample = LabeledSample::new(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec()).unwrap();
        let x_space = Euclidean::real();
        let y_space = FiniteSpace::four_point();
        let cands: Vec<usize> = (0..4).collect();
        let c = QContext { n: 10, bits: 2, ln_delta: 0.5f64.ln(), l: 0.01 };
        let pruned = sweep(&sample, &x_space, &y_space, &cands, &c, &SweepConfig::default()).unwrap();
        let exhaustive = sweep(
            &sample,
            &x_space,
            &y_space,
            &cands,
            &c,
            &SweepConfig { strategy: SweepStrategy::Exhaustive, ..Default::default() },
        )
        .unwrap();
        assert_eq!(pruned.best, exhaustive.best);
        assert!(pruned.evaluated <= exhaustive.evaluated);
    }
}

//! The MedoidNet learners.
//!
//! | function              | label space                 | candidates          | `b`          | `L`            |
//! |-----------------------|-----------------------------|---------------------|--------------|----------------|
//! | [`fin_med_net`]       | finite                      | all of `𝒴`          | `⌈log₂|𝒴|⌉`  | `‖𝒴‖`          |
//! | [`countable_med_net`] | enumerable, bounded         | `Y⟨b⟩`              | `b`          | `‖𝒴‖`          |
//! | [`ctbl_unbdd`]        | enumerable metric, anchored | `Y⟨b⟩` of the ball  | `b`          | `2·L_trunc`    |
//! | [`medoid_net`]        | separable (ε-net oracle)    | via `ctbl_unbdd`    | `bₙ`         | `2·Lₙ`         |

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::{ceil_log2, Schedules};
use crate::error::{Error, Result};
use crate::net::{nn_index, serde_scale};
use crate::sample::LabeledSample;
use crate::space::{cap_for_bits, diameter_truncate, enumerate_labels, project_to_eps_net, Space, Subspace};

pub mod sweep;

pub use sweep::{select_scale, sweep, QContext, ScaleEval, SweepConfig, SweepOutcome, SweepStrategy};

pub const MODEL_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Fin,
    Countable,
    Unbounded,
    Separable,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Fin => "fin",
            Variant::Countable => "countable",
            Variant::Unbounded => "unbounded",
            Variant::Separable => "separable",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fin" => Ok(Variant::Fin),
            "countable" => Ok(Variant::Countable),
            "unbounded" => Ok(Variant::Unbounded),
            "separable" => Ok(Variant::Separable),
            _ => Err(Error::UnknownId {
                id: s.to_string(),
                valid: "fin, countable, unbounded, separable".into(),
            }),
        }
    }
}

/// The parameters a learner actually used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppliedParams {
    pub delta: f64,
    pub ln_delta: f64,
    pub bits: u32,
    /// Loss range passed to `Q`.
    pub l_bound: f64,
    pub l_trunc: Option<f64>,
    pub eps: Option<f64>,
}

/// A trained 1-NN predictor over a relabeled γ-net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MedoidModel<X, Y> {
    pub version: u32,
    pub learner_variant: Variant,
    pub instance_space_id: String,
    pub label_space_id: String,
    pub n: usize,
    #[serde(with = "serde_scale")]
    pub selected_gamma: f64,
    /// Indices of the net centers in the training sample.
    pub center_indices: Vec<usize>,
    pub net_points: Vec<(X, Y)>,
    pub alpha_star: f64,
    pub q_star: f64,
    pub schedules_used: AppliedParams,
}

impl<X: Clone, Y: Clone> MedoidModel<X, Y> {
    pub fn d(&self) -> usize {
        self.net_points.len()
    }

    pub fn predict<S: Space<Point = X>>(&self, x: &X, x_space: &S) -> Y {
        let i = nn_index(self.net_points.iter().map(|(p, _)| p), x, x_space).expect("model has at least one center");
        self.net_points[i].1.clone()
    }

    pub fn q_context(&self) -> QContext {
        QContext {
            n: self.n as u64,
            bits: self.schedules_used.bits,
            ln_delta: self.schedules_used.ln_delta,
            l: self.schedules_used.l_bound,
        }
    }
}

impl<X: Serialize, Y: Serialize> MedoidModel<X, Y> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<X: DeserializeOwned, Y: DeserializeOwned> MedoidModel<X, Y> {
    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        if model.version != MODEL_VERSION {
            return Err(Error::Format(format!(
                "unsupported model version {} (expected {MODEL_VERSION})",
                model.version
            )));
        }
        Ok(model)
    }
}

/// `R̂(f; S) = |S|⁻¹ Σ ℓ(f(x), y)`.
pub fn empirical_risk<SY: Space, X>(
    predictor: impl Fn(&X) -> SY::Point,
    sample: &LabeledSample<X, SY::Point>,
    y_space: &SY,
) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::pre("empirical risk over an empty sample"));
    }
    let total: f64 = sample.pairs().map(|(x, y)| y_space.dist(&predictor(x), y)).sum();
    Ok(total / sample.len() as f64)
}

struct Job<'a, Y> {
    variant: Variant,
    candidates: &'a [Y],
    bits: u32,
    ln_delta: f64,
    l_bound: f64,
    l_trunc: Option<f64>,
    eps: Option<f64>,
}

fn run<SX: Space, SY: Space>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    x_space: &SX,
    y_space: &SY,
    label_space_id: &str,
    job: Job<'_, SY::Point>,
    cfg: &SweepConfig,
) -> Result<MedoidModel<SX::Point, SY::Point>> {
    if sample.is_empty() {
        return Err(Error::pre("the learners need at least one sample point"));
    }
    if !(job.ln_delta < 0.0 && job.ln_delta.is_finite()) {
        return Err(Error::pre(format!("delta must lie in (0,1), got {}", job.ln_delta.exp())));
    }
    sample.check(x_space, y_space)?;
    let ctx = QContext { n: sample.len() as u64, bits: job.bits, ln_delta: job.ln_delta, l: job.l_bound };
    let outcome = sweep(sample, x_space, y_space, job.candidates, &ctx, cfg)?;
    let best = outcome.best;
    let net_points = best
        .centers
        .iter()
        .zip(best.labels)
        .map(|(&c, y)| (sample.instances()[c].clone(), y))
        .collect();
    Ok(MedoidModel {
        version: MODEL_VERSION,
        learner_variant: job.variant,
        instance_space_id: x_space.id().to_string(),
        label_space_id: label_space_id.to_string(),
        n: sample.len(),
        selected_gamma: best.gamma,
        center_indices: best.centers,
        net_points,
        alpha_star: best.alpha,
        q_star: best.q,
        schedules_used: AppliedParams {
            delta: job.ln_delta.exp(),
            ln_delta: job.ln_delta,
            bits: job.bits,
            l_bound: job.l_bound,
            l_trunc: job.l_trunc,
            eps: job.eps,
        },
    })
}

fn ln_of(delta: f64) -> Result<f64> {
    if delta > 0.0 && delta < 1.0 {
        Ok(delta.ln())
    } else {
        Err(Error::pre(format!("delta must lie in (0,1), got {delta}")))
    }
}

/// Finite label space: medoids over all of `𝒴`.
pub fn fin_med_net<SX: Space, SY: Space>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    delta: f64,
    x_space: &SX,
    y_space: &SY,
    cfg: &SweepConfig,
) -> Result<MedoidModel<SX::Point, SY::Point>> {
    let size = y_space.cardinality().ok_or_else(|| {
        Error::pre(format!(
            "label space `{}` is not finite; use countable_med_net",
            y_space.id()
        ))
    })?;
    let candidates: Vec<SY::Point> = y_space
        .enumerate()
        .ok_or_else(|| Error::pre(format!("finite label space `{}` lacks an enumeration", y_space.id())))?
        .collect();
    let job = Job {
        variant: Variant::Fin,
        candidates: &candidates,
        bits: ceil_log2(size),
        ln_delta: ln_of(delta)?,
        l_bound: y_space.diameter(),
        l_trunc: None,
        eps: None,
    };
    run(sample, x_space, y_space, y_space.id(), job, cfg)
}

/// Countable bounded label space: medoids over `Y⟨bits⟩`.
pub fn countable_med_net<SX: Space, SY: Space>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    delta: f64,
    bits: u32,
    x_space: &SX,
    y_space: &SY,
    cfg: &SweepConfig,
) -> Result<MedoidModel<SX::Point, SY::Point>> {
    let candidates = enumerate_labels(y_space, bits)?;
    let l = y_space.diameter();
    if !l.is_finite() {
        return Err(Error::pre(format!("label space `{}` has unbounded diameter", y_space.id())));
    }
    let job = Job {
        variant: Variant::Countable,
        candidates: &candidates,
        bits,
        ln_delta: ln_of(delta)?,
        l_bound: l,
        l_trunc: None,
        eps: None,
    };
    run(sample, x_space, y_space, y_space.id(), job, cfg)
}

/// Countable metric label space, possibly unbounded: labels are truncated
/// to the closed `l_trunc`-ball about the anchor, then learned as in
/// [`countable_med_net`] with the ball's enumeration as candidates.
pub fn ctbl_unbdd<SX: Space, SY: Space>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    delta: f64,
    bits: u32,
    l_trunc: f64,
    x_space: &SX,
    y_space: &SY,
    cfg: &SweepConfig,
) -> Result<MedoidModel<SX::Point, SY::Point>> {
    ctbl_unbdd_ln(sample, ln_of(delta)?, bits, l_trunc, x_space, y_space, cfg)
}

fn ctbl_unbdd_ln<SX: Space, SY: Space>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    ln_delta: f64,
    bits: u32,
    l_trunc: f64,
    x_space: &SX,
    y_space: &SY,
    cfg: &SweepConfig,
) -> Result<MedoidModel<SX::Point, SY::Point>> {
    if !y_space.is_metric() {
        return Err(Error::pre(format!(
            "label space `{}` carries a non-metric loss; truncation needs the triangle inequality",
            y_space.id()
        )));
    }
    if !(l_trunc > 0.0) {
        return Err(Error::pre(format!("truncation radius must be positive, got {l_trunc}")));
    }
    let anchor = y_space
        .anchor()
        .ok_or_else(|| Error::pre(format!("label space `{}` has no anchor", y_space.id())))?;
    let ball = y_space
        .enumerate()
        .ok_or_else(|| Error::Unsupported(format!("label space `{}` has no enumeration", y_space.id())))?
        .filter(|y| y_space.dist(&anchor, y) <= l_trunc);
    let candidates: Vec<SY::Point> = ball.take(cap_for_bits(bits)).collect();
    if candidates.is_empty() {
        return Err(Error::pre(format!("no label within {l_trunc} of the anchor")));
    }
    let truncated = truncate_labels(sample, l_trunc, y_space)?;
    let job = Job {
        variant: Variant::Unbounded,
        candidates: &candidates,
        bits,
        ln_delta,
        l_bound: 2.0 * l_trunc,
        l_trunc: Some(l_trunc),
        eps: None,
    };
    run(&truncated, x_space, y_space, y_space.id(), job, cfg)
}

/// Every label replaced by `y ∧ L`.
pub fn truncate_labels<X: Clone, SY: Space>(
    sample: &LabeledSample<X, SY::Point>,
    l_trunc: f64,
    y_space: &SY,
) -> Result<LabeledSample<X, SY::Point>> {
    let labels = sample
        .labels()
        .iter()
        .map(|y| diameter_truncate(y_space, y, l_trunc))
        .collect::<Result<Vec<_>>>()?;
    LabeledSample::new(sample.instances().to_vec(), labels)
}

/// Separable label space: labels are projected onto the `εₙ`-net from the
/// space's oracle, then learned by [`ctbl_unbdd`] over that net with
/// `(δₙ, bₙ, Lₙ)` from the schedules.
pub fn medoid_net<SX: Space, SY: Space + Clone>(
    sample: &LabeledSample<SX::Point, SY::Point>,
    schedules: &Schedules,
    x_space: &SX,
    y_space: &SY,
    cfg: &SweepConfig,
) -> Result<MedoidModel<SX::Point, SY::Point>> {
    let n = sample.len();
    if n == 0 {
        return Err(Error::pre("the learners need at least one sample point"));
    }
    let eps = schedules.eps_n(n);
    let net = Subspace::eps_net_of(y_space.clone(), eps)?;
    let projected = project_labels(sample, &net)?;
    let mut model = ctbl_unbdd_ln(
        &projected,
        schedules.ln_delta_n(n),
        schedules.bits_n(n),
        schedules.l_n(n),
        x_space,
        &net,
        cfg,
    )?;
    model.learner_variant = Variant::Separable;
    model.label_space_id = y_space.id().to_string();
    model.schedules_used.eps = Some(eps);
    Ok(model)
}

/// Every label replaced by its nearest net point.
pub fn project_labels<X: Clone, S: Space>(
    sample: &LabeledSample<X, S::Point>,
    net: &Subspace<S>,
) -> Result<LabeledSample<X, S::Point>> {
    let labels = sample
        .labels()
        .iter()
        .map(|y| project_to_eps_net(net, y, net.points()))
        .collect::<Result<Vec<_>>>()?;
    LabeledSample::new(sample.instances().to_vec(), labels)
}

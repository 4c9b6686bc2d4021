//! Synthetic distributions with known Bayes risk, risk estimators,
//! majority-vote baselines and convergence experiments.
//!
//! | id                   | instances        | labels                         | Bayes risk |
//! |----------------------|------------------|--------------------------------|------------|
//! | `singleton4`         | one point        | uniform on `{a, b, c}` ⊂ `{a, b, c, o}` | `1/2` |
//! | `lipschitz_identity` | `Uniform[0, 1]`  | `Y = X`                        | `0`        |
//! | `laplace_regression` | `Uniform[0, 1]`  | `x(1−x) + Laplace(0, s)`       | `s`        |
//! | `finite_multiclass`  | finite table     | finite table                   | from table |
//! | `cauchy_identity`    | `Cauchy(0, 1)`   | `Y = X` (experimental)         | `0`        |

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sample::LabeledSample;
use crate::space::{Euclidean, FiniteSpace, Space};

mod experiment;
mod real;
mod risk;
mod table;

pub use experiment::{
    convergence_experiment, trial_seed, ExperimentConfig, ExperimentResult, ExperimentRow, LearnerId, CSV_HEADER,
};
pub use real::{RealLaw, RealRegression};
pub use risk::{
    estimate_missing_mass, majority_vote_baseline, monte_carlo_risk, true_medoid_oracle, KnnVote, MonteCarloRisk,
};
pub use table::TableDistribution;

/// Distribution parameters as string key-value pairs.
pub type Params = BTreeMap<String, String>;

pub const DISTRIBUTION_IDS: &str =
    "singleton4, lipschitz_identity, laplace_regression, finite_multiclass, cauchy_identity (experimental=true)";

/// A predictor to evaluate: the distribution's own Bayes rule or any function.
#[derive(Clone, Copy)]
pub enum Predictor<'a, X, Y> {
    Bayes,
    Custom(&'a (dyn Fn(&X) -> Y + Sync)),
}

type Pt<S> = <S as Space>::Point;

/// A sampler over `𝒳 × 𝒴` with whatever exact quantities are known.
pub trait SyntheticDistribution: Sync {
    type XS: Space + Clone;
    type YS: Space + Clone;

    fn id(&self) -> &str;
    fn x_space(&self) -> &Self::XS;
    fn y_space(&self) -> &Self::YS;

    /// One draw of `(X, Y)`.
    fn draw(&self, rng: &mut ChaCha8Rng) -> (Pt<Self::XS>, Pt<Self::YS>);

    /// `n` i.i.d. draws, deterministic in `(seed, n)`.
    fn sample(&self, seed: u64, n: usize) -> LabeledSample<Pt<Self::XS>, Pt<Self::YS>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        LabeledSample::from_pairs((0..n).map(|_| self.draw(&mut rng)))
    }

    fn bayes_risk(&self) -> Option<f64>;
    fn bayes_predict(&self, x: &Pt<Self::XS>) -> Option<Pt<Self::YS>>;

    /// Closed-form risk, where the distribution supports it.
    fn exact_risk(&self, predictor: Predictor<'_, Pt<Self::XS>, Pt<Self::YS>>) -> Result<f64>;

    /// True when [`exact_risk`](Self::exact_risk) accepts arbitrary predictors.
    fn has_exact_risk(&self) -> bool;

    /// A bound on every loss a reasonable predictor incurs, if one exists.
    fn loss_cap(&self) -> Option<f64>;
}

/// Any of the built-in distributions.
#[derive(Clone, Debug)]
pub enum AnyDistribution {
    Table(TableDistribution),
    Real(RealRegression),
}

impl AnyDistribution {
    pub fn id(&self) -> &str {
        match self {
            AnyDistribution::Table(d) => d.id(),
            AnyDistribution::Real(d) => d.id(),
        }
    }

    pub fn bayes_risk(&self) -> Option<f64> {
        match self {
            AnyDistribution::Table(d) => d.bayes_risk(),
            AnyDistribution::Real(d) => d.bayes_risk(),
        }
    }

    pub fn as_table(&self) -> Option<&TableDistribution> {
        match self {
            AnyDistribution::Table(d) => Some(d),
            AnyDistribution::Real(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<&RealRegression> {
        match self {
            AnyDistribution::Real(d) => Some(d),
            AnyDistribution::Table(_) => None,
        }
    }

    pub fn sample_real(&self, seed: u64, n: usize) -> Option<LabeledSample<Vec<f64>, Vec<f64>>> {
        self.as_real().map(|d| d.sample(seed, n))
    }

    pub fn real_spaces(&self) -> Option<(&Euclidean, &Euclidean)> {
        self.as_real().map(|d| (d.x_space(), d.y_space()))
    }

    pub fn table_spaces(&self) -> Option<(&FiniteSpace, &FiniteSpace)> {
        self.as_table().map(|d| (d.x_space(), d.y_space()))
    }
}

pub(crate) fn param_f64(params: &Params, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Format(format!("parameter `{key}` expects a number, got `{v}`"))),
    }
}

pub(crate) fn param_usize(params: &Params, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Format(format!("parameter `{key}` expects a nonnegative integer, got `{v}`"))),
    }
}

fn reject_unknown(params: &Params, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::UnknownId { id: k.clone(), valid: allowed.join(", ") }),
        None => Ok(()),
    }
}

/// Builds a distribution by id.
///
/// Parameters: `laplace_regression` takes `s` (default `0.25`);
/// `finite_multiclass` takes either `table=<csv path>` or
/// `x_size` / `y_size` / `table_seed` (defaults 8 / 3 / 1);
/// `cauchy_identity` requires `experimental=true` and takes `window`
/// (default 10), the half-width of the label ε-net window.
pub fn make_distribution(id: &str, params: &Params) -> Result<AnyDistribution> {
    match id {
        "singleton4" => {
            reject_unknown(params, &[])?;
            Ok(AnyDistribution::Table(TableDistribution::singleton4()))
        }
        "lipschitz_identity" => {
            reject_unknown(params, &[])?;
            Ok(AnyDistribution::Real(RealRegression::lipschitz_identity()))
        }
        "laplace_regression" => {
            reject_unknown(params, &["s"])?;
            Ok(AnyDistribution::Real(RealRegression::laplace_regression(param_f64(params, "s", 0.25)?)?))
        }
        "finite_multiclass" => {
            reject_unknown(params, &["table", "x_size", "y_size", "table_seed"])?;
            let d = match params.get("table") {
                Some(path) => TableDistribution::load_csv(path)?,
                None => TableDistribution::random_multiclass(
                    param_usize(params, "x_size", 8)?,
                    param_usize(params, "y_size", 3)?,
                    param_usize(params, "table_seed", 1)? as u64,
                )?,
            };
            Ok(AnyDistribution::Table(d))
        }
        "cauchy_identity" => {
            reject_unknown(params, &["experimental", "window"])?;
            if params.get("experimental").map(String::as_str) != Some("true") {
                return Err(Error::pre("cauchy_identity is experimental; pass experimental=true"));
            }
            Ok(AnyDistribution::Real(RealRegression::cauchy_identity(param_f64(params, "window", 10.0)?)?))
        }
        _ => Err(Error::UnknownId { id: id.to_string(), valid: DISTRIBUTION_IDS.to_string() }),
    }
}

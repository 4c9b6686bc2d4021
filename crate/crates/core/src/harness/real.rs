use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Exp};

use super::{Predictor, SyntheticDistribution};
use crate::error::{Error, Result};
use crate::space::Euclidean;

/// The instance law and regression function of a [`RealRegression`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RealLaw {
    /// `X ~ Uniform[0, 1]`, `Y = X`.
    UniformIdentity,
    /// `X ~ Uniform[0, 1]`, `Y = X(1 − X) + Laplace(0, s)`.
    UniformLaplace { s: f64 },
    /// `X ~ Cauchy(0, 1)`, `Y = X`.
    CauchyIdentity,
}

/// Real-valued regression with absolute loss.
#[derive(Clone, Debug)]
pub struct RealRegression {
    id: &'static str,
    law: RealLaw,
    x_space: Euclidean,
    y_space: Euclidean,
}

impl RealRegression {
    pub fn lipschitz_identity() -> Self {
        RealRegression {
            id: "lipschitz_identity",
            law: RealLaw::UniformIdentity,
            x_space: Euclidean::real(),
            y_space: Euclidean::interval(0.0, 1.0),
        }
    }

    /// Labels live in ℝ; the label ε-net covers `[−(1 + 20s), 1 + 20s]`,
    /// which holds all but a `e^{−20}/2` fraction of the noise.
    pub fn laplace_regression(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::pre(format!("Laplace scale must be positive, got {s}")));
        }
        let r = 1.0 + 20.0 * s;
        Ok(RealRegression {
            id: "laplace_regression",
            law: RealLaw::UniformLaplace { s },
            x_space: Euclidean::real(),
            y_space: Euclidean::interval(-r, r),
        })
    }

    /// Heavy-tailed instances whose labels have no finite mean; the label
    /// ε-net covers `[−window, window]`.
    pub fn cauchy_identity(window: f64) -> Result<Self> {
        if !(window > 0.0 && window.is_finite()) {
            return Err(Error::pre(format!("window must be positive, got {window}")));
        }
        Ok(RealRegression {
            id: "cauchy_identity",
            law: RealLaw::CauchyIdentity,
            x_space: Euclidean::real(),
            y_space: Euclidean::interval(-window, window),
        })
    }

    pub fn law(&self) -> RealLaw {
        self.law
    }

    fn regression(&self, x: f64) -> f64 {
        match self.law {
            RealLaw::UniformIdentity | RealLaw::CauchyIdentity => x,
            RealLaw::UniformLaplace { .. } => x * (1.0 - x),
        }
    }
}

impl SyntheticDistribution for RealRegression {
    type XS = Euclidean;
    type YS = Euclidean;

    fn id(&self) -> &str {
        self.id
    }

    fn x_space(&self) -> &Euclidean {
        &self.x_space
    }

    fn y_space(&self) -> &Euclidean {
        &self.y_space
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        let x = match self.law {
            RealLaw::CauchyIdentity => Cauchy::new(0.0, 1.0).expect("valid scale").sample(rng),
            _ => rng.gen::<f64>(),
        };
        let noise = match self.law {
            RealLaw::UniformLaplace { s } => {
                let magnitude = Exp::new(1.0 / s).expect("valid rate").sample(rng);
                if rng.gen::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
            _ => 0.0,
        };
        (vec![x], vec![self.regression(x) + noise])
    }

    fn bayes_risk(&self) -> Option<f64> {
        Some(match self.law {
            RealLaw::UniformLaplace { s } => s,
            _ => 0.0,
        })
    }

    fn bayes_predict(&self, x: &Vec<f64>) -> Option<Vec<f64>> {
        Some(vec![self.regression(x[0])])
    }

    fn exact_risk(&self, predictor: Predictor<'_, Vec<f64>, Vec<f64>>) -> Result<f64> {
        match predictor {
            Predictor::Bayes => Ok(self.bayes_risk().expect("known")),
            Predictor::Custom(_) => Err(Error::Unsupported(format!(
                "no closed-form risk for arbitrary predictors on `{}`; use monte_carlo_risk",
                self.id
            ))),
        }
    }

    fn has_exact_risk(&self) -> bool {
        false
    }

    fn loss_cap(&self) -> Option<f64> {
        match self.law {
            RealLaw::UniformIdentity => self.y_space.bounds().map(|(lo, hi)| hi - lo),
            _ => None,
        }
    }
}

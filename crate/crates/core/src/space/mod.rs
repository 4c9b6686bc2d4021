//! Instance and label spaces.
//!
//! A [`Space`] bundles a distance (or loss) with a strict total order over
//! its points. The order is what every tie-break in the crate falls back on,
//! so two runs over the same point set always make the same choices.
//!
//! Label spaces may additionally expose an anchor `y₀`, a canonical
//! enumeration `ω` (countable spaces) and an ε-net oracle (separable spaces).

use std::cmp::Ordering;
use std::fmt::Debug;

use crate::error::{Error, Result};

mod euclidean;
mod finite;
pub mod registry;
mod subspace;
mod validate;

pub use euclidean::{Euclidean, Norm};
pub use finite::FiniteSpace;
pub use registry::{resolve, RegisteredSpace};
pub use subspace::Subspace;
pub use validate::{validate_metric_axioms, AxiomReport, Violation};

pub trait Space: Send + Sync {
    type Point: Clone + PartialEq + Debug + Send + Sync;

    fn id(&self) -> &str;

    /// Distance between two valid points. Callers that cannot vouch for their
    /// inputs should go through [`evaluate_loss`].
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Strict total order used for every tie-break.
    fn order(&self, a: &Self::Point, b: &Self::Point) -> Ordering;

    fn check(&self, _p: &Self::Point) -> Result<()> {
        Ok(())
    }

    fn diameter(&self) -> f64 {
        f64::INFINITY
    }

    /// False for label spaces carrying a general (non-metric) loss.
    fn is_metric(&self) -> bool {
        true
    }

    fn anchor(&self) -> Option<Self::Point> {
        None
    }

    /// Number of points, when finite.
    fn cardinality(&self) -> Option<usize> {
        None
    }

    /// Points in ω order (ω = position + 1). `None` for uncountable spaces.
    fn enumerate(&self) -> Option<Box<dyn Iterator<Item = Self::Point> + '_>> {
        None
    }

    /// A finite ε-net, enumerated in the space order.
    fn eps_net(&self, _eps: f64) -> Option<Vec<Self::Point>> {
        None
    }

    /// Closest point to `y` in the closed `radius`-ball about the anchor.
    ///
    /// The default searches the enumeration, which must hold finitely many
    /// points of the ball.
    fn truncate(&self, y: &Self::Point, radius: f64) -> Result<Self::Point> {
        let anchor = self
            .anchor()
            .ok_or_else(|| Error::Unsupported(format!("space `{}` has no anchor", self.id())))?;
        if self.dist(&anchor, y) <= radius {
            return Ok(y.clone());
        }
        let points = self.enumerate().ok_or_else(|| {
            Error::Unsupported(format!(
                "space `{}` has neither an enumeration nor a closed-form truncation",
                self.id()
            ))
        })?;
        let ball = points.filter(|p| self.dist(&anchor, p) <= radius);
        argmin_by_loss(self, y, ball)
            .ok_or_else(|| Error::pre(format!("ball of radius {radius} about the anchor is empty")))
    }
}

/// Loss between two points after validating both.
pub fn evaluate_loss<S: Space>(space: &S, y: &S::Point, y2: &S::Point) -> Result<f64> {
    space.check(y)?;
    space.check(y2)?;
    Ok(space.dist(y, y2))
}

/// `Y⟨b⟩`: the points with `ω(y) ≤ 2^b`, sorted by ω.
pub fn enumerate_labels<S: Space>(space: &S, bits: u32) -> Result<Vec<S::Point>> {
    let points = space.enumerate().ok_or_else(|| {
        Error::Unsupported(format!("space `{}` has no enumeration", space.id()))
    })?;
    Ok(points.take(cap_for_bits(bits)).collect())
}

/// `2^bits`, saturating at `usize::MAX`.
pub fn cap_for_bits(bits: u32) -> usize {
    1usize.checked_shl(bits).unwrap_or(usize::MAX)
}

/// Closest net element to `y`; ties go to the order-smallest element.
pub fn project_to_eps_net<S: Space>(space: &S, y: &S::Point, net: &[S::Point]) -> Result<S::Point> {
    argmin_by_loss(space, y, net.iter().cloned())
        .ok_or_else(|| Error::pre("projection onto an empty net"))
}

/// `y ∧ L` about the space anchor, over the closed ball.
pub fn diameter_truncate<S: Space>(space: &S, y: &S::Point, radius: f64) -> Result<S::Point> {
    if !(radius > 0.0) {
        return Err(Error::pre(format!("truncation radius must be positive, got {radius}")));
    }
    space.truncate(y, radius)
}

pub(crate) fn argmin_by_loss<S: Space + ?Sized>(
    space: &S,
    y: &S::Point,
    candidates: impl Iterator<Item = S::Point>,
) -> Option<S::Point> {
    let mut best: Option<(f64, S::Point)> = None;
    for c in candidates {
        let d = space.dist(y, &c);
        let better = match &best {
            None => true,
            Some((bd, bp)) => d < *bd || (d == *bd && space.order(&c, bp) == Ordering::Less),
        };
        if better {
            best = Some((d, c));
        }
    }
    best.map(|(_, p)| p)
}

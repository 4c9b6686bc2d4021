use std::cmp::Ordering;
use std::sync::OnceLock;

use super::Space;
use crate::error::{Error, Result};

/// A countable subspace given by an explicit point list, such as an ε-net of
/// a separable space. List position defines ω; distance, order and anchor
/// come from the base space.
#[derive(Clone, Debug)]
pub struct Subspace<S: Space> {
    base: S,
    id: String,
    points: Vec<S::Point>,
    diameter: OnceLock<f64>,
}

impl<S: Space> Subspace<S> {
    pub fn new(base: S, id: impl Into<String>, points: Vec<S::Point>) -> Self {
        Subspace { base, id: id.into(), points, diameter: OnceLock::new() }
    }

    /// The ε-net returned by the base space's oracle.
    pub fn eps_net_of(base: S, eps: f64) -> Result<Self> {
        let points = base.eps_net(eps).ok_or_else(|| {
            Error::Unsupported(format!("space `{}` has no ε-net oracle", base.id()))
        })?;
        if points.is_empty() {
            return Err(Error::pre(format!("ε-net of `{}` at ε={eps} is empty", base.id())));
        }
        let id = format!("{}@eps={eps}", base.id());
        Ok(Subspace::new(base, id, points))
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn points(&self) -> &[S::Point] {
        &self.points
    }
}

impl<S: Space> Space for Subspace<S> {
    type Point = S::Point;

    fn id(&self) -> &str {
        &self.id
    }

    fn dist(&self, a: &S::Point, b: &S::Point) -> f64 {
        self.base.dist(a, b)
    }

    fn order(&self, a: &S::Point, b: &S::Point) -> Ordering {
        self.base.order(a, b)
    }

    fn check(&self, p: &S::Point) -> Result<()> {
        self.base.check(p)?;
        if self.points.contains(p) {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                space: self.id.clone(),
                detail: format!("{p:?} is not a member of the subspace"),
            })
        }
    }

    fn diameter(&self) -> f64 {
        *self.diameter.get_or_init(|| {
            let mut d: f64 = 0.0;
            for (i, a) in self.points.iter().enumerate() {
                for b in &self.points[i + 1..] {
                    d = d.max(self.base.dist(a, b));
                }
            }
            d
        })
    }

    fn is_metric(&self) -> bool {
        self.base.is_metric()
    }

    fn anchor(&self) -> Option<S::Point> {
        self.base.anchor()
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.points.len())
    }

    fn enumerate(&self) -> Option<Box<dyn Iterator<Item = S::Point> + '_>> {
        Some(Box::new(self.points.iter().cloned()))
    }
}

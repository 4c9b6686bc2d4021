use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Space;

/// An ordered training sample `Sₙ = (Xᵢ, Yᵢ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample<X, Y> {
    instances: Vec<X>,
    labels: Vec<Y>,
}

impl<X, Y> LabeledSample<X, Y> {
    pub fn new(instances: Vec<X>, labels: Vec<Y>) -> Result<Self> {
        if instances.len() != labels.len() {
            return Err(Error::pre(format!(
                "{} instances but {} labels",
                instances.len(),
                labels.len()
            )));
        }
        Ok(LabeledSample { instances, labels })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (X, Y)>) -> Self {
        let (instances, labels) = pairs.into_iter().unzip();
        LabeledSample { instances, labels }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn instances(&self) -> &[X] {
        &self.instances
    }

    pub fn labels(&self) -> &[Y] {
        &self.labels
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&X, &Y)> {
        self.instances.iter().zip(&self.labels)
    }

    pub fn into_parts(self) -> (Vec<X>, Vec<Y>) {
        (self.instances, self.labels)
    }
}

impl<X: Clone, Y: Clone> LabeledSample<X, Y> {
    /// The sub-sample at the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        LabeledSample {
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    pub fn map_labels<Z>(&self, f: impl FnMut(&Y) -> Z) -> LabeledSample<X, Z> {
        LabeledSample {
            instances: self.instances.clone(),
            labels: self.labels.iter().map(f).collect(),
        }
    }
}

impl<X, Y> LabeledSample<X, Y> {
    /// Validates every point against its declared space.
    pub fn check<SX, SY>(&self, x_space: &SX, y_space: &SY) -> Result<()>
    where
        SX: Space<Point = X>,
        SY: Space<Point = Y>,
    {
        for (x, y) in self.pairs() {
            x_space.check(x)?;
            y_space.check(y)?;
        }
        Ok(())
    }
}

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Space;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
}

/// `ℝ^d` with the ℓ₁ or ℓ₂ metric, ordered lexicographically by coordinate.
///
/// The optional bounding box `[lo, hi]^d` is only used by the ε-net oracle.
#[derive(Clone, Debug)]
pub struct Euclidean {
    id: String,
    dim: usize,
    norm: Norm,
    bounds: Option<(f64, f64)>,
}

impl Euclidean {
    pub fn new(dim: usize, norm: Norm) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let id = match (dim, norm) {
            (1, _) => "real".to_string(),
            (d, Norm::L2) => format!("euclidean:{d}"),
            (d, Norm::L1) => format!("l1:{d}"),
        };
        Euclidean { id, dim, norm, bounds: None }
    }

    /// The real line with `|·|`.
    pub fn real() -> Self {
        Euclidean::new(1, Norm::L2)
    }

    /// The real line with `|·|`, registered as `interval:<lo>:<hi>`; the
    /// interval bounds the ε-net oracle only.
    pub fn interval(lo: f64, hi: f64) -> Self {
        let mut s = Euclidean::real().with_bounds(lo, hi);
        s.id = format!("interval:{lo}:{hi}");
        s
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty bounding box");
        self.bounds = Some((lo, hi));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }
}

impl Space for Euclidean {
    type Point = Vec<f64>;

    fn id(&self) -> &str {
        &self.id
    }

    fn dist(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        match self.norm {
            _ if self.dim == 1 => (a[0] - b[0]).abs(),
            Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Norm::L2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        }
    }

    fn order(&self, a: &Vec<f64>, b: &Vec<f64>) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            match x.total_cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn check(&self, p: &Vec<f64>) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::InvalidElement {
                space: self.id.clone(),
                detail: format!("expected {} coordinates, got {}", self.dim, p.len()),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidElement {
                space: self.id.clone(),
                detail: "non-finite coordinate".into(),
            });
        }
        Ok(())
    }

    /// The origin, clamped into the bounding box when there is one.
    fn anchor(&self) -> Option<Vec<f64>> {
        let c = match self.bounds {
            Some((lo, hi)) => 0.0f64.clamp(lo, hi),
            None => 0.0,
        };
        Some(vec![c; self.dim])
    }

    /// Axis-aligned grid of pitch `ε/√d` inside the bounding box, enumerated
    /// lexicographically. Grid lines pass through the origin.
    fn eps_net(&self, eps: f64) -> Option<Vec<Vec<f64>>> {
        let (lo, hi) = self.bounds?;
        if !(eps > 0.0) {
            return None;
        }
        let pitch = eps / (self.dim as f64).sqrt();
        let first = (lo / pitch).ceil() as i64;
        let last = (hi / pitch).floor() as i64;
        let axis: Vec<f64> = (first..=last).map(|k| k as f64 * pitch).collect();
        if axis.is_empty() {
            return Some(Vec::new());
        }
        let mut out = Vec::with_capacity(axis.len().pow(self.dim as u32));
        let mut idx = vec![0usize; self.dim];
        loop {
            out.push(idx.iter().map(|&i| axis[i]).collect());
            // odometer, last coordinate fastest
            let mut pos = self.dim;
            loop {
                if pos == 0 {
                    return Some(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < axis.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Radial projection onto the closed ball about the origin. Distance
    /// from `y` to the ball is at least `‖y‖ − L` in either norm, which the
    /// radial point attains.
    fn truncate(&self, y: &Vec<f64>, radius: f64) -> Result<Vec<f64>> {
        let origin = vec![0.0; self.dim];
        let r = self.dist(&origin, y);
        if r <= radius {
            return Ok(y.clone());
        }
        if self.dim == 1 {
            return Ok(vec![radius.copysign(y[0])]);
        }
        let scale = radius / r;
        Ok(y.iter().map(|x| x * scale).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_lexicographic_and_scaled() {
        let s = Euclidean::new(2, Norm::L2).with_bounds(0.0, 1.0);
        let net = s.eps_net(2f64.sqrt()).unwrap();
        assert_eq!(
            net,
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
        assert!(Euclidean::real().eps_net(0.5).is_none());
    }

    #[test]
    fn anchor_stays_in_the_box() {
        assert_eq!(Euclidean::real().anchor(), Some(vec![0.0]));
        assert_eq!(Euclidean::interval(-1.0, 1.0).anchor(), Some(vec![0.0]));
        assert_eq!(Euclidean::interval(2.0, 5.0).anchor(), Some(vec![2.0]));
        assert_eq!(Euclidean::interval(-5.0, -2.0).anchor(), Some(vec![-2.0]));
    }

    #[test]
    fn norms() {
        let l1 = Euclidean::new(2, Norm::L1);
        let l2 = Euclidean::new(2, Norm::L2);
        let a = vec![0.0, 0.0];
        let b = vec![3.0, -4.0];
        assert_eq!(l1.dist(&a, &b), 7.0);
        assert_eq!(l2.dist(&a, &b), 5.0);
        assert_eq!(l2.truncate(&b, 2.5).unwrap(), vec![1.5, -2.0]);
    }
}

//! Candidate scales, greedy γ-nets, Voronoi cells and the 1-NN rule.
//!
//! Nets are built by a greedy pass over the points sorted by the space order
//! (ties by sample index), so a net is a function of the point set alone and
//! never of arrival order. Removing a non-center point cannot change the net:
//! every decision before it is unaffected, and it was rejected anyway.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::space::Space;

/// Default bound on `n` for caching the full pairwise distance table.
pub const DEFAULT_MATRIX_CAP: usize = 4096;

/// Sorted distinct positive pairwise distances, terminated by `+∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleSet {
    scales: Vec<f64>,
}

impl ScaleSet {
    pub fn as_slice(&self) -> &[f64] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.scales.iter().copied()
    }
}

/// `Γ = ({ρ(Xᵢ,Xⱼ)} ∪ {∞}) \ {0}`, deduplicated.
pub fn candidate_scales<S: Space>(instances: &[S::Point], space: &S) -> ScaleSet {
    let n = instances.len();
    let mut scales: Vec<f64> = par::map_range(n, |i| {
        instances[i + 1..]
            .iter()
            .map(|b| space.dist(&instances[i], b))
            .filter(|d| *d > 0.0)
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    scales.sort_unstable_by(f64::total_cmp);
    scales.dedup();
    scales.push(f64::INFINITY);
    ScaleSet { scales }
}

/// Pairwise distances over a fixed point list, cached as an upper triangle
/// when the list is small enough.
pub struct Distances<'a, S: Space> {
    space: &'a S,
    points: &'a [S::Point],
    table: Option<Vec<f64>>,
}

impl<'a, S: Space> Distances<'a, S> {
    pub fn new(space: &'a S, points: &'a [S::Point], cap: usize) -> Self {
        let n = points.len();
        let table = (n >= 2 && n <= cap).then(|| {
            par::map_range(n, |i| {
                points[i + 1..].iter().map(|b| space.dist(&points[i], b)).collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect()
        });
        Distances { space, points, table }
    }

    pub fn uncached(space: &'a S, points: &'a [S::Point]) -> Self {
        Distances { space, points, table: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> &'a S {
        self.space
    }

    pub fn points(&self) -> &'a [S::Point] {
        self.points
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.table {
            Some(t) => {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                let n = self.points.len();
                t[a * n - a * (a + 1) / 2 + (b - a - 1)]
            }
            None => self.space.dist(&self.points[i], &self.points[j]),
        }
    }

    /// Indices sorted by the space order, ties by index.
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| {
            self.space
                .order(&self.points[a], &self.points[b])
                .then(a.cmp(&b))
        });
        idx
    }

    /// Smallest pairwise distance strictly greater than `floor`, or `+∞`.
    pub fn next_distance_above(&self, floor: f64) -> f64 {
        let n = self.points.len();
        par::map_range(n, |i| {
            (i + 1..n)
                .map(|j| self.get(i, j))
                .filter(|d| *d > floor)
                .fold(f64::INFINITY, f64::min)
        })
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

/// A γ-net: center indices into the source point list, in selection order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaNet {
    #[serde(with = "serde_scale")]
    pub gamma: f64,
    pub centers: Vec<usize>,
}

impl GammaNet {
    pub fn d(&self) -> usize {
        self.centers.len()
    }
}

pub fn build_gamma_net<S: Space>(instances: &[S::Point], gamma: f64, space: &S) -> Result<GammaNet> {
    if instances.is_empty() {
        return Err(Error::pre("cannot build a net over no points"));
    }
    if !(gamma > 0.0) {
        return Err(Error::pre(format!("scale must be positive, got {gamma}")));
    }
    let dist = Distances::uncached(space, instances);
    let order = dist.sorted_indices();
    Ok(GammaNet { gamma, centers: trace_net(&order, &dist, gamma, usize::MAX).centers })
}

/// Outcome of one greedy pass.
#[derive(Clone, Debug)]
pub(crate) struct NetTrace {
    pub centers: Vec<usize>,
    /// Largest distance from a rejected point to its nearest earlier center.
    /// The pass makes identical decisions for every scale in `(floor, γ]`.
    pub floor: f64,
    /// False when the pass stopped after exceeding the center limit; the
    /// centers then form a packing of size `limit + 1` and `floor` covers
    /// the visited prefix only.
    pub complete: bool,
}

pub(crate) fn trace_net<S: Space>(
    order: &[usize],
    dist: &Distances<'_, S>,
    gamma: f64,
    limit: usize,
) -> NetTrace {
    let mut centers: Vec<usize> = Vec::new();
    let mut floor: f64 = 0.0;
    for &p in order {
        let nearest = centers
            .iter()
            .map(|&c| dist.get(p, c))
            .fold(f64::INFINITY, f64::min);
        if nearest >= gamma {
            centers.push(p);
            if centers.len() > limit {
                return NetTrace { centers, floor, complete: false };
            }
        } else {
            floor = floor.max(nearest);
        }
    }
    NetTrace { centers, floor, complete: true }
}

/// Cell index (position in the net's center list) for every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoronoiAssignment {
    pub cell_of: Vec<usize>,
}

impl VoronoiAssignment {
    pub fn cell_sizes(&self, cells: usize) -> Vec<usize> {
        let mut sizes = vec![0; cells];
        for &c in &self.cell_of {
            sizes[c] += 1;
        }
        sizes
    }

    /// Point indices grouped by cell, each group in index order.
    pub fn members(&self, cells: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); cells];
        for (i, &c) in self.cell_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

pub fn assign_voronoi<S: Space>(instances: &[S::Point], net: &GammaNet, space: &S) -> Result<VoronoiAssignment> {
    if net.centers.is_empty() {
        return Err(Error::pre("net has no centers"));
    }
    if let Some(&bad) = net.centers.iter().find(|&&c| c >= instances.len()) {
        return Err(Error::pre(format!("center index {bad} outside the instance list")));
    }
    Ok(assign_cells(&Distances::uncached(space, instances), &net.centers))
}

pub(crate) fn assign_cells<S: Space>(dist: &Distances<'_, S>, centers: &[usize]) -> VoronoiAssignment {
    let cell_of = par::map_range(dist.len(), |i| {
        let mut best = 0;
        let mut best_d = dist.get(i, centers[0]);
        for (pos, &c) in centers.iter().enumerate().skip(1) {
            // strict: exact ties stay with the earlier (order-smaller) center
            let d = dist.get(i, c);
            if d < best_d {
                best = pos;
                best_d = d;
            }
        }
        best
    });
    VoronoiAssignment { cell_of }
}

/// Label of the nearest model instance; ties go to the order-smallest
/// instance, then to the earlier entry.
pub fn nn_predict<S: Space, Y: Clone>(model: &[(S::Point, Y)], x: &S::Point, space: &S) -> Result<Y> {
    nn_index(model.iter().map(|(p, _)| p), x, space)
        .map(|i| model[i].1.clone())
        .ok_or_else(|| Error::pre("empty model"))
}

pub(crate) fn nn_index<'p, S: Space>(
    points: impl Iterator<Item = &'p S::Point>,
    x: &S::Point,
    space: &S,
) -> Option<usize>
where
    S::Point: 'p,
{
    let mut best: Option<(usize, f64, &S::Point)> = None;
    for (i, p) in points.enumerate() {
        let d = space.dist(x, p);
        let better = match best {
            None => true,
            Some((_, bd, bp)) => d < bd || (d == bd && space.order(p, bp) == Ordering::Less),
        };
        if better {
            best = Some((i, d, p));
        }
    }
    best.map(|(i, _, _)| i)
}

/// Scales serialize as JSON numbers, with `+∞` spelled `"inf"`.
pub mod serde_scale {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(D::Error::custom(format!("invalid scale `{s}`"))),
        }
    }
}

//! Empirical medoid labels per Voronoi cell.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{GammaNet, VoronoiAssignment};
use crate::par;
use crate::sample::LabeledSample;
use crate::space::Space;

/// How the medoid candidates were formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSet {
    /// All of a finite label space.
    Full,
    /// `Y⟨b⟩`, the first `2^b` labels under ω.
    Cardinality { bits: u32 },
    /// `Y⟨b⟩` of the ball-restricted enumeration about the anchor.
    Ball { bits: u32 },
}

/// A γ-net whose centers carry medoid labels.
#[derive(Clone, Debug, PartialEq)]
pub struct RelabeledNet<Y> {
    pub net: GammaNet,
    pub labels: Vec<Y>,
    pub candidates: CandidateSet,
}

/// `argmin_{y ∈ candidates} Σⱼ ℓ(y, Yⱼ)`, ties to the order-smallest candidate.
/// An empty cell yields the order-first candidate.
pub fn empirical_medoid<S: Space>(cell: &[S::Point], candidates: &[S::Point], space: &S) -> Result<S::Point> {
    medoid_with_cost(cell.iter(), candidates, space)
        .map(|(y, _)| y.clone())
        .ok_or_else(|| Error::pre("empty medoid candidate set"))
}

/// Medoid of the labels at `members` together with its cell cost.
pub(crate) fn medoid_with_cost<'c, 'l, S: Space>(
    cell: impl Iterator<Item = &'l S::Point> + Clone,
    candidates: &'c [S::Point],
    space: &S,
) -> Option<(&'c S::Point, f64)>
where
    S::Point: 'l,
{
    let mut best: Option<(&S::Point, f64)> = None;
    for y in candidates {
        let cost: f64 = cell.clone().map(|l| space.dist(y, l)).sum();
        let better = match best {
            None => true,
            Some((by, bc)) => cost < bc || (cost == bc && space.order(y, by) == Ordering::Less),
        };
        if better {
            best = Some((y, cost));
        }
    }
    best
}

/// Relabels every cell with the medoid of the original labels inside it.
pub fn relabel_net<SY: Space, X>(
    sample: &LabeledSample<X, SY::Point>,
    net: &GammaNet,
    assignment: &VoronoiAssignment,
    candidates: &[SY::Point],
    candidate_set: CandidateSet,
    space: &SY,
) -> Result<RelabeledNet<SY::Point>> {
    if assignment.cell_of.len() != sample.len() {
        return Err(Error::pre("assignment does not cover the sample"));
    }
    if assignment.cell_of.iter().any(|&c| c >= net.d()) {
        return Err(Error::pre("assignment refers to a cell outside the net"));
    }
    let labels = cell_medoids(sample.labels(), assignment, net.d(), candidates, space)?
        .into_iter()
        .map(|(y, _)| y)
        .collect();
    Ok(RelabeledNet { net: net.clone(), labels, candidates: candidate_set })
}

/// Medoid label and cost for each of `cells` cells.
pub(crate) fn cell_medoids<SY: Space>(
    labels: &[SY::Point],
    assignment: &VoronoiAssignment,
    cells: usize,
    candidates: &[SY::Point],
    space: &SY,
) -> Result<Vec<(SY::Point, f64)>> {
    if candidates.is_empty() {
        return Err(Error::pre("empty medoid candidate set"));
    }
    let members = assignment.members(cells);
    Ok(par::map_slice(&members, |m| {
        let (y, cost) = medoid_with_cost(m.iter().map(|&i| &labels[i]), candidates, space)
            .expect("candidates are nonempty");
        (y.clone(), cost)
    }))
}

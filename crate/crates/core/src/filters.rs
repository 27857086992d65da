//! Guard candidate filters that keep the optimum unchanged.

use std::collections::VecDeque;

use crate::discretization::{GuardCandidate, Provenance, Side};
use crate::scalar::Scalar;
use crate::terrain::Location;
use crate::visibility::VisibilityRegion;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct FilterStats {
    pub before: usize,
    pub after: usize,
}

impl FilterStats {
    pub fn removed(&self) -> usize {
        self.before - self.after
    }

    pub fn removed_percent(&self) -> f64 {
        if self.before == 0 {
            0.0
        } else {
            100.0 * self.removed() as f64 / self.before as f64
        }
    }
}

/// Whether `g` dominates `g2`, i.e. `V(g2) ⊆ V(g)`.
pub fn dominates<S: Scalar>(g: &VisibilityRegion<S>, g2: &VisibilityRegion<S>) -> bool {
    g.dominates(g2)
}

/// Drops edge-interior candidates that see a subset of the vertices some
/// other candidate on the same edge sees.
///
/// Per edge, sweeps the interior candidates left to right: after a vertex
/// became visible, the first candidate where one becomes invisible is kept.
/// Only the provenance of the candidates is needed. Returns the indices of the
/// survivors, in order.
pub fn edge_filter<S: Scalar>(candidates: &[GuardCandidate<S>]) -> (Vec<usize>, FilterStats) {
    let mut kept = Vec::with_capacity(candidates.len());
    let mut armed = true;
    let mut edge: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        let Location::Edge(e) = c.location.location else {
            kept.push(i);
            continue;
        };
        if edge != Some(e) {
            edge = Some(e);
            armed = true;
        }
        let side = |s: Side| {
            c.provenance
                .iter()
                .any(|p| matches!(p, Provenance::Extremal { side, .. } if *side == s))
        };
        if side(Side::BecomesVisible) {
            armed = true;
        }
        if side(Side::BecomesInvisible) && armed {
            kept.push(i);
            armed = false;
        }
    }
    let stats = FilterStats {
        before: candidates.len(),
        after: kept.len(),
    };
    (kept, stats)
}

/// Removes candidates dominated by an x-neighbor until no adjacent pair
/// dominates, keeping the leftmost of equal regions. `regions` must be in x
/// order. Returns the indices of the survivors, in order.
pub fn domination_filter<S: Scalar>(regions: &[VisibilityRegion<S>]) -> (Vec<usize>, FilterStats) {
    let n = regions.len();
    let none = usize::MAX;
    let mut prev: Vec<usize> = (0..n).map(|i| if i == 0 { none } else { i - 1 }).collect();
    let mut next: Vec<usize> = (0..n)
        .map(|i| if i + 1 == n { none } else { i + 1 })
        .collect();
    let mut alive = vec![true; n];
    let mut queued = vec![true; n];
    let mut work: VecDeque<usize> = (0..n).collect();
    while let Some(c) = work.pop_front() {
        queued[c] = false;
        if !alive[c] {
            continue;
        }
        let (l, r) = (prev[c], next[c]);
        let by_left = l != none && regions[l].dominates(&regions[c]);
        let by_right = !by_left
            && r != none
            && regions[r].dominates(&regions[c])
            && !regions[c].dominates(&regions[r]);
        if !(by_left || by_right) {
            continue;
        }
        alive[c] = false;
        if l != none {
            next[l] = r;
        }
        if r != none {
            prev[r] = l;
        }
        for nb in [l, r] {
            if nb != none && !queued[nb] {
                queued[nb] = true;
                work.push_back(nb);
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let stats = FilterStats {
        before: n,
        after: kept.len(),
    };
    (kept, stats)
}

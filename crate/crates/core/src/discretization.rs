//! Guard candidates and witnesses.
//!
//! Candidates are the vertices plus every extremal point of a vertex's
//! visibility region. Witnesses come from the overlay of the candidates'
//! regions: every cell of that overlay is seen by a fixed guard set, and a
//! witness is represented by nothing but that set.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::DiscretizationError;
use crate::scalar::{format_scalar, Scalar};
use crate::terrain::{Location, Terrain, TerrainPoint};
use crate::visibility::VisibilityRegion;

/// What happens to a generating vertex's visibility when a point sweeps
/// left to right across an extremal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Side {
    BecomesVisible,
    BecomesInvisible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Provenance {
    Vertex,
    Extremal { vertex: usize, side: Side },
}

#[derive(Clone, Debug)]
pub struct GuardCandidate<S> {
    pub id: usize,
    pub location: TerrainPoint<S>,
    /// Sorted; `Vertex` first. Coincident extremal points share one candidate.
    pub provenance: Vec<Provenance>,
}

impl<S: Scalar> GuardCandidate<S> {
    pub fn is_vertex(&self) -> bool {
        self.location.is_vertex()
    }
}

/// Vertices only, as used in vertex-guard mode.
pub fn vertex_candidates<S: Scalar>(terrain: &Terrain<S>) -> Vec<GuardCandidate<S>> {
    (0..terrain.len())
        .map(|i| GuardCandidate {
            id: i,
            location: terrain.vertex_point(i),
            provenance: vec![Provenance::Vertex],
        })
        .collect()
}

/// Vertices plus the extremal points of all vertex visibility regions, sorted
/// by x with consecutive ids.
pub fn build_guard_candidates<S: Scalar>(
    terrain: &Terrain<S>,
    vertex_regions: &[VisibilityRegion<S>],
) -> Vec<GuardCandidate<S>> {
    assert_eq!(vertex_regions.len(), terrain.len(), "one region per vertex");
    let mut extremal: Vec<(TerrainPoint<S>, Provenance)> = vertex_regions
        .par_iter()
        .enumerate()
        .flat_map_iter(|(v, region)| {
            region.intervals.iter().flat_map(move |iv| {
                let lo = (!iv.lo.is_vertex()).then(|| {
                    (
                        iv.lo.clone(),
                        Provenance::Extremal {
                            vertex: v,
                            side: Side::BecomesVisible,
                        },
                    )
                });
                let hi = (!iv.hi.is_vertex()).then(|| {
                    (
                        iv.hi.clone(),
                        Provenance::Extremal {
                            vertex: v,
                            side: Side::BecomesInvisible,
                        },
                    )
                });
                lo.into_iter().chain(hi)
            })
        })
        .collect();
    extremal.par_sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut out: Vec<GuardCandidate<S>> = Vec::with_capacity(terrain.len() + extremal.len() / 2);
    let mut iter = extremal.into_iter().peekable();
    for i in 0..terrain.len() {
        out.push(GuardCandidate {
            id: out.len(),
            location: terrain.vertex_point(i),
            provenance: vec![Provenance::Vertex],
        });
        while let Some((p, _)) = iter.peek() {
            if p.location != Location::Edge(i) {
                break;
            }
            let (p, prov) = iter.next().expect("peeked");
            match out.last_mut() {
                Some(last) if last.location == p => last.provenance.push(prov),
                _ => out.push(GuardCandidate {
                    id: out.len(),
                    location: p,
                    provenance: vec![prov],
                }),
            }
        }
    }
    debug_assert!(iter.next().is_none());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    /// Open interval between two consecutive event coordinates.
    MaximalInterval,
    EndPoint,
}

#[derive(Clone, Debug)]
pub struct OverlayFeature<S> {
    pub kind: FeatureKind,
    pub lo: TerrainPoint<S>,
    pub hi: TerrainPoint<S>,
    /// Sorted indices into the region list the overlay was built from.
    pub covering_guards: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub id: usize,
    /// Sorted guard indices.
    pub covering_guards: Vec<u32>,
    /// x-range of the originating feature, for debugging only.
    pub source_feature: Option<(f64, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    Open,
    Point,
    Close,
}

#[derive(Clone, Copy)]
struct Event {
    guard: u32,
    interval: u32,
    kind: EventKind,
}

#[derive(Default)]
struct EventGroup {
    opens: Vec<u32>,
    closes: Vec<u32>,
    points: Vec<u32>,
}

/// Sweeps all region end points left to right, grouping coincident ones.
fn for_each_event_group<S, F>(
    regions: &[VisibilityRegion<S>],
    mut f: F,
) -> Result<(), DiscretizationError>
where
    S: Scalar,
    F: FnMut(&TerrainPoint<S>, &EventGroup) -> Result<(), DiscretizationError>,
{
    let mut events: Vec<Event> = Vec::new();
    for (g, region) in regions.iter().enumerate() {
        for (k, iv) in region.intervals.iter().enumerate() {
            let (guard, interval) = (g as u32, k as u32);
            if iv.is_degenerate() {
                events.push(Event {
                    guard,
                    interval,
                    kind: EventKind::Point,
                });
            } else {
                events.push(Event {
                    guard,
                    interval,
                    kind: EventKind::Open,
                });
                events.push(Event {
                    guard,
                    interval,
                    kind: EventKind::Close,
                });
            }
        }
    }
    let at = |e: &Event| -> &TerrainPoint<S> {
        let iv = &regions[e.guard as usize].intervals[e.interval as usize];
        match e.kind {
            EventKind::Open | EventKind::Point => &iv.lo,
            EventKind::Close => &iv.hi,
        }
    };
    events.par_sort_unstable_by(|a, b| {
        at(a)
            .cmp(at(b))
            .then(a.kind.cmp(&b.kind))
            .then(a.guard.cmp(&b.guard))
    });

    let mut group = EventGroup::default();
    let mut i = 0;
    while i < events.len() {
        let x = at(&events[i]);
        group.opens.clear();
        group.closes.clear();
        group.points.clear();
        let mut j = i;
        while j < events.len() && at(&events[j]) == x {
            let e = events[j];
            match e.kind {
                EventKind::Open => group.opens.push(e.guard),
                EventKind::Close => group.closes.push(e.guard),
                EventKind::Point => group.points.push(e.guard),
            }
            j += 1;
        }
        f(x, &group)?;
        i = j;
    }
    Ok(())
}

fn uncovered<S: Scalar>(x: &TerrainPoint<S>) -> DiscretizationError {
    DiscretizationError::Uncovered {
        x: format_scalar(x.x()),
    }
}

/// Full overlay of the given regions, sorted by x.
pub fn build_overlay<S: Scalar>(
    terrain: &Terrain<S>,
    regions: &[VisibilityRegion<S>],
) -> Result<Vec<OverlayFeature<S>>, DiscretizationError> {
    let first = terrain.vertex_point(0);
    let last = terrain.vertex_point(terrain.len() - 1);
    let mut features = Vec::new();
    let mut current: BTreeSet<u32> = BTreeSet::new();
    let mut prev: Option<TerrainPoint<S>> = None;
    for_each_event_group(regions, |x, group| {
        match &prev {
            None if x != &first => return Err(uncovered(&first)),
            None => {}
            Some(px) => {
                if current.is_empty() {
                    return Err(uncovered(px));
                }
                features.push(OverlayFeature {
                    kind: FeatureKind::MaximalInterval,
                    lo: px.clone(),
                    hi: x.clone(),
                    covering_guards: current.iter().copied().collect(),
                });
            }
        }
        let mut at_point: BTreeSet<u32> = current.clone();
        at_point.extend(group.opens.iter().copied());
        at_point.extend(group.points.iter().copied());
        features.push(OverlayFeature {
            kind: FeatureKind::EndPoint,
            lo: x.clone(),
            hi: x.clone(),
            covering_guards: at_point.into_iter().collect(),
        });
        for g in &group.closes {
            current.remove(g);
        }
        current.extend(group.opens.iter().copied());
        prev = Some(x.clone());
        Ok(())
    })?;
    match prev {
        None => Err(uncovered(&first)),
        Some(px) if px != last => Err(uncovered(&px)),
        Some(_) => Ok(features),
    }
}

/// One witness per maximal interval feature, or only the locally
/// inclusion-minimal ones. End-point features never need a witness: a point's
/// guard set contains the sets of both adjacent intervals.
pub fn build_witnesses<S: Scalar>(
    features: &[OverlayFeature<S>],
    inclusion_minimal_only: bool,
) -> Vec<Witness> {
    let intervals: Vec<&OverlayFeature<S>> = features
        .iter()
        .filter(|f| f.kind == FeatureKind::MaximalInterval)
        .collect();
    let source = |f: &OverlayFeature<S>| Some((f.lo.x().to_f64(), f.hi.x().to_f64()));
    let mut witnesses = Vec::new();
    if !inclusion_minimal_only {
        for f in &intervals {
            witnesses.push(Witness {
                id: witnesses.len(),
                covering_guards: f.covering_guards.clone(),
                source_feature: source(f),
            });
        }
        return witnesses;
    }

    for (k, point) in features.iter().enumerate() {
        if point.kind != FeatureKind::EndPoint || k == 0 || k + 1 == features.len() {
            continue;
        }
        let here = &point.covering_guards;
        if is_strict_subset(here, &features[k - 1].covering_guards)
            && is_strict_subset(here, &features[k + 1].covering_guards)
        {
            log::warn!(
                "end point at x = {} is strictly inclusion-minimal",
                format_scalar(point.lo.x())
            );
        }
    }

    // runs of equal sets split only by point events act as one interval
    let mut runs: Vec<(&OverlayFeature<S>, f64)> = Vec::new();
    for f in &intervals {
        match runs.last_mut() {
            Some((first, hi)) if first.covering_guards == f.covering_guards => {
                *hi = f.hi.x().to_f64()
            }
            _ => runs.push((f, f.hi.x().to_f64())),
        }
    }
    for (k, (f, hi)) in runs.iter().enumerate() {
        let set = &f.covering_guards;
        if k > 0 && is_strict_subset(&runs[k - 1].0.covering_guards, set) {
            continue;
        }
        if k + 1 < runs.len() && is_strict_subset(&runs[k + 1].0.covering_guards, set) {
            continue;
        }
        witnesses.push(Witness {
            id: witnesses.len(),
            covering_guards: set.clone(),
            source_feature: Some((f.lo.x().to_f64(), *hi)),
        });
    }
    witnesses
}

fn is_strict_subset(a: &[u32], b: &[u32]) -> bool {
    a.len() < b.len() && {
        let mut j = 0;
        a.iter().all(|x| {
            while j < b.len() && b[j] < *x {
                j += 1;
            }
            j < b.len() && b[j] == *x
        })
    }
}

/// Result of [`witnesses_by_sweep`].
#[derive(Clone, Debug)]
pub struct WitnessSet {
    pub witnesses: Vec<Witness>,
    /// Number of maximal interval features in the overlay (the unfiltered
    /// witness count).
    pub interval_features: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Transition {
    Boundary,
    Grows,
    Shrinks,
    Mixed,
    Unchanged,
}

/// Builds witnesses in one sweep without materializing the overlay.
///
/// Produces the same witnesses as [`build_overlay`] followed by
/// [`build_witnesses`], but only keeps the guard sets it emits.
pub fn witnesses_by_sweep<S: Scalar>(
    terrain: &Terrain<S>,
    regions: &[VisibilityRegion<S>],
    inclusion_minimal_only: bool,
    cap: Option<usize>,
) -> Result<WitnessSet, DiscretizationError> {
    let first = terrain.vertex_point(0);
    let last = terrain.vertex_point(terrain.len() - 1);
    let mut witnesses = Vec::new();
    let mut interval_features = 0usize;
    let mut current: BTreeSet<u32> = BTreeSet::new();
    let mut prev: Option<TerrainPoint<S>> = None;
    // start of the current run of equal-set intervals and how it was entered
    let mut run_start: Option<f64> = None;
    let mut entry = Transition::Boundary;

    let mut emit = |set: &BTreeSet<u32>, lo: f64, hi: f64| -> Result<(), DiscretizationError> {
        if cap.is_some_and(|c| witnesses.len() >= c) {
            return Err(DiscretizationError::WitnessCap {
                cap: cap.unwrap_or(0),
            });
        }
        witnesses.push(Witness {
            id: witnesses.len(),
            covering_guards: set.iter().copied().collect(),
            source_feature: Some((lo, hi)),
        });
        Ok(())
    };

    for_each_event_group(regions, |x, group| {
        let xf = x.x().to_f64();
        match &prev {
            None if x != &first => return Err(uncovered(&first)),
            None => {}
            Some(px) => {
                if current.is_empty() {
                    return Err(uncovered(px));
                }
                interval_features += 1;
                let exit = match (group.opens.is_empty(), group.closes.is_empty()) {
                    _ if x == &last => Transition::Boundary,
                    (true, true) => Transition::Unchanged,
                    (false, true) => Transition::Grows,
                    (true, false) => Transition::Shrinks,
                    (false, false) => Transition::Mixed,
                };
                let lo = run_start.unwrap_or_else(|| px.x().to_f64());
                if !inclusion_minimal_only {
                    emit(&current, px.x().to_f64(), xf)?;
                } else if exit != Transition::Unchanged {
                    if entry != Transition::Grows && exit != Transition::Shrinks {
                        emit(&current, lo, xf)?;
                    }
                    entry = exit;
                    run_start = None;
                } else if run_start.is_none() {
                    run_start = Some(lo);
                }
            }
        }
        for g in &group.closes {
            current.remove(g);
        }
        current.extend(group.opens.iter().copied());
        prev = Some(x.clone());
        Ok(())
    })?;
    match prev {
        None => Err(uncovered(&first)),
        Some(px) if px != last => Err(uncovered(&px)),
        Some(_) => Ok(WitnessSet {
            witnesses,
            interval_features,
        }),
    }
}

/// Plain-text overlay dump: one `lo hi ids…` line per feature.
pub fn format_overlay<S: Scalar>(features: &[OverlayFeature<S>]) -> String {
    let mut out = String::new();
    for f in features {
        let _ = write!(
            out,
            "{} {}",
            format_scalar(f.lo.x()),
            format_scalar(f.hi.x())
        );
        for g in &f.covering_guards {
            let _ = write!(out, " {g}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::visibility::{vertex_regions, Interval};

    type T = Terrain<Rational>;

    fn region(t: &T, owner: i64, spans: &[(i64, i64)]) -> VisibilityRegion<Rational> {
        let pt = |x: i64| t.point_at(&Rational::from_i64(x)).unwrap();
        VisibilityRegion {
            owner: pt(owner),
            intervals: spans
                .iter()
                .map(|&(a, b)| Interval {
                    lo: pt(a),
                    hi: pt(b),
                })
                .collect(),
        }
    }

    fn flat(n: usize) -> T {
        T::from_coords((0..n as i64).map(|i| (Rational::from_i64(i), Rational::from_i64(0))))
            .unwrap()
    }

    #[test]
    fn single_edge_has_only_vertex_candidates() {
        let t = T::parse("2\n0 0\n1 0").unwrap();
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        assert_eq!(u.len(), 2);
        assert!(u.iter().all(|c| c.provenance == vec![Provenance::Vertex]));
    }

    #[test]
    fn tent_has_only_vertex_candidates() {
        let t = T::parse("3\n0 0\n1 1\n2 0").unwrap();
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        assert_eq!(u.len(), 3);
        assert_eq!(u.iter().map(|c| c.id).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn shadowed_valley_yields_edge_candidates() {
        let t = T::parse("6\n0 0\n1 1\n4 0\n6 8\n7 5\n9 9").unwrap();
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        let interior: Vec<_> = u.iter().filter(|c| !c.is_vertex()).collect();
        assert!(!interior.is_empty());
        // v0's shadow ends at x = 16/3 on edge 2
        let c = interior
            .iter()
            .find(|c| c.location.x() == &Rational::from_ratio(16, 3))
            .expect("candidate at 16/3");
        assert!(c.provenance.contains(&Provenance::Extremal {
            vertex: 0,
            side: Side::BecomesVisible
        }));
        for w in u.windows(2) {
            assert!(w[0].location < w[1].location);
        }
    }

    #[test]
    fn one_guard_seeing_everything_gives_one_feature() {
        let t = flat(3);
        let regs = vec![region(&t, 0, &[(0, 2)])];
        let ov = build_overlay(&t, &regs).unwrap();
        let intervals: Vec<_> = ov
            .iter()
            .filter(|f| f.kind == FeatureKind::MaximalInterval)
            .collect();
        assert_eq!(intervals.len(), 1);
        assert_eq!(intervals[0].covering_guards, vec![0]);
        let w = build_witnesses(&ov, true);
        assert_eq!(w.len(), 1);
        assert_eq!(
            witnesses_by_sweep(&t, &regs, true, None)
                .unwrap()
                .witnesses
                .len(),
            1
        );
    }

    #[test]
    fn terrain_ends_are_not_shrinking_transitions() {
        let t = flat(4);
        let regs = vec![
            region(&t, 0, &[(0, 2)]),
            region(&t, 1, &[(0, 3)]),
            region(&t, 3, &[(1, 3)]),
        ];
        let sets = |w: Vec<Witness>| w.into_iter().map(|w| w.covering_guards).collect::<Vec<_>>();
        let expected = vec![vec![0, 1], vec![1, 2]];
        assert_eq!(
            sets(witnesses_by_sweep(&t, &regs, true, None).unwrap().witnesses),
            expected
        );
        assert_eq!(
            sets(build_witnesses(&build_overlay(&t, &regs).unwrap(), true)),
            expected
        );
    }

    #[test]
    fn equal_runs_split_by_points_are_one_witness() {
        let t = flat(4);
        let regs = vec![region(&t, 0, &[(0, 3)]), region(&t, 1, &[(1, 1), (2, 3)])];
        let ov = build_overlay(&t, &regs).unwrap();
        let w = build_witnesses(&ov, true);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].covering_guards, vec![0]);
        assert_eq!(w[0].source_feature, Some((0.0, 2.0)));
        let swept = witnesses_by_sweep(&t, &regs, true, None).unwrap().witnesses;
        assert_eq!(swept, w);
    }

    #[test]
    fn identical_regions_share_features() {
        let t = flat(3);
        let regs = vec![region(&t, 0, &[(0, 2)]), region(&t, 1, &[(0, 2)])];
        let ov = build_overlay(&t, &regs).unwrap();
        assert_eq!(ov.len(), 3);
        assert!(ov.iter().all(|f| f.covering_guards == vec![0, 1]));
    }

    #[test]
    fn nested_sets_keep_the_smaller_witness() {
        let t = flat(3);
        let regs = vec![region(&t, 0, &[(0, 2)]), region(&t, 1, &[(1, 2)])];
        let ov = build_overlay(&t, &regs).unwrap();
        let w = build_witnesses(&ov, true);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].covering_guards, vec![0]);
        assert_eq!(build_witnesses(&ov, false).len(), 2);
    }

    #[test]
    fn closed_regions_register_joint_coverage_at_touching_points() {
        let t = flat(3);
        let regs = vec![region(&t, 0, &[(0, 1)]), region(&t, 2, &[(1, 2)])];
        let ov = build_overlay(&t, &regs).unwrap();
        let mid = ov
            .iter()
            .find(|f| f.kind == FeatureKind::EndPoint && f.lo.x() == &Rational::from_i64(1))
            .unwrap();
        assert_eq!(mid.covering_guards, vec![0, 1]);
        let w = build_witnesses(&ov, true);
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn gap_is_reported() {
        let t = flat(4);
        let regs = vec![region(&t, 0, &[(0, 1)]), region(&t, 3, &[(2, 3)])];
        let err = build_overlay(&t, &regs).unwrap_err();
        assert_eq!(err.to_string(), "V(G) ≠ T at x = 1");
        let err = witnesses_by_sweep(&t, &regs, true, None).unwrap_err();
        assert_eq!(err.to_string(), "V(G) ≠ T at x = 1");
        let regs = vec![region(&t, 3, &[(1, 3)])];
        assert!(build_overlay(&t, &regs).is_err());
    }

    #[test]
    fn sweep_matches_materialized_overlay() {
        let t = flat(6);
        let regs = vec![
            region(&t, 0, &[(0, 3)]),
            region(&t, 2, &[(1, 2), (4, 5)]),
            region(&t, 4, &[(2, 5)]),
            region(&t, 5, &[(3, 3), (5, 5)]),
        ];
        let ov = build_overlay(&t, &regs).unwrap();
        for filtered in [false, true] {
            let a: Vec<_> = build_witnesses(&ov, filtered)
                .into_iter()
                .map(|w| w.covering_guards)
                .collect();
            let b: Vec<_> = witnesses_by_sweep(&t, &regs, filtered, None)
                .unwrap()
                .witnesses
                .into_iter()
                .map(|w| w.covering_guards)
                .collect();
            assert_eq!(a, b, "filtered = {filtered}");
        }
    }

    #[test]
    fn witness_cap_aborts() {
        let t = flat(6);
        let regs = vec![region(&t, 0, &[(0, 3)]), region(&t, 5, &[(2, 5)])];
        let err = witnesses_by_sweep(&t, &regs, false, Some(2)).unwrap_err();
        assert_eq!(err, DiscretizationError::WitnessCap { cap: 2 });
    }

    #[test]
    fn overlay_dump_lists_ids() {
        let t = flat(2);
        let regs = vec![region(&t, 0, &[(0, 1)])];
        let text = format_overlay(&build_overlay(&t, &regs).unwrap());
        assert_eq!(text, "0 0 0\n0 1 0\n1 1 0\n");
    }
}

mod common;

use proptest::prelude::*;

use common::{covers, left_right_exclusive, point_on, single_interval, terrain_from_steps};
use tgp_core::discretization::{
    build_guard_candidates, build_overlay, build_witnesses, witnesses_by_sweep,
};
use tgp_core::filters::{domination_filter, edge_filter};
use tgp_core::generators::{generate, ClassParams, TerrainClass};
use tgp_core::oracles::{oracle_region, oracle_sees, oracle_setcover};
use tgp_core::pipeline::{run, GuardMode, NamedConfig, PipelineConfig, SolverKind};
use tgp_core::setcover::{reduce, solve_exact, solve_greedy, SetCoverInstance};
use tgp_core::visibility::{regions_of, vertex_regions, visibility_region};
use tgp_core::{ExactPoint, ExactTerrain, Rational, Scalar};

fn terrain(max_n: usize) -> impl Strategy<Value = ExactTerrain> {
    prop::collection::vec((1i64..=3, -6i64..=6), 2..=max_n).prop_map(|s| terrain_from_steps(&s))
}

/// A terrain point as (edge selector, eighths along the edge).
fn spot() -> impl Strategy<Value = (usize, i64)> {
    (0usize..64, 0i64..=8)
}

fn at(t: &ExactTerrain, (e, k): (usize, i64)) -> ExactPoint {
    point_on(t, e, k)
}

fn instance(max_guards: usize, max_witnesses: usize) -> impl Strategy<Value = SetCoverInstance> {
    (1..=max_guards).prop_flat_map(move |m| {
        prop::collection::vec(
            prop::collection::vec(0..m as u32, 1..=m.min(4)),
            0..=max_witnesses,
        )
        .prop_map(move |ws| SetCoverInstance::new(m, ws))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sees_is_symmetric(t in terrain(12), p in spot(), q in spot()) {
        let (p, q) = (at(&t, p), at(&t, q));
        prop_assert_eq!(t.sees(&p, &q), t.sees(&q, &p));
        prop_assert_eq!(t.sees(&p, &q), oracle_sees(&t, &p, &q));
    }

    #[test]
    fn points_see_their_edge_end_points(t in terrain(12), p in spot()) {
        let p = at(&t, p);
        for i in 0..t.len() - 1 {
            prop_assert!(t.sees(&t.vertex_point(i), &t.vertex_point(i + 1)));
        }
        let e = match p.location {
            tgp_core::Location::Vertex(i) => i.min(t.len() - 2),
            tgp_core::Location::Edge(e) => e,
        };
        prop_assert!(t.sees(&p, &t.vertex_point(e)));
        prop_assert!(t.sees(&p, &t.vertex_point(e + 1)));
        prop_assert!(t.sees(&p, &p));
    }

    #[test]
    fn order_claim(t in terrain(12), spots in prop::collection::vec(spot(), 4)) {
        let mut pts: Vec<ExactPoint> = spots.into_iter().map(|s| at(&t, s)).collect();
        pts.sort();
        pts.dedup();
        prop_assume!(pts.len() == 4);
        let (a, b, c, d) = (&pts[0], &pts[1], &pts[2], &pts[3]);
        if t.sees(a, c) && t.sees(b, d) {
            prop_assert!(t.sees(a, d));
        }
    }

    #[test]
    fn guards_see_one_interval_of_a_remote_edge(t in terrain(12), g in spot()) {
        let g = at(&t, g);
        for e in 0..t.len() - 1 {
            if let Err(msg) = single_interval(&t, &g, e) {
                return Err(TestCaseError::fail(msg));
            }
        }
    }

    #[test]
    fn region_matches_oracle_and_pointwise_sees(t in terrain(16), p in spot()) {
        let p = at(&t, p);
        let region = visibility_region(&t, &p);
        let oracle = oracle_region(&t, &p);
        prop_assert!(region.same_intervals(&oracle), "{:?}\n{:?}", region.intervals, oracle.intervals);
        for e in 0..t.len() - 1 {
            for k in 0..=8 {
                let q = point_on(&t, e, k);
                prop_assert_eq!(region.contains(&q), t.sees(&p, &q));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn covers_have_no_left_and_right_guard(
        t in prop_oneof![
            terrain(10),
            (8usize..=16, any::<u64>()).prop_map(|(n, seed)| {
                generate(TerrainClass::ConcaveValleys, n, seed, &ClassParams::default()).unwrap()
            }),
        ],
        cfg in 0usize..4,
        extra in prop::collection::vec(prop::bool::weighted(0.3), 64),
    ) {
        let cfg = [NamedConfig::PDefault, NamedConfig::PNoEdge, NamedConfig::PNoDom, NamedConfig::PNoW][cfg].config();
        let out = run(&t, &cfg).unwrap();
        prop_assert!(out.solution.is_optimal());
        let mut cover: Vec<ExactPoint> = out.chosen().map(|g| g.location.clone()).collect();
        prop_assert!(covers(&t, &cover));
        let interior = build_guard_candidates(&t, &vertex_regions(&t)).into_iter().filter(|c| !c.is_vertex());
        for (c, add) in interior.zip(extra.iter().cycle()) {
            if *add && !cover.contains(&c.location) {
                cover.push(c.location);
            }
        }
        if let Err(msg) = left_right_exclusive(&t, &cover) {
            return Err(TestCaseError::fail(msg));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sweep_matches_materialized_overlay(t in terrain(14), filtered in any::<bool>()) {
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        let pts: Vec<_> = u.iter().map(|c| c.location.clone()).collect();
        let regions = regions_of(&t, &pts);
        let features = build_overlay(&t, &regions).unwrap();
        let a: Vec<_> = build_witnesses(&features, filtered).into_iter().map(|w| w.covering_guards).collect();
        let b: Vec<_> = witnesses_by_sweep(&t, &regions, filtered, None)
            .unwrap()
            .witnesses
            .into_iter()
            .map(|w| w.covering_guards)
            .collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn covering_the_witnesses_covers_every_feature(t in terrain(12), picks in prop::collection::vec(any::<bool>(), 64)) {
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        let pts: Vec<_> = u.iter().map(|c| c.location.clone()).collect();
        let regions = regions_of(&t, &pts);
        let features = build_overlay(&t, &regions).unwrap();
        let witnesses = build_witnesses(&features, true);
        let chosen: Vec<bool> = (0..u.len()).map(|i| picks[i % picks.len()] || i % 7 == 3).collect();
        let hit = |set: &[u32]| set.iter().any(|&g| chosen[g as usize]);
        if witnesses.iter().all(|w| hit(&w.covering_guards)) {
            prop_assert!(features.iter().all(|f| hit(&f.covering_guards)));
        }
    }

    #[test]
    fn candidate_count_is_bounded(t in terrain(16)) {
        let regions = vertex_regions(&t);
        let u = build_guard_candidates(&t, &regions);
        let bound = t.len() + 2 * regions.iter().map(|r| r.intervals.len()).sum::<usize>();
        prop_assert!(u.len() <= bound);
        for w in u.windows(2) {
            prop_assert!(w[0].location < w[1].location);
        }
    }

    #[test]
    fn edge_filter_keeps_vertices_and_a_superset_for_each_removed(t in terrain(20)) {
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        let (kept, _) = edge_filter(&u);
        let seen = |p: &ExactPoint| -> Vec<bool> { (0..t.len()).map(|j| t.sees(p, &t.vertex_point(j))).collect() };
        for (i, c) in u.iter().enumerate() {
            if c.is_vertex() {
                prop_assert!(kept.contains(&i));
                continue;
            }
            if kept.contains(&i) {
                continue;
            }
            let tgp_core::Location::Edge(e) = c.location.location else { unreachable!() };
            let mine = seen(&c.location);
            let mut others: Vec<ExactPoint> = vec![t.vertex_point(e), t.vertex_point(e + 1)];
            others.extend(kept.iter().map(|&k| &u[k]).filter(|k| k.location.location == c.location.location).map(|k| k.location.clone()));
            let covered = others.iter().any(|o| {
                let theirs = seen(o);
                mine.iter().zip(&theirs).all(|(m, o)| !m || *o)
            });
            prop_assert!(covered, "candidate at x = {} lost", c.location.x());
        }
    }

    #[test]
    fn no_adjacent_pair_dominates_after_domination_filter(t in terrain(16)) {
        let u = build_guard_candidates(&t, &vertex_regions(&t));
        let pts: Vec<_> = u.iter().map(|c| c.location.clone()).collect();
        let regions = regions_of(&t, &pts);
        let (kept, stats) = domination_filter(&regions);
        prop_assert_eq!(stats.after, kept.len());
        for w in kept.windows(2) {
            let (a, b) = (&regions[w[0]], &regions[w[1]]);
            prop_assert!(!a.dominates(b) && !b.dominates(a));
        }
    }

    #[test]
    fn filters_preserve_the_optimum(t in terrain(14)) {
        for mode in [GuardMode::Vertex, GuardMode::Point] {
            let mut objectives = Vec::new();
            for bits in 0..8u8 {
                let mut cfg = PipelineConfig::new(mode);
                cfg.edge_filter = mode == GuardMode::Point && bits & 1 != 0;
                cfg.domination_filter = bits & 2 != 0;
                cfg.witness_filter = bits & 4 != 0;
                let out = run(&t, &cfg).unwrap();
                prop_assert!(out.solution.is_optimal());
                objectives.push(out.solution.objective);
            }
            prop_assert!(objectives.windows(2).all(|w| w[0] == w[1]), "{:?}: {:?}", mode, objectives);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn exact_matches_enumeration(inst in instance(15, 40)) {
        let sol = solve_exact(&inst, None);
        prop_assert_eq!(Some(sol.objective), oracle_setcover(&inst).ok());
        prop_assert!(sol.is_optimal());
        prop_assert!(inst.is_cover(&sol.chosen_guards));
        prop_assert_eq!(sol.chosen_guards.len(), sol.objective);
        prop_assert_eq!(solve_exact(&inst, None).chosen_guards, sol.chosen_guards);
    }

    #[test]
    fn reduction_preserves_the_optimum(inst in instance(15, 25)) {
        let red = reduce(&inst);
        prop_assert!(!red.infeasible);
        let rest = oracle_setcover(&red.instance).unwrap();
        prop_assert_eq!(red.forced.len() + rest, oracle_setcover(&inst).unwrap());
    }

    #[test]
    fn greedy_is_within_the_log_bound(inst in instance(15, 25)) {
        let greedy = solve_greedy(&inst);
        let opt = oracle_setcover(&inst).unwrap();
        prop_assert!(inst.is_cover(&greedy.chosen_guards));
        let bound = (1.0 + (inst.witnesses.len().max(1) as f64).ln()) * opt as f64;
        prop_assert!(greedy.objective as f64 <= bound + 1e-9);
        prop_assert!(greedy.lower_bound().unwrap_or(0) <= opt);
    }
}

#[test]
fn generated_terrains_are_valid_and_deterministic() {
    for class in TerrainClass::ALL {
        for seed in 0..5 {
            let a = generate(class, 60, seed, &ClassParams::default()).unwrap();
            let b = generate(class, 60, seed, &ClassParams::default()).unwrap();
            assert_eq!(a.len(), 60);
            assert_eq!(a.to_text(), b.to_text());
            assert_eq!(
                ExactTerrain::parse(&a.to_text()).unwrap().to_text(),
                a.to_text()
            );
        }
    }
}

#[test]
fn a_valley_needs_more_vertex_guards_than_point_guards() {
    let t = generate(TerrainClass::ConcaveValleys, 8, 0, &ClassParams::default()).unwrap();
    let vertex = run(&t, &NamedConfig::VDefault.config()).unwrap();
    let point = run(&t, &NamedConfig::PDefault.config()).unwrap();
    assert!(vertex.solution.is_optimal() && point.solution.is_optimal());
    assert_eq!(vertex.solution.objective, 2);
    assert_eq!(point.solution.objective, 1);
    let g: Vec<ExactPoint> = point.chosen().map(|g| g.location.clone()).collect();
    assert!(!g[0].is_vertex());
    assert!(covers(&t, &g));
}

#[test]
fn floating_point_terrains_run_the_same_pipeline() {
    let exact = generate(TerrainClass::Walk, 40, 3, &ClassParams::default()).unwrap();
    let float: tgp_core::F64Terrain = exact.convert();
    let mut cfg = NamedConfig::VDefault.config();
    cfg.solver = SolverKind::Exact;
    let a = run(&exact, &cfg).unwrap().solution.objective;
    let b = run(&float, &cfg).unwrap().solution.objective;
    assert_eq!(a, b);
    let x: Rational = Scalar::from_ratio(1, 3);
    assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-15);
}

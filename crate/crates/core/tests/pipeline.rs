use std::time::Duration;

use tgp_core::generators::{generate, ClassParams, TerrainClass};
use tgp_core::pipeline::{run, NamedConfig, PipelineConfig, SolverKind, Stage};
use tgp_core::setcover::{lp_text, SolveStatus};
use tgp_core::DiscretizationError;

fn terrain() -> tgp_core::ExactTerrain {
    generate(
        TerrainClass::ConcaveValleys,
        120,
        9,
        &ClassParams::default(),
    )
    .unwrap()
}

#[test]
fn stages_run_in_order() {
    use Stage::*;
    let t = terrain();
    let log = |cfg: PipelineConfig| run(&t, &cfg).unwrap().stage_log;
    assert_eq!(
        log(NamedConfig::PDefault.config()),
        vec![
            VertexRegions,
            GuardCandidates,
            EdgeFilter,
            CandidateRegions,
            DominationFilter,
            Witnesses,
            Solve
        ]
    );
    assert_eq!(
        log(NamedConfig::PNoEdge.config()),
        vec![
            VertexRegions,
            GuardCandidates,
            CandidateRegions,
            DominationFilter,
            Witnesses,
            Solve
        ]
    );
    assert_eq!(
        log(NamedConfig::VDefault.config()),
        vec![VertexRegions, DominationFilter, Witnesses, Solve]
    );
    assert_eq!(
        log(NamedConfig::VNoDom.config()),
        vec![VertexRegions, Witnesses, Solve]
    );
}

#[test]
fn named_configs_round_trip() {
    for c in NamedConfig::ALL {
        assert_eq!(c.config().name(), Some(c));
        assert_eq!(c.as_str().parse::<NamedConfig>(), Ok(c));
    }
}

#[test]
fn stats_account_for_filters() {
    let t = terrain();
    let out = run(&t, &NamedConfig::PDefault.config()).unwrap();
    let s = &out.stats;
    let edge = s.edge_filter.unwrap();
    let dom = s.domination_filter.unwrap();
    assert_eq!(edge.before, s.candidates_raw);
    assert_eq!(dom.before, edge.after);
    assert_eq!(dom.after, s.candidates_filtered);
    assert_eq!(out.guards.len(), s.candidates_filtered);
    assert!(s.witnesses_filtered <= s.witnesses_raw);
    assert_eq!(out.witnesses.witnesses.len(), s.witnesses_filtered);
    assert_eq!(s.objective, Some(out.solution.objective));
    assert!(s.stage_times.iter().all(|st| st.wall_ms >= 0.0));
    assert_eq!(s.time_limit_s, Some(300.0));
    assert!(out.witnesses.is_cover(&out.solution.chosen_guards));
    assert_eq!(
        lp_text(&out.witnesses).matches(">= 1").count(),
        s.witnesses_filtered
    );
}

#[test]
fn greedy_and_zero_budget_still_cover() {
    let t = terrain();
    let exact = run(&t, &NamedConfig::PDefault.config())
        .unwrap()
        .solution
        .objective;
    let mut cfg = NamedConfig::PDefault.config();
    cfg.solver = SolverKind::Greedy;
    let greedy = run(&t, &cfg).unwrap();
    assert!(greedy.solution.objective >= exact);
    assert!(greedy.witnesses.is_cover(&greedy.solution.chosen_guards));

    let mut cfg = NamedConfig::PNoW.config();
    cfg.time_limit = Some(Duration::ZERO);
    let out = run(&t, &cfg).unwrap();
    assert!(out.witnesses.is_cover(&out.solution.chosen_guards));
    if let SolveStatus::FeasibleBound { lower } = out.solution.status {
        assert!(lower <= exact && exact <= out.solution.objective);
    }
}

#[test]
fn witness_cap_aborts_the_run() {
    let mut cfg = NamedConfig::PNoW.config();
    cfg.witness_cap = Some(3);
    let err = run(&terrain(), &cfg).unwrap_err();
    assert!(matches!(
        err,
        tgp_core::pipeline::PipelineError::Discretization(DiscretizationError::WitnessCap {
            cap: 3
        })
    ));
}

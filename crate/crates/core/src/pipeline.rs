//! The end-to-end solve: regions, candidates, filters, witnesses, set cover.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::discretization::{
    build_guard_candidates, vertex_candidates, witnesses_by_sweep, GuardCandidate,
};
use crate::error::DiscretizationError;
use crate::filters::{domination_filter, edge_filter, FilterStats};
use crate::scalar::{format_scalar, Scalar};
use crate::setcover::{solve_exact, solve_greedy, CoverSolution, SetCoverInstance, SolveStatus};
use crate::terrain::{Location, Terrain};
use crate::visibility::{regions_of, vertex_regions, VisibilityRegion};

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(300);
pub const DEFAULT_WITNESS_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GuardMode {
    Vertex,
    Point,
}

impl FromStr for GuardMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vertex" | "v" => Ok(GuardMode::Vertex),
            "point" | "p" => Ok(GuardMode::Point),
            _ => Err(format!(
                "unknown guard mode {s:?} (expected vertex or point)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Greedy,
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(SolverKind::Exact),
            "greedy" => Ok(SolverKind::Greedy),
            _ => Err(format!("unknown solver {s:?} (expected exact or greedy)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PipelineConfig {
    pub mode: GuardMode,
    pub edge_filter: bool,
    pub domination_filter: bool,
    pub witness_filter: bool,
    pub solver: SolverKind,
    pub time_limit: Option<Duration>,
    pub witness_cap: Option<usize>,
}

impl PipelineConfig {
    pub fn new(mode: GuardMode) -> Self {
        PipelineConfig {
            mode,
            edge_filter: true,
            domination_filter: true,
            witness_filter: true,
            solver: SolverKind::Exact,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            witness_cap: Some(DEFAULT_WITNESS_CAP),
        }
    }

    /// Name of the matching standard configuration, if any.
    pub fn name(&self) -> Option<NamedConfig> {
        NamedConfig::ALL.into_iter().find(|c| {
            let d = c.config();
            d.mode == self.mode
                && (self.mode == GuardMode::Vertex || d.edge_filter == self.edge_filter)
                && d.domination_filter == self.domination_filter
                && d.witness_filter == self.witness_filter
        })
    }
}

/// The seven standard filter configurations: each mode with all filters on,
/// and with one filter switched off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum NamedConfig {
    VDefault,
    VNoDom,
    VNoW,
    PDefault,
    PNoEdge,
    PNoDom,
    PNoW,
}

impl NamedConfig {
    pub const ALL: [NamedConfig; 7] = [
        NamedConfig::VDefault,
        NamedConfig::VNoDom,
        NamedConfig::VNoW,
        NamedConfig::PDefault,
        NamedConfig::PNoEdge,
        NamedConfig::PNoDom,
        NamedConfig::PNoW,
    ];

    pub fn config(self) -> PipelineConfig {
        use NamedConfig::*;
        let mode = match self {
            VDefault | VNoDom | VNoW => GuardMode::Vertex,
            _ => GuardMode::Point,
        };
        let mut c = PipelineConfig::new(mode);
        match self {
            VDefault | PDefault => {}
            VNoDom | PNoDom => c.domination_filter = false,
            VNoW | PNoW => c.witness_filter = false,
            PNoEdge => c.edge_filter = false,
        }
        if mode == GuardMode::Vertex {
            c.edge_filter = false;
        }
        c
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NamedConfig::VDefault => "VDefault",
            NamedConfig::VNoDom => "VNoDom",
            NamedConfig::VNoW => "VNoW",
            NamedConfig::PDefault => "PDefault",
            NamedConfig::PNoEdge => "PNoEdge",
            NamedConfig::PNoDom => "PNoDom",
            NamedConfig::PNoW => "PNoW",
        }
    }
}

impl fmt::Display for NamedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedConfig::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown configuration {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    VertexRegions,
    GuardCandidates,
    EdgeFilter,
    CandidateRegions,
    DominationFilter,
    Witnesses,
    Solve,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct StageTime {
    pub stage: Stage,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct RunStats {
    pub config: Option<String>,
    pub vertices: usize,
    pub candidates_raw: usize,
    pub candidates_filtered: usize,
    pub edge_filter: Option<FilterStats>,
    pub domination_filter: Option<FilterStats>,
    /// Maximal interval features of the overlay.
    pub witnesses_raw: usize,
    pub witnesses_filtered: usize,
    pub objective: Option<usize>,
    pub lower_bound: Option<usize>,
    pub status: Option<SolveStatus>,
    pub stage_times: Vec<StageTime>,
    pub total_ms: f64,
    pub time_limit_s: Option<f64>,
    pub witness_cap: Option<usize>,
}

impl RunStats {
    pub fn witness_filter_removed_percent(&self) -> f64 {
        if self.witnesses_raw == 0 {
            0.0
        } else {
            100.0 * (self.witnesses_raw - self.witnesses_filtered) as f64
                / self.witnesses_raw as f64
        }
    }

    pub fn stage_ms(&self, stage: Stage) -> f64 {
        self.stage_times
            .iter()
            .filter(|s| s.stage == stage)
            .fold(0.0, |acc, s| acc + s.wall_ms)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Discretization(#[from] DiscretizationError),
}

#[derive(Clone, Debug)]
pub struct RunOutput<S> {
    /// Guards handed to the set cover, in x order.
    pub guards: Vec<GuardCandidate<S>>,
    pub witnesses: SetCoverInstance,
    pub solution: CoverSolution,
    pub stats: RunStats,
    pub stage_log: Vec<Stage>,
}

impl<S: Scalar> RunOutput<S> {
    pub fn chosen(&self) -> impl Iterator<Item = &GuardCandidate<S>> {
        self.solution.chosen_guards.iter().map(|&g| &self.guards[g])
    }

    /// One `id x y` line per chosen guard, exact coordinates.
    pub fn solution_text(&self) -> String {
        let mut out = String::new();
        for g in self.chosen() {
            let _ = writeln!(
                out,
                "{} {} {}",
                g.id,
                format_scalar(g.location.x()),
                format_scalar(g.location.y())
            );
        }
        out
    }
}

struct Clock {
    log: Vec<Stage>,
    times: Vec<StageTime>,
}

impl Clock {
    fn time<T>(&mut self, stage: Stage, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.log.push(stage);
        self.times.push(StageTime {
            stage,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        out
    }
}

fn keep<T: Clone>(items: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| items[i].clone()).collect()
}

pub fn run<S: Scalar>(
    terrain: &Terrain<S>,
    cfg: &PipelineConfig,
) -> Result<RunOutput<S>, PipelineError> {
    let start = Instant::now();
    let mut clock = Clock {
        log: Vec::new(),
        times: Vec::new(),
    };
    let mut stats = RunStats {
        config: cfg.name().map(|n| n.to_string()),
        vertices: terrain.len(),
        time_limit_s: cfg.time_limit.map(|d| d.as_secs_f64()),
        witness_cap: cfg.witness_cap,
        ..RunStats::default()
    };

    let v_regions = clock.time(Stage::VertexRegions, || vertex_regions(terrain));
    let (mut guards, mut regions): (Vec<GuardCandidate<S>>, Vec<VisibilityRegion<S>>) =
        match cfg.mode {
            GuardMode::Vertex => {
                stats.candidates_raw = terrain.len();
                (vertex_candidates(terrain), v_regions)
            }
            GuardMode::Point => {
                let mut u = clock.time(Stage::GuardCandidates, || {
                    build_guard_candidates(terrain, &v_regions)
                });
                stats.candidates_raw = u.len();
                if cfg.edge_filter {
                    let (idx, fs) = clock.time(Stage::EdgeFilter, || edge_filter(&u));
                    u = keep(&u, &idx);
                    stats.edge_filter = Some(fs);
                }
                let regions = clock.time(Stage::CandidateRegions, || {
                    let interior: Vec<_> = u
                        .iter()
                        .filter(|c| !c.is_vertex())
                        .map(|c| c.location.clone())
                        .collect();
                    let mut computed = regions_of(terrain, &interior).into_iter();
                    let mut v_regions = v_regions.into_iter().map(Some).collect::<Vec<_>>();
                    u.iter()
                        .map(|c| match c.location.location {
                            Location::Vertex(i) => v_regions[i].take().expect("each vertex once"),
                            Location::Edge(_) => {
                                computed.next().expect("one region per interior candidate")
                            }
                        })
                        .collect()
                });
                (u, regions)
            }
        };

    if cfg.domination_filter {
        let (idx, fs) = clock.time(Stage::DominationFilter, || domination_filter(&regions));
        guards = keep(&guards, &idx);
        let mut slots: Vec<Option<VisibilityRegion<S>>> = regions.into_iter().map(Some).collect();
        regions = idx
            .iter()
            .map(|&i| slots[i].take().expect("kept once"))
            .collect();
        stats.domination_filter = Some(fs);
    }
    stats.candidates_filtered = guards.len();

    let ws = clock.time(Stage::Witnesses, || {
        witnesses_by_sweep(terrain, &regions, cfg.witness_filter, cfg.witness_cap)
    })?;
    drop(regions);
    stats.witnesses_raw = ws.interval_features;
    stats.witnesses_filtered = ws.witnesses.len();

    let instance = SetCoverInstance::with_meta(
        ws.witnesses
            .into_iter()
            .map(|w| w.covering_guards)
            .collect(),
        guards.iter().map(|g| g.id).collect(),
    );
    let solution = clock.time(Stage::Solve, || match cfg.solver {
        SolverKind::Exact => solve_exact(&instance, cfg.time_limit),
        SolverKind::Greedy => solve_greedy(&instance),
    });
    if solution.status != SolveStatus::Infeasible {
        stats.objective = Some(solution.objective);
    }
    stats.lower_bound = solution.lower_bound();
    stats.status = Some(solution.status);
    stats.stage_times = clock.times;
    stats.total_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunOutput {
        guards,
        witnesses: instance,
        solution,
        stats,
        stage_log: clock.log,
    })
}

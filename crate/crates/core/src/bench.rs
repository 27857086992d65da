//! Benchmark runs over generated instances and their summary statistics.

use rayon::prelude::*;
use serde::Serialize;

use crate::generators::{generate, ClassParams, ResolvedParams, TerrainClass};
use crate::pipeline::{run, NamedConfig, PipelineConfig, RunStats, Stage};
use crate::setcover::SolveStatus;

#[derive(Clone, Debug)]
pub struct BenchTask {
    pub config: NamedConfig,
    pub class: TerrainClass,
    pub n: usize,
    pub seed: u64,
}

/// One CSV row per run. Unsolved runs have no objective.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub config: String,
    pub class: String,
    pub n: usize,
    pub seed: u64,
    #[serde(rename = "|U|_raw")]
    pub u_raw: usize,
    #[serde(rename = "|U|_filtered")]
    pub u_filtered: usize,
    #[serde(rename = "|W|_raw")]
    pub w_raw: usize,
    #[serde(rename = "|W|_filtered")]
    pub w_filtered: usize,
    pub objective: Option<usize>,
    pub status: String,
    pub edge_removed_pct: Option<f64>,
    pub dom_removed_pct: Option<f64>,
    pub witness_removed_pct: Option<f64>,
    pub vertex_regions_ms: f64,
    pub guard_candidates_ms: f64,
    pub edge_filter_ms: f64,
    pub candidate_regions_ms: f64,
    pub domination_filter_ms: f64,
    pub witnesses_ms: f64,
    pub solve_ms: f64,
    pub total_ms: f64,
    pub step_bound: String,
    pub amplitude: f64,
    pub periods: f64,
    pub scale: f64,
    pub valleys: usize,
    pub slack: String,
    pub time_limit_s: Option<f64>,
    pub witness_cap: Option<usize>,
}

impl BenchRow {
    pub fn solved(&self) -> bool {
        self.status == "optimal"
    }

    /// Completion time, infinite for unsolved runs.
    pub fn completion_ms(&self) -> f64 {
        if self.solved() {
            self.total_ms
        } else {
            f64::INFINITY
        }
    }

    fn from_stats(task: &BenchTask, gen: &ResolvedParams, stats: &RunStats) -> Self {
        let status = match stats.status {
            Some(SolveStatus::Optimal) => "optimal",
            Some(SolveStatus::FeasibleBound { .. }) => "unsolved (time)",
            _ => "infeasible",
        };
        BenchRow {
            config: task.config.to_string(),
            class: task.class.to_string(),
            n: task.n,
            seed: task.seed,
            u_raw: stats.candidates_raw,
            u_filtered: stats.candidates_filtered,
            w_raw: stats.witnesses_raw,
            w_filtered: stats.witnesses_filtered,
            objective: if status == "optimal" {
                stats.objective
            } else {
                None
            },
            status: status.into(),
            edge_removed_pct: stats.edge_filter.map(|f| f.removed_percent()),
            dom_removed_pct: stats.domination_filter.map(|f| f.removed_percent()),
            witness_removed_pct: Some(stats.witness_filter_removed_percent()),
            vertex_regions_ms: stats.stage_ms(Stage::VertexRegions),
            guard_candidates_ms: stats.stage_ms(Stage::GuardCandidates),
            edge_filter_ms: stats.stage_ms(Stage::EdgeFilter),
            candidate_regions_ms: stats.stage_ms(Stage::CandidateRegions),
            domination_filter_ms: stats.stage_ms(Stage::DominationFilter),
            witnesses_ms: stats.stage_ms(Stage::Witnesses),
            solve_ms: stats.stage_ms(Stage::Solve),
            total_ms: stats.total_ms,
            time_limit_s: stats.time_limit_s,
            witness_cap: stats.witness_cap,
            ..Self::unsolved(task, gen, None, status)
        }
    }

    fn unsolved(
        task: &BenchTask,
        gen: &ResolvedParams,
        cfg: Option<&PipelineConfig>,
        reason: &str,
    ) -> Self {
        BenchRow {
            config: task.config.to_string(),
            class: task.class.to_string(),
            n: task.n,
            seed: task.seed,
            u_raw: 0,
            u_filtered: 0,
            w_raw: 0,
            w_filtered: 0,
            objective: None,
            status: reason.into(),
            edge_removed_pct: None,
            dom_removed_pct: None,
            witness_removed_pct: None,
            vertex_regions_ms: 0.0,
            guard_candidates_ms: 0.0,
            edge_filter_ms: 0.0,
            candidate_regions_ms: 0.0,
            domination_filter_ms: 0.0,
            witnesses_ms: 0.0,
            solve_ms: 0.0,
            total_ms: f64::INFINITY,
            step_bound: gen.step_bound.clone(),
            amplitude: gen.amplitude,
            periods: gen.periods,
            scale: gen.scale,
            valleys: gen.valleys,
            slack: gen.slack.clone(),
            time_limit_s: cfg.and_then(|c| c.time_limit).map(|d| d.as_secs_f64()),
            witness_cap: cfg.and_then(|c| c.witness_cap),
        }
    }
}

pub fn run_task(
    task: &BenchTask,
    params: &ClassParams,
    adjust: &dyn Fn(&mut PipelineConfig),
) -> BenchRow {
    let gen = params.resolve(task.class, task.n, task.seed);
    let mut cfg = task.config.config();
    adjust(&mut cfg);
    let terrain = match generate(task.class, task.n, task.seed, params) {
        Ok(t) => t,
        Err(e) => {
            return BenchRow::unsolved(task, &gen, Some(&cfg), &format!("generator error: {e}"))
        }
    };
    match run(&terrain, &cfg) {
        Ok(out) => BenchRow::from_stats(task, &gen, &out.stats),
        Err(_) => BenchRow::unsolved(task, &gen, Some(&cfg), "unsolved (memory)"),
    }
}

/// Runs all tasks; `jobs > 1` runs that many tasks at once.
pub fn run_bench(
    tasks: &[BenchTask],
    params: &ClassParams,
    jobs: usize,
    adjust: &(dyn Fn(&mut PipelineConfig) + Sync),
) -> Vec<BenchRow> {
    if jobs <= 1 {
        return tasks.iter().map(|t| run_task(t, params, adjust)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        tasks
            .par_iter()
            .map(|t| run_task(t, params, adjust))
            .collect()
    })
}

/// Median; the mean of the two middle values for even counts. Infinite values
/// sort last.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CellSummary {
    pub config: String,
    pub class: String,
    pub n: usize,
    pub runs: usize,
    pub solved: usize,
    pub median_time_ms: Option<f64>,
    pub median_edge_removed_pct: Option<f64>,
    pub median_dom_removed_pct: Option<f64>,
    pub median_witness_removed_pct: Option<f64>,
}

/// Per (config, class, n) medians, in order of first appearance.
pub fn summarize(rows: &[BenchRow]) -> Vec<CellSummary> {
    let mut keys: Vec<(String, String, usize)> = Vec::new();
    for r in rows {
        let k = (r.config.clone(), r.class.clone(), r.n);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(config, class, n)| {
            let cell: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.config == config && r.class == class && r.n == n)
                .collect();
            let col = |f: &dyn Fn(&BenchRow) -> Option<f64>| {
                median(&cell.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            CellSummary {
                runs: cell.len(),
                solved: cell.iter().filter(|r| r.solved()).count(),
                median_time_ms: col(&|r| Some(r.completion_ms())),
                median_edge_removed_pct: col(&|r| r.edge_removed_pct),
                median_dom_removed_pct: col(&|r| r.dom_removed_pct),
                median_witness_removed_pct: col(&|r| r.witness_removed_pct),
                config,
                class,
                n,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_with_unsolved_as_infinity() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), Some(2.5));
        assert_eq!(
            median(&[1.0, f64::INFINITY, f64::INFINITY]),
            Some(f64::INFINITY)
        );
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn one_run_one_row() {
        let task = BenchTask {
            config: NamedConfig::PDefault,
            class: TerrainClass::Walk,
            n: 30,
            seed: 1,
        };
        let rows = run_bench(&[task], &ClassParams::default(), 1, &|_| {});
        assert_eq!(rows.len(), 1);
        assert!(rows[0].solved());
        let cells = summarize(&rows);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].solved, 1);
    }
}

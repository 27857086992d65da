//! `tgp`: generate terrains, solve guarding instances, run benchmarks.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tgp_core::bench::{run_bench, summarize, BenchTask};
use tgp_core::discretization::{build_overlay, format_overlay};
use tgp_core::generators::{generate, ClassParams, TerrainClass};
use tgp_core::pipeline::{run, GuardMode, NamedConfig, PipelineConfig, RunStats, SolverKind};
use tgp_core::render::{render_svg, Layers, Style};
use tgp_core::scalar::parse_rational;
use tgp_core::setcover::export_lp;
use tgp_core::visibility::{regions_of, visibility_region};
use tgp_core::{ExactTerrain, Rational};

#[derive(Parser)]
#[command(name = "tgp", version, about = "Exact 1.5D terrain guarding")]
struct Cli {
    /// Worker threads for region computation (default: all cores).
    #[arg(long, global = true, env = "TGP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random terrain.
    Generate(GenerateArgs),
    /// Compute a minimum guard cover of a terrain file.
    Solve(SolveArgs),
    /// Draw a terrain, optionally with guards and visibility regions.
    Render(RenderArgs),
    /// Run configurations over generated instances and write a CSV report.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct ClassArgs {
    /// Walk offsets are drawn from [-step, step].
    #[arg(long, default_value = "1")]
    step_bound: String,
    /// Sine amplitude (default n/8 steps).
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    periods: f64,
    /// Parabola height at the ends (default n/4 steps).
    #[arg(long)]
    scale: Option<f64>,
    /// Number of valleys (default n/20, at least 1).
    #[arg(long)]
    valleys: Option<usize>,
    /// Valley slope slack, strictly between 0 and 1/2.
    #[arg(long, default_value = "1/4")]
    slack: String,
}

impl ClassArgs {
    fn params(&self) -> Result<ClassParams> {
        Ok(ClassParams {
            step_bound: Rational::new(parse_rational(&self.step_bound)?),
            amplitude: self.amplitude,
            periods: self.periods,
            scale: self.scale,
            valleys: self.valleys,
            slack: Rational::new(parse_rational(&self.slack)?),
        })
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// walk, sinewalk, parabolawalk or concavevalleys.
    #[arg(long, default_value = "walk")]
    class: String,
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: ClassArgs,
    /// Output file (default: stdout).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Start from a named configuration (VDefault, PNoEdge, ...).
    #[arg(long)]
    config: Option<String>,
    /// vertex or point.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    no_edge_filter: bool,
    #[arg(long)]
    no_dom_filter: bool,
    #[arg(long)]
    no_witness_filter: bool,
    /// exact or greedy.
    #[arg(long, default_value = "exact")]
    solver: String,
    /// Seconds before the exact solver returns its best cover.
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    /// Abort when more witnesses than this are built.
    #[arg(long, default_value_t = 10_000_000)]
    witness_cap: usize,
}

impl RunArgs {
    fn pipeline_config(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(name) => name
                .parse::<NamedConfig>()
                .map_err(anyhow::Error::msg)?
                .config(),
            None => PipelineConfig::new(GuardMode::Point),
        };
        if let Some(mode) = &self.mode {
            cfg.mode = mode.parse().map_err(anyhow::Error::msg)?;
        }
        self.apply(&mut cfg)?;
        Ok(cfg)
    }

    fn apply(&self, cfg: &mut PipelineConfig) -> Result<()> {
        if self.no_edge_filter || cfg.mode == GuardMode::Vertex {
            cfg.edge_filter = false;
        }
        if self.no_dom_filter {
            cfg.domination_filter = false;
        }
        if self.no_witness_filter {
            cfg.witness_filter = false;
        }
        cfg.solver = self
            .solver
            .parse::<SolverKind>()
            .map_err(anyhow::Error::msg)?;
        if self.time_limit.is_nan() || self.time_limit < 0.0 {
            bail!("time limit must be non-negative");
        }
        cfg.time_limit = Some(Duration::from_secs_f64(self.time_limit));
        cfg.witness_cap = Some(self.witness_cap);
        Ok(())
    }
}

#[derive(Args)]
struct SolveArgs {
    terrain: PathBuf,
    #[command(flatten)]
    run: RunArgs,
    /// Write the chosen guards, one `id x y` line each.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Write the run statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Draw terrain, candidates and chosen guards.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Export the set cover as an LP file.
    #[arg(long)]
    lp: Option<PathBuf>,
    /// Dump the overlay of the final guard set, one `lo hi ids...` line per feature.
    #[arg(long)]
    overlay: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    terrain: PathBuf,
    /// Solution file to highlight.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Shade the visibility regions of the terrain points at these x values.
    #[arg(long, value_delimiter = ',')]
    regions_of: Vec<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "walk")]
    classes: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    sizes: Vec<usize>,
    /// Seeds 0..seeds.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, value_delimiter = ',', default_value = "VDefault,PDefault")]
    configs: Vec<String>,
    #[command(flatten)]
    params: ClassArgs,
    #[arg(long, default_value = "exact")]
    solver: String,
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 10_000_000)]
    witness_cap: usize,
    /// Runs executed at the same time.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Per-run CSV report.
    #[arg(short, long)]
    out: PathBuf,
    /// Per-cell medians as CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn read_terrain(path: &Path) -> Result<ExactTerrain> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading terrain file {}", path.display()))?;
    ExactTerrain::parse(&text).with_context(|| format!("parsing terrain file {}", path.display()))
}

/// Generator parameters recorded by `generate` in the file header, if any.
fn generator_header(path: &Path) -> Result<Option<serde_json::Value>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading terrain file {}", path.display()))?;
    text.lines()
        .find_map(|l| l.trim().strip_prefix("# generator "))
        .map(|json| {
            serde_json::from_str(json)
                .with_context(|| format!("parsing generator header in {}", path.display()))
        })
        .transpose()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let class: TerrainClass = args.class.parse()?;
    let params = args.params.params()?;
    let terrain = generate(class, args.n, args.seed, &params)?;
    let resolved = params.resolve(class, args.n, args.seed);
    let mut text = format!("# generator {}\n", serde_json::to_string(&resolved)?);
    text.push_str(&terrain.to_text());
    match &args.out {
        Some(path) => write_file(path, &text),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

#[derive(Serialize)]
struct StatsRecord<'a> {
    terrain: String,
    generator: Option<serde_json::Value>,
    config: &'a PipelineConfig,
    stage_log: Vec<String>,
    stats: &'a RunStats,
    edge_filter_removed_pct: Option<f64>,
    domination_filter_removed_pct: Option<f64>,
    witness_filter_removed_pct: f64,
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let terrain = read_terrain(&args.terrain)?;
    let cfg = args.run.pipeline_config()?;
    let out = match run(&terrain, &cfg) {
        Ok(out) => out,
        Err(e) => bail!("unsolved (memory): {e}"),
    };
    let stats = &out.stats;
    let status = match out.solution.status {
        tgp_core::setcover::SolveStatus::Optimal => "optimal".to_string(),
        tgp_core::setcover::SolveStatus::FeasibleBound { lower } => {
            format!("time limit, lower bound {lower}")
        }
        tgp_core::setcover::SolveStatus::Infeasible => "infeasible".to_string(),
    };
    println!(
        "{} guards ({status}) | {} vertices, |U| {} -> {}, |W| {} -> {}, {:.1} ms",
        out.solution.objective,
        stats.vertices,
        stats.candidates_raw,
        stats.candidates_filtered,
        stats.witnesses_raw,
        stats.witnesses_filtered,
        stats.total_ms
    );

    if let Some(path) = &args.solution {
        write_file(path, &out.solution_text())?;
    }
    if let Some(path) = &args.stats {
        let record = StatsRecord {
            terrain: args.terrain.display().to_string(),
            generator: generator_header(&args.terrain)?,
            config: &cfg,
            stage_log: out.stage_log.iter().map(|s| format!("{s:?}")).collect(),
            stats,
            edge_filter_removed_pct: stats.edge_filter.map(|f| f.removed_percent()),
            domination_filter_removed_pct: stats.domination_filter.map(|f| f.removed_percent()),
            witness_filter_removed_pct: stats.witness_filter_removed_percent(),
        };
        write_file(path, &serde_json::to_string_pretty(&record)?)?;
    }
    if let Some(path) = &args.lp {
        let file =
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        export_lp(&out.witnesses, io::BufWriter::new(file))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.overlay {
        let points: Vec<_> = out.guards.iter().map(|g| g.location.clone()).collect();
        let regions = regions_of(&terrain, &points);
        let features = build_overlay(&terrain, &regions)?;
        write_file(path, &format_overlay(&features))?;
    }
    if let Some(path) = &args.svg {
        let chosen: Vec<_> = out.chosen().map(|g| g.location.clone()).collect();
        let layers = Layers {
            candidates: Some(&out.guards),
            solution: Some(&chosen),
            regions: &[],
        };
        write_file(path, &render_svg(&terrain, &layers, &Style::default()))?;
    }
    Ok(())
}

fn read_solution(terrain: &ExactTerrain, path: &Path) -> Result<Vec<tgp_core::ExactPoint>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading solution file {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 3 {
            bail!("{}:{}: expected `id x y`", path.display(), i + 1);
        }
        let x = Rational::new(
            parse_rational(fields[1]).with_context(|| format!("{}:{}", path.display(), i + 1))?,
        );
        let p = terrain
            .point_at(&x)
            .with_context(|| format!("{}:{}: x outside the terrain", path.display(), i + 1))?;
        out.push(p);
    }
    Ok(out)
}

fn cmd_render(args: &RenderArgs) -> Result<()> {
    let terrain = read_terrain(&args.terrain)?;
    let guards = match &args.solution {
        Some(path) => Some(read_solution(&terrain, path)?),
        None => None,
    };
    let mut regions = Vec::new();
    for x in &args.regions_of {
        let x = Rational::new(parse_rational(x)?);
        let p = terrain
            .point_at(&x)
            .with_context(|| format!("x = {x} is outside the terrain"))?;
        regions.push(visibility_region(&terrain, &p));
    }
    let layers = Layers {
        candidates: None,
        solution: guards.as_deref(),
        regions: &regions,
    };
    let svg = render_svg(&terrain, &layers, &Style::default());
    match &args.out {
        Some(path) => write_file(path, &svg),
        None => io::stdout()
            .write_all(svg.as_bytes())
            .context("writing to stdout"),
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let classes: Vec<TerrainClass> = args
        .classes
        .iter()
        .map(|c| c.parse())
        .collect::<Result<_, _>>()?;
    let configs: Vec<NamedConfig> = args
        .configs
        .iter()
        .map(|c| c.parse().map_err(anyhow::Error::msg))
        .collect::<Result<_>>()?;
    let solver: SolverKind = args.solver.parse().map_err(anyhow::Error::msg)?;
    let params = args.params.params()?;
    let mut tasks = Vec::new();
    for &class in &classes {
        for &n in &args.sizes {
            for seed in 0..args.seeds {
                for &config in &configs {
                    tasks.push(BenchTask {
                        config,
                        class,
                        n,
                        seed,
                    });
                }
            }
        }
    }
    if args.time_limit.is_nan() || args.time_limit < 0.0 {
        bail!("time limit must be non-negative");
    }
    let limit = Duration::from_secs_f64(args.time_limit);
    let cap = args.witness_cap;
    let rows = run_bench(
        &tasks,
        &params,
        args.jobs,
        &move |cfg: &mut PipelineConfig| {
            cfg.solver = solver;
            cfg.time_limit = Some(limit);
            cfg.witness_cap = Some(cap);
        },
    );

    let mut w = csv::Writer::from_path(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;

    let cells = summarize(&rows);
    for c in &cells {
        let pct = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.1}%"));
        println!(
            "{:<9} {:<15} n={:<7} solved {}/{}  median time {}  removed: edge {} dom {} witness {}",
            c.config,
            c.class,
            c.n,
            c.solved,
            c.runs,
            c.median_time_ms.map_or("-".into(), |t| if t.is_finite() {
                format!("{t:.1} ms")
            } else {
                "inf".into()
            }),
            pct(c.median_edge_removed_pct),
            pct(c.median_dom_removed_pct),
            pct(c.median_witness_removed_pct),
        );
    }
    if let Some(path) = &args.summary {
        let mut w =
            csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        for c in &cells {
            w.serialize(c)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Render(a) => cmd_render(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

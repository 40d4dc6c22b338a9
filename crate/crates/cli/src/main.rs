use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use reasoning_forge::dataset::{
    dataset_stats, generate_dataset, plan, preset_scales, read_manifest, GenConfig, TaskPlan, DESK_COUNT,
};
use reasoning_forge::flowmatch::{euler_sample, target_velocity, SampleVec};
use reasoning_forge::instance::PuzzleRecord;
use reasoning_forge::metrics::{evaluate, read_predictions, EvalOptions};
use reasoning_forge::render::{render_input, render_state, write_png};
use reasoning_forge::seed::rng_from_seed;
use reasoning_forge::{sudoku, Execution, TaskKind};

#[derive(Parser, Debug)]
#[command(name = "reasoning-forge", version, about = "Visual reasoning puzzle generator, solver and evaluator")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a dataset: PNG trajectories plus manifest.jsonl
    Gen(GenArgs),
    /// Solve a structured puzzle file and print the solution text
    Solve(SolveArgs),
    /// Render every trajectory state of one puzzle to PNG
    Render(RenderArgs),
    /// Score predictions against a manifest
    Eval(EvalArgs),
    /// Summarize a manifest or a planned configuration
    Stats(StatsArgs),
    /// Print the flow-matching sampler checks
    FmDemo(FmArgs),
}

#[derive(Args, Debug, Clone)]
struct ScaleArgs {
    #[arg(long, value_parser = parse_task)]
    task: Option<TaskKind>,
    /// Grid size for maze and vsp
    #[arg(long)]
    size: Option<usize>,
    /// City count for tsp
    #[arg(long)]
    cities: Option<usize>,
    /// Clue count for sudoku
    #[arg(long)]
    clues: Option<usize>,
    /// Hole count for sudoku (81 - clues)
    #[arg(long, conflicts_with = "clues")]
    holes: Option<usize>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    scale: ScaleArgs,
    /// Instances per scale
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long, default_value_t = 0.2)]
    p_hole: f64,
    #[arg(long, env = "REASONING_FORGE_THREADS")]
    threads: Option<usize>,
    /// Use the full-size per-task totals instead of desk-scale counts
    #[arg(long, conflicts_with = "count")]
    paper_scale: bool,
    /// Plan and print statistics without generating anything
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// JSON puzzle record, or one manifest line
    file: PathBuf,
    /// Print the solved record as JSON instead of the solution text
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// JSON puzzle record; without it one instance is generated from --task and --seed
    file: Option<PathBuf>,
    #[command(flatten)]
    scale: ScaleArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long, default_value_t = 0.2)]
    p_hole: f64,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Maze and VSP predictions must also be shortest paths
    #[arg(long)]
    strict_optimal: bool,
    #[arg(long, env = "REASONING_FORGE_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long, required_unless_present = "paper_scale")]
    manifest: Option<PathBuf>,
    /// Count the full-size preset without generating it
    #[arg(long, conflicts_with = "manifest")]
    paper_scale: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct FmArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    dim: usize,
}

fn parse_task(s: &str) -> Result<TaskKind, String> {
    s.parse().map_err(|e: reasoning_forge::Error| e.to_string())
}

/// Failures that are the caller's fault exit with 2, everything else with 1.
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<reasoning_forge::Error> for Failure {
    fn from(e: reasoning_forge::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Render(a) => cmd_render(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Stats(a) => cmd_stats(a),
        Command::FmDemo(a) => cmd_fm_demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Scale list for one task from the scale flags, or its presets.
fn scales_for(kind: TaskKind, s: &ScaleArgs) -> Result<Vec<usize>, Failure> {
    let grid = s.size;
    let sudoku = match (s.clues, s.holes) {
        (Some(c), _) => Some(c),
        (None, Some(h)) if h <= sudoku::CELLS => Some(sudoku::CELLS - h),
        (None, Some(h)) => return Err(usage(format!("--holes {h} exceeds {}", sudoku::CELLS))),
        (None, None) => None,
    };
    let (mine, others): (Option<usize>, &[(&str, bool)]) = match kind {
        TaskKind::Maze | TaskKind::Vsp => (grid, &[("--cities", s.cities.is_some()), ("--clues/--holes", sudoku.is_some())]),
        TaskKind::Tsp => (s.cities, &[("--size", grid.is_some()), ("--clues/--holes", sudoku.is_some())]),
        TaskKind::Sudoku => (sudoku, &[("--size", grid.is_some()), ("--cities", s.cities.is_some())]),
    };
    if let Some((flag, _)) = others.iter().find(|(_, set)| *set) {
        return Err(usage(format!("{flag} does not apply to {kind}")));
    }
    Ok(mine.map(|v| vec![v]).unwrap_or_else(|| preset_scales(kind)))
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let mut cfg = if a.paper_scale {
        GenConfig::paper(a.seed, &a.out)
    } else {
        GenConfig::desk(a.seed, &a.out)
    };
    if let Some(kind) = a.scale.task {
        let count = cfg.tasks.iter().find(|t| t.kind == kind).map(|t| t.count).unwrap_or(DESK_COUNT);
        cfg.tasks = vec![TaskPlan {
            kind,
            scales: scales_for(kind, &a.scale)?,
            count: a.count.unwrap_or(count),
        }];
    } else {
        if a.scale.size.is_some() || a.scale.cities.is_some() || a.scale.clues.is_some() || a.scale.holes.is_some() {
            return Err(usage("scale flags need --task"));
        }
        if let Some(c) = a.count {
            cfg.tasks.iter_mut().for_each(|t| t.count = c);
        }
    }
    if a.stride == 0 {
        return Err(usage("--stride must be at least 1"));
    }
    cfg.stride = a.stride;
    cfg.p_hole = a.p_hole;
    cfg.execution = Execution::with_threads(a.threads);

    if a.dry_run {
        let stats = dataset_stats(&plan(&cfg));
        print!("{}", stats.to_table());
        return Ok(());
    }
    let records = generate_dataset(&cfg).context("generation failed")?;
    print!("{}", dataset_stats(&records).to_table());
    println!("manifest: {}", cfg.out_dir.join(reasoning_forge::dataset::MANIFEST_NAME).display());
    Ok(())
}

fn read_puzzle(path: &Path) -> anyhow::Result<PuzzleRecord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(text.trim()).with_context(|| format!("parsing {}", path.display()))?;
    let value = match value.get("gt_structured") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(value).with_context(|| format!("{} is not a puzzle record", path.display()))
}

fn cmd_solve(a: SolveArgs) -> Result<(), Failure> {
    let record = read_puzzle(&a.file)?;
    let input = record.to_input()?;
    let inst = input.solve()?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&inst.to_record()).context("serializing")?);
    } else {
        println!("{}", inst.trajectory(1)?.reasoning_text);
    }
    Ok(())
}

fn cmd_render(a: RenderArgs) -> Result<(), Failure> {
    if a.stride == 0 {
        return Err(usage("--stride must be at least 1"));
    }
    let inst = match (&a.file, a.scale.task) {
        (Some(f), None) => read_puzzle(f)?.to_input()?.solve()?,
        (Some(_), Some(_)) => return Err(usage("give either a puzzle file or --task, not both")),
        (None, None) => return Err(usage("give a puzzle file or --task")),
        (None, Some(kind)) => {
            let scales = scales_for(kind, &a.scale)?;
            let mut cfg = GenConfig::new(a.seed, &a.out, vec![]);
            cfg.p_hole = a.p_hole;
            reasoning_forge::dataset::instance_from_seed(kind, scales[0], a.seed, &cfg)?
        }
    };
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let input = inst.input();
    let traj = inst.trajectory(a.stride)?;
    write_png(&render_input(&input)?, &a.out.join("input.png"))?;
    for (i, s) in traj.states.iter().enumerate() {
        write_png(&render_state(&input, s)?, &a.out.join(format!("step_{i:03}.png")))?;
    }
    println!("{} states written to {}", traj.states.len(), a.out.display());
    println!("{}", traj.reasoning_text);
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let manifest = read_manifest(&a.manifest)?;
    let preds = read_predictions(&a.pred)?;
    let opts = EvalOptions {
        strict_optimal: a.strict_optimal,
        base_dir: a.pred.parent().map(Path::to_path_buf).unwrap_or_default(),
        execution: Execution::with_threads(a.threads),
    };
    let report = evaluate(&manifest, &preds, &opts);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", report.to_table());
    if let Some(path) = &a.report {
        let json = serde_json::to_string_pretty(&report).context("serializing report")?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> Result<(), Failure> {
    let stats = match &a.manifest {
        Some(m) => dataset_stats(&read_manifest(m)?),
        None => dataset_stats(&plan(&GenConfig::paper(0, "."))),
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&stats).context("serializing")?);
    } else {
        print!("{}", stats.to_table());
    }
    Ok(())
}

fn cmd_fm_demo(a: FmArgs) -> Result<(), Failure> {
    use rand::Rng;

    if a.dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    let mut rng = rng_from_seed(a.seed);
    let mut draw = || SampleVec::new((0..a.dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let (x0, x1) = (draw()?, draw()?);
    let u = target_velocity(&x0, &x1)?;
    let field = move |_: &SampleVec, _: f64| u.clone();
    println!("constant field: Euler recovers x0");
    for steps in [1usize, 10, 1000] {
        let got = euler_sample(&field, &x1, steps)?;
        let err = got
            .values()
            .iter()
            .zip(x0.values())
            .map(|(g, w)| (g - w).abs())
            .fold(0.0, f64::max);
        println!("  steps {steps:>5}  max |error| {err:.3e}  {}", if err <= 1e-12 { "ok" } else { "FAIL" });
    }
    println!("contracting field v = -x from x1 = 1, exact x0 = e");
    let contract = |x: &SampleVec, _: f64| SampleVec::new(x.values().iter().map(|v| -v).collect()).unwrap();
    let one = SampleVec::new(vec![1.0])?;
    let mut prev: Option<f64> = None;
    for steps in [10usize, 20, 40, 80] {
        let err = (euler_sample(&contract, &one, steps)?.values()[0] - std::f64::consts::E).abs();
        match prev {
            Some(p) => println!("  steps {steps:>5}  error {err:.3e}  ratio {:.3}", err / p),
            None => println!("  steps {steps:>5}  error {err:.3e}"),
        }
        prev = Some(err);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn holes_map_to_clues() {
        let s = ScaleArgs { task: Some(TaskKind::Sudoku), size: None, cities: None, clues: None, holes: Some(36) };
        assert_eq!(scales_for(TaskKind::Sudoku, &s).ok(), Some(vec![45]));
        let bad = ScaleArgs { size: Some(8), ..s };
        assert!(matches!(scales_for(TaskKind::Sudoku, &bad), Err(Failure::Usage(_))));
    }
}

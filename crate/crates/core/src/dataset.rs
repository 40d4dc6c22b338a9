//! Batch generation into a JSONL manifest plus per-state PNGs.
//!
//! Layout under the output directory:
//!
//! ```text
//! manifest.jsonl
//! <task>/<scale>/<id>/input.png
//! <task>/<scale>/<id>/step_000.png ...
//! ```
//!
//! Every path stored in a record is relative to the manifest's directory.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::instance::{PuzzleRecord, TaskInstance};
use crate::render::{render_input, render_state, write_png};
use crate::seed::{derive_seed_with_nonce, rng_from_seed, SeedSpec};
use crate::trajectory::TaskKind;
use crate::{maze, sudoku, tsp, vsp};

pub const MANIFEST_NAME: &str = "manifest.jsonl";

/// Instances per scale in the default desk-scale presets.
pub const DESK_COUNT: usize = 100;

/// Per-task totals of the full-size dataset.
pub const PAPER_TOTALS: [(TaskKind, usize); 4] = [
    (TaskKind::Maze, 75_000),
    (TaskKind::Sudoku, 40_000),
    (TaskKind::Tsp, 30_000),
    (TaskKind::Vsp, 37_400),
];

/// Supported scales per task: grid size, city count or clue count.
pub fn preset_scales(kind: TaskKind) -> Vec<usize> {
    match kind {
        TaskKind::Maze => vec![8, 16, 32],
        TaskKind::Tsp => vec![12, 15, 18],
        TaskKind::Sudoku => vec![45, 40, 35, 30],
        TaskKind::Vsp => vec![3, 4, 5, 6, 7, 8, 16, 32],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskPlan {
    pub kind: TaskKind,
    pub scales: Vec<usize>,
    /// Instances per scale.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub master_seed: u64,
    pub tasks: Vec<TaskPlan>,
    pub out_dir: PathBuf,
    pub stride: usize,
    pub p_hole: f64,
    /// Side length of the TSP coordinate plane.
    pub tsp_plane: u32,
    pub sudoku_max_attempts: usize,
    pub vsp_max_resamples: usize,
    /// Reseeds allowed per instance after a DiggingStuck / MapInfeasible.
    pub max_nonce: u64,
    pub execution: Execution,
}

impl GenConfig {
    pub fn new(master_seed: u64, out_dir: impl Into<PathBuf>, tasks: Vec<TaskPlan>) -> Self {
        GenConfig {
            master_seed,
            tasks,
            out_dir: out_dir.into(),
            stride: 1,
            p_hole: vsp::DEFAULT_P_HOLE,
            tsp_plane: tsp::DEFAULT_PLANE,
            sudoku_max_attempts: sudoku::DEFAULT_MAX_ATTEMPTS,
            vsp_max_resamples: vsp::DEFAULT_MAX_RESAMPLES,
            max_nonce: 64,
            execution: Execution::default(),
        }
    }

    /// 100 instances per preset scale for every task.
    pub fn desk(master_seed: u64, out_dir: impl Into<PathBuf>) -> Self {
        let tasks = TaskKind::ALL
            .iter()
            .map(|&kind| TaskPlan {
                kind,
                scales: preset_scales(kind),
                count: DESK_COUNT,
            })
            .collect();
        Self::new(master_seed, out_dir, tasks)
    }

    /// Full-size totals split evenly across each task's preset scales.
    pub fn paper(master_seed: u64, out_dir: impl Into<PathBuf>) -> Self {
        let tasks = TaskKind::ALL
            .iter()
            .map(|&kind| {
                let scales = preset_scales(kind);
                let total = PAPER_TOTALS.iter().find(|(k, _)| *k == kind).unwrap().1;
                TaskPlan {
                    kind,
                    count: total / scales.len(),
                    scales,
                }
            })
            .collect();
        Self::new(master_seed, out_dir, tasks)
    }

    fn validate(&self) -> Result<()> {
        if self.stride == 0 {
            return Err(Error::input("stride must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.p_hole) {
            return Err(Error::input(format!("p_hole must be in [0, 1), got {}", self.p_hole)));
        }
        for plan in &self.tasks {
            for &s in &plan.scales {
                check_scale(plan.kind, s)?;
            }
        }
        Ok(())
    }
}

fn check_scale(kind: TaskKind, scale: usize) -> Result<()> {
    let ok = match kind {
        TaskKind::Maze => (2..=128).contains(&scale),
        TaskKind::Vsp => (2..=128).contains(&scale),
        TaskKind::Tsp => (tsp::MIN_CITIES..=tsp::MAX_CITIES).contains(&scale),
        TaskKind::Sudoku => (sudoku::MIN_CLUES..=sudoku::CELLS).contains(&scale),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::input(format!("unsupported {kind} scale {scale}")))
    }
}

/// One planned instance, before any generation work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedInstance {
    pub kind: TaskKind,
    pub scale: usize,
    pub index: u64,
}

impl PlannedInstance {
    pub fn id(&self) -> String {
        format!("{}-{}-{}", self.kind, self.scale, self.index)
    }

    pub fn seed_spec(&self, master_seed: u64) -> SeedSpec {
        SeedSpec::new(master_seed, format!("{}-{}", self.kind, self.scale), self.index)
    }
}

/// Every instance `cfg` would generate, in manifest order.
pub fn plan(cfg: &GenConfig) -> Vec<PlannedInstance> {
    let mut out = Vec::new();
    for t in &cfg.tasks {
        for &scale in &t.scales {
            for index in 0..t.count as u64 {
                out.push(PlannedInstance {
                    kind: t.kind,
                    scale,
                    index,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub task_kind: TaskKind,
    pub scale: usize,
    pub seed: u64,
    /// Reseeds needed before generation succeeded; 0 almost always.
    pub nonce: u64,
    pub input_image: String,
    pub step_images: Vec<String>,
    pub final_image: String,
    pub gt_structured: PuzzleRecord,
    pub gt_text: String,
    pub step_count: usize,
}

/// Builds one instance from an already-derived seed.
pub fn instance_from_seed(kind: TaskKind, scale: usize, seed: u64, cfg: &GenConfig) -> Result<TaskInstance> {
    let mut rng = rng_from_seed(seed);
    Ok(match kind {
        TaskKind::Maze => TaskInstance::Maze(maze::generate_maze(scale, &mut rng)?),
        TaskKind::Tsp => {
            TaskInstance::Tsp(tsp::generate_tsp(scale, cfg.tsp_plane, cfg.tsp_plane, &mut rng)?)
        }
        TaskKind::Sudoku => {
            TaskInstance::Sudoku(sudoku::generate_sudoku(scale, &mut rng, cfg.sudoku_max_attempts)?)
        }
        TaskKind::Vsp => {
            TaskInstance::Vsp(vsp::generate_vsp(scale, cfg.p_hole, &mut rng, cfg.vsp_max_resamples)?)
        }
    })
}

/// Generates a planned instance, bumping the nonce on recoverable
/// generation failures. Returns the instance, the seed used and the nonce.
pub fn generate_instance(p: &PlannedInstance, cfg: &GenConfig) -> Result<(TaskInstance, u64, u64)> {
    let spec = p.seed_spec(cfg.master_seed);
    let mut nonce = 0;
    loop {
        let seed = derive_seed_with_nonce(&spec, nonce);
        match instance_from_seed(p.kind, p.scale, seed, cfg) {
            Ok(inst) => return Ok((inst, seed, nonce)),
            Err(Error::DiggingStuck { .. } | Error::MapInfeasible { .. }) if nonce < cfg.max_nonce => {
                nonce += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn instance_dir(p: &PlannedInstance) -> String {
    format!("{}/{}/{}", p.kind, p.scale, p.id())
}

fn build_record(p: &PlannedInstance, cfg: &GenConfig) -> Result<ManifestRecord> {
    let (inst, seed, nonce) = generate_instance(p, cfg)?;
    let traj = inst.trajectory(cfg.stride)?;
    let input = inst.input();
    let rel_dir = instance_dir(p);
    let abs_dir = cfg.out_dir.join(&rel_dir);
    fs::create_dir_all(&abs_dir).map_err(|e| Error::io(&abs_dir, e))?;

    let input_image = format!("{rel_dir}/input.png");
    write_png(&render_input(&input)?, &cfg.out_dir.join(&input_image))?;
    let mut step_images = Vec::with_capacity(traj.states.len());
    for (i, state) in traj.states.iter().enumerate() {
        let rel = format!("{rel_dir}/step_{i:03}.png");
        write_png(&render_state(&input, state)?, &cfg.out_dir.join(&rel))?;
        step_images.push(rel);
    }
    Ok(ManifestRecord {
        id: p.id(),
        task_kind: p.kind,
        scale: p.scale,
        seed,
        nonce,
        input_image,
        final_image: step_images.last().cloned().unwrap_or_default(),
        step_count: step_images.len(),
        step_images,
        gt_structured: inst.to_record(),
        gt_text: traj.reasoning_text,
    })
}

/// Generates every planned instance, writes its images, and writes the
/// manifest in plan order. On failure the manifest holds the records that
/// precede the first failing instance.
pub fn generate_dataset(cfg: &GenConfig) -> Result<Vec<ManifestRecord>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let jobs = plan(cfg);
    let results = cfg.execution.map(&jobs, |p| build_record(p, cfg));
    let total = results.len();
    let mut records = Vec::with_capacity(total);
    let mut failure = None;
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    write_manifest(&cfg.out_dir.join(MANIFEST_NAME), &records)?;
    match failure {
        None => Ok(records),
        Some(e) => Err(Error::Partial {
            completed: records.len(),
            total,
            source: Box::new(e),
        }),
    }
}

/// Re-renders one record from its stored seed into `out_dir`, using the same
/// relative paths. The nonce is already folded into the stored seed.
pub fn regenerate_record(rec: &ManifestRecord, cfg: &GenConfig, out_dir: &Path) -> Result<()> {
    let inst = instance_from_seed(rec.task_kind, rec.scale, rec.seed, cfg)?;
    let traj = inst.trajectory(cfg.stride)?;
    let input = inst.input();
    let write = |rel: &str, img: &crate::render::RasterImage| -> Result<()> {
        let path = out_dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        write_png(img, &path)
    };
    write(&rec.input_image, &render_input(&input)?)?;
    if traj.states.len() != rec.step_images.len() {
        return Err(Error::Internal(format!(
            "{}: regenerated {} states, manifest lists {}",
            rec.id,
            traj.states.len(),
            rec.step_images.len()
        )));
    }
    for (state, rel) in traj.states.iter().zip(&rec.step_images) {
        write(rel, &render_state(&input, state)?)?;
    }
    Ok(())
}

pub fn write_manifest(path: &Path, records: &[ManifestRecord]) -> Result<()> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(|e| Error::Internal(e.to_string()))?;
        out.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&out).map_err(|e| Error::io(path, e))
}

/// Parses and validates a manifest; errors carry the 1-based line number.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let rec: ManifestRecord = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        if rec.step_count != rec.step_images.len() {
            return Err(err(format!(
                "step_count {} but {} step images",
                rec.step_count,
                rec.step_images.len()
            )));
        }
        if rec.gt_structured.kind() != rec.task_kind {
            return Err(err(format!(
                "task_kind {} but gt_structured is {}",
                rec.task_kind,
                rec.gt_structured.kind()
            )));
        }
        if !ids.insert(rec.id.clone()) {
            return Err(err(format!("duplicate id {}", rec.id)));
        }
        records.push(rec);
    }
    Ok(records)
}

/// Anything that can be tallied by [`dataset_stats`].
pub trait StatRow {
    fn kind(&self) -> TaskKind;
    fn scale(&self) -> usize;
    /// `None` for rows that were planned but not generated.
    fn step_count(&self) -> Option<usize>;
}

impl StatRow for ManifestRecord {
    fn kind(&self) -> TaskKind {
        self.task_kind
    }
    fn scale(&self) -> usize {
        self.scale
    }
    fn step_count(&self) -> Option<usize> {
        Some(self.step_count)
    }
}

impl StatRow for PlannedInstance {
    fn kind(&self) -> TaskKind {
        self.kind
    }
    fn scale(&self) -> usize {
        self.scale
    }
    fn step_count(&self) -> Option<usize> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepSummary {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DatasetStats {
    pub total: usize,
    pub per_task: BTreeMap<TaskKind, usize>,
    pub per_scale: BTreeMap<TaskKind, BTreeMap<usize, usize>>,
    pub steps: BTreeMap<TaskKind, StepSummary>,
}

pub fn dataset_stats<R: StatRow>(rows: &[R]) -> DatasetStats {
    let mut stats = DatasetStats::default();
    for k in TaskKind::ALL {
        stats.per_task.insert(k, 0);
    }
    let mut steps: BTreeMap<TaskKind, Vec<usize>> = BTreeMap::new();
    for r in rows {
        stats.total += 1;
        *stats.per_task.entry(r.kind()).or_default() += 1;
        *stats.per_scale.entry(r.kind()).or_default().entry(r.scale()).or_default() += 1;
        if let Some(s) = r.step_count() {
            steps.entry(r.kind()).or_default().push(s);
        }
    }
    for (k, v) in steps {
        stats.steps.insert(
            k,
            StepSummary {
                min: *v.iter().min().unwrap(),
                max: *v.iter().max().unwrap(),
                mean: v.iter().sum::<usize>() as f64 / v.len() as f64,
            },
        );
    }
    stats
}

impl DatasetStats {
    pub fn to_table(&self) -> String {
        let mut s = format!("{:<8} {:>8} {:>10}\n", "task", "scale", "instances");
        for (k, scales) in &self.per_scale {
            for (scale, n) in scales {
                s += &format!("{:<8} {:>8} {:>10}\n", k.as_str(), scale, n);
            }
        }
        for (k, n) in &self.per_task {
            let steps = self
                .steps
                .get(k)
                .map(|st| format!("  steps min {} max {} mean {:.1}", st.min, st.max, st.mean))
                .unwrap_or_default();
            s += &format!("{:<8} {:>8} {:>10}{}\n", k.as_str(), "all", n, steps);
        }
        s += &format!("{:<8} {:>8} {:>10}\n", "total", "", self.total);
        s
    }
}

//! Validity, accuracy and path repetition over predictions.
//!
//! Path repetition is cell based: `100 * |visited ∩ gt| / |gt|`, where
//! `visited` is the start cell plus every cell reached before the first
//! illegal move. Maze and VSP count any legal goal-reaching path as correct
//! unless strict-optimal mode also demands shortest length.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::ManifestRecord;
use crate::decode::decode_solution;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::{format_moves, parse_moves, Cell, Direction, GridPath};
use crate::instance::{Solution, TaskInput, TaskInstance};
use crate::maze::MazeInstance;
use crate::render::read_png;
use crate::sudoku::{SudokuGrid, SudokuInstance};
use crate::trajectory::TaskKind;
use crate::tsp::{parse_tour_text, TspInstance};
use crate::vsp::VspInstance;

/// Relative slack when comparing a tour length to the optimum.
pub const TOUR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub valid: bool,
    pub correct: bool,
    /// Percent, path tasks only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_repetition: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Check {
    fn invalid(reason: impl Into<String>, path_repetition: Option<f64>) -> Self {
        Check {
            valid: false,
            correct: false,
            path_repetition,
            reason: Some(reason.into()),
        }
    }
}

pub fn path_repetition(visited: &[Cell], gt: &[Cell]) -> f64 {
    let gt_set: HashSet<Cell> = gt.iter().copied().collect();
    if gt_set.is_empty() {
        return 0.0;
    }
    let seen: HashSet<Cell> = visited.iter().copied().filter(|c| gt_set.contains(c)).collect();
    100.0 * seen.len() as f64 / gt_set.len() as f64
}

/// Replays `moves` from `start`, stopping before the first move `legal`
/// rejects. Returns the visited cells and the rejection, if any.
fn replay_moves(
    start: Cell,
    moves: &[Direction],
    n: usize,
    legal: impl Fn(Cell, Direction, Cell) -> bool,
) -> (Vec<Cell>, Option<String>) {
    let mut visited = vec![start];
    let mut cur = start;
    for (i, &d) in moves.iter().enumerate() {
        match cur.step(d, n) {
            Some(next) if legal(cur, d, next) => {
                visited.push(next);
                cur = next;
            }
            Some(next) => return (visited, Some(format!("move {} {d:?} from {cur} to {next} is blocked", i + 1))),
            None => return (visited, Some(format!("move {} {d:?} from {cur} leaves the grid", i + 1))),
        }
    }
    (visited, None)
}

fn check_path(
    moves_text: &str,
    start: Cell,
    goal: Cell,
    n: usize,
    gt: &GridPath,
    strict_optimal: bool,
    legal: impl Fn(Cell, Direction, Cell) -> bool,
) -> Check {
    let moves = match parse_moves(moves_text) {
        Ok(m) => m,
        Err(e) => return Check::invalid(e.to_string(), Some(path_repetition(&[start], gt.cells()))),
    };
    let (visited, blocked) = replay_moves(start, &moves, n, legal);
    let repetition = Some(path_repetition(&visited, gt.cells()));
    if let Some(reason) = blocked {
        return Check::invalid(reason, repetition);
    }
    if *visited.last().unwrap() != goal {
        return Check::invalid(format!("path ends at {} not at goal {goal}", visited.last().unwrap()), repetition);
    }
    let optimal = moves.len() == gt.moves().len();
    Check {
        valid: true,
        correct: optimal || !strict_optimal,
        path_repetition: repetition,
        reason: (!optimal).then(|| format!("{} moves, shortest is {}", moves.len(), gt.moves().len())),
    }
}

pub fn check_maze(inst: &MazeInstance, moves: &str, strict_optimal: bool) -> Check {
    let m = &inst.maze;
    check_path(moves, m.start, m.goal, m.n(), &inst.path, strict_optimal, |c, d, _| {
        m.grid.has_passage(c, d)
    })
}

pub fn check_vsp(inst: &VspInstance, moves: &str, strict_optimal: bool) -> Check {
    let map = &inst.map;
    check_path(moves, map.start, map.goal, map.n(), &inst.path, strict_optimal, |_, _, next| {
        map.is_safe(next)
    })
}

/// Any rotation or direction of a closed tour is accepted.
pub fn check_tour(inst: &TspInstance, order: &[usize]) -> Check {
    let n = inst.layout.len();
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n {
            return Check::invalid(format!("city index {c} out of range (n = {n})"), None);
        }
        if std::mem::replace(&mut seen[c], true) {
            return Check::invalid(format!("city {c} visited twice"), None);
        }
    }
    if order.len() != n {
        return Check::invalid(format!("tour visits {} of {n} cities", order.len()), None);
    }
    let len = inst.layout.tour_length(order);
    let opt = inst.tour.length;
    let correct = len <= opt * (1.0 + TOUR_TOLERANCE);
    Check {
        valid: true,
        correct,
        path_repetition: None,
        reason: (!correct).then(|| format!("length {len:.6} exceeds optimum {opt:.6}")),
    }
}

pub fn check_sudoku(inst: &SudokuInstance, grid: &str) -> Check {
    let grid: SudokuGrid = match grid.trim().parse() {
        Ok(g) => g,
        Err(e) => return Check::invalid(format!("{e}"), None),
    };
    check_sudoku_grid(inst, &grid)
}

pub fn check_sudoku_grid(inst: &SudokuInstance, grid: &SudokuGrid) -> Check {
    let clue_kept = inst
        .puzzle
        .cells()
        .iter()
        .zip(grid.cells())
        .all(|(&p, &g)| p == 0 || p == g);
    let valid = grid.is_solved() && clue_kept;
    let correct = grid == &inst.solution;
    let reason = if !grid.is_complete() {
        Some("grid has empty cells".to_string())
    } else if !grid.is_solved() {
        Some("grid breaks a row, column or block constraint".to_string())
    } else if !clue_kept {
        Some("grid changes a clue".to_string())
    } else if !correct {
        // the puzzle is unique, so a valid grid must be the solution
        Some("valid grid differs from the unique solution".to_string())
    } else {
        None
    };
    Check {
        valid,
        correct: valid && correct,
        path_repetition: None,
        reason,
    }
}

/// A prediction as it appears in a predictions file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    /// Move string (Maze/VSP), tour text (TSP) or 81-char grid (Sudoku).
    Text(String),
    /// TSP visiting order.
    Order(Vec<usize>),
    /// Path to an image in canonical rendering style.
    Image { image: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub payload: Payload,
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Turns a decoded solution into the text payload of its task.
fn solution_payload(sol: &Solution) -> Payload {
    match sol {
        Solution::Path(p) => Payload::Text(format_moves(p.moves())),
        Solution::Tour(o) => Payload::Order(o.clone()),
        Solution::Grid(g) => Payload::Text(g.to_line()),
    }
}

/// Scores one payload against an instance. Image payloads are decoded
/// first; `base_dir` resolves relative image paths.
pub fn check_payload(inst: &TaskInstance, payload: &Payload, strict_optimal: bool, base_dir: &Path) -> Check {
    let resolved;
    let payload = match payload {
        Payload::Image { image } => {
            let path = base_dir.join(image);
            let input: TaskInput = inst.input();
            match read_png(&path).and_then(|img| decode_solution(&img, &input)) {
                Ok(sol) => {
                    resolved = solution_payload(&sol);
                    &resolved
                }
                Err(e) => {
                    let rep = match inst {
                        TaskInstance::Maze(m) => Some(path_repetition(&[m.maze.start], m.path.cells())),
                        TaskInstance::Vsp(v) => Some(path_repetition(&[v.map.start], v.path.cells())),
                        _ => None,
                    };
                    return Check::invalid(e.to_string(), rep);
                }
            }
        }
        p => p,
    };
    match (inst, payload) {
        (TaskInstance::Maze(m), Payload::Text(t)) => check_maze(m, t, strict_optimal),
        (TaskInstance::Vsp(v), Payload::Text(t)) => check_vsp(v, t, strict_optimal),
        (TaskInstance::Tsp(t), Payload::Order(o)) => check_tour(t, o),
        (TaskInstance::Tsp(t), Payload::Text(s)) => match parse_tour_text(s) {
            Ok(o) => check_tour(t, &o),
            Err(e) => Check::invalid(e.to_string(), None),
        },
        (TaskInstance::Sudoku(s), Payload::Text(g)) => check_sudoku(s, g),
        (inst, _) => {
            let rep = match inst {
                TaskInstance::Maze(m) => Some(path_repetition(&[m.maze.start], m.path.cells())),
                TaskInstance::Vsp(v) => Some(path_repetition(&[v.map.start], v.path.cells())),
                _ => None,
            };
            Check::invalid(format!("payload shape does not fit a {} instance", inst.kind()), rep)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceResult {
    pub id: String,
    pub task_kind: TaskKind,
    pub scale: usize,
    pub predicted: bool,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub task_kind: TaskKind,
    pub scale: usize,
    pub total: usize,
    pub correct: usize,
    pub valid: usize,
    /// Percent.
    pub accuracy: f64,
    /// Mean percent over the cell's instances; path tasks only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_path_repetition: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub strict_optimal: bool,
    pub cells: Vec<CellSummary>,
    pub warnings: Vec<String>,
    pub instances: Vec<InstanceResult>,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub strict_optimal: bool,
    /// Directory that relative image paths are resolved against.
    pub base_dir: PathBuf,
    pub execution: Execution,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            strict_optimal: false,
            base_dir: PathBuf::from("."),
            execution: Execution::default(),
        }
    }
}

/// Scores `predictions` against every manifest record. Records without a
/// prediction count as incorrect with zero repetition.
pub fn evaluate(manifest: &[ManifestRecord], predictions: &[PredictionRecord], opts: &EvalOptions) -> EvalReport {
    let mut warnings = Vec::new();
    let known: HashSet<&str> = manifest.iter().map(|r| r.id.as_str()).collect();
    let mut by_id: HashMap<&str, &Payload> = HashMap::new();
    for p in predictions {
        if !known.contains(p.id.as_str()) {
            warnings.push(format!("prediction for unknown id {}", p.id));
        } else if by_id.insert(p.id.as_str(), &p.payload).is_some() {
            warnings.push(format!("duplicate prediction for {}; the last one is scored", p.id));
        }
    }

    let instances: Vec<InstanceResult> = opts.execution.map(manifest, |rec| {
        let check = match (rec.gt_structured.to_instance(), by_id.get(rec.id.as_str())) {
            (Err(e), _) => Check::invalid(format!("reference record unusable: {e}"), None),
            (Ok(inst), None) => {
                let rep = matches!(inst.kind(), TaskKind::Maze | TaskKind::Vsp).then_some(0.0);
                Check::invalid("no prediction", rep)
            }
            (Ok(inst), Some(p)) => check_payload(&inst, p, opts.strict_optimal, &opts.base_dir),
        };
        InstanceResult {
            id: rec.id.clone(),
            task_kind: rec.task_kind,
            scale: rec.scale,
            predicted: by_id.contains_key(rec.id.as_str()),
            check,
        }
    });

    let mut groups: BTreeMap<(TaskKind, usize), Vec<&InstanceResult>> = BTreeMap::new();
    for r in &instances {
        groups.entry((r.task_kind, r.scale)).or_default().push(r);
    }
    let cells = groups
        .into_iter()
        .map(|((task_kind, scale), rs)| {
            let total = rs.len();
            let correct = rs.iter().filter(|r| r.check.correct).count();
            let valid = rs.iter().filter(|r| r.check.valid).count();
            let reps: Vec<f64> = rs.iter().filter_map(|r| r.check.path_repetition).collect();
            CellSummary {
                task_kind,
                scale,
                total,
                correct,
                valid,
                accuracy: 100.0 * correct as f64 / total as f64,
                mean_path_repetition: matches!(task_kind, TaskKind::Maze | TaskKind::Vsp)
                    .then(|| reps.iter().sum::<f64>() / total as f64),
            }
        })
        .collect();

    EvalReport {
        strict_optimal: opts.strict_optimal,
        cells,
        warnings,
        instances,
    }
}

impl EvalReport {
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:<8} {:>6} {:>6} {:>8} {:>12}\n",
            "task", "scale", "n", "ACC(%)", "PathRep(%)"
        );
        for c in &self.cells {
            let rep = c
                .mean_path_repetition
                .map(|r| format!("{r:.2}"))
                .unwrap_or_else(|| "-".into());
            s += &format!(
                "{:<8} {:>6} {:>6} {:>8.1} {:>12}\n",
                c.task_kind.as_str(),
                c.scale,
                c.total,
                c.accuracy,
                rep
            );
        }
        s
    }
}

/// Ground truth of every record as a prediction, for identity baselines.
pub fn ground_truth_predictions(manifest: &[ManifestRecord]) -> Result<Vec<PredictionRecord>> {
    manifest
        .iter()
        .map(|r| {
            let inst = r.gt_structured.to_instance()?;
            Ok(PredictionRecord {
                id: r.id.clone(),
                payload: solution_payload(&inst.solution()),
            })
        })
        .collect()
}

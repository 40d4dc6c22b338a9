//! Step-by-step solution states plus the canonical reasoning text.
//!
//! Reasoning-text grammar:
//!
//! ```text
//! MAZE, VSP := dir ("," dir)*          dir := "U" | "D" | "L" | "R"
//! TSP       := idx ("," idx)* ",close"
//! SUDOKU    := triple (";" triple)*    triple := row "," col "=" digit
//! ```
//!
//! Coordinates are 0-based. A Sudoku with no holes has empty text.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{parse_moves, Cell, GridPath};
use crate::instance::{Solution, TaskInput};
use crate::sudoku::parse_fills;
use crate::tsp::{check_partial_order, parse_tour_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Maze,
    Tsp,
    Sudoku,
    Vsp,
}

impl TaskKind {
    pub const ALL: [TaskKind; 4] = [TaskKind::Maze, TaskKind::Tsp, TaskKind::Sudoku, TaskKind::Vsp];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Maze => "maze",
            TaskKind::Tsp => "tsp",
            TaskKind::Sudoku => "sudoku",
            TaskKind::Vsp => "vsp",
        }
    }

    fn initial_units(self) -> usize {
        match self {
            TaskKind::Sudoku => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maze" => Ok(TaskKind::Maze),
            "tsp" => Ok(TaskKind::Tsp),
            "sudoku" => Ok(TaskKind::Sudoku),
            "vsp" => Ok(TaskKind::Vsp),
            other => Err(Error::input(format!("unknown task kind `{other}`"))),
        }
    }
}

/// Task-specific solution prefix held by one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatePayload {
    /// Maze / VSP: visited cells so far.
    Path(Vec<Cell>),
    /// TSP: cities visited so far, starting at 0.
    Tour(Vec<usize>),
    /// Sudoku: cells filled so far, in fill order.
    Fill(Vec<(Cell, u8)>),
}

impl StatePayload {
    /// Number of solution units in the prefix.
    pub fn units(&self) -> usize {
        match self {
            StatePayload::Path(c) => c.len(),
            StatePayload::Tour(o) => o.len(),
            StatePayload::Fill(f) => f.len(),
        }
    }

    pub fn as_path(&self) -> Option<&[Cell]> {
        match self {
            StatePayload::Path(c) => Some(c),
            _ => None,
        }
    }

    fn matches_kind(&self, kind: TaskKind) -> bool {
        matches!(
            (self, kind),
            (StatePayload::Path(_), TaskKind::Maze | TaskKind::Vsp)
                | (StatePayload::Tour(_), TaskKind::Tsp)
                | (StatePayload::Fill(_), TaskKind::Sudoku)
        )
    }

    /// `other` extends `self` (prefix equality).
    fn is_prefix_of(&self, other: &StatePayload) -> bool {
        match (self, other) {
            (StatePayload::Path(a), StatePayload::Path(b)) => b.starts_with(a),
            (StatePayload::Tour(a), StatePayload::Tour(b)) => b.starts_with(a),
            (StatePayload::Fill(a), StatePayload::Fill(b)) => b.starts_with(a),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub kind: TaskKind,
    /// Units added between consecutive states (the last step may be shorter).
    pub stride: usize,
    pub states: Vec<StatePayload>,
    pub reasoning_text: String,
}

impl Trajectory {
    /// Keeps the first state, every `stride`-th state after it and the final
    /// state. Only meaningful on a stride-1 trajectory.
    pub fn with_stride(mut self, stride: usize) -> Self {
        let stride = stride.max(1);
        if stride == 1 || self.stride != 1 {
            return self;
        }
        let last = self.states.len().saturating_sub(1);
        let states = std::mem::take(&mut self.states);
        self.states = states
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % stride == 0 || *i == last)
            .map(|(_, s)| s)
            .collect();
        self.stride = stride;
        self
    }

    pub fn final_state(&self) -> Option<&StatePayload> {
        self.states.last()
    }
}

/// Prefix states of a grid path with the move string as reasoning text.
pub(crate) fn path_trajectory(kind: TaskKind, path: &GridPath, stride: usize) -> Result<Trajectory> {
    if stride == 0 {
        return Err(Error::input("stride must be at least 1"));
    }
    let states = (1..=path.len())
        .map(|k| StatePayload::Path(path.cells()[..k].to_vec()))
        .collect();
    Ok(Trajectory {
        kind,
        stride: 1,
        states,
        reasoning_text: path.moves_text(),
    }
    .with_stride(stride))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid { index: usize, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    fn at(index: usize, reason: impl Into<String>) -> Self {
        Verdict::Invalid {
            index,
            reason: reason.into(),
        }
    }
}

/// Structural check: monotone prefix growth by `stride` units (the final
/// step may be shorter), well-formed units, and a reasoning text that
/// encodes exactly the final state.
pub fn validate_trajectory(t: &Trajectory) -> Verdict {
    let Some(first) = t.states.first() else {
        return Verdict::at(0, "trajectory has no states");
    };
    if t.stride == 0 {
        return Verdict::at(0, "stride is zero");
    }
    if !first.matches_kind(t.kind) {
        return Verdict::at(0, format!("state payload does not match task {}", t.kind));
    }
    if first.units() != t.kind.initial_units() {
        return Verdict::at(0, format!("first state has {} units", first.units()));
    }
    if let StatePayload::Tour(o) = first {
        if o[0] != 0 {
            return Verdict::at(0, "tour does not start at city 0");
        }
    }
    let last = t.states.len() - 1;
    for i in 1..t.states.len() {
        let (prev, cur) = (&t.states[i - 1], &t.states[i]);
        if !cur.matches_kind(t.kind) {
            return Verdict::at(i, format!("state payload does not match task {}", t.kind));
        }
        if !prev.is_prefix_of(cur) {
            return Verdict::at(i, "state does not extend the previous state");
        }
        let growth = cur.units() - prev.units();
        if growth == 0 {
            return Verdict::at(i, "state repeats the previous state");
        }
        if growth > t.stride || (i < last && growth != t.stride) {
            return Verdict::at(i, format!("state grows by {growth}, stride is {}", t.stride));
        }
        if let Err(reason) = check_new_units(prev, cur) {
            return Verdict::at(i, reason);
        }
    }
    if let Err(reason) = text_matches_state(t.kind, &t.reasoning_text, &t.states[last]) {
        return Verdict::at(last, reason);
    }
    Verdict::Valid
}

fn check_new_units(prev: &StatePayload, cur: &StatePayload) -> std::result::Result<(), String> {
    let from = prev.units();
    match cur {
        StatePayload::Path(cells) => {
            for k in from.max(1)..cells.len() {
                if cells[k - 1].manhattan(cells[k]) != 1 {
                    return Err(format!("cells {} and {} are not adjacent", cells[k - 1], cells[k]));
                }
            }
        }
        StatePayload::Tour(order) => {
            for k in from..order.len() {
                if order[..k].contains(&order[k]) {
                    return Err(format!("city {} visited twice", order[k]));
                }
            }
        }
        StatePayload::Fill(fills) => {
            for k in from..fills.len() {
                let (c, v) = fills[k];
                if !c.in_bounds(9) || !(1..=9).contains(&v) {
                    return Err(format!("bad fill {c}={v}"));
                }
                if fills[..k].iter().any(|f| f.0 == c) {
                    return Err(format!("cell {c} filled twice"));
                }
            }
        }
    }
    Ok(())
}

fn text_matches_state(kind: TaskKind, text: &str, state: &StatePayload) -> std::result::Result<(), String> {
    let ok = match (kind, state) {
        (TaskKind::Maze | TaskKind::Vsp, StatePayload::Path(cells)) => {
            let moves = parse_moves(text).map_err(|e| e.to_string())?;
            let mut cur = cells[0];
            let mut walked = vec![cur];
            for m in moves {
                cur = cur
                    .step(m, usize::MAX)
                    .ok_or_else(|| "reasoning text walks off the grid".to_string())?;
                walked.push(cur);
            }
            walked == *cells
        }
        (TaskKind::Tsp, StatePayload::Tour(order)) => {
            if !text.trim_end().ends_with("close") {
                return Err("tour text lacks the closing token".into());
            }
            parse_tour_text(text).map_err(|e| e.to_string())? == *order
        }
        (TaskKind::Sudoku, StatePayload::Fill(fills)) => {
            parse_fills(text).map_err(|e| e.to_string())? == *fills
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err("reasoning text does not reproduce the final state".into())
    }
}

/// Re-executes the reasoning text on the puzzle and checks it lands on the
/// trajectory's final state.
pub fn replay(t: &Trajectory, input: &TaskInput) -> Result<Solution> {
    if t.kind != input.kind() {
        return Err(Error::Replay(format!(
            "trajectory is {} but puzzle is {}",
            t.kind,
            input.kind()
        )));
    }
    let last = t
        .final_state()
        .ok_or_else(|| Error::Replay("trajectory has no states".into()))?;
    let replay_err = |e: Error| Error::Replay(e.to_string());
    let solution = match input {
        TaskInput::Maze(maze) => {
            let moves = parse_moves(&t.reasoning_text).map_err(replay_err)?;
            let path = GridPath::from_moves(maze.start, &moves, maze.n()).map_err(replay_err)?;
            maze.check_prefix(&path).map_err(replay_err)?;
            Solution::Path(path)
        }
        TaskInput::Vsp(map) => {
            let moves = parse_moves(&t.reasoning_text).map_err(replay_err)?;
            let path = GridPath::from_moves(map.start, &moves, map.n()).map_err(replay_err)?;
            map.check_prefix(&path).map_err(replay_err)?;
            Solution::Path(path)
        }
        TaskInput::Tsp(layout) => {
            let order = parse_tour_text(&t.reasoning_text).map_err(replay_err)?;
            check_partial_order(&order, layout.len()).map_err(replay_err)?;
            Solution::Tour(order)
        }
        TaskInput::Sudoku(puzzle) => {
            let fills = parse_fills(&t.reasoning_text).map_err(replay_err)?;
            let mut grid = *puzzle;
            for (c, v) in fills {
                if grid.get(c) != 0 {
                    return Err(Error::Replay(format!("cell {c} is already filled")));
                }
                grid.set(c, v);
            }
            if !grid.is_consistent() {
                return Err(Error::Replay("fills violate sudoku constraints".into()));
            }
            Solution::Grid(grid)
        }
    };
    let reproduced = match (&solution, last) {
        (Solution::Path(p), StatePayload::Path(cells)) => p.cells() == cells.as_slice(),
        (Solution::Tour(o), StatePayload::Tour(order)) => o == order,
        (Solution::Grid(g), StatePayload::Fill(fills)) => {
            let TaskInput::Sudoku(puzzle) = input else { unreachable!() };
            let mut expected = *puzzle;
            for &(c, v) in fills {
                expected.set(c, v);
            }
            *g == expected
        }
        _ => false,
    };
    if !reproduced {
        return Err(Error::Replay("replayed text differs from the final state".into()));
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maze::{Maze, MazeGrid};
    use crate::sudoku::{generate_solution, SudokuGrid};
    use crate::tsp::{CityLayout, Point};
    use crate::seed::rng_from_seed;

    fn tiny_maze() -> Maze {
        let grid = MazeGrid::from_corridors(
            2,
            &[
                (Cell::new(0, 0), Cell::new(1, 0)),
                (Cell::new(1, 0), Cell::new(1, 1)),
                (Cell::new(0, 1), Cell::new(1, 1)),
            ],
        )
        .unwrap();
        Maze::new(grid, Cell::new(0, 0), Cell::new(1, 1)).unwrap()
    }

    fn path_traj(cells: Vec<Cell>, text: &str) -> Trajectory {
        Trajectory {
            kind: TaskKind::Maze,
            stride: 1,
            states: (1..=cells.len()).map(|k| StatePayload::Path(cells[..k].to_vec())).collect(),
            reasoning_text: text.into(),
        }
    }

    #[test]
    fn verdicts() {
        let cells = vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1)];
        let t = path_traj(cells.clone(), "D,R");
        assert!(validate_trajectory(&t).is_valid());

        let mut dup = t.clone();
        dup.states.insert(2, dup.states[1].clone());
        assert!(matches!(validate_trajectory(&dup), Verdict::Invalid { index: 2, .. }));

        let empty = Trajectory {
            states: vec![],
            ..t.clone()
        };
        assert!(matches!(validate_trajectory(&empty), Verdict::Invalid { index: 0, .. }));

        let wrong_text = path_traj(cells, "D,D");
        assert!(matches!(validate_trajectory(&wrong_text), Verdict::Invalid { index: 2, .. }));
    }

    #[test]
    fn stride_subsampling_keeps_endpoints() {
        let cells: Vec<Cell> = (0..8).map(|c| Cell::new(0, c)).collect();
        let t = path_traj(cells, "R,R,R,R,R,R,R").with_stride(3);
        let lens: Vec<usize> = t.states.iter().map(StatePayload::units).collect();
        assert_eq!(lens, vec![1, 4, 7, 8]);
        assert!(validate_trajectory(&t).is_valid());
    }

    #[test]
    fn replay_examples() {
        let maze = tiny_maze();
        let t = path_traj(vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1)], "D,R");
        let Solution::Path(p) = replay(&t, &TaskInput::Maze(maze.clone())).unwrap() else {
            panic!()
        };
        assert_eq!(p.cells(), &[Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1)]);

        // crossing the wall between (0,0) and (0,1)
        let bad = path_traj(vec![Cell::new(0, 0), Cell::new(0, 1)], "R");
        assert!(matches!(replay(&bad, &TaskInput::Maze(maze)), Err(Error::Replay(_))));

        let layout = CityLayout::new(
            10,
            10,
            vec![Point { x: 0, y: 0 }, Point { x: 0, y: 3 }, Point { x: 4, y: 0 }],
        )
        .unwrap();
        let tt = Trajectory {
            kind: TaskKind::Tsp,
            stride: 1,
            states: vec![
                StatePayload::Tour(vec![0]),
                StatePayload::Tour(vec![0, 2]),
                StatePayload::Tour(vec![0, 2, 1]),
            ],
            reasoning_text: "0,2,1,close".into(),
        };
        assert!(validate_trajectory(&tt).is_valid());
        assert_eq!(replay(&tt, &TaskInput::Tsp(layout)).unwrap(), Solution::Tour(vec![0, 2, 1]));

        let sol = generate_solution(&mut rng_from_seed(1));
        let mut puzzle: SudokuGrid = sol;
        puzzle.set(Cell::new(4, 4), 0);
        let v = sol.get(Cell::new(4, 4));
        let st = Trajectory {
            kind: TaskKind::Sudoku,
            stride: 1,
            states: vec![StatePayload::Fill(vec![]), StatePayload::Fill(vec![(Cell::new(4, 4), v)])],
            reasoning_text: format!("4,4={v}"),
        };
        assert!(validate_trajectory(&st).is_valid());
        assert_eq!(replay(&st, &TaskInput::Sudoku(puzzle)).unwrap(), Solution::Grid(sol));
        assert!(replay(&st, &TaskInput::Sudoku(sol)).is_err());
    }

    #[test]
    fn kind_parsing() {
        for k in TaskKind::ALL {
            assert_eq!(k.as_str().parse::<TaskKind>().unwrap(), k);
        }
        assert!("chess".parse::<TaskKind>().is_err());
    }
}

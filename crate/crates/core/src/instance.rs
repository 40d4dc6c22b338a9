//! Task-agnostic wrappers and the structured JSON serialization shared by
//! the manifest, the solver CLI and the evaluator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{parse_moves, Cell, GridPath};
use crate::maze::{bfs_shortest_path, maze_trajectory, Maze, MazeGrid, MazeInstance};
use crate::sudoku::{self, simulate_solving, SudokuGrid, SudokuInstance};
use crate::trajectory::{TaskKind, Trajectory};
use crate::tsp::{canonicalize, heldkarp_solve, tsp_trajectory, CityLayout, Point, Tour, TspInstance};
use crate::vsp::{dijkstra_safe_path, parse_tiles, vsp_trajectory, HazardMap, VspInstance};

/// The puzzle half of an instance: everything a solver may look at.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskInput {
    Maze(Maze),
    Tsp(CityLayout),
    Sudoku(SudokuGrid),
    Vsp(HazardMap),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Path(GridPath),
    Tour(Vec<usize>),
    Grid(SudokuGrid),
}

impl TaskInput {
    pub fn kind(&self) -> TaskKind {
        match self {
            TaskInput::Maze(_) => TaskKind::Maze,
            TaskInput::Tsp(_) => TaskKind::Tsp,
            TaskInput::Sudoku(_) => TaskKind::Sudoku,
            TaskInput::Vsp(_) => TaskKind::Vsp,
        }
    }

    /// Runs the task's exact solver.
    pub fn solve(&self) -> Result<TaskInstance> {
        Ok(match self {
            TaskInput::Maze(maze) => TaskInstance::Maze(MazeInstance {
                path: bfs_shortest_path(maze)?,
                maze: maze.clone(),
            }),
            TaskInput::Tsp(layout) => TaskInstance::Tsp(TspInstance {
                tour: heldkarp_solve(layout)?,
                layout: layout.clone(),
            }),
            TaskInput::Sudoku(puzzle) => {
                let solutions = sudoku::count_solutions(puzzle, 2);
                if solutions == 0 {
                    return Err(Error::input("sudoku has 0 solutions"));
                }
                if solutions > 1 {
                    return Err(Error::input("sudoku has more than one solution"));
                }
                let solution = sudoku::solve(puzzle)
                    .ok_or_else(|| Error::Internal("counter found a solution but solve did not".into()))?;
                TaskInstance::Sudoku(SudokuInstance {
                    puzzle: *puzzle,
                    solution,
                    clue_count: puzzle.clue_count(),
                })
            }
            TaskInput::Vsp(map) => TaskInstance::Vsp(VspInstance {
                path: dijkstra_safe_path(map)?,
                map: map.clone(),
            }),
        })
    }
}

/// A generated puzzle together with its exact solution.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskInstance {
    Maze(MazeInstance),
    Tsp(TspInstance),
    Sudoku(SudokuInstance),
    Vsp(VspInstance),
}

impl TaskInstance {
    pub fn kind(&self) -> TaskKind {
        match self {
            TaskInstance::Maze(_) => TaskKind::Maze,
            TaskInstance::Tsp(_) => TaskKind::Tsp,
            TaskInstance::Sudoku(_) => TaskKind::Sudoku,
            TaskInstance::Vsp(_) => TaskKind::Vsp,
        }
    }

    /// Grid size for Maze/VSP, city count for TSP, clue count for Sudoku.
    pub fn scale(&self) -> usize {
        match self {
            TaskInstance::Maze(m) => m.maze.n(),
            TaskInstance::Tsp(t) => t.layout.len(),
            TaskInstance::Sudoku(s) => s.clue_count,
            TaskInstance::Vsp(v) => v.map.n(),
        }
    }

    pub fn input(&self) -> TaskInput {
        match self {
            TaskInstance::Maze(m) => TaskInput::Maze(m.maze.clone()),
            TaskInstance::Tsp(t) => TaskInput::Tsp(t.layout.clone()),
            TaskInstance::Sudoku(s) => TaskInput::Sudoku(s.puzzle),
            TaskInstance::Vsp(v) => TaskInput::Vsp(v.map.clone()),
        }
    }

    pub fn solution(&self) -> Solution {
        match self {
            TaskInstance::Maze(m) => Solution::Path(m.path.clone()),
            TaskInstance::Tsp(t) => Solution::Tour(t.tour.order.clone()),
            TaskInstance::Sudoku(s) => Solution::Grid(s.solution),
            TaskInstance::Vsp(v) => Solution::Path(v.path.clone()),
        }
    }

    pub fn trajectory(&self, stride: usize) -> Result<Trajectory> {
        match self {
            TaskInstance::Maze(m) => maze_trajectory(&m.maze, &m.path, stride),
            TaskInstance::Tsp(t) => Ok(tsp_trajectory(&t.layout, &t.tour)?.with_stride(stride)),
            TaskInstance::Sudoku(s) => Ok(simulate_solving(s).with_stride(stride)),
            TaskInstance::Vsp(v) => vsp_trajectory(&v.map, &v.path, stride),
        }
    }

    pub fn to_record(&self) -> PuzzleRecord {
        match self {
            TaskInstance::Maze(m) => PuzzleRecord::Maze(MazeRecord::from_maze(&m.maze, Some(&m.path))),
            TaskInstance::Tsp(t) => PuzzleRecord::Tsp(TspRecord::from_layout(&t.layout, Some(&t.tour))),
            TaskInstance::Sudoku(s) => PuzzleRecord::Sudoku(SudokuRecord {
                puzzle: s.puzzle,
                solution: Some(s.solution),
            }),
            TaskInstance::Vsp(v) => PuzzleRecord::Vsp(VspRecord::from_map(&v.map, Some(&v.path))),
        }
    }
}

/// Structured serialization of a puzzle, optionally with its solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "lowercase")]
pub enum PuzzleRecord {
    Maze(MazeRecord),
    Tsp(TspRecord),
    Sudoku(SudokuRecord),
    Vsp(VspRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MazeRecord {
    pub n: usize,
    /// Sorted `[smaller, larger]` cell pairs.
    pub corridors: Vec<[Cell; 2]>,
    pub start: Cell,
    pub goal: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moves: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspRecord {
    pub width: u32,
    pub height: u32,
    pub cities: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    /// Closed tour length rounded to 6 decimals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SudokuRecord {
    /// 81 characters row-major, `'0'` for empty.
    pub puzzle: SudokuGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SudokuGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VspRecord {
    pub n: usize,
    /// Row-major `S`/`H` string.
    pub tiles: String,
    pub start: Cell,
    pub goal: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moves: Option<String>,
}

pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

impl MazeRecord {
    pub fn from_maze(maze: &Maze, path: Option<&GridPath>) -> Self {
        MazeRecord {
            n: maze.n(),
            corridors: maze.grid.corridors().into_iter().map(|(a, b)| [a, b]).collect(),
            start: maze.start,
            goal: maze.goal,
            moves: path.map(GridPath::moves_text),
        }
    }

    pub fn to_maze(&self) -> Result<Maze> {
        let pairs: Vec<(Cell, Cell)> = self.corridors.iter().map(|&[a, b]| (a, b)).collect();
        Maze::new(MazeGrid::from_corridors(self.n, &pairs)?, self.start, self.goal)
    }
}

impl TspRecord {
    pub fn from_layout(layout: &CityLayout, tour: Option<&Tour>) -> Self {
        TspRecord {
            width: layout.width,
            height: layout.height,
            cities: layout.cities.clone(),
            order: tour.map(|t| t.order.clone()),
            length: tour.map(|t| round6(t.length)),
        }
    }

    pub fn to_layout(&self) -> Result<CityLayout> {
        CityLayout::new(self.width, self.height, self.cities.clone())
    }
}

impl VspRecord {
    pub fn from_map(map: &HazardMap, path: Option<&GridPath>) -> Self {
        VspRecord {
            n: map.n(),
            tiles: map.tile_string(),
            start: map.start,
            goal: map.goal,
            moves: path.map(GridPath::moves_text),
        }
    }

    pub fn to_map(&self) -> Result<HazardMap> {
        HazardMap::new(self.n, parse_tiles(&self.tiles)?, self.start, self.goal)
    }
}

impl PuzzleRecord {
    pub fn kind(&self) -> TaskKind {
        match self {
            PuzzleRecord::Maze(_) => TaskKind::Maze,
            PuzzleRecord::Tsp(_) => TaskKind::Tsp,
            PuzzleRecord::Sudoku(_) => TaskKind::Sudoku,
            PuzzleRecord::Vsp(_) => TaskKind::Vsp,
        }
    }

    /// The puzzle definition only; solution fields are ignored.
    pub fn to_input(&self) -> Result<TaskInput> {
        Ok(match self {
            PuzzleRecord::Maze(r) => TaskInput::Maze(r.to_maze()?),
            PuzzleRecord::Tsp(r) => TaskInput::Tsp(r.to_layout()?),
            PuzzleRecord::Sudoku(r) => TaskInput::Sudoku(r.puzzle),
            PuzzleRecord::Vsp(r) => TaskInput::Vsp(r.to_map()?),
        })
    }

    /// Puzzle plus the stored solution, which must be present and valid.
    pub fn to_instance(&self) -> Result<TaskInstance> {
        let missing = || Error::input(format!("{} record has no solution", self.kind()));
        Ok(match self {
            PuzzleRecord::Maze(r) => {
                let maze = r.to_maze()?;
                let moves = parse_moves(r.moves.as_deref().ok_or_else(missing)?)?;
                let path = GridPath::from_moves(maze.start, &moves, maze.n())?;
                maze.check_path(&path)?;
                TaskInstance::Maze(MazeInstance { maze, path })
            }
            PuzzleRecord::Tsp(r) => {
                let layout = r.to_layout()?;
                let order = r.order.clone().ok_or_else(missing)?;
                layout.check_permutation(&order)?;
                let order = canonicalize(&order);
                let length = layout.tour_length(&order);
                TaskInstance::Tsp(TspInstance {
                    layout,
                    tour: Tour { order, length },
                })
            }
            PuzzleRecord::Sudoku(r) => {
                let solution = r.solution.ok_or_else(missing)?;
                if !solution.is_solved() {
                    return Err(Error::input("stored sudoku solution is not a valid full grid"));
                }
                if (0..sudoku::CELLS).any(|i| {
                    let p = r.puzzle.cells()[i];
                    p != 0 && p != solution.cells()[i]
                }) {
                    return Err(Error::input("stored sudoku solution disagrees with the clues"));
                }
                TaskInstance::Sudoku(SudokuInstance {
                    puzzle: r.puzzle,
                    solution,
                    clue_count: r.puzzle.clue_count(),
                })
            }
            PuzzleRecord::Vsp(r) => {
                let map = r.to_map()?;
                let moves = parse_moves(r.moves.as_deref().ok_or_else(missing)?)?;
                let path = GridPath::from_moves(map.start, &moves, map.n())?;
                map.check_path(&path)?;
                TaskInstance::Vsp(VspInstance { map, path })
            }
        })
    }
}

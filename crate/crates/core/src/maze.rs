//! Perfect mazes: DFS carving, BFS solving and step trajectories.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{Cell, Direction, GridPath};
use crate::trajectory::{path_trajectory, TaskKind, Trajectory};

/// Passage structure of an `n`×`n` maze, one U/D/L/R bitmask per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazeGrid {
    n: usize,
    open: Vec<u8>,
}

impl MazeGrid {
    /// A grid with every wall present.
    pub fn closed(n: usize) -> Self {
        MazeGrid {
            n,
            open: vec![0; n * n],
        }
    }

    pub fn from_corridors(n: usize, corridors: &[(Cell, Cell)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("maze dimension {n} < 2")));
        }
        let mut grid = MazeGrid::closed(n);
        for &(a, b) in corridors {
            if !a.in_bounds(n) || !b.in_bounds(n) {
                return Err(Error::input(format!("corridor {a}-{b} outside {n}x{n} grid")));
            }
            grid.open_passage(a, b)?;
        }
        Ok(grid)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn open_passage(&mut self, a: Cell, b: Cell) -> Result<()> {
        let d = crate::grid::direction_between(a, b)?;
        self.open[a.index(self.n)] |= d.bit();
        self.open[b.index(self.n)] |= d.opposite().bit();
        Ok(())
    }

    pub fn has_passage(&self, c: Cell, dir: Direction) -> bool {
        c.in_bounds(self.n) && self.open[c.index(self.n)] & dir.bit() != 0
    }

    /// Cells reachable in one move from `c`, in U, D, L, R order.
    pub fn passable_neighbors(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        Direction::ALL
            .into_iter()
            .filter(move |&d| self.has_passage(c, d))
            .filter_map(move |d| c.step(d, self.n))
    }

    /// Corridors as `(smaller, larger)` cell pairs, sorted.
    pub fn corridors(&self) -> Vec<(Cell, Cell)> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for idx in 0..self.n * self.n {
            let c = Cell::from_index(idx, self.n);
            for d in [Direction::Down, Direction::Right] {
                if self.has_passage(c, d) {
                    if let Some(nb) = c.step(d, self.n) {
                        out.push((c, nb));
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn corridor_count(&self) -> usize {
        self.corridors().len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Maze {
    pub grid: MazeGrid,
    pub start: Cell,
    pub goal: Cell,
}

impl Maze {
    pub fn new(grid: MazeGrid, start: Cell, goal: Cell) -> Result<Self> {
        let n = grid.n();
        if !start.in_bounds(n) || !goal.in_bounds(n) {
            return Err(Error::input("maze endpoints out of bounds"));
        }
        if start == goal {
            return Err(Error::input("maze start equals goal"));
        }
        Ok(Maze { grid, start, goal })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// Checks a (possibly partial) walk: starts at `start`, never crosses a wall.
    pub fn check_prefix(&self, path: &GridPath) -> Result<()> {
        if path.start() != self.start {
            return Err(Error::input(format!(
                "path starts at {} instead of {}",
                path.start(),
                self.start
            )));
        }
        for (i, (&c, &m)) in path.cells().iter().zip(path.moves()).enumerate() {
            if !self.grid.has_passage(c, m) {
                return Err(Error::input(format!("move {i} ({m}) from {c} crosses a wall")));
            }
        }
        Ok(())
    }

    pub fn check_path(&self, path: &GridPath) -> Result<()> {
        self.check_prefix(path)?;
        if path.end() != self.goal {
            return Err(Error::input(format!("path ends at {} not at goal {}", path.end(), self.goal)));
        }
        Ok(())
    }
}

/// Carves a perfect maze with an iterative randomized DFS from (0,0).
pub fn carve_maze<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<MazeGrid> {
    if n < 2 {
        return Err(Error::input(format!("maze dimension {n} < 2")));
    }
    let mut grid = MazeGrid::closed(n);
    let mut visited = vec![false; n * n];
    let mut stack = vec![Cell::new(0, 0)];
    visited[0] = true;
    let mut candidates = Vec::with_capacity(4);
    while let Some(&cur) = stack.last() {
        candidates.clear();
        candidates.extend(
            Direction::ALL
                .iter()
                .filter_map(|&d| cur.step(d, n))
                .filter(|c| !visited[c.index(n)]),
        );
        if candidates.is_empty() {
            stack.pop();
            continue;
        }
        let next = candidates[rng.gen_range(0..candidates.len())];
        grid.open_passage(cur, next)?;
        visited[next.index(n)] = true;
        stack.push(next);
    }
    Ok(grid)
}

/// Two distinct cells drawn uniformly without replacement.
pub fn sample_endpoints<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Cell, Cell) {
    let total = n * n;
    let s = rng.gen_range(0..total);
    let mut g = rng.gen_range(0..total - 1);
    if g >= s {
        g += 1;
    }
    (Cell::from_index(s, n), Cell::from_index(g, n))
}

/// BFS from start to goal through open corridors.
pub fn bfs_shortest_path(maze: &Maze) -> Result<GridPath> {
    let n = maze.n();
    let mut parent: Vec<Option<Cell>> = vec![None; n * n];
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::new();
    seen[maze.start.index(n)] = true;
    queue.push_back(maze.start);
    while let Some(cur) = queue.pop_front() {
        if cur == maze.goal {
            break;
        }
        for nb in maze.grid.passable_neighbors(cur) {
            let i = nb.index(n);
            if !seen[i] {
                seen[i] = true;
                parent[i] = Some(cur);
                queue.push_back(nb);
            }
        }
    }
    if !seen[maze.goal.index(n)] {
        return Err(Error::Internal(format!(
            "goal {} unreachable from {}: maze is disconnected",
            maze.goal, maze.start
        )));
    }
    let mut cells = vec![maze.goal];
    let mut cur = maze.goal;
    while let Some(p) = parent[cur.index(n)] {
        cells.push(p);
        cur = p;
    }
    cells.reverse();
    GridPath::from_cells(cells)
}

/// One state per path prefix (every `stride` cells, final state always kept);
/// reasoning text is the comma-joined move string.
pub fn maze_trajectory(maze: &Maze, path: &GridPath, stride: usize) -> Result<Trajectory> {
    maze.check_path(path)?;
    path_trajectory(TaskKind::Maze, path, stride)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazeInstance {
    pub maze: Maze,
    pub path: GridPath,
}

/// Full maze pipeline for one seed: carve, pick endpoints, solve.
pub fn generate_maze<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<MazeInstance> {
    let grid = carve_maze(n, rng)?;
    let (start, goal) = sample_endpoints(n, rng);
    let maze = Maze::new(grid, start, goal)?;
    let path = bfs_shortest_path(&maze)?;
    Ok(MazeInstance { maze, path })
}

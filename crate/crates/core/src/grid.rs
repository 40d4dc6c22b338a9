//! Square-grid geometry shared by every task.
//!
//! Coordinates are 0-based, row 0 is the top image row and `Down` increases
//! the row index. All searches expand neighbours in the fixed order
//! Up, Down, Left, Right so solver output is deterministic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub fn in_bounds(self, n: usize) -> bool {
        self.row < n && self.col < n
    }

    /// Row-major index inside an `n`×`n` grid.
    pub fn index(self, n: usize) -> usize {
        self.row * n + self.col
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        Cell::new(idx / n, idx % n)
    }

    /// The cell one step in `dir`, if it stays inside the grid.
    pub fn step(self, dir: Direction, n: usize) -> Option<Cell> {
        let (r, c) = (self.row, self.col);
        let next = match dir {
            Direction::Up => Cell::new(r.checked_sub(1)?, c),
            Direction::Down => Cell::new(r + 1, c),
            Direction::Left => Cell::new(r, c.checked_sub(1)?),
            Direction::Right => Cell::new(r, c + 1),
        };
        next.in_bounds(n).then_some(next)
    }

    pub fn manhattan(self, other: Cell) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl FromStr for Cell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::input(format!("cell `{s}` is not of the form (row,col)")))?;
        let (r, c) = inner
            .split_once(',')
            .ok_or_else(|| Error::input(format!("cell `{s}` is missing a comma")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| Error::input(format!("cell `{s}`: {e}")))
        };
        Ok(Cell::new(parse(r)?, parse(c)?))
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    /// Expansion order used by every search in the crate.
    pub const ALL: [Direction; 4] = [
        Direction::Up,
        Direction::Down,
        Direction::Left,
        Direction::Right,
    ];

    pub fn token(self) -> char {
        match self {
            Direction::Up => 'U',
            Direction::Down => 'D',
            Direction::Left => 'L',
            Direction::Right => 'R',
        }
    }

    pub fn from_token(token: &str) -> Result<Self> {
        match token.trim() {
            "U" => Ok(Direction::Up),
            "D" => Ok(Direction::Down),
            "L" => Ok(Direction::Left),
            "R" => Ok(Direction::Right),
            other => Err(Error::input(format!("unknown move token `{other}`"))),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    /// Bit used in per-cell passage masks.
    pub(crate) fn bit(self) -> u8 {
        match self {
            Direction::Up => 1,
            Direction::Down => 2,
            Direction::Left => 4,
            Direction::Right => 8,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Direction::from_token(&s).map_err(serde::de::Error::custom)
    }
}

/// In-bounds 4-neighbours of `c`, in U, D, L, R order.
pub fn neighbors(c: Cell, n: usize) -> Result<Vec<Cell>> {
    if !c.in_bounds(n) {
        return Err(Error::input(format!("cell {c} outside {n}x{n} grid")));
    }
    Ok(Direction::ALL
        .iter()
        .filter_map(|&d| c.step(d, n))
        .collect())
}

/// The move that takes `a` to the 4-adjacent cell `b`.
pub fn direction_between(a: Cell, b: Cell) -> Result<Direction> {
    match (
        b.row as isize - a.row as isize,
        b.col as isize - a.col as isize,
    ) {
        (-1, 0) => Ok(Direction::Up),
        (1, 0) => Ok(Direction::Down),
        (0, -1) => Ok(Direction::Left),
        (0, 1) => Ok(Direction::Right),
        _ => Err(Error::input(format!("cells {a} and {b} are not adjacent"))),
    }
}

/// Parses a comma-separated move string such as `"D,R,R,U"`.
pub fn parse_moves(text: &str) -> Result<Vec<Direction>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(Direction::from_token).collect()
}

pub fn format_moves(moves: &[Direction]) -> String {
    let mut out = String::with_capacity(moves.len() * 2);
    for (i, m) in moves.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push(m.token());
    }
    out
}

/// A walk on the grid: visited cells and the moves between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPath {
    cells: Vec<Cell>,
    moves: Vec<Direction>,
}

impl GridPath {
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::input("path must contain at least one cell"));
        }
        let moves = cells
            .windows(2)
            .map(|w| direction_between(w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridPath { cells, moves })
    }

    /// Applies `moves` from `start`, failing if the walk leaves the grid.
    pub fn from_moves(start: Cell, moves: &[Direction], n: usize) -> Result<Self> {
        if !start.in_bounds(n) {
            return Err(Error::input(format!("start {start} outside {n}x{n} grid")));
        }
        let mut cells = Vec::with_capacity(moves.len() + 1);
        cells.push(start);
        let mut cur = start;
        for (i, &m) in moves.iter().enumerate() {
            cur = cur
                .step(m, n)
                .ok_or_else(|| Error::input(format!("move {i} ({m}) leaves the grid at {cur}")))?;
            cells.push(cur);
        }
        Ok(GridPath {
            cells,
            moves: moves.to_vec(),
        })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn moves(&self) -> &[Direction] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn start(&self) -> Cell {
        self.cells[0]
    }

    pub fn end(&self) -> Cell {
        *self.cells.last().expect("non-empty path")
    }

    pub fn moves_text(&self) -> String {
        format_moves(&self.moves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn neighbors_corner_and_interior() {
        assert_eq!(
            neighbors(Cell::new(0, 0), 3).unwrap(),
            vec![Cell::new(1, 0), Cell::new(0, 1)]
        );
        assert_eq!(
            neighbors(Cell::new(1, 1), 3).unwrap(),
            vec![
                Cell::new(0, 1),
                Cell::new(2, 1),
                Cell::new(1, 0),
                Cell::new(1, 2)
            ]
        );
        assert!(neighbors(Cell::new(0, 2), 1).is_err());
    }

    #[test]
    fn direction_between_examples() {
        assert_eq!(
            direction_between(Cell::new(0, 0), Cell::new(1, 0)).unwrap(),
            Direction::Down
        );
        assert_eq!(
            direction_between(Cell::new(2, 3), Cell::new(2, 2)).unwrap(),
            Direction::Left
        );
        assert!(direction_between(Cell::new(0, 0), Cell::new(2, 0)).is_err());
        assert!(direction_between(Cell::new(1, 1), Cell::new(1, 1)).is_err());
    }

    #[test]
    fn direction_composes_with_step_exhaustively() {
        let n = 10;
        for idx in 0..n * n {
            let a = Cell::from_index(idx, n);
            for b in neighbors(a, n).unwrap() {
                let d = direction_between(a, b).unwrap();
                assert_eq!(a.step(d, n), Some(b));
                assert_eq!(direction_between(b, a).unwrap(), d.opposite());
            }
        }
    }

    #[test]
    fn cell_and_direction_serialization() {
        let c = Cell::new(3, 12);
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"(3,12)\"");
        assert_eq!(serde_json::from_str::<Cell>("\"(3,12)\"").unwrap(), c);
        assert!("(3;12)".parse::<Cell>().is_err());
        assert_eq!(serde_json::to_string(&Direction::Left).unwrap(), "\"L\"");
        assert_eq!(parse_moves("D,R").unwrap(), vec![Direction::Down, Direction::Right]);
        assert!(parse_moves("D,X").is_err());
        assert_eq!(parse_moves("").unwrap(), vec![]);
    }

    #[test]
    fn path_from_moves_rejects_leaving_grid() {
        let err = GridPath::from_moves(Cell::new(0, 0), &[Direction::Up], 3);
        assert!(err.is_err());
        let p = GridPath::from_moves(Cell::new(0, 0), &[Direction::Down, Direction::Right], 3)
            .unwrap();
        assert_eq!(p.cells(), &[Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1)]);
        assert_eq!(p.moves_text(), "D,R");
    }

    proptest! {
        #[test]
        fn neighbors_are_distinct_adjacent_and_in_bounds(n in 1usize..40, r in 0usize..40, c in 0usize..40) {
            let cell = Cell::new(r % n, c % n);
            let ns = neighbors(cell, n).unwrap();
            let mut dedup = ns.clone();
            dedup.sort();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), ns.len());
            for nb in ns {
                prop_assert!(nb.in_bounds(n));
                prop_assert_eq!(nb.manhattan(cell), 1);
            }
        }
    }
}

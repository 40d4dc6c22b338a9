//! 9×9 Sudoku: solution generation, unique-solution digging and a bitmask
//! solution counter.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::Cell;
use crate::trajectory::{StatePayload, TaskKind, Trajectory};

pub const SIZE: usize = 9;
pub const CELLS: usize = 81;
pub const MIN_CLUES: usize = 17;
pub const DEFAULT_MAX_ATTEMPTS: usize = 500;

const ALL_DIGITS: u16 = 0x1FF;

fn box_of(idx: usize) -> usize {
    (idx / 27) * 3 + (idx % 9) / 3
}

/// Row-major 9×9 board; 0 marks an empty cell.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SudokuGrid {
    cells: [u8; CELLS],
}

impl Default for SudokuGrid {
    fn default() -> Self {
        SudokuGrid { cells: [0; CELLS] }
    }
}

impl SudokuGrid {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_cells(cells: [u8; CELLS]) -> Result<Self> {
        if let Some(&bad) = cells.iter().find(|&&v| v > 9) {
            return Err(Error::input(format!("digit {bad} out of range")));
        }
        Ok(SudokuGrid { cells })
    }

    pub fn get(&self, cell: Cell) -> u8 {
        self.cells[cell.index(SIZE)]
    }

    pub fn set(&mut self, cell: Cell, digit: u8) {
        debug_assert!(digit <= 9);
        self.cells[cell.index(SIZE)] = digit;
    }

    pub fn cells(&self) -> &[u8; CELLS] {
        &self.cells
    }

    pub fn clue_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|&v| v != 0)
    }

    /// Empty cells in row-major order.
    pub fn empty_cells(&self) -> Vec<Cell> {
        (0..CELLS)
            .filter(|&i| self.cells[i] == 0)
            .map(|i| Cell::from_index(i, SIZE))
            .collect()
    }

    /// True when no row, column or block repeats a non-empty digit.
    pub fn is_consistent(&self) -> bool {
        Masks::from_grid(self).is_some()
    }

    /// Complete and consistent: every row, column and block is a
    /// permutation of 1..=9.
    pub fn is_solved(&self) -> bool {
        self.is_complete() && self.is_consistent()
    }

    pub fn to_line(&self) -> String {
        self.cells.iter().map(|&v| char::from(b'0' + v)).collect()
    }
}

impl fmt::Debug for SudokuGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..SIZE {
            writeln!(f, "{}", &self.to_line()[r * SIZE..(r + 1) * SIZE])?;
        }
        Ok(())
    }
}

impl fmt::Display for SudokuGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

impl FromStr for SudokuGrid {
    type Err = Error;

    /// 81 characters, row-major, `'0'` (or `'.'`) for empty.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.chars().count() != CELLS {
            return Err(Error::input(format!(
                "sudoku grid needs {CELLS} characters, got {}",
                s.chars().count()
            )));
        }
        let mut cells = [0u8; CELLS];
        for (i, ch) in s.chars().enumerate() {
            cells[i] = match ch {
                '.' => 0,
                '0'..='9' => ch as u8 - b'0',
                _ => return Err(Error::input(format!("bad sudoku character `{ch}` at {i}"))),
            };
        }
        Ok(SudokuGrid { cells })
    }
}

impl Serialize for SudokuGrid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_line())
    }
}

impl<'de> Deserialize<'de> for SudokuGrid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Used-digit masks per row, column and block.
#[derive(Clone, Copy)]
struct Masks {
    rows: [u16; 9],
    cols: [u16; 9],
    boxes: [u16; 9],
}

impl Masks {
    fn from_grid(grid: &SudokuGrid) -> Option<Self> {
        let mut m = Masks {
            rows: [0; 9],
            cols: [0; 9],
            boxes: [0; 9],
        };
        for (i, &v) in grid.cells.iter().enumerate() {
            if v != 0 {
                let bit = 1 << (v - 1);
                if !m.allows(i, bit) {
                    return None;
                }
                m.toggle(i, bit);
            }
        }
        Some(m)
    }

    fn candidates(&self, idx: usize) -> u16 {
        !(self.rows[idx / 9] | self.cols[idx % 9] | self.boxes[box_of(idx)]) & ALL_DIGITS
    }

    fn allows(&self, idx: usize, bit: u16) -> bool {
        self.candidates(idx) & bit != 0
    }

    fn toggle(&mut self, idx: usize, bit: u16) {
        self.rows[idx / 9] ^= bit;
        self.cols[idx % 9] ^= bit;
        self.boxes[box_of(idx)] ^= bit;
    }
}

struct Counter {
    cells: [u8; CELLS],
    masks: Masks,
    cap: usize,
    found: usize,
    first: Option<[u8; CELLS]>,
}

impl Counter {
    /// Depth-first search branching on the empty cell with fewest candidates.
    fn search(&mut self) {
        let mut best: Option<(usize, u16)> = None;
        for i in 0..CELLS {
            if self.cells[i] != 0 {
                continue;
            }
            let cand = self.masks.candidates(i);
            let k = cand.count_ones();
            if k == 0 {
                return;
            }
            if best.is_none_or(|(_, b)| k < b.count_ones()) {
                best = Some((i, cand));
                if k == 1 {
                    break;
                }
            }
        }
        let Some((idx, mut cand)) = best else {
            self.found += 1;
            if self.first.is_none() {
                self.first = Some(self.cells);
            }
            return;
        };
        while cand != 0 && self.found < self.cap {
            let bit = cand & cand.wrapping_neg();
            cand ^= bit;
            self.cells[idx] = bit.trailing_zeros() as u8 + 1;
            self.masks.toggle(idx, bit);
            self.search();
            self.masks.toggle(idx, bit);
            self.cells[idx] = 0;
        }
    }
}

fn run_counter(puzzle: &SudokuGrid, cap: usize) -> Counter {
    let mut counter = Counter {
        cells: puzzle.cells,
        masks: Masks {
            rows: [0; 9],
            cols: [0; 9],
            boxes: [0; 9],
        },
        cap: cap.max(1),
        found: 0,
        first: None,
    };
    if let Some(masks) = Masks::from_grid(puzzle) {
        counter.masks = masks;
        counter.search();
    }
    counter
}

/// Number of completions of `puzzle`, truncated at `cap`. A puzzle whose
/// givens already conflict has 0.
pub fn count_solutions(puzzle: &SudokuGrid, cap: usize) -> usize {
    run_counter(puzzle, cap).found
}

/// First completion found by the counter's search, if any.
pub fn solve(puzzle: &SudokuGrid) -> Option<SudokuGrid> {
    run_counter(puzzle, 1).first.map(|cells| SudokuGrid { cells })
}

/// Complete valid board by randomized backtracking: row-major cells,
/// candidate digits shuffled per cell.
pub fn generate_solution<R: Rng + ?Sized>(rng: &mut R) -> SudokuGrid {
    fn fill<R: Rng + ?Sized>(idx: usize, cells: &mut [u8; CELLS], masks: &mut Masks, rng: &mut R) -> bool {
        if idx == CELLS {
            return true;
        }
        let mut digits: Vec<u8> = (1..=9).collect();
        digits.shuffle(rng);
        for d in digits {
            let bit = 1 << (d - 1);
            if masks.allows(idx, bit) {
                cells[idx] = d;
                masks.toggle(idx, bit);
                if fill(idx + 1, cells, masks, rng) {
                    return true;
                }
                masks.toggle(idx, bit);
                cells[idx] = 0;
            }
        }
        false
    }
    let mut cells = [0u8; CELLS];
    let mut masks = Masks {
        rows: [0; 9],
        cols: [0; 9],
        boxes: [0; 9],
    };
    let ok = fill(0, &mut cells, &mut masks, rng);
    debug_assert!(ok, "backtracking from an empty board always succeeds");
    SudokuGrid { cells }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SudokuInstance {
    pub puzzle: SudokuGrid,
    pub solution: SudokuGrid,
    pub clue_count: usize,
}

impl SudokuInstance {
    pub fn holes(&self) -> usize {
        CELLS - self.clue_count
    }
}

/// Removes cells in a random order, reverting any removal that admits a
/// second completion, until `clue_target` givens remain.
///
/// Fails with [`Error::DiggingStuck`] once every cell has been tried or
/// `max_attempts` removals have been reverted.
pub fn dig_holes<R: Rng + ?Sized>(
    solution: &SudokuGrid,
    clue_target: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<SudokuInstance> {
    if !(MIN_CLUES..=CELLS).contains(&clue_target) {
        return Err(Error::input(format!(
            "clue target {clue_target} outside {MIN_CLUES}..={CELLS}"
        )));
    }
    if !solution.is_solved() {
        return Err(Error::input("digging requires a complete valid solution"));
    }
    let mut order: Vec<usize> = (0..CELLS).collect();
    order.shuffle(rng);
    let mut puzzle = *solution;
    let mut clues = CELLS;
    let mut reverts = 0;
    for idx in order {
        if clues == clue_target {
            break;
        }
        let v = puzzle.cells[idx];
        puzzle.cells[idx] = 0;
        if count_solutions(&puzzle, 2) > 1 {
            puzzle.cells[idx] = v;
            reverts += 1;
            if reverts >= max_attempts {
                break;
            }
        } else {
            clues -= 1;
        }
    }
    if clues != clue_target {
        return Err(Error::DiggingStuck {
            clues,
            target: clue_target,
        });
    }
    Ok(SudokuInstance {
        puzzle,
        solution: *solution,
        clue_count: clues,
    })
}

pub fn generate_sudoku<R: Rng + ?Sized>(
    clue_target: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<SudokuInstance> {
    let solution = generate_solution(rng);
    dig_holes(&solution, clue_target, rng, max_attempts)
}

/// Fills empty cells top-left to bottom-right; state `k` holds the first
/// `k` fills, the last state is the solved board.
pub fn simulate_solving(instance: &SudokuInstance) -> Trajectory {
    let fills: Vec<(Cell, u8)> = instance
        .puzzle
        .empty_cells()
        .into_iter()
        .map(|c| (c, instance.solution.get(c)))
        .collect();
    let states = (0..=fills.len())
        .map(|k| StatePayload::Fill(fills[..k].to_vec()))
        .collect();
    Trajectory {
        kind: TaskKind::Sudoku,
        stride: 1,
        states,
        reasoning_text: format_fills(&fills),
    }
}

pub fn format_fills(fills: &[(Cell, u8)]) -> String {
    fills
        .iter()
        .map(|(c, v)| format!("{},{}={}", c.row, c.col, v))
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses `"r,c=v;r,c=v"`; the empty string is zero fills.
pub fn parse_fills(text: &str) -> Result<Vec<(Cell, u8)>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|triple| {
            let bad = || Error::input(format!("bad fill triple `{triple}`"));
            let (pos, val) = triple.split_once('=').ok_or_else(bad)?;
            let (r, c) = pos.split_once(',').ok_or_else(bad)?;
            let r: usize = r.trim().parse().map_err(|_| bad())?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            let v: u8 = val.trim().parse().map_err(|_| bad())?;
            if r >= SIZE || c >= SIZE || !(1..=9).contains(&v) {
                return Err(bad());
            }
            Ok((Cell::new(r, c), v))
        })
        .collect()
}

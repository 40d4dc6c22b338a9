//! Pixel-classification inverse of [`crate::render`].
//!
//! Decoding looks only at the puzzle definition (walls, hazard tiles, city
//! coordinates) and the image, never at a stored solution. It is exact for
//! canonical renderings and makes no attempt at OCR of arbitrary drawings.

use crate::error::{Error, Result};
use crate::grid::{Cell, GridPath};
use crate::instance::{Solution, TaskInput};
use crate::maze::Maze;
use crate::render::{
    city_pixel, font, glyph_origin, GridGeometry, PaletteColor, RasterImage, Rgb, CITY_RADIUS,
    GLYPH_SCALE,
};
use crate::sudoku::{self, SudokuGrid};
use crate::tsp::{canonicalize, CityLayout};
use crate::vsp::HazardMap;

/// Maximum Euclidean RGB distance for a pixel to count as a palette color.
pub const CLASSIFY_THRESHOLD: f64 = 60.0;

/// Minimum fraction of glyph blocks that must agree with a digit template.
pub const GLYPH_MATCH_THRESHOLD: f64 = 0.9;

pub fn classify_pixel(rgb: Rgb) -> Option<PaletteColor> {
    let mut best: Option<(f64, PaletteColor)> = None;
    for color in PaletteColor::ALL {
        let p = color.rgb();
        let d = (0..3)
            .map(|k| (rgb[k] as f64 - p[k] as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, color));
        }
    }
    best.filter(|&(d, _)| d <= CLASSIFY_THRESHOLD).map(|(_, c)| c)
}

fn class_at(img: &RasterImage, (x, y): (usize, usize)) -> Option<PaletteColor> {
    classify_pixel(img.pixel(x, y))
}

fn is_path_ink(c: Option<PaletteColor>) -> bool {
    matches!(c, Some(PaletteColor::Red | PaletteColor::CurrentGreen))
}

/// Recovers a path drawn by `render_maze_state` / `render_vsp_state`.
///
/// An edge between adjacent cells is on when its midpoint is red or green.
/// The on-edges must form a simple path starting at `start`; a path with no
/// edges is accepted only when the start center carries the green tip.
pub fn decode_grid_path(image: &RasterImage, geom: &GridGeometry, start: Cell) -> Result<GridPath> {
    let n = geom.n;
    if !start.in_bounds(n) {
        return Err(Error::input(format!("start {start} outside {n}x{n} grid")));
    }
    let mut adj: Vec<Vec<Cell>> = vec![Vec::new(); n * n];
    let mut edge_count = 0;
    for idx in 0..n * n {
        let a = Cell::from_index(idx, n);
        for b in [Cell::new(a.row, a.col + 1), Cell::new(a.row + 1, a.col)] {
            if b.in_bounds(n) && is_path_ink(class_at(image, geom.edge_midpoint(a, b))) {
                adj[a.index(n)].push(b);
                adj[b.index(n)].push(a);
                edge_count += 1;
            }
        }
    }
    if edge_count == 0 {
        return if class_at(image, geom.center(start)) == Some(PaletteColor::CurrentGreen) {
            Ok(GridPath::from_cells(vec![start])?)
        } else {
            Err(Error::DecodeAmbiguous("no path drawn from the start cell".into()))
        };
    }
    if let Some(bad) = adj.iter().position(|v| v.len() > 2) {
        return Err(Error::DecodeAmbiguous(format!(
            "cell {} has {} drawn edges",
            Cell::from_index(bad, n),
            adj[bad].len()
        )));
    }
    if adj[start.index(n)].len() != 1 {
        return Err(Error::DecodeAmbiguous(format!(
            "start {start} has {} drawn edges, expected 1",
            adj[start.index(n)].len()
        )));
    }
    let mut cells = vec![start];
    let mut prev: Option<Cell> = None;
    let mut cur = start;
    loop {
        let next = adj[cur.index(n)].iter().copied().find(|&c| Some(c) != prev);
        match next {
            Some(c) => {
                prev = Some(cur);
                cur = c;
                cells.push(c);
            }
            None => break,
        }
        if cells.len() > n * n {
            return Err(Error::DecodeAmbiguous("drawn path loops".into()));
        }
    }
    if cells.len() - 1 != edge_count {
        return Err(Error::DecodeAmbiguous(format!(
            "{} drawn edges are not connected to the start",
            edge_count + 1 - cells.len()
        )));
    }
    GridPath::from_cells(cells)
}

pub fn decode_maze_path(image: &RasterImage, maze: &Maze) -> Result<GridPath> {
    decode_grid_path(image, &GridGeometry::for_grid(maze.n())?, maze.start)
}

pub fn decode_vsp_path(image: &RasterImage, map: &HazardMap) -> Result<GridPath> {
    decode_grid_path(image, &GridGeometry::for_grid(map.n())?, map.start)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeEvidence {
    Red,
    NotRed,
    /// Every sample fell inside a city marker, or the segment crosses
    /// another city whose marker may hide or fake the line.
    Unknown,
}

const TOUR_SEARCH_BUDGET: usize = 2_000_000;

/// Recovers the closed tour drawn by `render_tsp_state`, canonicalized.
///
/// Each city pair is sampled at one-pixel steps along its segment, skipping
/// samples under city markers. A pair whose samples are all red is a drawn
/// edge. The drawn edges plus any pair the markers make undecidable must
/// admit exactly one Hamiltonian cycle that uses every drawn edge.
pub fn decode_tour(image: &RasterImage, layout: &CityLayout) -> Result<Vec<usize>> {
    let n = layout.len();
    let px: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (x, y) = city_pixel(layout, i);
            (x as f64, y as f64)
        })
        .collect();
    let zone = (CITY_RADIUS + 2) as f64;
    let mut evidence = vec![vec![EdgeEvidence::NotRed; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let (ax, ay) = px[a];
            let (bx, by) = px[b];
            let crosses_city = (0..n).filter(|&k| k != a && k != b).any(|k| {
                crate::render::point_segment_distance(px[k].0, px[k].1, ax, ay, bx, by) <= zone
            });
            let len = (bx - ax).hypot(by - ay);
            let steps = len.ceil() as usize;
            let mut samples = 0;
            let mut red = 0;
            for s in 0..=steps {
                let t = if steps == 0 { 0.0 } else { s as f64 / steps as f64 };
                let (x, y) = ((ax + t * (bx - ax)).round(), (ay + t * (by - ay)).round());
                if px.iter().any(|&(cx, cy)| (x - cx).hypot(y - cy) <= zone) {
                    continue;
                }
                samples += 1;
                if class_at(image, (x as usize, y as usize)) == Some(PaletteColor::Red) {
                    red += 1;
                }
            }
            let e = if samples == 0 {
                EdgeEvidence::Unknown
            } else if red == samples {
                if crosses_city {
                    EdgeEvidence::Unknown
                } else {
                    EdgeEvidence::Red
                }
            } else {
                EdgeEvidence::NotRed
            };
            evidence[a][b] = e;
            evidence[b][a] = e;
        }
    }

    let mandatory: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| evidence[a][b] == EdgeEvidence::Red).collect())
        .collect();
    if let Some(v) = mandatory.iter().position(|m| m.len() > 2) {
        return Err(Error::DecodeAmbiguous(format!(
            "city {v} has {} drawn edges",
            mandatory[v].len()
        )));
    }
    let optional: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| evidence[a][b] == EdgeEvidence::Unknown).collect())
        .collect();

    let mut search = CycleSearch {
        n,
        mandatory: &mandatory,
        optional: &optional,
        visited: vec![false; n],
        path: vec![0],
        found: Vec::new(),
        budget: TOUR_SEARCH_BUDGET,
    };
    search.visited[0] = true;
    search.extend(None);
    if search.budget == 0 {
        return Err(Error::DecodeAmbiguous("tour search exceeded its budget".into()));
    }
    match search.found.len() {
        1 => Ok(search.found.pop().unwrap()),
        0 => Err(Error::DecodeAmbiguous("drawn segments do not form a closed tour".into())),
        k => Err(Error::DecodeAmbiguous(format!("{k} tours fit the drawn segments"))),
    }
}

struct CycleSearch<'a> {
    n: usize,
    mandatory: &'a [Vec<usize>],
    optional: &'a [Vec<usize>],
    visited: Vec<bool>,
    path: Vec<usize>,
    found: Vec<Vec<usize>>,
    budget: usize,
}

impl CycleSearch<'_> {
    /// Every mandatory edge of `v` must be one of its two tour edges.
    fn covers(&self, v: usize, a: usize, b: usize) -> bool {
        self.mandatory[v].iter().all(|&m| m == a || m == b)
    }

    fn extend(&mut self, prev: Option<usize>) {
        if self.budget == 0 || self.found.len() > 1 {
            return;
        }
        self.budget -= 1;
        let cur = *self.path.last().unwrap();
        if self.path.len() == self.n {
            let closes = self.mandatory[cur].contains(&0) || self.optional[cur].contains(&0);
            if closes && self.covers(cur, prev.unwrap_or(0), 0) && self.covers(0, self.path[1], cur) {
                let c = canonicalize(&self.path);
                if !self.found.contains(&c) {
                    self.found.push(c);
                }
            }
            return;
        }
        let candidates: Vec<usize> = if cur == 0 {
            self.mandatory[0].iter().chain(&self.optional[0]).copied().collect()
        } else {
            let rest: Vec<usize> = self.mandatory[cur]
                .iter()
                .copied()
                .filter(|&m| Some(m) != prev)
                .collect();
            // a mandatory edge back to 0 can only be the closing edge
            if rest.contains(&0) || rest.len() > 1 {
                return;
            }
            if rest.is_empty() {
                self.optional[cur].clone()
            } else {
                rest
            }
        };
        for next in candidates {
            if self.visited[next] || next == 0 {
                continue;
            }
            self.visited[next] = true;
            self.path.push(next);
            self.extend(Some(cur));
            self.path.pop();
            self.visited[next] = false;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellInk {
    Empty,
    Clue,
    Fill,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedSudoku {
    /// Clues and filled digits together.
    pub grid: SudokuGrid,
    pub ink: Vec<CellInk>,
}

impl DecodedSudoku {
    /// The grid restricted to clue-colored digits.
    pub fn clues(&self) -> SudokuGrid {
        let mut g = self.grid;
        for (i, ink) in self.ink.iter().enumerate() {
            if *ink != CellInk::Clue {
                g.set(Cell::from_index(i, sudoku::SIZE), 0);
            }
        }
        g
    }
}

/// Reads every cell's glyph by sampling the center of each glyph block.
pub fn decode_sudoku(image: &RasterImage) -> Result<DecodedSudoku> {
    let geom = GridGeometry::for_grid(sudoku::SIZE)?;
    let mut grid = SudokuGrid::empty();
    let mut ink = Vec::with_capacity(sudoku::CELLS);
    for idx in 0..sudoku::CELLS {
        let c = Cell::from_index(idx, sudoku::SIZE);
        let (ox, oy) = glyph_origin(&geom, c);
        let mut bits = [[false; font::GLYPH_W]; font::GLYPH_H];
        let (mut black, mut red) = (0, 0);
        for (gy, row) in bits.iter_mut().enumerate() {
            for (gx, bit) in row.iter_mut().enumerate() {
                let x = ox + gx * GLYPH_SCALE + GLYPH_SCALE / 2;
                let y = oy + gy * GLYPH_SCALE + GLYPH_SCALE / 2;
                match class_at(image, (x, y)) {
                    Some(PaletteColor::Background) => {}
                    Some(PaletteColor::Black) => {
                        black += 1;
                        *bit = true;
                    }
                    Some(PaletteColor::Red) => {
                        red += 1;
                        *bit = true;
                    }
                    _ => {
                        return Err(Error::DecodeAmbiguous(format!("unexpected color in cell {c}")));
                    }
                }
            }
        }
        if black + red == 0 {
            ink.push(CellInk::Empty);
            continue;
        }
        let total = (font::GLYPH_W * font::GLYPH_H) as f64;
        let mut scores: Vec<(f64, u8)> = (1..=9u8)
            .map(|d| {
                let agree = (0..font::GLYPH_H)
                    .flat_map(|gy| (0..font::GLYPH_W).map(move |gx| (gx, gy)))
                    .filter(|&(gx, gy)| font::glyph_bit(d, gx, gy) == bits[gy][gx])
                    .count();
                (agree as f64 / total, d)
            })
            .collect();
        scores.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (best, digit) = scores[0];
        if best < GLYPH_MATCH_THRESHOLD || scores[1].0 == best {
            return Err(Error::DecodeAmbiguous(format!(
                "cell {c} matches no digit (best score {best:.2})"
            )));
        }
        grid.set(c, digit);
        ink.push(if black >= red { CellInk::Clue } else { CellInk::Fill });
    }
    Ok(DecodedSudoku { grid, ink })
}

/// Decodes a final-state image of `input` into a structured solution.
pub fn decode_solution(image: &RasterImage, input: &TaskInput) -> Result<Solution> {
    Ok(match input {
        TaskInput::Maze(m) => Solution::Path(decode_maze_path(image, m)?),
        TaskInput::Vsp(v) => Solution::Path(decode_vsp_path(image, v)?),
        TaskInput::Tsp(l) => Solution::Tour(decode_tour(image, l)?),
        TaskInput::Sudoku(_) => Solution::Grid(decode_sudoku(image)?.grid),
    })
}

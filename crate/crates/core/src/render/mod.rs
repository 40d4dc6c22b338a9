//! Canonical 512×512 rasterization of puzzle states.
//!
//! Every pixel is one of the [`PaletteColor`]s; there is no anti-aliasing.
//! The layout constants here are the contract [`crate::decode`] relies on.
//!
//! Grid tasks (Maze, VSP, Sudoku) use [`GridGeometry`]: `cell_px =
//! floor(512 / n)` with the grid centered, `margin = (512 - n * cell_px) / 2`.
//! A path is drawn as a red polyline through cell centers with a green dot
//! on its current end; the start is a yellow dot and the goal a blue dot.

mod codec;
pub mod font;

use crate::error::{Error, Result};
use crate::grid::{Cell, Direction};
use crate::instance::TaskInput;
use crate::maze::Maze;
use crate::sudoku::{self, SudokuGrid};
use crate::trajectory::{StatePayload, Trajectory};
use crate::tsp::CityLayout;
use crate::vsp::{HazardMap, Tile};

pub use codec::{decode_png, encode_png, read_png, write_png};

pub const IMAGE_SIZE: usize = 512;

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PaletteColor {
    Background,
    /// Walls, grid lines, city markers and Sudoku clues.
    Black,
    /// Path lines and filled-in Sudoku digits.
    Red,
    CurrentGreen,
    StartYellow,
    GoalBlue,
    HoleDark,
    SafeLight,
}

impl PaletteColor {
    pub const ALL: [PaletteColor; 8] = [
        PaletteColor::Background,
        PaletteColor::Black,
        PaletteColor::Red,
        PaletteColor::CurrentGreen,
        PaletteColor::StartYellow,
        PaletteColor::GoalBlue,
        PaletteColor::HoleDark,
        PaletteColor::SafeLight,
    ];

    pub const fn rgb(self) -> Rgb {
        match self {
            PaletteColor::Background => [255, 255, 255],
            PaletteColor::Black => [0, 0, 0],
            PaletteColor::Red => [220, 30, 30],
            PaletteColor::CurrentGreen => [30, 180, 60],
            PaletteColor::StartYellow => [240, 200, 30],
            PaletteColor::GoalBlue => [40, 90, 220],
            PaletteColor::HoleDark => [25, 40, 90],
            PaletteColor::SafeLight => [200, 225, 245],
        }
    }
}

/// Role names; several roles share one color.
pub mod palette {
    use super::PaletteColor;

    pub const BACKGROUND: PaletteColor = PaletteColor::Background;
    pub const WALL: PaletteColor = PaletteColor::Black;
    pub const PATH_RED: PaletteColor = PaletteColor::Red;
    pub const CURRENT_GREEN: PaletteColor = PaletteColor::CurrentGreen;
    pub const START_YELLOW: PaletteColor = PaletteColor::StartYellow;
    pub const GOAL_BLUE: PaletteColor = PaletteColor::GoalBlue;
    pub const HOLE_DARK: PaletteColor = PaletteColor::HoleDark;
    pub const SAFE_LIGHT: PaletteColor = PaletteColor::SafeLight;
    pub const CLUE_BLACK: PaletteColor = PaletteColor::Black;
    pub const FILL_RED: PaletteColor = PaletteColor::Red;
}

/// Placement of an `n`×`n` grid inside the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridGeometry {
    pub n: usize,
    pub cell_px: usize,
    pub margin: usize,
}

impl GridGeometry {
    pub fn for_grid(n: usize) -> Result<Self> {
        if n == 0 || n > IMAGE_SIZE / 4 {
            return Err(Error::input(format!("cannot lay out a {n}x{n} grid in {IMAGE_SIZE}px")));
        }
        let cell_px = IMAGE_SIZE / n;
        Ok(GridGeometry {
            n,
            cell_px,
            margin: (IMAGE_SIZE - n * cell_px) / 2,
        })
    }

    /// Top-left pixel `(x, y)` of a cell.
    pub fn origin(&self, c: Cell) -> (usize, usize) {
        (self.margin + c.col * self.cell_px, self.margin + c.row * self.cell_px)
    }

    pub fn center(&self, c: Cell) -> (usize, usize) {
        let (x, y) = self.origin(c);
        (x + self.cell_px / 2, y + self.cell_px / 2)
    }

    /// Pixel halfway between the centers of two adjacent cells.
    pub fn edge_midpoint(&self, a: Cell, b: Cell) -> (usize, usize) {
        let (ax, ay) = self.center(a);
        let (bx, by) = self.center(b);
        ((ax + bx) / 2, (ay + by) / 2)
    }

    pub fn path_width(&self) -> usize {
        (self.cell_px / 6).max(2)
    }

    pub fn endpoint_radius(&self) -> usize {
        self.cell_px / 3
    }

    /// The current-end marker is smaller than the endpoint dots so the
    /// start dot stays visible under it.
    pub fn tip_radius(&self) -> usize {
        self.cell_px / 4
    }

    pub fn wall_px(&self) -> usize {
        (self.cell_px / 16).max(2)
    }
}

/// TSP plane-to-image mapping: the layout plane is scaled into
/// `[TSP_OFFSET, TSP_OFFSET + TSP_SPAN)` on both axes.
pub const TSP_OFFSET: usize = 32;
pub const TSP_SPAN: usize = 448;
pub const CITY_RADIUS: usize = 6;
pub const TSP_LINE_WIDTH: usize = 3;

pub fn city_pixel(layout: &CityLayout, idx: usize) -> (usize, usize) {
    let p = layout.cities[idx];
    (
        TSP_OFFSET + p.x as usize * TSP_SPAN / layout.width as usize,
        TSP_OFFSET + p.y as usize * TSP_SPAN / layout.height as usize,
    )
}

/// Sudoku digits: 5×7 glyph, each glyph pixel a `GLYPH_SCALE`-square block.
pub const GLYPH_SCALE: usize = 5;
const THIN_LINE: usize = 1;
const THICK_LINE: usize = 3;

/// Top-left pixel of the glyph box of a Sudoku cell.
pub fn glyph_origin(geom: &GridGeometry, c: Cell) -> (usize, usize) {
    let (x, y) = geom.origin(c);
    (
        x + (geom.cell_px - font::GLYPH_W * GLYPH_SCALE) / 2,
        y + (geom.cell_px - font::GLYPH_H * GLYPH_SCALE) / 2,
    )
}

#[derive(Clone, PartialEq, Eq)]
pub struct RasterImage {
    pixels: Vec<Rgb>,
}

impl std::fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RasterImage({IMAGE_SIZE}x{IMAGE_SIZE})")
    }
}

impl RasterImage {
    pub fn filled(color: PaletteColor) -> Self {
        RasterImage {
            pixels: vec![color.rgb(); IMAGE_SIZE * IMAGE_SIZE],
        }
    }

    pub(crate) fn from_pixels(pixels: Vec<Rgb>) -> Result<Self> {
        if pixels.len() != IMAGE_SIZE * IMAGE_SIZE {
            return Err(Error::input(format!(
                "image must be {IMAGE_SIZE}x{IMAGE_SIZE}, got {} pixels",
                pixels.len()
            )));
        }
        Ok(RasterImage { pixels })
    }

    pub fn width(&self) -> usize {
        IMAGE_SIZE
    }

    pub fn height(&self) -> usize {
        IMAGE_SIZE
    }

    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * IMAGE_SIZE + x]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: Rgb) {
        self.pixels[y * IMAGE_SIZE + x] = rgb;
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn to_png(&self) -> Result<Vec<u8>> {
        encode_png(self)
    }

    /// Fills `[x0, x1) × [y0, y1)`, clipped to the image.
    fn fill_rect(&mut self, x0: isize, y0: isize, x1: isize, y1: isize, color: PaletteColor) {
        let clip = |v: isize| v.clamp(0, IMAGE_SIZE as isize) as usize;
        let (x0, x1, y0, y1) = (clip(x0), clip(x1), clip(y0), clip(y1));
        let rgb = color.rgb();
        for y in y0..y1 {
            self.pixels[y * IMAGE_SIZE + x0..y * IMAGE_SIZE + x1].fill(rgb);
        }
    }

    fn disc(&mut self, cx: usize, cy: usize, r: usize, color: PaletteColor) {
        let (cx, cy, r) = (cx as isize, cy as isize, r as isize);
        let rgb = color.rgb();
        for y in (cy - r).max(0)..=(cy + r).min(IMAGE_SIZE as isize - 1) {
            for x in (cx - r).max(0)..=(cx + r).min(IMAGE_SIZE as isize - 1) {
                if (x - cx).pow(2) + (y - cy).pow(2) <= r * r {
                    self.pixels[y as usize * IMAGE_SIZE + x as usize] = rgb;
                }
            }
        }
    }

    /// Axis-aligned thick segment between two points sharing a row or
    /// column, with square caps of half the width.
    fn axis_line(&mut self, a: (usize, usize), b: (usize, usize), width: usize, color: PaletteColor) {
        let lo = (width / 2) as isize;
        let hi = (width - width / 2) as isize;
        let (x0, x1) = (a.0.min(b.0) as isize, a.0.max(b.0) as isize);
        let (y0, y1) = (a.1.min(b.1) as isize, a.1.max(b.1) as isize);
        self.fill_rect(x0 - lo, y0 - lo, x1 + hi, y1 + hi, color);
    }

    /// Pixels within `width / 2` of the segment `a`–`b`.
    fn segment(&mut self, a: (usize, usize), b: (usize, usize), width: usize, color: PaletteColor) {
        let half = width as f64 / 2.0;
        let (ax, ay, bx, by) = (a.0 as f64, a.1 as f64, b.0 as f64, b.1 as f64);
        let pad = half.ceil() as isize + 1;
        let xmin = (a.0.min(b.0) as isize - pad).max(0);
        let xmax = (a.0.max(b.0) as isize + pad).min(IMAGE_SIZE as isize - 1);
        let ymin = (a.1.min(b.1) as isize - pad).max(0);
        let ymax = (a.1.max(b.1) as isize + pad).min(IMAGE_SIZE as isize - 1);
        let rgb = color.rgb();
        for y in ymin..=ymax {
            for x in xmin..=xmax {
                if point_segment_distance(x as f64, y as f64, ax, ay, bx, by) <= half {
                    self.pixels[y as usize * IMAGE_SIZE + x as usize] = rgb;
                }
            }
        }
    }
}

pub(crate) fn point_segment_distance(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (ax + t * dx, ay + t * dy);
    (px - qx).hypot(py - qy)
}

fn draw_path_overlay(img: &mut RasterImage, geom: &GridGeometry, start: Cell, goal: Cell, prefix: &[Cell]) {
    img.disc(geom.center(start).0, geom.center(start).1, geom.endpoint_radius(), palette::START_YELLOW);
    img.disc(geom.center(goal).0, geom.center(goal).1, geom.endpoint_radius(), palette::GOAL_BLUE);
    for w in prefix.windows(2) {
        img.axis_line(geom.center(w[0]), geom.center(w[1]), geom.path_width(), palette::PATH_RED);
    }
    if let Some(&tip) = prefix.last() {
        let (x, y) = geom.center(tip);
        img.disc(x, y, geom.tip_radius(), palette::CURRENT_GREEN);
    }
}

/// Walls on every corridor-absent cell side, endpoints, and the path prefix.
/// An empty prefix renders the unsolved puzzle.
pub fn render_maze_state(maze: &Maze, prefix: &[Cell]) -> Result<RasterImage> {
    let n = maze.n();
    let geom = GridGeometry::for_grid(n)?;
    let mut img = RasterImage::filled(palette::BACKGROUND);
    let t = geom.wall_px() as isize;
    let (lo, hi) = (t / 2, t - t / 2);
    let cell = geom.cell_px as isize;
    for idx in 0..n * n {
        let c = Cell::from_index(idx, n);
        let (x, y) = geom.origin(c);
        let (x, y) = (x as isize, y as isize);
        for d in Direction::ALL {
            if maze.grid.has_passage(c, d) {
                continue;
            }
            match d {
                Direction::Up => img.fill_rect(x - lo, y - lo, x + cell + hi, y + hi, palette::WALL),
                Direction::Down => {
                    img.fill_rect(x - lo, y + cell - lo, x + cell + hi, y + cell + hi, palette::WALL)
                }
                Direction::Left => img.fill_rect(x - lo, y - lo, x + hi, y + cell + hi, palette::WALL),
                Direction::Right => {
                    img.fill_rect(x + cell - lo, y - lo, x + cell + hi, y + cell + hi, palette::WALL)
                }
            }
        }
    }
    draw_path_overlay(&mut img, &geom, maze.start, maze.goal, prefix);
    Ok(img)
}

/// Safe tiles light, holes dark, 1px grid lines, then the path overlay.
pub fn render_vsp_state(map: &HazardMap, prefix: &[Cell]) -> Result<RasterImage> {
    let n = map.n();
    let geom = GridGeometry::for_grid(n)?;
    let mut img = RasterImage::filled(palette::BACKGROUND);
    let cell = geom.cell_px as isize;
    for idx in 0..n * n {
        let c = Cell::from_index(idx, n);
        let (x, y) = geom.origin(c);
        let color = match map.tile(c) {
            Tile::Safe => palette::SAFE_LIGHT,
            Tile::Hole => palette::HOLE_DARK,
        };
        img.fill_rect(x as isize, y as isize, x as isize + cell, y as isize + cell, color);
    }
    let (m, span) = (geom.margin as isize, (n * geom.cell_px) as isize);
    for k in 0..=n as isize {
        let p = m + k * cell;
        img.fill_rect(p, m, p + 1, m + span + 1, palette::WALL);
        img.fill_rect(m, p, m + span + 1, p + 1, palette::WALL);
    }
    draw_path_overlay(&mut img, &geom, map.start, map.goal, prefix);
    Ok(img)
}

/// Red segments between consecutive visited cities (closed once every city
/// is visited), city discs on top with city 0 in yellow, and a green dot on
/// the current end. An empty prefix renders only the cities.
pub fn render_tsp_state(layout: &CityLayout, prefix: &[usize]) -> Result<RasterImage> {
    if !prefix.is_empty() {
        crate::tsp::check_partial_order(prefix, layout.len())?;
    }
    let mut img = RasterImage::filled(palette::BACKGROUND);
    for w in prefix.windows(2) {
        img.segment(city_pixel(layout, w[0]), city_pixel(layout, w[1]), TSP_LINE_WIDTH, palette::PATH_RED);
    }
    let closed = prefix.len() == layout.len() && prefix.len() > 2;
    if closed {
        img.segment(
            city_pixel(layout, *prefix.last().unwrap()),
            city_pixel(layout, prefix[0]),
            TSP_LINE_WIDTH,
            palette::PATH_RED,
        );
    }
    for i in 0..layout.len() {
        let (x, y) = city_pixel(layout, i);
        let color = if i == 0 { palette::START_YELLOW } else { palette::WALL };
        img.disc(x, y, CITY_RADIUS, color);
    }
    if let Some(&last) = prefix.last() {
        let tip = if closed { prefix[0] } else { last };
        let (x, y) = city_pixel(layout, tip);
        img.disc(x, y, CITY_RADIUS, palette::CURRENT_GREEN);
    }
    Ok(img)
}

/// 9×9 board with thick block borders; clues black, filled digits red.
pub fn render_sudoku_state(puzzle: &SudokuGrid, fills: &[(Cell, u8)]) -> Result<RasterImage> {
    let geom = GridGeometry::for_grid(sudoku::SIZE)?;
    let mut img = RasterImage::filled(palette::BACKGROUND);
    let (m, cell) = (geom.margin as isize, geom.cell_px as isize);
    let span = 9 * cell;
    for k in 0..=9isize {
        let width = if k % 3 == 0 { THICK_LINE } else { THIN_LINE } as isize;
        let p = m + k * cell - width / 2;
        img.fill_rect(p, m - 1, p + width, m + span + 2, palette::WALL);
        img.fill_rect(m - 1, p, m + span + 2, p + width, palette::WALL);
    }
    for idx in 0..sudoku::CELLS {
        let c = Cell::from_index(idx, sudoku::SIZE);
        let v = puzzle.get(c);
        if v != 0 {
            draw_glyph(&mut img, &geom, c, v, palette::CLUE_BLACK);
        }
    }
    for &(c, v) in fills {
        if !c.in_bounds(sudoku::SIZE) || !(1..=9).contains(&v) {
            return Err(Error::input(format!("bad fill {c}={v}")));
        }
        if puzzle.get(c) != 0 {
            return Err(Error::input(format!("fill {c} overwrites a clue")));
        }
        draw_glyph(&mut img, &geom, c, v, palette::FILL_RED);
    }
    Ok(img)
}

fn draw_glyph(img: &mut RasterImage, geom: &GridGeometry, c: Cell, digit: u8, color: PaletteColor) {
    let (gx0, gy0) = glyph_origin(geom, c);
    for gy in 0..font::GLYPH_H {
        for gx in 0..font::GLYPH_W {
            if font::glyph_bit(digit, gx, gy) {
                let x = (gx0 + gx * GLYPH_SCALE) as isize;
                let y = (gy0 + gy * GLYPH_SCALE) as isize;
                img.fill_rect(x, y, x + GLYPH_SCALE as isize, y + GLYPH_SCALE as isize, color);
            }
        }
    }
}

/// Renders one trajectory state of `input`.
pub fn render_state(input: &TaskInput, state: &StatePayload) -> Result<RasterImage> {
    match (input, state) {
        (TaskInput::Maze(m), StatePayload::Path(p)) => render_maze_state(m, p),
        (TaskInput::Vsp(v), StatePayload::Path(p)) => render_vsp_state(v, p),
        (TaskInput::Tsp(l), StatePayload::Tour(o)) => render_tsp_state(l, o),
        (TaskInput::Sudoku(g), StatePayload::Fill(f)) => render_sudoku_state(g, f),
        _ => Err(Error::input(format!("state does not match a {} puzzle", input.kind()))),
    }
}

/// The unsolved puzzle.
pub fn render_input(input: &TaskInput) -> Result<RasterImage> {
    match input {
        TaskInput::Maze(m) => render_maze_state(m, &[]),
        TaskInput::Vsp(v) => render_vsp_state(v, &[]),
        TaskInput::Tsp(l) => render_tsp_state(l, &[]),
        TaskInput::Sudoku(g) => render_sudoku_state(g, &[]),
    }
}

pub fn render_trajectory(input: &TaskInput, trajectory: &Trajectory) -> Result<Vec<RasterImage>> {
    trajectory.states.iter().map(|s| render_state(input, s)).collect()
}

//! FrozenLake-style hazard maps and safe shortest paths (Dijkstra).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{Cell, Direction, GridPath};
use crate::trajectory::{path_trajectory, TaskKind, Trajectory};

pub const DEFAULT_P_HOLE: f64 = 0.2;
pub const DEFAULT_MAX_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tile {
    Safe,
    Hole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HazardMap {
    n: usize,
    tiles: Vec<Tile>,
    pub start: Cell,
    pub goal: Cell,
}

impl HazardMap {
    /// Builds a map and checks every invariant, including that a safe path
    /// from start to goal exists.
    pub fn new(n: usize, tiles: Vec<Tile>, start: Cell, goal: Cell) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("map dimension {n} < 2")));
        }
        if tiles.len() != n * n {
            return Err(Error::input(format!("expected {} tiles, got {}", n * n, tiles.len())));
        }
        let map = HazardMap {
            n,
            tiles,
            start,
            goal,
        };
        for (name, c) in [("start", start), ("goal", goal)] {
            if !c.in_bounds(n) {
                return Err(Error::input(format!("{name} {c} out of bounds")));
            }
            if !map.is_safe(c) {
                return Err(Error::input(format!("{name} {c} is a hole")));
            }
        }
        if start == goal {
            return Err(Error::input("start equals goal"));
        }
        if !map.has_safe_path() {
            return Err(Error::input("no safe path from start to goal"));
        }
        Ok(map)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tile(&self, c: Cell) -> Tile {
        self.tiles[c.index(self.n)]
    }

    pub fn is_safe(&self, c: Cell) -> bool {
        c.in_bounds(self.n) && self.tile(c) == Tile::Safe
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    /// Row-major `S`/`H` string.
    pub fn tile_string(&self) -> String {
        tiles_to_string(&self.tiles)
    }

    fn safe_neighbors(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| c.step(d, self.n))
            .filter(move |&nb| self.tile(nb) == Tile::Safe)
    }

    fn has_safe_path(&self) -> bool {
        reachable(self.n, &self.tiles, self.start, self.goal)
    }

    /// Walk starts at `start`, stays in bounds and never steps on a hole.
    pub fn check_prefix(&self, path: &GridPath) -> Result<()> {
        if path.start() != self.start {
            return Err(Error::input(format!(
                "path starts at {} instead of {}",
                path.start(),
                self.start
            )));
        }
        if let Some(c) = path.cells().iter().find(|&&c| !self.is_safe(c)) {
            return Err(Error::input(format!("path steps on hole {c}")));
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

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tile::Safe => "S",
            Tile::Hole => "H",
        })
    }
}

pub fn tiles_to_string(tiles: &[Tile]) -> String {
    tiles.iter().map(ToString::to_string).collect()
}

pub fn parse_tiles(s: &str) -> Result<Vec<Tile>> {
    s.trim()
        .chars()
        .map(|ch| match ch {
            'S' => Ok(Tile::Safe),
            'H' => Ok(Tile::Hole),
            other => Err(Error::input(format!("bad tile character `{other}`"))),
        })
        .collect()
}

impl FromStr for Tile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" => Ok(Tile::Safe),
            "H" => Ok(Tile::Hole),
            other => Err(Error::input(format!("bad tile `{other}`"))),
        }
    }
}

fn reachable(n: usize, tiles: &[Tile], from: Cell, to: Cell) -> bool {
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([from]);
    seen[from.index(n)] = true;
    while let Some(c) = queue.pop_front() {
        if c == to {
            return true;
        }
        for d in Direction::ALL {
            if let Some(nb) = c.step(d, n) {
                let i = nb.index(n);
                if !seen[i] && tiles[i] == Tile::Safe {
                    seen[i] = true;
                    queue.push_back(nb);
                }
            }
        }
    }
    false
}

/// Bernoulli(`p_hole`) tiles, start and goal drawn uniformly from the safe
/// tiles without replacement; the whole map is redrawn until a safe path
/// exists.
pub fn generate_map<R: Rng + ?Sized>(
    n: usize,
    p_hole: f64,
    rng: &mut R,
    max_resamples: usize,
) -> Result<HazardMap> {
    if n < 2 {
        return Err(Error::input(format!("map dimension {n} < 2")));
    }
    if !(0.0..1.0).contains(&p_hole) {
        return Err(Error::input(format!("p_hole {p_hole} outside [0, 1)")));
    }
    for _ in 0..max_resamples.max(1) {
        let tiles: Vec<Tile> = (0..n * n)
            .map(|_| if rng.gen_bool(p_hole) { Tile::Hole } else { Tile::Safe })
            .collect();
        let safe: Vec<usize> = (0..n * n).filter(|&i| tiles[i] == Tile::Safe).collect();
        if safe.len() < 2 {
            continue;
        }
        let s = rng.gen_range(0..safe.len());
        let mut g = rng.gen_range(0..safe.len() - 1);
        if g >= s {
            g += 1;
        }
        let (start, goal) = (Cell::from_index(safe[s], n), Cell::from_index(safe[g], n));
        if reachable(n, &tiles, start, goal) {
            return Ok(HazardMap {
                n,
                tiles,
                start,
                goal,
            });
        }
    }
    Err(Error::MapInfeasible {
        attempts: max_resamples.max(1),
    })
}

/// Unit-weight Dijkstra over safe tiles with relaxation
/// `d(v) = min(d(v), d(u) + w(u, v))`. Neighbours expand U, D, L, R and equal
/// keys pop in insertion order.
pub fn dijkstra_safe_path(map: &HazardMap) -> Result<GridPath> {
    const W: u64 = 1;
    let n = map.n;
    let mut dist = vec![u64::MAX; n * n];
    let mut parent: Vec<Option<Cell>> = vec![None; n * n];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    dist[map.start.index(n)] = 0;
    heap.push(Reverse((0u64, seq, map.start.index(n))));
    while let Some(Reverse((d, _, idx))) = heap.pop() {
        if d > dist[idx] {
            continue;
        }
        let u = Cell::from_index(idx, n);
        if u == map.goal {
            break;
        }
        for v in map.safe_neighbors(u) {
            let vi = v.index(n);
            let cand = d + W;
            if cand < dist[vi] {
                dist[vi] = cand;
                parent[vi] = Some(u);
                seq += 1;
                heap.push(Reverse((cand, seq, vi)));
            }
        }
    }
    if dist[map.goal.index(n)] == u64::MAX {
        return Err(Error::Internal(format!(
            "goal {} unreachable over safe tiles",
            map.goal
        )));
    }
    let mut cells = vec![map.goal];
    let mut cur = map.goal;
    while let Some(p) = parent[cur.index(n)] {
        cells.push(p);
        cur = p;
    }
    cells.reverse();
    GridPath::from_cells(cells)
}

pub fn vsp_trajectory(map: &HazardMap, path: &GridPath, stride: usize) -> Result<Trajectory> {
    map.check_path(path)?;
    path_trajectory(TaskKind::Vsp, path, stride)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VspInstance {
    pub map: HazardMap,
    pub path: GridPath,
}

pub fn generate_vsp<R: Rng + ?Sized>(
    n: usize,
    p_hole: f64,
    rng: &mut R,
    max_resamples: usize,
) -> Result<VspInstance> {
    let map = generate_map(n, p_hole, rng, max_resamples)?;
    let path = dijkstra_safe_path(&map)?;
    Ok(VspInstance { map, path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    fn flood_reaches(map: &HazardMap) -> bool {
        let n = map.n();
        let mut seen = vec![map.start];
        let mut stack = vec![map.start];
        while let Some(c) = stack.pop() {
            for nb in crate::grid::neighbors(c, n).unwrap() {
                if map.is_safe(nb) && !seen.contains(&nb) {
                    seen.push(nb);
                    stack.push(nb);
                }
            }
        }
        seen.contains(&map.goal)
    }

    /// Shortest safe walk length by exhaustive simple-path enumeration.
    fn enumerate_shortest(map: &HazardMap) -> usize {
        fn go(map: &HazardMap, cur: Cell, seen: &mut Vec<Cell>, best: &mut usize) {
            if cur == map.goal {
                *best = (*best).min(seen.len());
                return;
            }
            for nb in crate::grid::neighbors(cur, map.n()).unwrap() {
                if map.is_safe(nb) && !seen.contains(&nb) {
                    seen.push(nb);
                    go(map, nb, seen, best);
                    seen.pop();
                }
            }
        }
        let mut best = usize::MAX;
        go(map, map.start, &mut vec![map.start], &mut best);
        best
    }

    #[test]
    fn no_holes_when_p_zero() {
        let m = generate_map(6, 0.0, &mut rng_from_seed(1), 10).unwrap();
        assert!(m.tiles().iter().all(|&t| t == Tile::Safe));
        assert_ne!(m.start, m.goal);
    }

    #[test]
    fn generated_maps_are_feasible() {
        let mut rng = rng_from_seed(2);
        for _ in 0..200 {
            let m = generate_map(8, 0.2, &mut rng, 1000).unwrap();
            assert!(flood_reaches(&m));
            assert!(m.is_safe(m.start) && m.is_safe(m.goal));
        }
    }

    #[test]
    fn dense_holes_are_infeasible() {
        let err = generate_map(8, 0.95, &mut rng_from_seed(3), 5).unwrap_err();
        assert!(matches!(err, Error::MapInfeasible { attempts: 5 }));
        assert!(generate_map(8, 1.0, &mut rng_from_seed(3), 5).is_err());
    }

    #[test]
    fn straight_line_without_holes() {
        let map = HazardMap::new(4, vec![Tile::Safe; 16], Cell::new(0, 0), Cell::new(0, 3)).unwrap();
        let p = dijkstra_safe_path(&map).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.moves_text(), "R,R,R");
    }

    #[test]
    fn single_hole_forces_detour() {
        // S S S
        // S H S   start (1,0) -> goal (1,2), Manhattan 2, detour 4
        // S S S
        let tiles = parse_tiles("SSSSHSSSS").unwrap();
        let map = HazardMap::new(3, tiles, Cell::new(1, 0), Cell::new(1, 2)).unwrap();
        let p = dijkstra_safe_path(&map).unwrap();
        assert_eq!(p.moves().len(), map.start.manhattan(map.goal) + 2);
        assert_eq!(p.len(), enumerate_shortest(&map));
        // U before D in the expansion order
        assert_eq!(p.moves_text(), "U,R,R,D");
    }

    #[test]
    fn dijkstra_matches_enumeration() {
        let mut rng = rng_from_seed(4);
        for n in 3..=5 {
            for _ in 0..30 {
                let inst = generate_vsp(n, 0.25, &mut rng, 1000).unwrap();
                assert_eq!(inst.path.len(), enumerate_shortest(&inst.map));
                assert!(inst.path.cells().iter().all(|&c| inst.map.is_safe(c)));
            }
        }
    }

    #[test]
    fn map_determinism() {
        let a = generate_map(7, 0.3, &mut rng_from_seed(9), 100).unwrap();
        let b = generate_map(7, 0.3, &mut rng_from_seed(9), 100).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tile_string(), b.tile_string());
    }

    #[test]
    fn new_rejects_bad_maps() {
        let tiles = parse_tiles("SHHS").unwrap();
        assert!(HazardMap::new(2, tiles.clone(), Cell::new(0, 0), Cell::new(1, 1)).is_err());
        assert!(HazardMap::new(2, tiles, Cell::new(0, 1), Cell::new(1, 1)).is_err());
        assert!(parse_tiles("SX").is_err());
    }

    #[test]
    fn trajectory_text() {
        let map = HazardMap::new(3, vec![Tile::Safe; 9], Cell::new(0, 0), Cell::new(2, 1)).unwrap();
        let path = GridPath::from_cells(vec![
            Cell::new(0, 0),
            Cell::new(1, 0),
            Cell::new(2, 0),
            Cell::new(2, 1),
        ])
        .unwrap();
        let t = vsp_trajectory(&map, &path, 1).unwrap();
        assert_eq!(t.reasoning_text, "D,D,R");
        assert_eq!(t.states.len(), 4);
        let short = GridPath::from_cells(vec![Cell::new(0, 0), Cell::new(0, 1)]).unwrap();
        let t = vsp_trajectory(
            &HazardMap::new(3, vec![Tile::Safe; 9], Cell::new(0, 0), Cell::new(0, 1)).unwrap(),
            &short,
            1,
        )
        .unwrap();
        assert_eq!(t.states.len(), 2);
    }
}

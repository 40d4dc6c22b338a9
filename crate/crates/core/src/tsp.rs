//! Euclidean TSP: city sampling and exact Held-Karp tours.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{StatePayload, TaskKind, Trajectory};

pub const MIN_CITIES: usize = 3;
/// Largest instance the exact solver accepts (2^19 * 19 table entries).
pub const MAX_CITIES: usize = 20;

/// Default plane size in pixels; the renderer offsets it into the image.
pub const DEFAULT_PLANE: u32 = 448;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl From<[u32; 2]> for Point {
    fn from([x, y]: [u32; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [u32; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub fn dist(self, other: Point) -> f64 {
        let dx = self.x as f64 - other.x as f64;
        let dy = self.y as f64 - other.y as f64;
        dx.hypot(dy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CityLayout {
    pub width: u32,
    pub height: u32,
    pub cities: Vec<Point>,
}

impl CityLayout {
    pub fn new(width: u32, height: u32, cities: Vec<Point>) -> Result<Self> {
        if let Some(p) = cities.iter().find(|p| p.x >= width || p.y >= height) {
            return Err(Error::input(format!(
                "city ({},{}) outside {width}x{height} plane",
                p.x, p.y
            )));
        }
        let distinct: HashSet<_> = cities.iter().collect();
        if distinct.len() != cities.len() {
            return Err(Error::input("duplicate city coordinates"));
        }
        Ok(CityLayout {
            width,
            height,
            cities,
        })
    }

    pub fn len(&self) -> usize {
        self.cities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cities.is_empty()
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.cities[a].dist(self.cities[b])
    }

    /// Closed length of `order`, including the edge back to `order[0]`.
    pub fn tour_length(&self, order: &[usize]) -> f64 {
        if order.len() < 2 {
            return 0.0;
        }
        let open: f64 = order.windows(2).map(|w| self.dist(w[0], w[1])).sum();
        open + self.dist(*order.last().unwrap(), order[0])
    }

    /// Checks that `order` is a permutation of all cities starting at 0.
    pub fn check_permutation(&self, order: &[usize]) -> Result<()> {
        check_partial_order(order, self.len())?;
        if order.len() != self.len() {
            return Err(Error::input(format!(
                "tour visits {} of {} cities",
                order.len(),
                self.len()
            )));
        }
        Ok(())
    }
}

/// `order` is a duplicate-free prefix of a tour anchored at city 0.
pub(crate) fn check_partial_order(order: &[usize], n: usize) -> Result<()> {
    if order.first() != Some(&0) {
        return Err(Error::input("tour must start at city 0"));
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n {
            return Err(Error::input(format!("city index {c} out of range (n = {n})")));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::input(format!("city {c} visited twice")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: f64,
}

/// Rotates a cyclic order to start at 0 and picks the direction whose
/// second element is the smaller index.
pub fn canonicalize(order: &[usize]) -> Vec<usize> {
    let Some(pos) = order.iter().position(|&c| c == 0) else {
        return order.to_vec();
    };
    let mut rotated: Vec<usize> = order[pos..].iter().chain(&order[..pos]).copied().collect();
    if rotated.len() > 2 && rotated[1] > rotated[rotated.len() - 1] {
        rotated[1..].reverse();
    }
    rotated
}

/// Uniform integer points on a `width`×`height` plane, duplicates redrawn.
pub fn sample_cities<R: Rng + ?Sized>(
    n_c: usize,
    width: u32,
    height: u32,
    rng: &mut R,
) -> Result<CityLayout> {
    if n_c < MIN_CITIES {
        return Err(Error::input(format!("need at least {MIN_CITIES} cities, got {n_c}")));
    }
    if (width as u64) * (height as u64) < n_c as u64 {
        return Err(Error::input(format!(
            "{n_c} distinct cities do not fit on a {width}x{height} plane"
        )));
    }
    let mut seen = HashSet::with_capacity(n_c);
    let mut cities = Vec::with_capacity(n_c);
    while cities.len() < n_c {
        let p = Point {
            x: rng.gen_range(0..width),
            y: rng.gen_range(0..height),
        };
        if seen.insert(p) {
            cities.push(p);
        }
    }
    CityLayout::new(width, height, cities)
}

/// Exact optimal closed tour by Held-Karp over subsets of cities 1..n,
/// anchored at city 0.
///
/// `dp[mask][i]` is the shortest path that leaves city 0, visits exactly the
/// cities in `mask`, and ends at `i`:
/// `dp[mask][i] = min_{j in mask, j != i} dp[mask \ {i}][j] + dist(j, i)`.
/// Among optimal tours (relative tolerance 1e-10) the lexicographically
/// smallest order is returned, which is also canonical.
pub fn heldkarp_solve(layout: &CityLayout) -> Result<Tour> {
    let n = layout.len();
    if !(MIN_CITIES..=MAX_CITIES).contains(&n) {
        return Err(Error::input(format!(
            "Held-Karp supports {MIN_CITIES}..={MAX_CITIES} cities, got {n}"
        )));
    }
    let m = n - 1;
    let full: usize = (1 << m) - 1;
    let dist: Vec<f64> = (0..n * n).map(|k| layout.dist(k / n, k % n)).collect();
    let d = |a: usize, b: usize| dist[a * n + b];

    // bit k of a mask stands for city k + 1
    let mut dp = vec![f64::INFINITY; (full + 1) * m];
    for mask in 1..=full {
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = mask ^ (1 << i);
            let best = if prev == 0 {
                d(0, i + 1)
            } else {
                let mut best = f64::INFINITY;
                let mut js = prev;
                while js != 0 {
                    let j = js.trailing_zeros() as usize;
                    js &= js - 1;
                    let cand = dp[prev * m + j] + d(j + 1, i + 1);
                    if cand < best {
                        best = cand;
                    }
                }
                best
            };
            dp[mask * m + i] = best;
        }
    }
    let optimum = (0..m)
        .map(|i| dp[full * m + i] + d(i + 1, 0))
        .fold(f64::INFINITY, f64::min);

    // Forward reconstruction choosing the smallest feasible next city. The
    // best completion from j through the unvisited set R back to 0 is
    // dp[R][j] by symmetry of the metric.
    let tol = 1e-10 * optimum.max(1.0);
    let mut order = Vec::with_capacity(n);
    order.push(0);
    let mut visited = 0usize;
    let mut cost = 0.0;
    let mut cur = 0usize;
    while visited != full {
        let remaining = full ^ visited;
        let next = (0..m)
            .filter(|&j| remaining & (1 << j) != 0)
            .find(|&j| cost + d(cur, j + 1) + dp[remaining * m + j] <= optimum + tol)
            .ok_or_else(|| Error::Internal("Held-Karp reconstruction found no successor".into()))?;
        cost += d(cur, next + 1);
        cur = next + 1;
        visited |= 1 << next;
        order.push(cur);
    }
    let length = layout.tour_length(&order);
    Ok(Tour { order, length })
}

/// States are the tour prefixes `order[0..k]`, `k = 1..=n`; reasoning text
/// lists the indices followed by `close`.
pub fn tsp_trajectory(layout: &CityLayout, tour: &Tour) -> Result<Trajectory> {
    layout.check_permutation(&tour.order)?;
    let states = (1..=tour.order.len())
        .map(|k| StatePayload::Tour(tour.order[..k].to_vec()))
        .collect();
    Ok(Trajectory {
        kind: TaskKind::Tsp,
        stride: 1,
        states,
        reasoning_text: format_tour_text(&tour.order),
    })
}

pub fn format_tour_text(order: &[usize]) -> String {
    let mut out: Vec<String> = order.iter().map(usize::to_string).collect();
    out.push("close".into());
    out.join(",")
}

/// Parses `"0,3,1,2,close"` (the trailing `close` is optional).
pub fn parse_tour_text(text: &str) -> Result<Vec<usize>> {
    let mut tokens: Vec<&str> = text.split(',').map(str::trim).collect();
    if tokens.last() == Some(&"close") {
        tokens.pop();
    }
    tokens
        .into_iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::input(format!("bad city token `{t}`")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    pub layout: CityLayout,
    pub tour: Tour,
}

pub fn generate_tsp<R: Rng + ?Sized>(
    n_c: usize,
    width: u32,
    height: u32,
    rng: &mut R,
) -> Result<TspInstance> {
    let layout = sample_cities(n_c, width, height, rng)?;
    let tour = heldkarp_solve(&layout)?;
    Ok(TspInstance { layout, tour })
}

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so criteria execute in order on one thread and
//! the process peak-memory reading stays meaningful. Pass criterion numbers
//! as arguments to run a subset, e.g. `cargo test --test acceptance -- 3 6`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use reasoning_forge::dataset::{
    dataset_stats, generate_dataset, generate_instance, plan, preset_scales, regenerate_record, GenConfig,
    ManifestRecord, PlannedInstance, MANIFEST_NAME,
};
use reasoning_forge::decode::{decode_maze_path, decode_sudoku, decode_tour, decode_vsp_path};
use reasoning_forge::exec::Execution;
use reasoning_forge::flowmatch::{euler_sample, interpolate, target_velocity, SampleVec};
use reasoning_forge::grid::Cell;
use reasoning_forge::instance::TaskInstance;
use reasoning_forge::metrics::{evaluate, ground_truth_predictions, path_repetition, EvalOptions};
use reasoning_forge::render::{decode_png, encode_png, render_state, RasterImage};
use reasoning_forge::seed::rng_from_seed;
use reasoning_forge::trajectory::StatePayload;
use reasoning_forge::tsp::{heldkarp_solve, sample_cities, CityLayout};
use reasoning_forge::{maze, sudoku, vsp, TaskKind};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type DeskRun = (BTreeMap<String, Vec<u8>>, Duration, Vec<ManifestRecord>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("solver-oracle equivalence", c1_solver_oracles),
        ("structural invariants", c2_structural),
        ("round-trip rendering", c3_round_trip),
        ("metric identity baseline", c4_metric_identity),
        ("determinism", c5_determinism),
        ("performance floor", c6_performance),
        ("flow-matching kernel", c7_flowmatch),
        ("dataset composition preset", c8_composition),
    ];
    let only: HashSet<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !only.is_empty() && !only.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {k} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn euclid(layout: &CityLayout, a: usize, b: usize) -> f64 {
    let (p, q) = (layout.cities[a], layout.cities[b]);
    (p.x as f64 - q.x as f64).hypot(p.y as f64 - q.y as f64)
}

/// Minimum closed-tour length over all permutations fixing city 0.
fn brute_force_tsp(layout: &CityLayout) -> f64 {
    fn rec(layout: &CityLayout, path: &mut Vec<usize>, used: &mut [bool], acc: f64, best: &mut f64) {
        let n = used.len();
        let last = *path.last().unwrap();
        if path.len() == n {
            *best = best.min(acc + euclid(layout, last, 0));
            return;
        }
        for c in 1..n {
            if !used[c] {
                used[c] = true;
                path.push(c);
                rec(layout, path, used, acc + euclid(layout, last, c), best);
                path.pop();
                used[c] = false;
            }
        }
    }
    let n = layout.len();
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = f64::INFINITY;
    rec(layout, &mut vec![0], &mut used, 0.0, &mut best);
    best
}

fn grid_neighbors(c: Cell, n: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    if c.row > 0 {
        out.push(Cell::new(c.row - 1, c.col));
    }
    if c.row + 1 < n {
        out.push(Cell::new(c.row + 1, c.col));
    }
    if c.col > 0 {
        out.push(Cell::new(c.row, c.col - 1));
    }
    if c.col + 1 < n {
        out.push(Cell::new(c.row, c.col + 1));
    }
    out
}

/// Every simple start→goal path over the corridor graph.
fn all_simple_paths(m: &maze::Maze) -> Vec<Vec<Cell>> {
    let mut adj: BTreeMap<Cell, Vec<Cell>> = BTreeMap::new();
    for (a, b) in m.grid.corridors() {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    fn rec(adj: &BTreeMap<Cell, Vec<Cell>>, goal: Cell, path: &mut Vec<Cell>, seen: &mut HashSet<Cell>, out: &mut Vec<Vec<Cell>>) {
        let cur = *path.last().unwrap();
        if cur == goal {
            out.push(path.clone());
            return;
        }
        for &next in adj.get(&cur).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(next) {
                path.push(next);
                rec(adj, goal, path, seen, out);
                path.pop();
                seen.remove(&next);
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::from([m.start]);
    rec(&adj, m.goal, &mut vec![m.start], &mut seen, &mut out);
    out
}

/// Shortest safe-path length in cells, by plain BFS.
fn bfs_safe_len(map: &vsp::HazardMap) -> Option<usize> {
    let n = map.n();
    let mut dist: BTreeMap<Cell, usize> = BTreeMap::from([(map.start, 1)]);
    let mut q = VecDeque::from([map.start]);
    while let Some(c) = q.pop_front() {
        if c == map.goal {
            return Some(dist[&c]);
        }
        for nb in grid_neighbors(c, n) {
            if map.tile(nb) == vsp::Tile::Safe && !dist.contains_key(&nb) {
                dist.insert(nb, dist[&c] + 1);
                q.push_back(nb);
            }
        }
    }
    None
}

fn c1_solver_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(0xacce_0001);
    for n in 5..=9 {
        for i in 0..100 {
            let layout = sample_cities(n, 448, 448, &mut rng).map_err(|e| e.to_string())?;
            let tour = heldkarp_solve(&layout).map_err(|e| e.to_string())?;
            let brute = brute_force_tsp(&layout);
            let own: f64 = (0..n).map(|k| euclid(&layout, tour.order[k], tour.order[(k + 1) % n])).sum();
            ensure!(
                (tour.length - brute).abs() <= 1e-9 * brute && (own - brute).abs() <= 1e-9 * brute,
                "tsp n={n} #{i}: held-karp {} (recomputed {own}) vs brute force {brute}",
                tour.length
            );
        }
    }
    for n in [3, 4] {
        for i in 0..200 {
            let inst = maze::generate_maze(n, &mut rng).map_err(|e| e.to_string())?;
            let paths = all_simple_paths(&inst.maze);
            ensure!(paths.len() == 1, "maze n={n} #{i}: {} simple paths", paths.len());
            ensure!(
                paths[0].len() == inst.path.len() && paths[0] == inst.path.cells(),
                "maze n={n} #{i}: bfs length {} vs enumeration {}",
                inst.path.len(),
                paths[0].len()
            );
        }
    }
    for n in 4..=8 {
        for i in 0..300 {
            let inst = vsp::generate_vsp(n, vsp::DEFAULT_P_HOLE, &mut rng, vsp::DEFAULT_MAX_RESAMPLES)
                .map_err(|e| e.to_string())?;
            let oracle = bfs_safe_len(&inst.map);
            ensure!(
                oracle == Some(inst.path.len()),
                "vsp n={n} #{i}: dijkstra {} vs bfs {oracle:?}",
                inst.path.len()
            );
            inst.map.check_path(&inst.path).map_err(|e| format!("vsp n={n} #{i}: {e}"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s, limit 60s");
    Ok(format!("500 tsp, 400 maze, 1500 vsp instances agree with oracles in {secs:.1}s"))
}

/// Independent uniqueness check: plain backtracking with fewest-candidates
/// cell choice, stopping at `cap`.
fn oracle_count(grid: &mut [u8; 81], cap: usize) -> usize {
    let mut best: Option<(usize, Vec<u8>)> = None;
    for i in 0..81 {
        if grid[i] != 0 {
            continue;
        }
        let (r, c) = (i / 9, i % 9);
        let cands: Vec<u8> = (1..=9u8)
            .filter(|&d| {
                (0..9).all(|k| grid[r * 9 + k] != d && grid[k * 9 + c] != d)
                    && (0..9).all(|k| grid[(r / 3 * 3 + k / 3) * 9 + c / 3 * 3 + k % 3] != d)
            })
            .collect();
        if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
            best = Some((i, cands));
        }
    }
    let Some((i, cands)) = best else { return 1 };
    let mut total = 0;
    for d in cands {
        grid[i] = d;
        total += oracle_count(grid, cap - total);
        grid[i] = 0;
        if total >= cap {
            break;
        }
    }
    total
}

fn c2_structural() -> Outcome {
    let mut rng = rng_from_seed(0xacce_0002);
    for n in [8, 16, 32] {
        for i in 0..1000 {
            let g = maze::carve_maze(n, &mut rng).map_err(|e| e.to_string())?;
            let corridors = g.corridors();
            ensure!(corridors.len() == n * n - 1, "maze n={n} #{i}: {} corridors", corridors.len());
            let mut parent: Vec<usize> = (0..n * n).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for (a, b) in corridors {
                ensure!(a.manhattan(b) == 1, "maze n={n} #{i}: corridor {a}-{b} not adjacent");
                let (ra, rb) = (find(&mut parent, a.index(n)), find(&mut parent, b.index(n)));
                ensure!(ra != rb, "maze n={n} #{i}: cycle through {a}-{b}");
                parent[ra] = rb;
            }
            let root = find(&mut parent, 0);
            ensure!((0..n * n).all(|v| find(&mut parent, v) == root), "maze n={n} #{i}: disconnected");
        }
    }
    for clues in [45, 40, 35, 30] {
        for i in 0..200 {
            let inst = sudoku::generate_sudoku(clues, &mut rng, sudoku::DEFAULT_MAX_ATTEMPTS).map_err(|e| e.to_string())?;
            ensure!(inst.puzzle.clue_count() == clues, "sudoku {clues} #{i}: {} clues", inst.puzzle.clue_count());
            let mut cells = *inst.puzzle.cells();
            let oracle = oracle_count(&mut cells, 2);
            let lib = sudoku::count_solutions(&inst.puzzle, 2);
            ensure!(oracle == 1 && lib == 1, "sudoku {clues} #{i}: oracle {oracle}, library {lib} solutions");
        }
    }
    let mut maps = 0;
    for n in preset_scales(TaskKind::Vsp) {
        for i in 0..500 {
            let inst = vsp::generate_vsp(n, vsp::DEFAULT_P_HOLE, &mut rng, vsp::DEFAULT_MAX_RESAMPLES)
                .map_err(|e| e.to_string())?;
            ensure!(bfs_safe_len(&inst.map).is_some(), "vsp n={n} #{i}: no safe path");
            ensure!(
                inst.path.cells().iter().all(|&c| inst.map.tile(c) == vsp::Tile::Safe),
                "vsp n={n} #{i}: path touches a hole"
            );
            maps += 1;
        }
    }
    Ok(format!("3000 mazes are spanning trees, 800 sudokus unique, {maps} vsp maps safe; 0 violations"))
}

fn png_round_trip(img: &RasterImage) -> Result<RasterImage, String> {
    let bytes = encode_png(img).map_err(|e| e.to_string())?;
    let w = u32::from_be_bytes(bytes[16..20].try_into().unwrap());
    let h = u32::from_be_bytes(bytes[20..24].try_into().unwrap());
    ensure!(w == 512 && h == 512, "png is {w}x{h}");
    let back = decode_png(&bytes).map_err(|e| e.to_string())?;
    ensure!(&back == img, "png round trip changed pixels");
    Ok(back)
}

fn c3_round_trip() -> Outcome {
    let cfg = GenConfig::desk(0xacce_0003, "unused");
    let mut count = 0;
    for p in plan(&cfg) {
        let (inst, _, _) = generate_instance(&p, &cfg).map_err(|e| e.to_string())?;
        let input = inst.input();
        let traj = inst.trajectory(1).map_err(|e| e.to_string())?;
        let last = traj.states.last().unwrap();
        let img = png_round_trip(&render_state(&input, last).map_err(|e| e.to_string())?)?;
        let id = p.id();
        match &inst {
            TaskInstance::Maze(m) => {
                let got = decode_maze_path(&img, &m.maze).map_err(|e| format!("{id}: {e}"))?;
                ensure!(got == m.path, "{id}: decoded path differs");
            }
            TaskInstance::Vsp(v) => {
                let got = decode_vsp_path(&img, &v.map).map_err(|e| format!("{id}: {e}"))?;
                ensure!(got == v.path, "{id}: decoded path differs");
            }
            TaskInstance::Tsp(t) => {
                let got = decode_tour(&img, &t.layout).map_err(|e| format!("{id}: {e}"))?;
                ensure!(got == t.tour.order, "{id}: decoded {got:?}, expected {:?}", t.tour.order);
            }
            TaskInstance::Sudoku(s) => {
                let got = decode_sudoku(&img).map_err(|e| format!("{id}: {e}"))?;
                ensure!(got.grid == s.solution, "{id}: decoded grid differs");
                ensure!(got.clues() == s.puzzle, "{id}: clue colors differ");
                let first = render_state(&input, &StatePayload::Fill(vec![])).map_err(|e| e.to_string())?;
                let blank = decode_sudoku(&png_round_trip(&first)?).map_err(|e| format!("{id}: {e}"))?;
                ensure!(blank.grid == s.puzzle, "{id}: decoded puzzle differs");
            }
        }
        count += 1;
    }
    Ok(format!("{count} instances across 18 task scales recovered exactly from 512x512 PNGs"))
}

fn c4_metric_identity() -> Outcome {
    let cfg = GenConfig::desk(0xacce_0004, "unused");
    let records: Vec<ManifestRecord> = plan(&cfg)
        .iter()
        .map(|p| {
            let (inst, seed, nonce) = generate_instance(p, &cfg).map_err(|e| e.to_string())?;
            let traj = inst.trajectory(1).map_err(|e| e.to_string())?;
            Ok(ManifestRecord {
                id: p.id(),
                task_kind: p.kind,
                scale: p.scale,
                seed,
                nonce,
                input_image: String::new(),
                step_images: vec![],
                final_image: String::new(),
                gt_structured: inst.to_record(),
                gt_text: traj.reasoning_text,
                step_count: 0,
            })
        })
        .collect::<Result<_, String>>()?;
    let preds = ground_truth_predictions(&records).map_err(|e| e.to_string())?;
    let report = evaluate(&records, &preds, &EvalOptions::default());
    ensure!(report.cells.len() == 18, "{} report cells", report.cells.len());
    for c in &report.cells {
        ensure!(c.total == 100 && c.accuracy == 100.0, "{} {}: accuracy {}", c.task_kind, c.scale, c.accuracy);
        if matches!(c.task_kind, TaskKind::Maze | TaskKind::Vsp) {
            let rep = c.mean_path_repetition.unwrap_or(f64::NAN);
            ensure!(format!("{rep:.2}") == "100.00", "{} {}: repetition {rep}", c.task_kind, c.scale);
        }
    }
    let gt = [Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 1)];
    let disjoint = [Cell::new(2, 2), Cell::new(2, 1), Cell::new(3, 1)];
    let rep = path_repetition(&disjoint, &gt);
    ensure!(format!("{rep:.2}") == "0.00", "disjoint fixture repetition {rep}");
    let empty = evaluate(&records, &[], &EvalOptions::default());
    ensure!(empty.cells.iter().all(|c| c.accuracy == 0.0), "empty predictions scored above 0");
    Ok("18 cells at 100.0 / 100.00; disjoint fixture 0.00".into())
}

fn hash_tree(root: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = fs::read(&path).map_err(|e| e.to_string())?;
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, Sha256::digest(&bytes).to_vec());
            }
        }
    }
    Ok(out)
}

fn c5_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str, execution: Execution| -> Result<DeskRun, String> {
        let dir = tmp.path().join(name);
        let mut cfg = GenConfig::desk(0xacce_0005, &dir);
        cfg.execution = execution;
        let start = Instant::now();
        let recs = generate_dataset(&cfg).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let hashes = hash_tree(&dir)?;
        Ok((hashes, took, recs))
    };
    let (a, ta, recs) = run("a", Execution::default())?;
    // spot-check regeneration from stored seeds before the tree is removed
    let cfg = GenConfig::desk(0xacce_0005, tmp.path().join("a"));
    let regen = tmp.path().join("regen");
    for r in recs.iter().step_by(recs.len() / 20).take(20) {
        regenerate_record(r, &cfg, &regen).map_err(|e| e.to_string())?;
        for rel in r.step_images.iter().chain([&r.input_image]) {
            let x = fs::read(regen.join(rel)).map_err(|e| e.to_string())?;
            ensure!(Sha256::digest(&x).to_vec() == a[rel], "{}: regenerated {rel} differs", r.id);
        }
    }
    fs::remove_dir_all(tmp.path().join("a")).map_err(|e| e.to_string())?;
    let (b, tb, _) = run("b", Execution::Sequential)?;
    ensure!(a.len() == b.len(), "{} vs {} files", a.len(), b.len());
    ensure!(a.contains_key(MANIFEST_NAME), "no manifest written");
    if let Some(k) = a.keys().find(|k| a.get(*k) != b.get(*k)) {
        return Err(format!("{k} differs between runs"));
    }
    let slowest = ta.max(tb).as_secs_f64();
    ensure!(slowest < 600.0, "a desk-scale run took {slowest:.0}s, limit 600s");
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    Ok(format!(
        "{} files byte-identical (parallel {:.0}s on {threads} thread(s), sequential {:.0}s); 20 records regenerated exactly",
        a.len(),
        ta.as_secs_f64(),
        tb.as_secs_f64()
    ))
}

fn peak_rss_bytes() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn c6_performance() -> Outcome {
    let mut rng = rng_from_seed(0xacce_0006);
    let layout = sample_cities(18, 448, 448, &mut rng).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let tour = heldkarp_solve(&layout).map_err(|e| e.to_string())?;
    let hk = start.elapsed().as_secs_f64();
    ensure!(tour.order.len() == 18, "tour has {} cities", tour.order.len());
    ensure!(hk < 30.0, "held-karp n=18 took {hk:.1}s");
    // process-wide peak, an upper bound on the solver's own footprint
    let peak = peak_rss_bytes().ok_or("cannot read peak memory")?;
    ensure!(peak < 2 << 30, "peak memory {} MiB", peak >> 20);

    let k = 20;
    let start = Instant::now();
    for _ in 0..k {
        sudoku::generate_sudoku(30, &mut rng, sudoku::DEFAULT_MAX_ATTEMPTS).map_err(|e| e.to_string())?;
    }
    let per = start.elapsed().as_secs_f64() / k as f64;
    ensure!(per < 2.0, "sudoku 30 clues averaged {per:.2}s");
    Ok(format!(
        "held-karp n=18 {hk:.2}s, process peak {} MiB; sudoku 30 clues {:.1} ms/instance",
        peak >> 20,
        per * 1e3
    ))
}

fn c7_flowmatch() -> Outcome {
    let mut rng = rng_from_seed(0xacce_0007);
    use rand::Rng;
    let mut draw = |d: usize| SampleVec::new((0..d).map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap();
    for d in [1, 3, 16] {
        let (x0, x1) = (draw(d), draw(d));
        ensure!(interpolate(&x0, &x1, 0.0).unwrap() == x0, "x_0 endpoint not exact (dim {d})");
        ensure!(interpolate(&x0, &x1, 1.0).unwrap() == x1, "x_1 endpoint not exact (dim {d})");
        let u = target_velocity(&x0, &x1).unwrap();
        for t in [0.1, 0.5, 0.9] {
            let h = 1e-6;
            let hi = interpolate(&x0, &x1, t + h).unwrap();
            let lo = interpolate(&x0, &x1, t - h).unwrap();
            for i in 0..d {
                let fd = (hi.values()[i] - lo.values()[i]) / (2.0 * h);
                ensure!((fd - u.values()[i]).abs() <= 1e-6, "finite difference {fd} vs {}", u.values()[i]);
            }
        }
        let field = {
            let u = u.clone();
            move |_: &SampleVec, _: f64| u.clone()
        };
        for steps in [1, 10, 1000] {
            let got = euler_sample(&field, &x1, steps).unwrap();
            let err = got.values().iter().zip(x0.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            ensure!(err <= 1e-12, "constant field, {steps} steps: error {err:e}");
        }
    }
    let x1 = SampleVec::new(vec![1.0]).unwrap();
    let contract = |x: &SampleVec, _: f64| SampleVec::new(x.values().iter().map(|v| -v).collect()).unwrap();
    let err = |steps| (euler_sample(&contract, &x1, steps).unwrap().values()[0] - std::f64::consts::E).abs();
    let mut worst: f64 = 0.0;
    for k in [10, 20, 40, 80, 160, 320] {
        let ratio = err(2 * k) / err(k);
        worst = worst.max(ratio);
        ensure!(ratio <= 0.6, "error ratio {ratio:.3} at {k} -> {} steps", 2 * k);
    }
    let e4 = err(10_000);
    ensure!(e4 < 1e-3, "10^4 steps error {e4:e}");
    Ok(format!("endpoints exact, fd within 1e-6, constant field within 1e-12, worst doubling ratio {worst:.3}"))
}

fn c8_composition() -> Outcome {
    let cfg = GenConfig::paper(0, "unused");
    let planned: Vec<PlannedInstance> = plan(&cfg);
    let stats = dataset_stats(&planned);
    let want = [
        (TaskKind::Maze, 75_000),
        (TaskKind::Sudoku, 40_000),
        (TaskKind::Tsp, 30_000),
        (TaskKind::Vsp, 37_400),
    ];
    for (k, n) in want {
        ensure!(stats.per_task[&k] == n, "{k}: {} planned, expected {n}", stats.per_task[&k]);
    }
    ensure!(stats.total == 182_400, "total {}", stats.total);
    Ok("maze 75000, sudoku 40000, tsp 30000, vsp 37400, total 182400".into())
}

//! Procedural visual-reasoning benchmarks: Maze, TSP, Sudoku and VSP.
//!
//! Each task has a seeded generator, an exact solver, a step-by-step
//! [`Trajectory`](trajectory::Trajectory), a canonical 512×512 renderer and a
//! pixel decoder. [`dataset`] batches generation into a JSONL manifest and
//! [`metrics`] scores predictions against it. [`flowmatch`] holds the small
//! flow-matching numeric kernel.

pub mod dataset;
pub mod decode;
pub mod error;
pub mod exec;
pub mod flowmatch;
pub mod grid;
pub mod instance;
pub mod maze;
pub mod metrics;
pub mod render;
pub mod seed;
pub mod sudoku;
pub mod trajectory;
pub mod tsp;
pub mod vsp;

pub use error::{Error, Result};
pub use exec::Execution;
pub use grid::{Cell, Direction, GridPath};
pub use instance::{PuzzleRecord, Solution, TaskInput, TaskInstance};
pub use seed::{derive_seed, SeedSpec};
pub use trajectory::{TaskKind, Trajectory};

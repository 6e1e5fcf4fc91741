//! Exact branch-and-bound searches with optimality certificates, and a
//! randomized local-search heuristic, for the extremal problems of this
//! crate.

mod grid;
mod heuristic;
pub mod kernels;
pub(crate) mod tri;
mod val;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{is_line_trapezoid_free, LineTriple};
use crate::error::{Error, Result};
use crate::grid_sets::{
    is_bi_skew_corner_free, is_skew_corner_free_grid, is_skew_corner_free_tri, GridSet, TriSet,
};
use crate::groups::{count_zero_sum_triples, is_trapezoid_free, AbelianGroup, GroupTriple};

pub use grid::{max_bi_skew_exact, max_skew_grid_exact};
pub use heuristic::greedy_heuristic;
pub use tri::{max_skew_tri_exact, tri_orbits};
pub use val::{val_group_exact, val_plane_exact, DEFAULT_GROUP_CAP};

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;
pub const DEFAULT_MAX_SECS: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MaxSkewGrid,
    MaxSkewTri,
    MaxBiSkew,
    ValPlane,
    ValGroup,
}

impl Objective {
    pub const ALL: [Objective; 5] = [
        Objective::MaxSkewGrid,
        Objective::MaxSkewTri,
        Objective::MaxBiSkew,
        Objective::ValPlane,
        Objective::ValGroup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxSkewGrid => "max-skew-grid",
            Objective::MaxSkewTri => "max-skew-tri",
            Objective::MaxBiSkew => "max-bi-skew",
            Objective::ValPlane => "val-plane",
            Objective::ValGroup => "val-group",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == key)
            .ok_or_else(|| Error::Precondition(format!("unknown objective `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    #[default]
    None,
    S3,
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Symmetry::None),
            "s3" => Ok(Symmetry::S3),
            _ => Err(Error::Precondition(format!("unknown symmetry `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    /// The search tree was exhausted.
    Optimal,
    /// Produced by a heuristic; no optimality claim.
    LowerBoundOnly,
    /// An exact search hit its node or time budget.
    TimedOut,
}

/// Node and time limits plus the worker count for exact searches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_secs: f64,
    pub workers: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_MAX_NODES,
            max_secs: DEFAULT_MAX_SECS,
            workers: 1,
        }
    }
}

impl Budget {
    pub fn new(max_nodes: u64, max_secs: f64, workers: usize) -> Result<Self> {
        let b = Budget {
            max_nodes,
            max_secs,
            workers,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_nodes == 0 {
            return Err(Error::InvalidBudget("node budget must be positive".into()));
        }
        if !(self.max_secs > 0.0) {
            return Err(Error::InvalidBudget("time budget must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidBudget("need at least one worker".into()));
        }
        Ok(())
    }
}

/// What was searched over: a size parameter or a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Size(u32),
    Group(AbelianGroup),
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Size(n) => write!(f, "n = {n}"),
            Instance::Group(g) => write!(f, "G = {g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Grid(GridSet),
    Tri(TriSet),
    Lines(LineTriple),
    Group(GroupTriple),
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Grid(s) => json!({
                "kind": "grid",
                "n": s.n(),
                "points": s.points().map(|(x, y)| [x, y]).collect::<Vec<_>>(),
            }),
            Witness::Tri(s) => json!({
                "kind": "tri",
                "n": s.n(),
                "points": s.points().map(|(a, b, c)| [a, b, c]).collect::<Vec<_>>(),
            }),
            Witness::Lines(t) => json!({
                "kind": "lines",
                "n": t.n,
                "A": t.a,
                "B": t.b,
                "C": t.c,
            }),
            Witness::Group(t) => {
                let part = |i: usize| -> Vec<Vec<u32>> {
                    t.elems(i).into_iter().map(|e| e.residues).collect()
                };
                json!({
                    "kind": "group",
                    "group": t.group.to_string(),
                    "A": part(0),
                    "B": part(1),
                    "C": part(2),
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub objective: Objective,
    pub instance: Instance,
    pub symmetry: Symmetry,
    pub best_value: u64,
    pub witness: Witness,
    pub status: Status,
    pub nodes: u64,
    pub wall_time: f64,
}

impl SearchResult {
    /// Re-checks the witness with the independent predicates and recomputes
    /// its value.
    pub fn check_witness(&self) -> Result<()> {
        let (ok, value) = match &self.witness {
            Witness::Grid(s) => {
                let ok = match self.objective {
                    Objective::MaxBiSkew => is_bi_skew_corner_free(s),
                    _ => is_skew_corner_free_grid(s),
                };
                (ok, s.len() as u64)
            }
            Witness::Tri(s) => {
                let symmetric = self.symmetry == Symmetry::None
                    || crate::grid_sets::S3.iter().all(|&p| s.permute(p) == *s);
                (is_skew_corner_free_tri(s) && symmetric, s.len() as u64)
            }
            Witness::Lines(t) => (is_line_trapezoid_free(t), t.solution_count() as u64),
            Witness::Group(t) => (is_trapezoid_free(t), count_zero_sum_triples(t)),
        };
        if !ok {
            return Err(Error::Invariant(format!("{} witness fails its predicate", self.objective)));
        }
        if value != self.best_value {
            return Err(Error::Invariant(format!(
                "{} witness has value {value}, reported {}",
                self.objective, self.best_value
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "objective": self.objective.name(),
            "symmetry": self.symmetry,
            "value": self.best_value,
            "status": self.status,
            "witness": self.witness.to_json(),
            "nodes": self.nodes,
            "seconds": self.wall_time,
        });
        match &self.instance {
            Instance::Size(n) => v["n"] = json!(n),
            Instance::Group(g) => v["group"] = json!(g.to_string()),
        }
        v
    }
}

#[cfg(not(target_arch = "wasm32"))]
type Clock = std::time::Instant;

/// Shared node counter, deadline and stop flag.
pub(crate) struct Ctl {
    nodes: AtomicU64,
    max_nodes: u64,
    stopped: AtomicBool,
    #[cfg(not(target_arch = "wasm32"))]
    start: Clock,
    #[cfg(not(target_arch = "wasm32"))]
    max_secs: f64,
}

impl Ctl {
    pub(crate) fn new(budget: &Budget) -> Self {
        Ctl {
            nodes: AtomicU64::new(0),
            max_nodes: budget.max_nodes,
            stopped: AtomicBool::new(false),
            #[cfg(not(target_arch = "wasm32"))]
            start: Clock::now(),
            #[cfg(not(target_arch = "wasm32"))]
            max_secs: budget.max_secs,
        }
    }

    /// Counts one node; false once the budget is spent.
    #[inline]
    pub(crate) fn tick(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if k > self.max_nodes {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        #[cfg(not(target_arch = "wasm32"))]
        if k % 4096 == 0 && self.start.elapsed().as_secs_f64() > self.max_secs {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stopped.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed).min(self.max_nodes)
    }

    pub(crate) fn elapsed(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }

    pub(crate) fn status(&self) -> Status {
        if self.stopped() {
            Status::TimedOut
        } else {
            Status::Optimal
        }
    }
}

/// Best value found so far, shared between workers. Only strictly better
/// offers replace the stored witness, so single-worker runs keep the first
/// optimum in search order.
pub(crate) struct Incumbent<W> {
    value: AtomicU64,
    best: Mutex<(u64, W)>,
}

impl<W: Clone> Incumbent<W> {
    pub(crate) fn new(value: u64, witness: W) -> Self {
        Incumbent {
            value: AtomicU64::new(value),
            best: Mutex::new((value, witness)),
        }
    }

    #[inline]
    pub(crate) fn value(&self) -> u64 {
        self.value.load(Ordering::Relaxed)
    }

    pub(crate) fn offer(&self, value: u64, witness: impl FnOnce() -> W) {
        if value <= self.value() {
            return;
        }
        let mut guard = self.best.lock().expect("incumbent lock poisoned");
        if value > guard.0 {
            *guard = (value, witness());
            self.value.fetch_max(value, Ordering::Relaxed);
        }
    }

    pub(crate) fn into_inner(self) -> (u64, W) {
        self.best.into_inner().expect("incumbent lock poisoned")
    }
}

/// Runs `f` on every task, pulling tasks from a shared queue with the
/// given number of workers (sequentially when `workers == 1` or threads
/// are unavailable).
pub(crate) fn run_tasks<T: Sync, F: Fn(&T) + Sync>(tasks: &[T], workers: usize, f: F) {
    let workers = if cfg!(target_arch = "wasm32") {
        1
    } else {
        workers.clamp(1, tasks.len().max(1))
    };
    if workers == 1 {
        tasks.iter().for_each(f);
        return;
    }
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(t) = tasks.get(i) else { break };
                f(t);
            });
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for o in Objective::ALL {
            assert_eq!(o.name().parse::<Objective>().unwrap(), o);
        }
        assert_eq!("MAX_SKEW_GRID".parse::<Objective>().unwrap(), Objective::MaxSkewGrid);
        assert!("max-skew".parse::<Objective>().is_err());
        assert_eq!("S3".parse::<Symmetry>().unwrap(), Symmetry::S3);
    }

    #[test]
    fn budget_validation() {
        assert!(Budget::new(0, 1.0, 1).is_err());
        assert!(Budget::new(10, 0.0, 1).is_err());
        assert!(Budget::new(10, f64::NAN, 1).is_err());
        assert!(Budget::new(10, 1.0, 0).is_err());
        assert!(Budget::new(10, 1.0, 2).is_ok());
    }

    #[test]
    fn ctl_stops_at_node_budget() {
        let ctl = Ctl::new(&Budget::new(5, 100.0, 1).unwrap());
        assert_eq!((0..10).filter(|_| ctl.tick()).count(), 5);
        assert_eq!(ctl.status(), Status::TimedOut);
        assert_eq!(ctl.nodes(), 5);
    }

    #[test]
    fn incumbent_keeps_first_best() {
        let inc = Incumbent::new(1, "a");
        inc.offer(3, || "b");
        inc.offer(3, || "c");
        inc.offer(2, || "d");
        assert_eq!(inc.into_inner(), (3, "b"));
    }

    #[test]
    fn tasks_all_run() {
        let sum = AtomicU64::new(0);
        let tasks: Vec<u64> = (1..=100).collect();
        run_tasks(&tasks, 3, |&t| {
            sum.fetch_add(t, Ordering::Relaxed);
        });
        assert_eq!(sum.into_inner(), 5050);
    }
}

//! Exact searches over subsets of `[n]^2`.
//!
//! Both searches branch on the set `P` of occupied columns. Once `P` is
//! fixed the skew condition splits by column: column `x` may hold any row
//! set whose internal differences avoid `F_x(P) = {|x - x'| : x' in P}`.
//! A superset of the true support only adds constraints, so maximising
//! over all `P` is exact.

use std::collections::HashMap;

use super::kernels::{max_difference_free, max_independent_set};
use super::{Budget, Ctl, Incumbent, Instance, Objective, SearchResult, Status, Symmetry, Witness};
use crate::error::{Error, Result};
use crate::grid_sets::GridSet;

const MAX_GRID_N: u32 = 63;

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if n > MAX_GRID_N {
        return Err(Error::Precondition(format!("exact grid search supports n <= {MAX_GRID_N}")));
    }
    Ok(())
}

fn full_column(n: u32) -> GridSet {
    GridSet::from_columns(n, [(1, (1..=n).collect())]).expect("in range")
}

/// Bit `d` set for every distance `d = |x - x'|`, `x'` in `support`.
fn distances(x: u32, support: u64) -> u64 {
    let mut f = 0u64;
    let mut s = support & !(1u64 << x);
    while s != 0 {
        let y = s.trailing_zeros();
        s &= s - 1;
        f |= 1u64 << x.abs_diff(y);
    }
    f
}

/// Memoised `h(F)`: the largest difference-free row set within `allowed`.
#[derive(Default)]
struct RowCache {
    memo: HashMap<(u64, u64), (u32, u64)>,
}

impl RowCache {
    fn get(&mut self, allowed: u64, diffs: u64) -> (u32, u64) {
        *self
            .memo
            .entry((allowed, diffs))
            .or_insert_with(|| max_difference_free(allowed, diffs))
    }
}

fn mask(n: u32) -> u64 {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

/// `sum_{x in I ∪ U} h(F_x(I))` for included columns `I` and undecided `U`.
fn column_bound(n: u32, included: u64, open: u64, rows: &mut RowCache) -> u64 {
    let mut total = 0u64;
    let mut s = included | open;
    while s != 0 {
        let x = s.trailing_zeros();
        s &= s - 1;
        total += rows.get(mask(n), distances(x, included)).0 as u64;
    }
    total
}

/// Column-inclusion prefixes of depth `depth`, include-first, as
/// `(next column, included mask)`.
fn prefixes(depth: u32) -> Vec<(u32, u64)> {
    let mut out = vec![(0u32, 0u64)];
    for k in 0..depth {
        out = out
            .into_iter()
            .flat_map(|(_, inc)| [(k + 1, inc | 1u64 << k), (k + 1, inc)])
            .collect();
    }
    out
}

struct SupportSearch<'a> {
    n: u32,
    ctl: &'a Ctl,
    rows: RowCache,
}

impl SupportSearch<'_> {
    /// Visits every support `P` (leaf) whose column bound exceeds the
    /// threshold returned by `floor()`.
    fn dfs(&mut self, k: u32, included: u64, floor: &dyn Fn() -> u64, leaf: &mut dyn FnMut(u64, u64, &mut RowCache)) {
        if !self.ctl.tick() {
            return;
        }
        let open = mask(self.n) & !mask(k);
        let bound = column_bound(self.n, included, open, &mut self.rows);
        if bound <= floor() {
            return;
        }
        if k == self.n {
            leaf(included, bound, &mut self.rows);
            return;
        }
        self.dfs(k + 1, included | 1u64 << k, floor, leaf);
        self.dfs(k + 1, included, floor, leaf);
    }
}

fn grid_from_rows(n: u32, cols: impl IntoIterator<Item = (u32, u64)>) -> GridSet {
    GridSet::from_columns(
        n,
        cols.into_iter().filter(|&(_, r)| r != 0).map(|(x, r)| {
            let rows = (0..n).filter(|&y| r >> y & 1 == 1).map(|y| y + 1).collect();
            (x + 1, rows)
        }),
    )
    .expect("rows within range")
}

/// Largest skew corner-free subset of `[n]^2`.
pub fn max_skew_grid_exact(n: u32, budget: &Budget) -> Result<SearchResult> {
    budget.validate()?;
    check_n(n)?;
    let ctl = Ctl::new(budget);
    let inc = Incumbent::new(n as u64, full_column(n));
    let tasks = prefixes(n.min(4));
    super::run_tasks(&tasks, budget.workers, |&(k, included)| {
        let mut s = SupportSearch {
            n,
            ctl: &ctl,
            rows: RowCache::default(),
        };
        let floor = || inc.value();
        s.dfs(k, included, &floor, &mut |support, value, rows| {
            inc.offer(value, || {
                let mut cols = Vec::new();
                let mut p = support;
                while p != 0 {
                    let x = p.trailing_zeros();
                    p &= p - 1;
                    cols.push((x, rows.get(mask(n), distances(x, support)).1));
                }
                grid_from_rows(n, cols)
            });
        });
    });
    let (value, witness) = inc.into_inner();
    Ok(SearchResult {
        objective: Objective::MaxSkewGrid,
        instance: Instance::Size(n),
        symmetry: Symmetry::None,
        best_value: value,
        witness: Witness::Grid(witness),
        status: ctl.status(),
        nodes: ctl.nodes(),
        wall_time: ctl.elapsed(),
    })
}

fn reverse_bits(p: u64, n: u32) -> u64 {
    p.reverse_bits() >> (64 - n)
}

/// Largest bi-skew corner-free subset of `[n]^2`.
///
/// Enumerates column supports `P` and row supports `Q` whose one-sided
/// bounds beat the incumbent, up to the dihedral symmetries of the square,
/// and solves each surviving `P x Q` exactly as an independent-set problem
/// where row and column gap constraints both become pairwise conflicts.
pub fn max_bi_skew_exact(n: u32, budget: &Budget) -> Result<SearchResult> {
    budget.validate()?;
    check_n(n)?;
    if n > 11 {
        return Err(Error::Precondition("exact bi-skew search supports n <= 11".into()));
    }
    let ctl = Ctl::new(budget);
    let start = super::heuristic::bi_skew_greedy(n, 0, 4);
    let inc = Incumbent::new(start.len() as u64, start);
    let floor0 = inc.value();

    // canonical supports under reversal, with column bound above the incumbent
    let mut supports: Vec<(u64, u64)> = Vec::new();
    {
        let mut s = SupportSearch {
            n,
            ctl: &ctl,
            rows: RowCache::default(),
        };
        let floor = || floor0;
        s.dfs(0, 0, &floor, &mut |p, bound, _| {
            if p <= reverse_bits(p, n) {
                supports.push((p, bound));
            }
        });
    }
    let mut rows = RowCache::default();
    let mut pairs: Vec<(u64, u64, u64)> = Vec::new();
    for (i, &(p, bp)) in supports.iter().enumerate() {
        for &(q, bq) in &supports[i..] {
            if bp.min(bq) <= floor0 {
                continue;
            }
            let side = |a: u64, b: u64, rows: &mut RowCache| -> u64 {
                let mut t = 0u64;
                let mut s = a;
                while s != 0 {
                    let x = s.trailing_zeros();
                    s &= s - 1;
                    t += rows.get(b, distances(x, a)).0 as u64;
                }
                t
            };
            let b = side(p, q, &mut rows).min(side(q, p, &mut rows));
            if b > floor0 {
                pairs.push((b, p, q));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    super::run_tasks(&pairs, budget.workers, |&(bound, p, q)| {
        if bound <= inc.value() || ctl.stopped() {
            return;
        }
        let cols: Vec<u32> = (0..n).filter(|&x| p >> x & 1 == 1).collect();
        let rws: Vec<u32> = (0..n).filter(|&y| q >> y & 1 == 1).collect();
        let cells: Vec<(u32, u32)> = cols.iter().flat_map(|&x| rws.iter().map(move |&y| (x, y))).collect();
        let fx: Vec<u64> = (0..n).map(|x| distances(x, p)).collect();
        let fy: Vec<u64> = (0..n).map(|y| distances(y, q)).collect();
        let adj: Vec<u128> = cells
            .iter()
            .map(|&(x, y)| {
                let mut row = 0u128;
                for (j, &(x2, y2)) in cells.iter().enumerate() {
                    let conflict = (x == x2 && y != y2 && fx[x as usize] >> y.abs_diff(y2) & 1 == 1)
                        || (y == y2 && x != x2 && fy[y as usize] >> x.abs_diff(x2) & 1 == 1);
                    if conflict {
                        row |= 1u128 << j;
                    }
                }
                row
            })
            .collect();
        let (found, _) = max_independent_set(&adj, inc.value() as u32, &mut || ctl.tick());
        if let Some((size, set)) = found {
            inc.offer(size as u64, || {
                let pts = (0..cells.len())
                    .filter(|&j| set >> j & 1 == 1)
                    .map(|j| (cells[j].0 + 1, cells[j].1 + 1));
                GridSet::from_points(n, pts).expect("cells within range")
            });
        }
    });
    let (value, witness) = inc.into_inner();
    Ok(SearchResult {
        objective: Objective::MaxBiSkew,
        instance: Instance::Size(n),
        symmetry: Symmetry::None,
        best_value: value,
        witness: Witness::Grid(witness),
        status: if ctl.stopped() { Status::TimedOut } else { Status::Optimal },
        nodes: ctl.nodes(),
        wall_time: ctl.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_values() {
        let b = Budget::default();
        let r1 = max_skew_grid_exact(1, &b).unwrap();
        assert_eq!((r1.best_value, r1.status), (1, Status::Optimal));
        let r2 = max_skew_grid_exact(2, &b).unwrap();
        assert_eq!(r2.best_value, 2);
        for n in 1..=7 {
            let r = max_skew_grid_exact(n, &b).unwrap();
            r.check_witness().unwrap();
        }
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(max_skew_grid_exact(0, &Budget::default()).is_err());
        assert!(max_skew_grid_exact(64, &Budget::default()).is_err());
        let bad = Budget {
            max_nodes: 0,
            ..Budget::default()
        };
        assert!(max_skew_grid_exact(3, &bad).is_err());
    }

    #[test]
    fn tiny_budget_times_out_with_feasible_witness() {
        let b = Budget::new(3, 100.0, 1).unwrap();
        let r = max_skew_grid_exact(8, &b).unwrap();
        assert_eq!(r.status, Status::TimedOut);
        r.check_witness().unwrap();
        assert!(r.best_value >= 8);
    }

    #[test]
    fn bi_skew_small() {
        let b = Budget::default();
        let r = max_bi_skew_exact(1, &b).unwrap();
        assert_eq!(r.best_value, 1);
        for n in 1..=6 {
            let r = max_bi_skew_exact(n, &b).unwrap();
            r.check_witness().unwrap();
            assert_eq!(r.status, Status::Optimal);
            assert!(r.best_value <= max_skew_grid_exact(n, &b).unwrap().best_value);
        }
    }

    #[test]
    fn parallel_matches_single() {
        let one = max_skew_grid_exact(9, &Budget::default()).unwrap();
        let many = max_skew_grid_exact(9, &Budget::new(1 << 30, 100.0, 3).unwrap()).unwrap();
        assert_eq!(one.best_value, many.best_value);
        many.check_witness().unwrap();
    }
}

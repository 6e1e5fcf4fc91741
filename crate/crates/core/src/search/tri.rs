//! Exact search over subsets of the triangular grid `Δ_{n+1}`, either
//! point by point or over orbits of the coordinate-permutation action.

use std::collections::BTreeSet;

use super::kernels::difference_free_bound;
use super::{Budget, Ctl, Incumbent, Instance, Objective, SearchResult, Symmetry, Witness};
use crate::error::{Error, Result};
use crate::grid_sets::{TriSet, S3};

const MAX_TRI_N: u32 = 62;

/// Orbits of the `S3` action on `Δ_{n+1}`, each sorted; sizes are 1
/// (centroid), 3 (two equal coordinates) or 6.
pub fn tri_orbits(n: u32) -> Vec<Vec<(u32, u32, u32)>> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in a..=n - a {
            let c = n - a - b;
            if c < b {
                continue;
            }
            let orbit: BTreeSet<(u32, u32, u32)> = S3
                .iter()
                .map(|p| {
                    let v = [a, b, c];
                    (v[p[0]], v[p[1]], v[p[2]])
                })
                .collect();
            out.push(orbit.into_iter().collect());
        }
    }
    out
}

/// A unit of branching: a set of points, precomputed per direction as
/// `(line, position mask)` pairs.
struct Item {
    points: Vec<(u32, u32, u32)>,
    per_dir: [Vec<(u32, u64)>; 3],
}

impl Item {
    fn new(points: Vec<(u32, u32, u32)>) -> Self {
        let per_dir = [0, 1, 2].map(|d| {
            let mut lines: Vec<(u32, u64)> = Vec::new();
            for p in &points {
                let v = [p.0, p.1, p.2];
                let (line, pos) = (v[d], v[(d + 1) % 3]);
                match lines.iter_mut().find(|(l, _)| *l == line) {
                    Some((_, m)) => *m |= 1u64 << pos,
                    None => lines.push((line, 1u64 << pos)),
                }
            }
            lines
        });
        Item { points, per_dir }
    }

    fn weight(&self) -> u64 {
        self.points.len() as u64
    }
}

/// All pairwise differences within `x`, as a bit mask.
fn gap_set(x: u64) -> u64 {
    let mut g = 0u64;
    let mut s = x;
    while s != 0 {
        let i = s.trailing_zeros();
        s &= s - 1;
        g |= x >> i;
    }
    g & !1
}

/// Lines `v + g` and `v - g` for every `g` in `gaps`.
fn reflect(gaps: u64, v: u32) -> u64 {
    let mut out = gaps.checked_shl(v).unwrap_or(0);
    let mut low = gaps & ((2u64 << v) - 1);
    while low != 0 {
        let g = low.trailing_zeros();
        low &= low - 1;
        out |= 1u64 << (v - g);
    }
    out
}

fn distances(v: u32, lines: u64) -> u64 {
    let mut f = 0u64;
    let mut s = lines & !(1u64 << v);
    while s != 0 {
        let w = s.trailing_zeros();
        s &= s - 1;
        f |= 1u64 << v.abs_diff(w);
    }
    f
}

/// Occupancy of the lines of one direction, plus the lines that must stay
/// empty because of gaps already present.
#[derive(Clone)]
struct Lines {
    pos: Vec<u64>,
    occupied: u64,
    killed: u64,
}

#[derive(Clone)]
struct State {
    dirs: Vec<Lines>,
    size: u64,
}

impl State {
    fn new(n: u32, ndirs: usize) -> Self {
        let empty = Lines {
            pos: vec![0; n as usize + 1],
            occupied: 0,
            killed: 0,
        };
        State {
            dirs: vec![empty; ndirs],
            size: 0,
        }
    }

    fn fits(&self, item: &Item) -> bool {
        for (d, lines) in self.dirs.iter().enumerate() {
            let touched = &item.per_dir[d];
            let mut occ = lines.occupied;
            for &(v, _) in touched {
                if lines.occupied >> v & 1 == 0 && lines.killed >> v & 1 == 1 {
                    return false;
                }
                occ |= 1u64 << v;
            }
            for &(v, m) in touched {
                let combined = lines.pos[v as usize] | m;
                if reflect(gap_set(combined), v) & occ != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn add(&mut self, item: &Item) {
        for (d, lines) in self.dirs.iter_mut().enumerate() {
            for &(v, m) in &item.per_dir[d] {
                let p = &mut lines.pos[v as usize];
                *p |= m;
                lines.occupied |= 1u64 << v;
                lines.killed |= reflect(gap_set(*p), v);
            }
        }
        self.size += item.weight();
    }

    /// Sum over lines of a difference-free capacity bound, using positions
    /// that are already occupied or offered by some candidate.
    fn line_bound(&self, items: &[Item], cand: &[usize]) -> u64 {
        let mut best = u64::MAX;
        for (d, lines) in self.dirs.iter().enumerate() {
            let mut avail = lines.pos.clone();
            for &i in cand {
                for &(v, m) in &items[i].per_dir[d] {
                    avail[v as usize] |= m;
                }
            }
            let total: u64 = avail
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(v, &a)| difference_free_bound(a, distances(v as u32, lines.occupied)) as u64)
                .sum();
            best = best.min(total);
        }
        best
    }
}

struct TriSearch<'a> {
    items: &'a [Item],
    ctl: &'a Ctl,
    inc: &'a Incumbent<Vec<usize>>,
}

impl TriSearch<'_> {
    fn dfs(&self, state: &State, chosen: &mut Vec<usize>, cand: &[usize]) {
        if !self.ctl.tick() {
            return;
        }
        self.inc.offer(state.size, || chosen.clone());
        let cand: Vec<usize> = cand.iter().copied().filter(|&i| state.fits(&self.items[i])).collect();
        if cand.is_empty() {
            return;
        }
        let weight: u64 = cand.iter().map(|&i| self.items[i].weight()).sum();
        if state.size + weight <= self.inc.value() {
            return;
        }
        if state.line_bound(self.items, &cand) <= self.inc.value() {
            return;
        }
        for (k, &i) in cand.iter().enumerate() {
            // remaining candidates after i cannot beat the incumbent
            let rest: u64 = cand[k..].iter().map(|&j| self.items[j].weight()).sum();
            if state.size + rest <= self.inc.value() || self.ctl.stopped() {
                return;
            }
            let mut next = state.clone();
            next.add(&self.items[i]);
            chosen.push(i);
            self.dfs(&next, chosen, &cand[k + 1..]);
            chosen.pop();
        }
    }
}

/// Largest skew corner-free subset of `Δ_{n+1}`, optionally restricted to
/// sets invariant under all coordinate permutations.
pub fn max_skew_tri_exact(n: u32, symmetry: Symmetry, budget: &Budget) -> Result<SearchResult> {
    budget.validate()?;
    if n > MAX_TRI_N {
        return Err(Error::Precondition(format!("exact triangular search supports n <= {MAX_TRI_N}")));
    }
    let ctl = Ctl::new(budget);
    let (mut items, ndirs): (Vec<Item>, usize) = match symmetry {
        Symmetry::None => {
            let pts = TriSet::full(n).points().map(|p| Item::new(vec![p])).collect();
            (pts, 3)
        }
        // a symmetric set is skew corner-free in every direction as soon as
        // it is in one, since permutations carry directions to each other
        Symmetry::S3 => (tri_orbits(n).into_iter().map(Item::new).collect(), 1),
    };
    // heavier orbits first, then by position; stable for determinism
    items.sort_by_key(|it| std::cmp::Reverse(it.weight()));
    let root = State::new(n, ndirs);
    let order: Vec<usize> = (0..items.len()).filter(|&i| root.fits(&items[i])).collect();

    let (start_value, start): (u64, Vec<usize>) = match symmetry {
        // the side line {a = 0}
        Symmetry::None => (n as u64 + 1, (0..items.len()).filter(|&i| items[i].points[0].0 == 0).collect()),
        Symmetry::S3 => (0, Vec::new()),
    };
    let inc = Incumbent::new(start_value, start);
    let search = TriSearch {
        items: &items,
        ctl: &ctl,
        inc: &inc,
    };
    // task k: the first chosen item is order[k]
    let tasks: Vec<usize> = (0..order.len()).collect();
    super::run_tasks(&tasks, budget.workers, |&k| {
        if ctl.stopped() {
            return;
        }
        let rest: u64 = order[k..].iter().map(|&j| items[j].weight()).sum();
        if rest <= inc.value() {
            return;
        }
        let mut state = root.clone();
        state.add(&items[order[k]]);
        let mut chosen = vec![order[k]];
        search.dfs(&state, &mut chosen, &order[k + 1..]);
    });
    let (value, chosen) = inc.into_inner();
    let witness = TriSet::from_points(n, chosen.iter().flat_map(|&i| items[i].points.iter().copied()))?;
    Ok(SearchResult {
        objective: Objective::MaxSkewTri,
        instance: Instance::Size(n),
        symmetry,
        best_value: value,
        witness: Witness::Tri(witness),
        status: ctl.status(),
        nodes: ctl.nodes(),
        wall_time: ctl.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Status;

    #[test]
    fn orbit_sizes() {
        let orbits = tri_orbits(6);
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        assert_eq!(total, 28);
        assert!(orbits.iter().any(|o| o.len() == 1));
        assert!(orbits.iter().all(|o| [1, 3, 6].contains(&o.len())));
    }

    #[test]
    fn reflect_and_gaps() {
        assert_eq!(gap_set(0b1011), 0b1110);
        assert_eq!(reflect(0b100, 3), 1 << 5 | 1 << 1);
        assert_eq!(reflect(0b100, 1), 1 << 3);
    }

    #[test]
    fn tiny_values() {
        let b = Budget::default();
        let r = max_skew_tri_exact(0, Symmetry::None, &b).unwrap();
        assert_eq!((r.best_value, r.status), (1, Status::Optimal));
        let r = max_skew_tri_exact(0, Symmetry::S3, &b).unwrap();
        assert_eq!(r.best_value, 1);
        for n in 1..=6 {
            for sym in [Symmetry::None, Symmetry::S3] {
                let r = max_skew_tri_exact(n, sym, &b).unwrap();
                r.check_witness().unwrap();
                assert_eq!(r.status, Status::Optimal);
            }
        }
    }
}

//! Exhaustive reference solvers. They share no code with `search` beyond
//! the set types and the literal predicates, and exist to cross-check the
//! exact searches on small instances.

use crate::constructions::{is_line_trapezoid_free, LineTriple};
use crate::grid_sets::{is_bi_skew_corner_free, is_skew_corner_free_grid, is_skew_corner_free_tri, GridSet, TriSet};
use crate::groups::{count_zero_sum_triples, is_trapezoid_free, AbelianGroup, GroupTriple};
use crate::search::tri_orbits;

/// Depth-first enumeration of the feasible subsets of `0..len` (feasibility
/// must be downward closed), pruned only by "value of everything still
/// available cannot beat the best".
fn enumerate(
    len: usize,
    value: &dyn Fn(&[bool]) -> u64,
    feasible: &dyn Fn(&[bool]) -> bool,
) -> (u64, Vec<bool>) {
    fn rec(
        i: usize,
        set: &mut Vec<bool>,
        best: &mut (u64, Vec<bool>),
        value: &dyn Fn(&[bool]) -> u64,
        feasible: &dyn Fn(&[bool]) -> bool,
    ) {
        let v = value(set);
        if v > best.0 {
            *best = (v, set.clone());
        }
        if i == set.len() {
            return;
        }
        // optimistic: everything from i on added
        let mut all = set.clone();
        all[i..].iter_mut().for_each(|b| *b = true);
        if value(&all) <= best.0 {
            return;
        }
        set[i] = true;
        if feasible(set) {
            rec(i + 1, set, best, value, feasible);
        }
        set[i] = false;
        rec(i + 1, set, best, value, feasible);
    }
    let mut best = (0, vec![false; len]);
    rec(0, &mut vec![false; len], &mut best, value, feasible);
    best
}

fn count(set: &[bool]) -> u64 {
    set.iter().filter(|&&b| b).count() as u64
}

fn grid(n: u32, bi: bool) -> (u64, GridSet) {
    let cells: Vec<(u32, u32)> = (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).collect();
    let build = |set: &[bool]| {
        GridSet::from_points(n, set.iter().zip(&cells).filter(|(&b, _)| b).map(|(_, &p)| p)).unwrap()
    };
    let feasible = |set: &[bool]| {
        let s = build(set);
        if bi {
            is_bi_skew_corner_free(&s)
        } else {
            is_skew_corner_free_grid(&s)
        }
    };
    let (v, set) = enumerate(cells.len(), &count, &feasible);
    (v, build(&set))
}

/// Largest skew corner-free subset of `[n]^2` by enumeration.
pub fn max_skew_grid(n: u32) -> (u64, GridSet) {
    grid(n, false)
}

/// Largest bi-skew corner-free subset of `[n]^2` by enumeration.
pub fn max_bi_skew(n: u32) -> (u64, GridSet) {
    grid(n, true)
}

/// Largest skew corner-free subset of `Δ_{n+1}` by enumeration; with
/// `symmetric`, only unions of coordinate-permutation orbits are visited.
pub fn max_skew_tri(n: u32, symmetric: bool) -> (u64, TriSet) {
    let units: Vec<Vec<(u32, u32, u32)>> = if symmetric {
        tri_orbits(n)
    } else {
        TriSet::full(n).points().map(|p| vec![p]).collect()
    };
    let build = |set: &[bool]| {
        TriSet::from_points(n, set.iter().zip(&units).filter(|(&b, _)| b).flat_map(|(_, u)| u.iter().copied())).unwrap()
    };
    let value = |set: &[bool]| set.iter().zip(&units).filter(|(&b, _)| b).map(|(_, u)| u.len() as u64).sum();
    let feasible = |set: &[bool]| is_skew_corner_free_tri(&build(set));
    let (v, set) = enumerate(units.len(), &value, &feasible);
    (v, build(&set))
}

fn split(set: &[bool], m: usize) -> [Vec<usize>; 3] {
    [0, 1, 2].map(|p| (0..m).filter(|&e| set[p * m + e]).collect())
}

/// `val(n)` by enumeration of line triples.
pub fn val_plane(n: u32) -> (u64, LineTriple) {
    let m = n as usize + 1;
    let build = |set: &[bool]| {
        let [a, b, c] = split(set, m).map(|v| v.into_iter().map(|x| x as u32).collect());
        LineTriple::new(n, a, b, c).unwrap()
    };
    let value = |set: &[bool]| build(set).solution_count() as u64;
    let feasible = |set: &[bool]| is_line_trapezoid_free(&build(set));
    let (v, set) = enumerate(3 * m, &value, &feasible);
    (v, build(&set))
}

/// `val(G)` by enumeration of subset triples.
pub fn val_group(g: &AbelianGroup) -> (u64, GroupTriple) {
    let m = g.order();
    let build = |set: &[bool]| {
        let [a, b, c] = split(set, m);
        GroupTriple::from_indices(g.clone(), a, b, c).unwrap()
    };
    let value = |set: &[bool]| count_zero_sum_triples(&build(set));
    let feasible = |set: &[bool]| is_trapezoid_free(&build(set));
    let (v, set) = enumerate(3 * m, &value, &feasible);
    (v, build(&set))
}

//! Exact maximisation of the solution count over equilateral
//! trapezoid-free triples, in `{0..n}` (solutions of `a + b + c = n`) and in
//! small abelian groups (solutions of `a + b + c = 0`).

use super::{Budget, Ctl, Incumbent, Instance, Objective, SearchResult, Symmetry, Witness};
use crate::constructions::LineTriple;
use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, GroupTriple};

pub const DEFAULT_GROUP_CAP: usize = 16;
const MAX_PLANE_N: u32 = 40;

/// The solution structure shared by both settings: `third[a][b]` is the
/// unique `c` completing `(a, b)` to a solution, if any.
struct Table {
    m: usize,
    third: Vec<Vec<Option<usize>>>,
}

impl Table {
    fn plane(n: u32) -> Self {
        let m = n as usize + 1;
        let third = (0..m)
            .map(|a| (0..m).map(|b| (n as usize).checked_sub(a + b)).collect())
            .collect();
        Table { m, third }
    }

    fn group(g: &AbelianGroup) -> Self {
        let m = g.order();
        let third = (0..m)
            .map(|a| (0..m).map(|b| Some(g.neg_idx(g.add_idx(a, b)))).collect())
            .collect();
        Table { m, third }
    }

    fn count(&self, [a, b, c]: [u64; 3]) -> u64 {
        let mut total = 0;
        for x in bits(a) {
            for y in bits(b) {
                if let Some(z) = self.third[x][y] {
                    total += c >> z & 1;
                }
            }
        }
        total
    }

    /// Whether each of the three two-equation systems has at most one
    /// solution, via common neighbourhoods in the induced hypergraph.
    fn trapezoid_free(&self, [a, b, c]: [u64; 3]) -> bool {
        // nbr[p][r] for each vertex of part p: its neighbours in part r
        let mut nbr_c_of_a = Vec::new();
        let mut nbr_b_of_a = Vec::new();
        for x in bits(a) {
            let (mut nc, mut nb) = (0u64, 0u64);
            for y in bits(b) {
                if let Some(z) = self.third[x][y] {
                    if c >> z & 1 == 1 {
                        nc |= 1 << z;
                        nb |= 1 << y;
                    }
                }
            }
            nbr_c_of_a.push(nc);
            nbr_b_of_a.push(nb);
        }
        let mut nbr_c_of_b = vec![0u64; self.m];
        let mut nbr_a_of_b = vec![0u64; self.m];
        let mut nbr_b_of_c = vec![0u64; self.m];
        let mut nbr_a_of_c = vec![0u64; self.m];
        for x in bits(a) {
            for y in bits(b) {
                if let Some(z) = self.third[x][y] {
                    if c >> z & 1 == 1 {
                        nbr_c_of_b[y] |= 1 << z;
                        nbr_a_of_b[y] |= 1 << x;
                        nbr_b_of_c[z] |= 1 << y;
                        nbr_a_of_c[z] |= 1 << x;
                    }
                }
            }
        }
        let pairs_ok = |left: &[u64], right: &[u64]| {
            left.iter().all(|&l| l == 0 || right.iter().all(|&r| (l & r).count_ones() <= 1))
        };
        pairs_ok(&nbr_c_of_a, &nbr_c_of_b)
            && pairs_ok(&nbr_b_of_a, &nbr_b_of_c)
            && pairs_ok(&nbr_a_of_b, &nbr_a_of_c)
    }
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            return None;
        }
        let i = x.trailing_zeros() as usize;
        x &= x - 1;
        Some(i)
    })
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Variables are decided part by part (`A`, then `B`, then `C`), element
/// by element. Every optimum can be brought to `|A| >= |B| >= |C|` by
/// permuting the roles, and (in groups) to `0 in A, 0 in B` by translating.
struct ValSearch<'a> {
    table: &'a Table,
    forced: [u64; 3],
    ctl: &'a Ctl,
    inc: &'a Incumbent<[u64; 3]>,
}

impl ValSearch<'_> {
    fn bound(&self, cur: [u64; 3], part: usize, elem: usize) -> u64 {
        let m = self.table.m;
        let full = if m == 64 { !0 } else { (1u64 << m) - 1 };
        let open_from = |p: usize| -> u64 {
            if p < part {
                0
            } else if p > part {
                full
            } else {
                full & !((1u64 << elem) - 1)
            }
        };
        let max: [u64; 3] = [0, 1, 2].map(|p| cur[p] | open_from(p));
        let sa = max[0].count_ones() as u64;
        let sb = (max[1].count_ones() as u64).min(sa);
        let sc = (max[2].count_ones() as u64).min(sb);
        let fill = self.table.count(max);
        fill.min(isqrt(sa * sb * sc))
    }

    fn dfs(&self, cur: [u64; 3], part: usize, elem: usize) {
        if !self.ctl.tick() {
            return;
        }
        let m = self.table.m;
        let (part, elem) = if elem == m { (part + 1, 0) } else { (part, elem) };
        if part == 3 {
            return;
        }
        if self.bound(cur, part, elem) <= self.inc.value() {
            return;
        }
        let bit = 1u64 << elem;
        let mut next = cur;
        next[part] |= bit;
        let size_ok = part == 0 || next[part].count_ones() <= next[part - 1].count_ones();
        if size_ok && self.table.trapezoid_free(next) {
            self.inc.offer(self.table.count(next), || next);
            self.dfs(next, part, elem + 1);
        }
        if self.forced[part] & bit == 0 {
            self.dfs(cur, part, elem + 1);
        }
    }
}

fn run(table: &Table, forced: [u64; 3], start: [u64; 3], budget: &Budget) -> (u64, [u64; 3], Ctl) {
    let ctl = Ctl::new(budget);
    let inc = Incumbent::new(table.count(start), start);
    // tasks: the choices on the first few elements of A, include-first
    let depth = table.m.min(4);
    let mut tasks: Vec<u64> = vec![0];
    for e in 0..depth {
        tasks = tasks
            .into_iter()
            .flat_map(|a| {
                let with = a | 1 << e;
                if forced[0] >> e & 1 == 1 {
                    vec![with]
                } else {
                    vec![with, a]
                }
            })
            .collect();
    }
    let search = ValSearch {
        table,
        forced,
        ctl: &ctl,
        inc: &inc,
    };
    super::run_tasks(&tasks, budget.workers, |&a| {
        let cur = [a, 0, 0];
        if !table.trapezoid_free(cur) {
            return;
        }
        search.dfs(cur, 0, depth);
    });
    let (value, best) = inc.into_inner();
    (value, best, ctl)
}

fn to_vec(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

/// `val(n)`: the most solutions of `a + b + c = n` over line-trapezoid-free
/// triples `A, B, C` in `{0..n}`.
pub fn val_plane_exact(n: u32, budget: &Budget) -> Result<SearchResult> {
    budget.validate()?;
    if n > MAX_PLANE_N {
        return Err(Error::Precondition(format!("exact val search supports n <= {MAX_PLANE_N}")));
    }
    let table = Table::plane(n);
    let full = (1u64 << (n + 1)) - 1;
    // ({0..n}, {0..n}, {0}) is the trivial triple with roles ordered by size
    let (value, best, ctl) = run(&table, [0; 3], [full, full, 1], budget);
    let conv = |m: u64| to_vec(m).into_iter().map(|x| x as u32).collect();
    let witness = LineTriple::new(n, conv(best[0]), conv(best[1]), conv(best[2]))?;
    Ok(SearchResult {
        objective: Objective::ValPlane,
        instance: Instance::Size(n),
        symmetry: Symmetry::None,
        best_value: value,
        witness: Witness::Lines(witness),
        status: ctl.status(),
        nodes: ctl.nodes(),
        wall_time: ctl.elapsed(),
    })
}

/// `val(G)` for a group of order at most `cap`.
pub fn val_group_exact(g: &AbelianGroup, cap: usize, budget: &Budget) -> Result<SearchResult> {
    budget.validate()?;
    let cap = cap.min(64);
    if g.order() > cap {
        return Err(Error::GroupTooLarge {
            order: g.order() as u64,
            cap: cap as u64,
        });
    }
    let table = Table::group(g);
    let full = if g.order() == 64 { !0 } else { (1u64 << g.order()) - 1 };
    let (value, best, ctl) = run(&table, [1, 1, 0], [full, full, 1], budget);
    let witness = GroupTriple::from_indices(g.clone(), to_vec(best[0]), to_vec(best[1]), to_vec(best[2]))?;
    Ok(SearchResult {
        objective: Objective::ValGroup,
        instance: Instance::Group(g.clone()),
        symmetry: Symmetry::None,
        best_value: value,
        witness: Witness::Group(witness),
        status: ctl.status(),
        nodes: ctl.nodes(),
        wall_time: ctl.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{line_trapezoid_violation, LineTriple};
    use crate::groups::is_trapezoid_free;
    use crate::search::Status;

    #[test]
    fn table_checker_matches_reference() {
        let n = 5;
        let t = Table::plane(n);
        let mut rng = 7u64;
        for _ in 0..200 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let masks = [rng >> 10 & 63, rng >> 20 & 63, rng >> 30 & 63];
            let conv = |m: u64| bits(m).map(|x| x as u32).collect();
            let lt = LineTriple::new(n, conv(masks[0]), conv(masks[1]), conv(masks[2])).unwrap();
            assert_eq!(t.trapezoid_free(masks), line_trapezoid_violation(&lt).is_none());
            assert_eq!(t.count(masks), lt.solution_count() as u64);
        }
        let g = AbelianGroup::cyclic(6).unwrap();
        let t = Table::group(&g);
        for _ in 0..200 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let masks = [rng >> 10 & 63, rng >> 20 & 63, rng >> 30 & 63];
            let gt = GroupTriple::from_indices(g.clone(), to_vec(masks[0]), to_vec(masks[1]), to_vec(masks[2])).unwrap();
            assert_eq!(t.trapezoid_free(masks), is_trapezoid_free(&gt));
        }
    }

    #[test]
    fn small_values_and_bounds() {
        let b = Budget::default();
        for n in 0..=5 {
            let r = val_plane_exact(n, &b).unwrap();
            r.check_witness().unwrap();
            assert_eq!(r.status, Status::Optimal);
            assert!(r.best_value >= n as u64 + 1);
        }
        for m in 1..=6 {
            let g = AbelianGroup::cyclic(m).unwrap();
            let r = val_group_exact(&g, DEFAULT_GROUP_CAP, &b).unwrap();
            r.check_witness().unwrap();
            assert!(r.best_value >= m as u64);
            assert!(r.best_value * r.best_value <= (m as u64).pow(3));
        }
    }

    #[test]
    fn group_cap_enforced() {
        let g = AbelianGroup::cyclic(17).unwrap();
        assert!(matches!(
            val_group_exact(&g, DEFAULT_GROUP_CAP, &Budget::default()),
            Err(Error::GroupTooLarge { .. })
        ));
    }
}

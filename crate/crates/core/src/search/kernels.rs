//! Small exact solvers shared by the searches: difference-avoiding subsets
//! of a line and maximum independent sets on at most 128 vertices.

/// Upper bound on the largest subset of `cand` avoiding difference `g`:
/// the elements split into chains `x, x+g, x+2g, ...` and a run of `L`
/// consecutive chain members holds at most `ceil(L/2)` of them.
fn chain_bound(cand: u64, g: u32) -> u32 {
    if g >= 64 {
        return cand.count_ones();
    }
    // pairs (x, x+g) both present, matched greedily from the bottom of each chain
    let mut rest = cand;
    let mut matched = 0;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        let y = x + g;
        if y < 64 && rest >> y & 1 == 1 {
            rest &= !(1u64 << y);
            matched += 1;
        }
    }
    cand.count_ones() - matched
}

/// Minimum chain bound over the smallest few forbidden differences.
pub fn difference_free_bound(cand: u64, diffs: u64) -> u32 {
    let mut best = cand.count_ones();
    let mut d = diffs & !1;
    let mut tried = 0;
    while d != 0 && tried < 6 {
        let g = d.trailing_zeros();
        d &= d - 1;
        best = best.min(chain_bound(cand, g));
        tried += 1;
    }
    best
}

/// Largest subset of `allowed` (bit `i` = position `i`) with no two
/// elements whose difference has its bit set in `diffs`. Returns the size
/// and one optimal subset.
pub fn max_difference_free(allowed: u64, diffs: u64) -> (u32, u64) {
    let diffs = diffs & !1;
    let mut best = (0u32, 0u64);
    // greedy start
    let mut cand = allowed;
    let mut chosen = 0u64;
    while cand != 0 {
        let x = cand.trailing_zeros();
        chosen |= 1 << x;
        cand &= !(1u64 << x) & !diffs.checked_shl(x).unwrap_or(0);
    }
    best = best.max((chosen.count_ones(), chosen));
    df_rec(allowed, 0, diffs, &mut best);
    best
}

fn df_rec(cand: u64, chosen: u64, diffs: u64, best: &mut (u32, u64)) {
    if cand == 0 {
        let size = chosen.count_ones();
        if size > best.0 {
            *best = (size, chosen);
        }
        return;
    }
    if chosen.count_ones() + difference_free_bound(cand, diffs) <= best.0 {
        return;
    }
    let x = cand.trailing_zeros();
    let rest = cand & !(1u64 << x);
    // elements below x are already decided, so only forward conflicts remain
    df_rec(rest & !diffs.checked_shl(x).unwrap_or(0), chosen | 1 << x, diffs, best);
    df_rec(rest, chosen, diffs, best);
}

/// Maximum independent set of the graph with adjacency rows `adj`, via
/// maximum clique on the complement with a greedy colouring bound.
/// Only sets strictly larger than `lower` are reported. `tick` is called
/// once per node and aborts the search when it returns false; the second
/// component of the result is false in that case.
pub fn max_independent_set(
    adj: &[u128],
    lower: u32,
    tick: &mut dyn FnMut() -> bool,
) -> (Option<(u32, u128)>, bool) {
    let n = adj.len();
    assert!(n <= 128, "at most 128 vertices");
    let all: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };
    let comp: Vec<u128> = (0..n).map(|v| !adj[v] & all & !(1u128 << v)).collect();
    let mut state = Clique {
        comp: &comp,
        best_size: lower,
        best: None,
        tick,
        aborted: false,
    };
    state.expand(0, 0, all);
    let found = state.best.map(|s| (s.count_ones(), s));
    (found, !state.aborted)
}

struct Clique<'a> {
    comp: &'a [u128],
    best_size: u32,
    best: Option<u128>,
    tick: &'a mut dyn FnMut() -> bool,
    aborted: bool,
}

impl Clique<'_> {
    fn expand(&mut self, size: u32, current: u128, mut cand: u128) {
        if self.aborted || !(self.tick)() {
            self.aborted = true;
            return;
        }
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = Some(current);
            }
            return;
        }
        // greedy colouring of the candidates; colour classes are
        // independent in the complement, so a clique meets each at most once
        let mut order: Vec<(usize, u32)> = Vec::with_capacity(cand.count_ones() as usize);
        let mut uncoloured = cand;
        let mut colour = 0;
        while uncoloured != 0 {
            colour += 1;
            let mut q = uncoloured;
            while q != 0 {
                let v = q.trailing_zeros() as usize;
                q &= !(1u128 << v);
                uncoloured &= !(1u128 << v);
                q &= !self.comp[v];
                order.push((v, colour));
            }
        }
        while let Some((v, c)) = order.pop() {
            if size + c <= self.best_size {
                return;
            }
            self.expand(size + 1, current | 1u128 << v, cand & self.comp[v]);
            if self.aborted {
                return;
            }
            cand &= !(1u128 << v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_df(allowed: u64, diffs: u64, width: u32) -> u32 {
        let mut best = 0;
        for s in 0u64..1 << width {
            if s & !allowed != 0 {
                continue;
            }
            let ok = (0..width).all(|i| {
                s >> i & 1 == 0 || (1..width).all(|g| diffs >> g & 1 == 0 || i + g >= width || s >> (i + g) & 1 == 0)
            });
            if ok {
                best = best.max(s.count_ones());
            }
        }
        best
    }

    #[test]
    fn difference_free_matches_brute_force() {
        let width = 10;
        let mut rng = 12345u64;
        for _ in 0..300 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let allowed = (rng >> 20) & ((1 << width) - 1);
            let diffs = (rng >> 40) & ((1 << width) - 1) & !1;
            let (size, set) = max_difference_free(allowed, diffs);
            assert_eq!(size, brute_df(allowed, diffs, width), "{allowed:b} {diffs:b}");
            assert_eq!(set & !allowed, 0);
            assert_eq!(set.count_ones(), size);
            assert!(difference_free_bound(allowed, diffs) >= size);
        }
    }

    #[test]
    fn difference_free_long_line() {
        // only difference 1 forbidden: alternate positions
        assert_eq!(max_difference_free((1 << 45) - 1, 0b10).0, 23);
        assert_eq!(max_difference_free((1 << 40) - 1, 0).0, 40);
    }

    #[test]
    fn mis_on_cycle_and_bound() {
        // 5-cycle: independence number 2
        let n = 5;
        let adj: Vec<u128> = (0..n).map(|v| 1u128 << ((v + 1) % n) | 1u128 << ((v + n - 1) % n)).collect();
        let (res, done) = max_independent_set(&adj, 0, &mut || true);
        assert!(done);
        let (size, set) = res.unwrap();
        assert_eq!(size, 2);
        for v in 0..n {
            if set >> v & 1 == 1 {
                assert_eq!(adj[v] & set, 0);
            }
        }
        assert!(max_independent_set(&adj, 2, &mut || true).0.is_none());
    }

    #[test]
    fn mis_can_abort() {
        let adj = vec![0u128; 30];
        let mut left = 3;
        let (_, done) = max_independent_set(&adj, 0, &mut || {
            left -= 1;
            left > 0
        });
        assert!(!done);
    }
}

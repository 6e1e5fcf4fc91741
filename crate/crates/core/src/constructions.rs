//! Explicit constructions: line triples in `{0..n}` and their passage to
//! cyclic groups, 3AP-free sets, primitive sets and the skew corner-free
//! sets built from them, the averaging counterexample, and the mixed-radix
//! embedding of a factored group into a cyclic one.

use std::collections::HashSet;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::grid_sets::{GridSet, Point, TriSet, Violation, ViolationKind};
use crate::groups::{self, AbelianGroup, GroupTriple};

/// Three sets of lines `A, B, C` in `{0..n}`; a point `(a,b,c)` of the
/// triangular grid is realised when all three of its lines are present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineTriple {
    pub n: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl LineTriple {
    pub fn new(n: u32, a: Vec<u32>, b: Vec<u32>, c: Vec<u32>) -> Result<Self> {
        let fix = |mut v: Vec<u32>| -> Result<Vec<u32>> {
            v.sort_unstable();
            v.dedup();
            if let Some(&x) = v.iter().find(|&&x| x > n) {
                return Err(Error::OutOfRange {
                    point: x.to_string(),
                    n,
                });
            }
            Ok(v)
        };
        Ok(LineTriple {
            n,
            a: fix(a)?,
            b: fix(b)?,
            c: fix(c)?,
        })
    }

    /// Points `(a, b, c)` in `A x B x C` with `a + b + c = n`.
    pub fn solutions(&self) -> TriSet {
        groups::line_solutions(&self.a, &self.b, &self.c, self.n)
    }

    pub fn solution_count(&self) -> usize {
        self.solutions().len()
    }

    fn bits(&self) -> [BitSet; 3] {
        let len = self.n as usize + 1;
        [&self.a, &self.b, &self.c].map(|s| BitSet::from_iter_with_len(len, s.iter().map(|&x| x as usize)))
    }
}

/// For each fixed pair of parts, two distinct solutions of the system
/// `n = (p' , ., .) = (., q', .)`-style equations; reported as the 3 or 4
/// realised points involved.
pub fn line_trapezoid_violation(t: &LineTriple) -> Option<Violation> {
    let n = t.n as i64;
    let bits = t.bits();
    let sets = [&t.a, &t.b, &t.c];
    // neighbours in part r of vertex v in part p: third coordinate forced
    let nbrs = |p: usize, r: usize| -> Vec<(u32, BitSet)> {
        let q = 3 - p - r;
        sets[p]
            .iter()
            .map(|&v| {
                let mut s = BitSet::new(t.n as usize + 1);
                for &z in sets[r] {
                    let other = n - v as i64 - z as i64;
                    if other >= 0 && bits[q].contains(other as usize) {
                        s.insert(z as usize);
                    }
                }
                (v, s)
            })
            .collect()
    };
    for (p, q, r) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let np = nbrs(p, r);
        let nq = nbrs(q, r);
        for (u, su) in &np {
            for (w, sw) in &nq {
                if su.intersection_count(sw) < 2 {
                    continue;
                }
                let mut common = su.clone();
                common.intersect_with(sw);
                let zs: Vec<usize> = common.iter().take(2).collect();
                let mut pts: Vec<Point> = Vec::new();
                for &z in &zs {
                    // point on line u (part p) and point on line w (part q)
                    for (fixed_part, fixed_val, free_part) in [(p, *u, q), (q, *w, p)] {
                        let mut v = [0u32; 3];
                        v[fixed_part] = fixed_val;
                        v[r] = z as u32;
                        v[free_part] = (n - fixed_val as i64 - z as i64) as u32;
                        let pt = Point::Tri(v[0], v[1], v[2]);
                        if !pts.contains(&pt) {
                            pts.push(pt);
                        }
                    }
                }
                return Some(Violation {
                    kind: ViolationKind::Trapezoid,
                    points: pts,
                    gap: zs[0] as i64 - zs[1] as i64,
                });
            }
        }
    }
    None
}

/// Each of the three two-equation systems has at most one solution.
pub fn is_line_trapezoid_free(t: &LineTriple) -> bool {
    line_trapezoid_violation(t).is_none()
}

/// `(A + 2n, B, C)` in `Z_{3n}`: solutions of `a + b + c = n` become exactly
/// the zero-sum triples.
pub fn line_triple_to_cyclic(t: &LineTriple) -> Result<GroupTriple> {
    if t.n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let m = 3 * t.n;
    let g = AbelianGroup::cyclic(m)?;
    let idx = |v: &[u32], shift: u32| v.iter().map(|&x| ((x + shift) % m) as usize).collect();
    GroupTriple::from_indices(g, idx(&t.a, 2 * t.n), idx(&t.b, 0), idx(&t.c, 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicToLineReport {
    pub group_count: u64,
    pub count_at_n: u64,
    pub count_at_2n: u64,
    pub chosen_target: u32,
}

/// Splits the zero-sum triples of a trapezoid-free triple in `Z_n` by
/// whether `a + b + c` equals `n` or `2n` as integers, and keeps the larger
/// side as a line triple.
pub fn cyclic_to_line(t: &GroupTriple) -> Result<(LineTriple, CyclicToLineReport)> {
    let [m] = t.group.factors() else {
        return Err(Error::Precondition("expected a cyclic group Z_n".into()));
    };
    let m = *m;
    if !groups::is_trapezoid_free(t) {
        return Err(Error::Precondition("triple is not equilateral trapezoid-free".into()));
    }
    let tri = t.zero_sum_triples();
    let mut at = [0u64; 3];
    for &(a, b, c) in &tri {
        at[(a + b + c) / m as usize] += 1;
    }
    let target = if at[2] > at[1] { 2 * m } else { m };
    let conv = |v: &[usize]| v.iter().map(|&x| x as u32).collect();
    let line = LineTriple::new(target, conv(&t.a), conv(&t.b), conv(&t.c))?;
    Ok((
        line,
        CyclicToLineReport {
            group_count: tri.len() as u64,
            count_at_n: at[1],
            count_at_2n: at[2],
            chosen_target: target,
        },
    ))
}

/// No `x, y, z` in `s` with `x + z = 2y` and `x != z` (over the integers,
/// or modulo `modulus` when given).
pub fn is_3ap_free(s: &[u32], modulus: Option<u32>) -> bool {
    let set: HashSet<u32> = s.iter().copied().collect();
    for &y in &set {
        for &x in &set {
            let z = match modulus {
                Some(m) => {
                    let m = m as i64;
                    (((2 * y as i64 - x as i64) % m + m) % m) as u32
                }
                None => {
                    let z = 2 * y as i64 - x as i64;
                    if z < 0 {
                        continue;
                    }
                    z as u32
                }
            };
            if z != x && set.contains(&z) {
                return false;
            }
        }
    }
    true
}

/// Digits `0..d` in base `2d - 1`, so that adding two such numbers never
/// carries; among numbers with `k` digits and value at most `limit`, the
/// largest class of equal digit square-sum (a sphere layer) is 3AP-free.
fn sphere_layer(d: u64, k: u32, limit: u64) -> Vec<u64> {
    let base = 2 * d - 1;
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); (k as usize) * ((d - 1) * (d - 1)) as usize + 1];
    for code in 0..d.pow(k) {
        let mut c = code;
        let (mut value, mut sq, mut place) = (0u64, 0u64, 1u64);
        for _ in 0..k {
            let digit = c % d;
            c /= d;
            value += digit * place;
            sq += digit * digit;
            place *= base;
        }
        if value <= limit {
            classes[sq as usize].push(value);
        }
    }
    classes.into_iter().max_by_key(|v| v.len()).unwrap_or_default()
}

/// A 3AP-free subset of `[n] = {1..n}`, the best over a sweep of sphere-layer
/// parameters (digit bound `d`, digit count `k`). For `d = 2` every number
/// with base-3 digits in `{0,1}` is kept, which is already 3AP-free.
pub fn behrend_3ap_free(n: u32) -> Vec<u32> {
    if n == 0 {
        return Vec::new();
    }
    let limit = n as u64 - 1; // values shifted by +1 into [n]
    let mut best: Vec<u64> = vec![0];
    // d = 2: all {0,1}-digit numbers in base 3
    let mut layer2 = Vec::new();
    let mut k = 0u32;
    while 3u64.pow(k) <= limit.max(1) && k < 40 {
        k += 1;
    }
    for code in 0u64..(1u64 << k) {
        let mut value = 0u64;
        let mut place = 1u64;
        let mut c = code;
        while c > 0 {
            value += (c & 1) * place;
            c >>= 1;
            place *= 3;
        }
        if value <= limit {
            layer2.push(value);
        }
    }
    if layer2.len() > best.len() {
        best = layer2;
    }
    // parameters with d^k <= 16n; the set of admissible parameters only
    // grows with n, so the output size is nondecreasing in n
    let budget = 16 * n as u64;
    for k in 2u32..=40 {
        if 3u64.checked_pow(k).is_none_or(|t| t > budget) {
            break;
        }
        for d in 3u64.. {
            if d.checked_pow(k).is_none_or(|t| t > budget) {
                break;
            }
            let layer = sphere_layer(d, k, limit);
            if layer.len() > best.len() {
                best = layer;
            }
        }
    }
    let mut out: Vec<u32> = best.into_iter().map(|v| v as u32 + 1).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrimitiveStrategy {
    /// `(n/2, n]`
    HalfInterval,
    /// Integers with exactly `k` prime factors counted with multiplicity.
    FixedPrimeCount(u32),
    /// Whichever of the above maximises `sum 1/a`.
    BestOf,
}

impl std::str::FromStr for PrimitiveStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_interval" | "half-interval" => Ok(PrimitiveStrategy::HalfInterval),
            "best_of" | "best-of" | "best" => Ok(PrimitiveStrategy::BestOf),
            _ => {
                let k = s
                    .strip_prefix("fixed_prime_count:")
                    .or_else(|| s.strip_prefix("fixed-prime-count:"))
                    .or_else(|| s.strip_prefix("k="))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Precondition(format!("unknown primitive strategy `{s}`")))?;
                Ok(PrimitiveStrategy::FixedPrimeCount(k))
            }
        }
    }
}

/// `Omega(a)` for `a` in `0..=n` (`Omega(0) = Omega(1) = 0`).
fn big_omega_table(n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut omega = vec![0u32; n + 1];
    let mut rest: Vec<usize> = (0..=n).collect();
    for p in 2..=n {
        if rest[p] == p && omega[p] == 0 {
            // p is prime: strip every power of p from its multiples
            let mut m = p;
            while m <= n {
                while rest[m] % p == 0 {
                    rest[m] /= p;
                    omega[m] += 1;
                }
                m += p;
            }
        }
    }
    omega
}

fn reciprocal_sum(s: &[u32]) -> f64 {
    s.iter().map(|&a| 1.0 / a as f64).sum()
}

pub fn primitive_set(n: u32, strategy: PrimitiveStrategy) -> Vec<u32> {
    match strategy {
        PrimitiveStrategy::HalfInterval => (n / 2 + 1..=n).collect(),
        PrimitiveStrategy::FixedPrimeCount(k) => {
            let omega = big_omega_table(n);
            (1..=n).filter(|&a| omega[a as usize] == k).collect()
        }
        PrimitiveStrategy::BestOf => {
            let omega = big_omega_table(n);
            let mut best = primitive_set(n, PrimitiveStrategy::HalfInterval);
            let mut best_sum = reciprocal_sum(&best);
            let max_k = omega.iter().copied().max().unwrap_or(0);
            for k in 0..=max_k {
                let cand: Vec<u32> = (1..=n).filter(|&a| omega[a as usize] == k).collect();
                let s = reciprocal_sum(&cand);
                if s > best_sum {
                    best = cand;
                    best_sum = s;
                }
            }
            best
        }
    }
}

/// No element divides another.
pub fn is_primitive(s: &[u32]) -> bool {
    let Some(&max) = s.iter().max() else {
        return true;
    };
    let mut seen = BitSet::new(max as usize + 1);
    for &a in s {
        if a == 0 || seen.contains(a as usize) {
            return false;
        }
        seen.insert(a as usize);
    }
    s.iter().all(|&a| {
        (2..)
            .map(|k| k * a as usize)
            .take_while(|&m| m <= max as usize)
            .all(|m| !seen.contains(m))
    })
}

/// `{(a, k a) : a in A, 1 <= k <= n/a}` for a primitive `A`.
pub fn petrov_from_primitive(n: u32, primitive: &[u32]) -> Result<GridSet> {
    if !is_primitive(primitive) {
        return Err(Error::Precondition("set is not primitive".into()));
    }
    if primitive.iter().any(|&a| a > n) {
        return Err(Error::Precondition("primitive set must lie in [n]".into()));
    }
    GridSet::from_columns(
        n,
        primitive
            .iter()
            .map(|&a| (a, (1..=n / a).map(|k| k * a).collect())),
    )
}

pub fn petrov_construction(n: u32, strategy: PrimitiveStrategy) -> Result<GridSet> {
    petrov_from_primitive(n, &primitive_set(n, strategy))
}

/// `|{(a, b) in A x B : a + b = target (mod m)}|`.
pub fn representation_count(a: &[usize], b: &BitSet, target: usize, m: usize) -> u64 {
    a.iter()
        .filter(|&&x| b.contains((target + m - x % m) % m))
        .count() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    pub fn le(name: &str, lhs: f64, rhs: f64) -> Self {
        Inequality {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgbadReport {
    pub n: u32,
    pub modulus: u64,
    pub progression_free: Vec<u32>,
    pub size_a: usize,
    pub size_b: usize,
    pub size_c: usize,
    /// `sum_{c in C} r(A, B, -c)`, the number of zero-sum triples.
    pub solution_count: u64,
    /// `sum_{c in C} r(A, B, -c)^2`.
    pub second_moment: u64,
    /// `|S| * #{(y1, y2) in [0, n/2]^2 : 1 <= y1 + y2 <= n}`.
    pub diagonal_lower_bound: u64,
    pub inequalities: Vec<Inequality>,
}

/// `A = B = [3n^2, 4n^2] ∪ ⋃_{x in S} [xn, xn + n/2]`,
/// `C = -{2xn + y : x in S, y in [n]}` in `Z_{100 n^2}` with `S` 3AP-free.
pub fn avgbad_construction(n: u32) -> Result<(GroupTriple, AvgbadReport)> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::Precondition("n must be even and at least 4".into()));
    }
    let nn = n as usize;
    let m = 100 * nn * nn;
    let s = behrend_3ap_free(n);
    let mut a: Vec<usize> = (3 * nn * nn..=4 * nn * nn).collect();
    for &x in &s {
        a.extend(x as usize * nn..=x as usize * nn + nn / 2);
    }
    a.sort_unstable();
    a.dedup();
    let mut c: Vec<usize> = Vec::with_capacity(s.len() * nn);
    for &x in &s {
        for y in 1..=nn {
            c.push((m - (2 * x as usize * nn + y)) % m);
        }
    }
    c.sort_unstable();
    c.dedup();
    let g = AbelianGroup::cyclic(m as u32)?;
    let t = GroupTriple::from_indices(g, a.clone(), a.clone(), c.clone())?;
    let bbits = BitSet::from_iter_with_len(m, a.iter().copied());
    let (mut count, mut moment) = (0u64, 0u64);
    for &cv in &c {
        let r = representation_count(&a, &bbits, (m - cv) % m, m);
        count += r;
        moment += r * r;
    }
    let h = (nn / 2) as u64;
    let diagonal = s.len() as u64 * ((h + 1) * (h + 1) - 1);
    let size_a = t.a.len();
    let inequalities = vec![
        Inequality::le("second_moment <= |A||B|", moment as f64, (size_a * size_a) as f64),
        Inequality::le("diagonal_lower_bound <= solution_count", diagonal as f64, count as f64),
    ];
    let report = AvgbadReport {
        n,
        modulus: m as u64,
        progression_free: s,
        size_a,
        size_b: t.b.len(),
        size_c: t.c.len(),
        solution_count: count,
        second_moment: moment,
        diagonal_lower_bound: diagonal,
        inequalities,
    };
    Ok((t, report))
}

/// The mixed-radix map `(x_1, ..., x_k) -> x_1 + 3m_1 x_2 + 3m_1 3m_2 x_3 + ...`
/// from `Z_{m_1} x ... x Z_{m_k}` into `Z_{prod 3 m_i}`. Sums of three images
/// never wrap, so distinct three-term sums stay distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicEmbedding {
    pub source: AbelianGroup,
    pub modulus: u64,
    places: Vec<u64>,
}

pub fn embed_into_cyclic(g: &AbelianGroup) -> Result<CyclicEmbedding> {
    let mut places = Vec::with_capacity(g.factors().len());
    let mut place: u64 = 1;
    for &m in g.factors() {
        places.push(place);
        place = place
            .checked_mul(3 * m as u64)
            .filter(|&p| p <= u32::MAX as u64)
            .ok_or_else(|| Error::Precondition("embedding modulus too large".into()))?;
    }
    Ok(CyclicEmbedding {
        source: g.clone(),
        modulus: place,
        places,
    })
}

impl CyclicEmbedding {
    pub fn target(&self) -> AbelianGroup {
        AbelianGroup::cyclic(self.modulus as u32).expect("modulus >= 1")
    }

    /// Image of the element with the given index in the source group.
    pub fn map_index(&self, idx: usize) -> usize {
        let e = self.source.elem(idx);
        e.residues
            .iter()
            .zip(&self.places)
            .map(|(&x, &p)| x as u64 * p)
            .sum::<u64>() as usize
    }

    pub fn map_set(&self, s: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&i| self.map_index(i)).collect();
        v.sort_unstable();
        v
    }

    pub fn map_triple(&self, t: &GroupTriple) -> Result<GroupTriple> {
        GroupTriple::from_indices(self.target(), self.map_set(&t.a), self.map_set(&t.b), self.map_set(&t.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_line_triple() {
        let n = 6;
        let all: Vec<u32> = (0..=n).collect();
        let t = LineTriple::new(n, vec![0], all.clone(), all.clone()).unwrap();
        assert!(is_line_trapezoid_free(&t));
        assert_eq!(t.solution_count(), n as usize + 1);
        let full = LineTriple::new(n, all.clone(), all.clone(), all).unwrap();
        let v = line_trapezoid_violation(&full).unwrap();
        assert!(v.points.len() == 3 || v.points.len() == 4);
        let sol = full.solutions();
        for p in &v.points {
            let Point::Tri(a, b, c) = *p else { panic!() };
            assert!(sol.contains((a, b, c)));
        }
    }

    #[test]
    fn line_triple_range_checked() {
        assert!(LineTriple::new(3, vec![4], vec![], vec![]).is_err());
    }

    #[test]
    fn forward_cyclic_keeps_count() {
        let n = 5;
        let all: Vec<u32> = (0..=n).collect();
        let t = LineTriple::new(n, vec![0], all.clone(), all).unwrap();
        let g = line_triple_to_cyclic(&t).unwrap();
        assert_eq!(g.group.order(), 15);
        assert!(groups::is_trapezoid_free(&g));
        assert_eq!(groups::count_zero_sum_triples(&g), n as u64 + 1);
    }

    #[test]
    fn three_ap_examples() {
        assert!(is_3ap_free(&[1, 2], None));
        assert!(!is_3ap_free(&[1, 2, 3], None));
        assert!(is_3ap_free(&[1, 2, 4], Some(13)));
        assert!(!is_3ap_free(&[0, 1, 2], Some(7)));
        // 0, 3, 6 wraps to an AP modulo 9 but 1, 4 and 7 is an AP anyway
        assert!(!is_3ap_free(&[0, 5, 1], Some(9)));
    }

    #[test]
    fn behrend_is_3ap_free_and_grows() {
        let mut last = 0;
        for n in [10, 100, 1000, 10_000] {
            let s = behrend_3ap_free(n);
            assert!(is_3ap_free(&s, None), "n = {n}");
            assert!(s.iter().all(|&x| (1..=n).contains(&x)));
            assert!(s.len() >= last);
            last = s.len();
        }
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive(&[3, 4, 5]));
        assert!(!is_primitive(&[2, 4]));
        assert_eq!(primitive_set(10, PrimitiveStrategy::HalfInterval), vec![6, 7, 8, 9, 10]);
        assert_eq!(primitive_set(12, PrimitiveStrategy::FixedPrimeCount(2)), vec![4, 6, 9, 10]);
        assert_eq!(primitive_set(1, PrimitiveStrategy::BestOf), vec![1]);
    }

    #[test]
    fn petrov_small() {
        let s = petrov_from_primitive(10, &[3, 4, 5]).unwrap();
        assert_eq!(
            s.points().collect::<Vec<_>>(),
            vec![(3, 3), (3, 6), (3, 9), (4, 4), (4, 8), (5, 5), (5, 10)]
        );
        assert!(crate::grid_sets::is_skew_corner_free_grid(&s));
        let one = petrov_construction(1, PrimitiveStrategy::BestOf).unwrap();
        assert_eq!(one.points().collect::<Vec<_>>(), vec![(1, 1)]);
        assert!(petrov_from_primitive(10, &[2, 4]).is_err());
    }

    #[test]
    fn representation_count_examples() {
        let b = BitSet::from_iter_with_len(5, [0]);
        assert_eq!(representation_count(&[0], &b, 0, 5), 1);
        let all = BitSet::from_iter_with_len(5, 0..5);
        let a: Vec<usize> = (0..5).collect();
        for t in 0..5 {
            assert_eq!(representation_count(&a, &all, t, 5), 5);
        }
    }

    #[test]
    fn avgbad_rejects_bad_n() {
        assert!(avgbad_construction(3).is_err());
        assert!(avgbad_construction(5).is_err());
        assert!(avgbad_construction(2).is_err());
    }

    #[test]
    fn embedding_examples() {
        let e = embed_into_cyclic(&AbelianGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(e.modulus, 6);
        assert_eq!((e.map_index(0), e.map_index(1)), (0, 1));
        let g: AbelianGroup = "Z2xZ3".parse().unwrap();
        let e = embed_into_cyclic(&g).unwrap();
        assert_eq!(e.modulus, 54);
        let idx = g.index_of(&crate::groups::GroupElem::new(vec![1, 2])).unwrap();
        assert_eq!(e.map_index(idx), 13);
    }
}

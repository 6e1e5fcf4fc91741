//! Finite abelian groups in factored form, the addition hypergraph `X_G`,
//! the matrix multiplication hypergraph `M_{p,q,r}`, and the equilateral
//! trapezoid-free condition on triples of subsets.
//!
//! Elements are residue vectors. Internally every element also has a
//! mixed-radix index (`x_1 + m_1 x_2 + m_1 m_2 x_3 + ...`) so that subsets
//! can be held as bit sets; the first factor varies fastest.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::grid_sets::TriSet;

pub const DEFAULT_TRIANGLE_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u32>,
    strides: Vec<usize>,
    order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    pub residues: Vec<u32>,
}

impl GroupElem {
    pub fn new(residues: Vec<u32>) -> Self {
        GroupElem { residues }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl AbelianGroup {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("factor Z{bad} (factors must be >= 2)")));
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut order: usize = 1;
        for &m in &factors {
            strides.push(order);
            order = order
                .checked_mul(m as usize)
                .ok_or_else(|| Error::InvalidGroup("order overflows".into()))?;
        }
        Ok(AbelianGroup {
            factors,
            strides,
            order,
        })
    }

    pub fn cyclic(m: u32) -> Result<Self> {
        if m == 1 {
            return Ok(Self::trivial());
        }
        Self::new(vec![m])
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("empty factor list")
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Direct product `self x other` (factor lists concatenated).
    pub fn product(&self, other: &AbelianGroup) -> Result<AbelianGroup> {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        AbelianGroup::new(f)
    }

    pub fn power(&self, k: usize) -> Result<AbelianGroup> {
        AbelianGroup::new(self.factors.repeat(k))
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem::new(vec![0; self.factors.len()])
    }

    fn check(&self, a: &GroupElem) -> Result<()> {
        let ok = a.residues.len() == self.factors.len()
            && a.residues.iter().zip(&self.factors).all(|(x, m)| x < m);
        if ok {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: format!("({a})"),
                right: self.to_string(),
            })
        }
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElem::new(
            a.residues
                .iter()
                .zip(&b.residues)
                .zip(&self.factors)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        ))
    }

    pub fn neg(&self, a: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        Ok(GroupElem::new(
            a.residues
                .iter()
                .zip(&self.factors)
                .map(|(x, m)| (m - x) % m)
                .collect(),
        ))
    }

    pub fn index_of(&self, a: &GroupElem) -> Result<usize> {
        self.check(a)?;
        Ok(a.residues
            .iter()
            .zip(&self.strides)
            .map(|(&x, s)| x as usize * s)
            .sum())
    }

    pub fn elem(&self, mut idx: usize) -> GroupElem {
        debug_assert!(idx < self.order);
        let mut r = Vec::with_capacity(self.factors.len());
        for &m in &self.factors {
            r.push((idx % m as usize) as u32);
            idx /= m as usize;
        }
        GroupElem::new(r)
    }

    #[inline]
    pub fn add_idx(&self, mut a: usize, mut b: usize) -> usize {
        if self.factors.len() == 1 {
            let m = self.order;
            let s = a + b;
            return if s >= m { s - m } else { s };
        }
        let mut out = 0;
        for (&m, &st) in self.factors.iter().zip(&self.strides) {
            let m = m as usize;
            let d = (a % m + b % m) % m;
            out += d * st;
            a /= m;
            b /= m;
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, mut a: usize) -> usize {
        if self.factors.len() == 1 {
            return (self.order - a) % self.order;
        }
        let mut out = 0;
        for (&m, &st) in self.factors.iter().zip(&self.strides) {
            let m = m as usize;
            out += ((m - a % m) % m) * st;
            a /= m;
        }
        out
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Index of `(g, h)` in `self x other` given indices in each factor.
    pub fn pair_index(&self, g: usize, h: usize) -> usize {
        g + self.order * h
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Accepts `Z6`, `Z2xZ3`, `Z7^4`, `Z2xZ3^2`, and `1` for the trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.eq_ignore_ascii_case("trivial") {
            return Ok(AbelianGroup::trivial());
        }
        let mut factors = Vec::new();
        for part in s.split(['x', 'X', '*']) {
            let part = part.trim();
            let body = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(|| Error::InvalidGroup(s.to_string()))?;
            let (m, k) = match body.split_once('^') {
                Some((m, k)) => (m, k.parse::<usize>().map_err(|_| Error::InvalidGroup(s.to_string()))?),
                None => (body, 1),
            };
            let m: u32 = m.parse().map_err(|_| Error::InvalidGroup(s.to_string()))?;
            if m == 1 {
                continue;
            }
            factors.extend(std::iter::repeat_n(m, k));
        }
        AbelianGroup::new(factors)
    }
}

/// Parses a comma-separated residue list such as `1,2`.
pub fn parse_elem(group: &AbelianGroup, s: &str) -> Result<GroupElem> {
    let residues: std::result::Result<Vec<u32>, _> = if s.trim().is_empty() {
        Ok(Vec::new())
    } else {
        s.split(',').map(|t| t.trim().parse::<u32>()).collect()
    };
    let e = GroupElem::new(residues.map_err(|_| Error::InvalidGroup(format!("element `{s}`")))?);
    group.check(&e)?;
    Ok(e)
}

/// Sorted, deduplicated element indices.
fn normalize(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Three subsets `(A, B, C)` of one group; elements held as indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTriple {
    pub group: AbelianGroup,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl GroupTriple {
    pub fn from_indices(group: AbelianGroup, a: Vec<usize>, b: Vec<usize>, c: Vec<usize>) -> Result<Self> {
        for &x in a.iter().chain(&b).chain(&c) {
            if x >= group.order() {
                return Err(Error::GroupMismatch {
                    left: format!("index {x}"),
                    right: group.to_string(),
                });
            }
        }
        Ok(GroupTriple {
            group,
            a: normalize(a),
            b: normalize(b),
            c: normalize(c),
        })
    }

    pub fn from_elems(group: AbelianGroup, a: &[GroupElem], b: &[GroupElem], c: &[GroupElem]) -> Result<Self> {
        let idx = |s: &[GroupElem]| s.iter().map(|e| group.index_of(e)).collect::<Result<Vec<_>>>();
        let (a, b, c) = (idx(a)?, idx(b)?, idx(c)?);
        Self::from_indices(group, a, b, c)
    }

    pub fn elems(&self, which: usize) -> Vec<GroupElem> {
        let s = match which {
            0 => &self.a,
            1 => &self.b,
            _ => &self.c,
        };
        s.iter().map(|&i| self.group.elem(i)).collect()
    }

    fn bits(&self) -> [BitSet; 3] {
        let n = self.group.order();
        [
            BitSet::from_iter_with_len(n, self.a.iter().copied()),
            BitSet::from_iter_with_len(n, self.b.iter().copied()),
            BitSet::from_iter_with_len(n, self.c.iter().copied()),
        ]
    }

    /// `(B, C, A)`.
    pub fn cyclic_shift(&self) -> GroupTriple {
        GroupTriple {
            group: self.group.clone(),
            a: self.b.clone(),
            b: self.c.clone(),
            c: self.a.clone(),
        }
    }

    /// `(A x A', B x B', C x C')` in `G x H`.
    pub fn product(&self, other: &GroupTriple) -> Result<GroupTriple> {
        let g = self.group.product(&other.group)?;
        let prod = |x: &[usize], y: &[usize]| {
            let mut v = Vec::with_capacity(x.len() * y.len());
            for &h in y {
                for &e in x {
                    v.push(self.group.pair_index(e, h));
                }
            }
            v
        };
        GroupTriple::from_indices(
            g,
            prod(&self.a, &other.a),
            prod(&self.b, &other.b),
            prod(&self.c, &other.c),
        )
    }

    /// All `(a, b, c)` in `A x B x C` with `a + b + c = 0`.
    pub fn zero_sum_triples(&self) -> Vec<(usize, usize, usize)> {
        let cbits = BitSet::from_iter_with_len(self.group.order(), self.c.iter().copied());
        let mut out = Vec::new();
        for &a in &self.a {
            for &b in &self.b {
                let c = self.group.neg_idx(self.group.add_idx(a, b));
                if cbits.contains(c) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }
}

/// Number of `(a, b, c)` in `A x B x C` with `a + b + c = 0`.
pub fn count_zero_sum_triples(t: &GroupTriple) -> u64 {
    let g = &t.group;
    let cbits = BitSet::from_iter_with_len(g.order(), t.c.iter().copied());
    let mut count = 0;
    for &a in &t.a {
        for &b in &t.b {
            if cbits.contains(g.neg_idx(g.add_idx(a, b))) {
                count += 1;
            }
        }
    }
    count
}

/// Which pair of coordinates is held fixed in a trapezoid system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPair {
    /// `0 = a' + b + c = a + b' + c`
    AB,
    /// `0 = a' + b + c = a + b + c'`
    AC,
    /// `0 = a + b' + c = a + b + c'`
    BC,
}

/// Two distinct solutions of one of the three trapezoid systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTrapezoid {
    pub system: FixedPair,
    pub fixed: (usize, usize),
    pub solutions: [(usize, usize, usize); 2],
}

/// Common-neighbour sets: `nbr[p][q][v]` is, for vertex `v` of part `p`,
/// the set of vertices in part `q` sharing a triangle with it.
fn neighbourhoods(t: &GroupTriple, parts: &[BitSet; 3], from: usize, to: usize) -> Vec<(usize, BitSet)> {
    let g = &t.group;
    let other = 3 - from - to;
    let src = match from {
        0 => &t.a,
        1 => &t.b,
        _ => &t.c,
    };
    let dst = match to {
        0 => &t.a,
        1 => &t.b,
        _ => &t.c,
    };
    src.iter()
        .map(|&v| {
            let mut s = BitSet::new(g.order());
            for &w in dst {
                // third vertex forced to -(v + w)
                if parts[other].contains(g.neg_idx(g.add_idx(v, w))) {
                    s.insert(w);
                }
            }
            (v, s)
        })
        .collect()
}

/// First violated codegree condition of the induced subhypergraph of
/// `X_G`, reported as two solutions of the corresponding system.
pub fn trapezoid_violation(t: &GroupTriple) -> Option<GroupTrapezoid> {
    let g = &t.group;
    let parts = t.bits();
    // (fixed parts, third part, system)
    let cases = [(0, 1, 2, FixedPair::AB), (0, 2, 1, FixedPair::AC), (1, 2, 0, FixedPair::BC)];
    for (p, q, r, system) in cases {
        let np = neighbourhoods(t, &parts, p, r);
        let nq = neighbourhoods(t, &parts, q, r);
        for (u, su) in &np {
            for (w, sw) in &nq {
                if su.intersection_count(sw) < 2 {
                    continue;
                }
                let mut common = su.clone();
                common.intersect_with(sw);
                let mut it = common.iter();
                let (z1, z2) = (it.next().unwrap(), it.next().unwrap());
                // Solution for common neighbour z: the triangle through (u, z)
                // supplies the q-coordinate, the triangle through (w, z) the
                // p-coordinate.
                let sol = |z: usize| {
                    let q_coord = g.neg_idx(g.add_idx(*u, z));
                    let p_coord = g.neg_idx(g.add_idx(*w, z));
                    let mut v = [0usize; 3];
                    v[p] = p_coord;
                    v[q] = q_coord;
                    v[r] = z;
                    (v[0], v[1], v[2])
                };
                return Some(GroupTrapezoid {
                    system,
                    fixed: (*u, *w),
                    solutions: [sol(z1), sol(z2)],
                });
            }
        }
    }
    None
}

/// Equilateral trapezoid-freeness, checked as the codegree condition on the
/// subhypergraph of `X_G` induced by `(A, B, C)` (linearity is automatic in
/// `X_G` since two coordinates determine the third).
pub fn is_trapezoid_free(t: &GroupTriple) -> bool {
    trapezoid_violation(t).is_none()
}

/// Triforce-freeness of integer sets `A, B, C` within `{0..n}`: the
/// solution set of `a + b + c = n` is corner-free in the triangular grid.
pub fn is_triforce_free_triple(a: &[u32], b: &[u32], c: &[u32], n: u32) -> bool {
    crate::grid_sets::is_corner_free_tri(&line_solutions(a, b, c, n))
}

pub(crate) fn line_solutions(a: &[u32], b: &[u32], c: &[u32], n: u32) -> TriSet {
    let cset: std::collections::HashSet<u32> = c.iter().copied().collect();
    let mut s = TriSet::new(n);
    for &x in a {
        for &y in b {
            if x + y <= n && cset.contains(&(n - x - y)) {
                s.insert((x, y, n - x - y)).expect("sums to n");
            }
        }
    }
    s
}

/// A tripartite 3-uniform hypergraph; vertices of each part are `0..parts[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph3 {
    pub parts: [usize; 3],
    pub triangles: Vec<[usize; 3]>,
}

impl Hypergraph3 {
    pub fn new(parts: [usize; 3], mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        for t in &triangles {
            if (0..3).any(|i| t[i] >= parts[i]) {
                return Err(Error::Precondition(format!("triangle {t:?} references a missing vertex")));
            }
        }
        triangles.sort_unstable();
        triangles.dedup();
        Ok(Hypergraph3 { parts, triangles })
    }

    /// The subhypergraph induced by keeping `keep[i]` in part `i`.
    pub fn induced(&self, keep: [&BitSet; 3]) -> Hypergraph3 {
        Hypergraph3 {
            parts: self.parts,
            triangles: self
                .triangles
                .iter()
                .filter(|t| (0..3).all(|i| keep[i].contains(t[i])))
                .copied()
                .collect(),
        }
    }
}

/// `X_G`: parts `G, G, G`, triangles the zero-sum triples.
pub fn build_xg(g: &AbelianGroup, cap: u64) -> Result<Hypergraph3> {
    let n = g.order();
    let requested = (n as u64).saturating_mul(n as u64);
    if requested > cap {
        return Err(Error::SizeCap { requested, cap });
    }
    let mut tri = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            tri.push([a, b, g.neg_idx(g.add_idx(a, b))]);
        }
    }
    Hypergraph3::new([n, n, n], tri)
}

/// `M_{p,q,r}`: parts `[p]x[q], [q]x[r], [r]x[p]`, triangles
/// `((i,j),(j,l),(l,i))`. Vertex `(u, v)` of a part `[s]x[t]` has index `u*t + v`.
pub fn build_mpqr(p: usize, q: usize, r: usize, cap: u64) -> Result<Hypergraph3> {
    let requested = (p as u64) * (q as u64) * (r as u64);
    if requested > cap {
        return Err(Error::SizeCap { requested, cap });
    }
    let mut tri = Vec::with_capacity(requested as usize);
    for i in 0..p {
        for j in 0..q {
            for l in 0..r {
                tri.push([i * q + j, j * r + l, l * p + i]);
            }
        }
    }
    Hypergraph3::new([p * q, q * r, r * p], tri)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub linear: bool,
    pub codegree_ok: bool,
    pub triangles: u64,
    pub max_part: u64,
    /// `triangles^2 <= max_part^3`, i.e. at most `N^{3/2}` triangles.
    pub within_bound: bool,
}

impl ExtremalReport {
    pub fn satisfied(&self) -> bool {
        self.linear && self.codegree_ok
    }
}

/// Linearity plus the codegree condition (two vertices from different parts
/// have at most one common neighbour in the third part), together with the
/// triangle bound those conditions imply.
pub fn check_extremal_conditions(h: &Hypergraph3) -> Result<ExtremalReport> {
    let mut linear = true;
    let mut pair_seen: HashMap<(usize, usize, usize, usize), ()> = HashMap::new();
    'outer: for t in &h.triangles {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if pair_seen.insert((i, t[i], j, t[j]), ()).is_some() {
                linear = false;
                break 'outer;
            }
        }
    }
    // nbr[p][k][v]: neighbours in part k of vertex v in part p
    let mut nbr: Vec<Vec<Vec<BitSet>>> = (0..3)
        .map(|p| {
            (0..3)
                .map(|k| vec![BitSet::new(h.parts[k]); if k == p { 0 } else { h.parts[p] }])
                .collect()
        })
        .collect();
    for t in &h.triangles {
        for p in 0..3 {
            for k in 0..3 {
                if k != p {
                    nbr[p][k][t[p]].insert(t[k]);
                }
            }
        }
    }
    let mut codegree_ok = true;
    'cd: for (p, q, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        for u in &nbr[p][k] {
            if u.is_empty() {
                continue;
            }
            for w in &nbr[q][k] {
                if u.intersection_count(w) > 1 {
                    codegree_ok = false;
                    break 'cd;
                }
            }
        }
    }
    let triangles = h.triangles.len() as u64;
    let max_part = *h.parts.iter().max().unwrap() as u64;
    let within_bound = (triangles as u128).pow(2) <= (max_part as u128).pow(3);
    let report = ExtremalReport {
        linear,
        codegree_ok,
        triangles,
        max_part,
        within_bound,
    };
    if report.satisfied() && !within_bound {
        return Err(Error::Invariant(format!(
            "{triangles} triangles exceed N^(3/2) for N = {max_part}"
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMatching {
    pub modulus: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub size: usize,
}

/// From a 3AP-free `A` in `Z_n`, the triple `(A, A, -2A)` whose induced
/// subhypergraph of `X_{Z_n}` is a perfect matching of size `|A|`.
pub fn induced_matching_from_3apfree(a: &[u32], n: u32) -> Result<InducedMatching> {
    let g = AbelianGroup::cyclic(n)?;
    if a.iter().any(|&x| x >= n.max(1)) {
        return Err(Error::Precondition("elements must lie in 0..n".into()));
    }
    let mut a: Vec<u32> = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if !crate::constructions::is_3ap_free(&a, Some(n)) {
        return Err(Error::Precondition("input set contains a 3-term progression".into()));
    }
    let mut c: Vec<u32> = a.iter().map(|&x| ((2 * n as u64 - 2 * x as u64 % n as u64) % n as u64) as u32).collect();
    c.sort_unstable();
    c.dedup();
    if c.len() != a.len() {
        return Err(Error::Precondition("x -> -2x is not injective on the set".into()));
    }
    let t = GroupTriple::from_indices(
        g,
        a.iter().map(|&x| x as usize).collect(),
        a.iter().map(|&x| x as usize).collect(),
        c.iter().map(|&x| x as usize).collect(),
    )?;
    let tri = t.zero_sum_triples();
    let mut deg = [HashMap::new(), HashMap::new(), HashMap::new()];
    for &(x, y, z) in &tri {
        *deg[0].entry(x).or_insert(0) += 1;
        *deg[1].entry(y).or_insert(0) += 1;
        *deg[2].entry(z).or_insert(0) += 1;
    }
    let perfect = tri.len() == a.len()
        && [&t.a, &t.b, &t.c]
            .iter()
            .enumerate()
            .all(|(p, part)| part.iter().all(|v| deg[p].get(v) == Some(&1)));
    if !perfect {
        return Err(Error::Invariant("induced subhypergraph is not a perfect matching".into()));
    }
    Ok(InducedMatching {
        modulus: n,
        b: a.clone(),
        size: a.len(),
        a,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32) -> AbelianGroup {
        AbelianGroup::cyclic(m).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let g = z(6);
        let s = g.add(&GroupElem::new(vec![4]), &GroupElem::new(vec![5])).unwrap();
        assert_eq!(s.residues, vec![3]);
        let h: AbelianGroup = "Z2xZ3".parse().unwrap();
        let e = GroupElem::new(vec![1, 2]);
        assert_eq!(h.add(&e, &e).unwrap().residues, vec![0, 1]);
        assert_eq!(h.neg(&h.zero()).unwrap(), h.zero());
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let g = z(6);
        assert!(matches!(
            g.add(&GroupElem::new(vec![1, 0]), &g.zero()),
            Err(Error::GroupMismatch { .. })
        ));
        assert!(g.add(&GroupElem::new(vec![6]), &g.zero()).is_err());
    }

    #[test]
    fn group_literals() {
        let g: AbelianGroup = "Z7^4".parse().unwrap();
        assert_eq!(g.factors(), &[7, 7, 7, 7]);
        assert_eq!(g.order(), 2401);
        let g: AbelianGroup = "Z2xZ3^2".parse().unwrap();
        assert_eq!(g.factors(), &[2, 3, 3]);
        assert_eq!(g.to_string(), "Z2xZ3xZ3");
        assert_eq!("1".parse::<AbelianGroup>().unwrap().order(), 1);
        assert!("Q8".parse::<AbelianGroup>().is_err());
        assert!("Z0".parse::<AbelianGroup>().is_err());
        let e = parse_elem(&"Z2xZ3".parse().unwrap(), "1,2").unwrap();
        assert_eq!(e.residues, vec![1, 2]);
    }

    #[test]
    fn index_round_trip_and_ops() {
        let g: AbelianGroup = "Z2xZ3xZ4".parse().unwrap();
        for i in 0..g.order() {
            let e = g.elem(i);
            assert_eq!(g.index_of(&e).unwrap(), i);
            for j in 0..g.order() {
                let s = g.add(&e, &g.elem(j)).unwrap();
                assert_eq!(g.index_of(&s).unwrap(), g.add_idx(i, j));
            }
            assert_eq!(g.add_idx(i, g.neg_idx(i)), 0);
        }
    }

    #[test]
    fn zero_sum_counts() {
        let g = z(7);
        let all: Vec<usize> = (0..7).collect();
        let t = GroupTriple::from_indices(g.clone(), vec![0], all.clone(), all.clone()).unwrap();
        assert_eq!(count_zero_sum_triples(&t), 7);
        let t = GroupTriple::from_indices(g, vec![], all.clone(), all).unwrap();
        assert_eq!(count_zero_sum_triples(&t), 0);
    }

    #[test]
    fn trapezoid_examples() {
        let g = z(7);
        let all: Vec<usize> = (0..7).collect();
        let t = GroupTriple::from_indices(g, vec![0], all.clone(), all).unwrap();
        assert!(is_trapezoid_free(&t));

        let g = z(4);
        let all: Vec<usize> = (0..4).collect();
        let t = GroupTriple::from_indices(g.clone(), all.clone(), all.clone(), all).unwrap();
        let v = trapezoid_violation(&t).expect("full Z4 triple is not trapezoid-free");
        assert_ne!(v.solutions[0], v.solutions[1]);
        let (f1, f2) = v.fixed;
        for (a, b, c) in v.solutions {
            match v.system {
                FixedPair::AB => {
                    assert_eq!(g.add_idx(g.add_idx(f1, b), c), 0);
                    assert_eq!(g.add_idx(g.add_idx(a, f2), c), 0);
                }
                FixedPair::AC => {
                    assert_eq!(g.add_idx(g.add_idx(f1, b), c), 0);
                    assert_eq!(g.add_idx(g.add_idx(a, b), f2), 0);
                }
                FixedPair::BC => {
                    assert_eq!(g.add_idx(g.add_idx(a, f1), c), 0);
                    assert_eq!(g.add_idx(g.add_idx(a, b), f2), 0);
                }
            }
        }
    }

    #[test]
    fn hypergraph_sizes() {
        let x3 = build_xg(&z(3), DEFAULT_TRIANGLE_CAP).unwrap();
        assert_eq!(x3.triangles.len(), 9);
        let m = build_mpqr(2, 2, 2, DEFAULT_TRIANGLE_CAP).unwrap();
        assert_eq!(m.triangles.len(), 8);
        assert_eq!(m.parts, [4, 4, 4]);
        let m = build_mpqr(2, 3, 5, DEFAULT_TRIANGLE_CAP).unwrap();
        assert_eq!(m.parts, [6, 15, 10]);
        assert_eq!(build_mpqr(1, 1, 1, DEFAULT_TRIANGLE_CAP).unwrap().triangles.len(), 1);
        assert!(matches!(build_xg(&z(2000), DEFAULT_TRIANGLE_CAP), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn extremal_examples() {
        let r = check_extremal_conditions(&build_mpqr(3, 3, 3, DEFAULT_TRIANGLE_CAP).unwrap()).unwrap();
        assert!(r.satisfied());
        assert_eq!(r.triangles, 27);
        let r = check_extremal_conditions(&build_xg(&z(3), DEFAULT_TRIANGLE_CAP).unwrap()).unwrap();
        assert!(r.linear);
        assert!(!r.codegree_ok);
        let empty = Hypergraph3::new([0, 0, 0], vec![]).unwrap();
        assert!(check_extremal_conditions(&empty).unwrap().satisfied());
        let nonlinear = Hypergraph3::new([2, 2, 2], vec![[0, 0, 0], [0, 0, 1]]).unwrap();
        assert!(!check_extremal_conditions(&nonlinear).unwrap().linear);
    }

    #[test]
    fn triforce_examples() {
        let all: Vec<u32> = (0..=5).collect();
        assert!(is_triforce_free_triple(&[0], &all, &all, 5));
        assert!(!is_triforce_free_triple(&all, &all, &all, 5));
    }

    #[test]
    fn matching_examples() {
        let m = induced_matching_from_3apfree(&[0], 5).unwrap();
        assert_eq!(m.size, 1);
        let m = induced_matching_from_3apfree(&[1, 2, 4], 13).unwrap();
        assert_eq!(m.size, 3);
        assert_eq!(m.c, vec![5, 9, 11]);
        assert!(induced_matching_from_3apfree(&[0, 1, 2], 7).is_err());
        // -2x collides in Z_8 for x = 1 and x = 5
        assert!(induced_matching_from_3apfree(&[1, 5], 8).is_err());
    }

    #[test]
    fn cyclic_shift_three_times_is_identity() {
        let t = GroupTriple::from_indices(z(5), vec![0, 1], vec![2], vec![3, 4]).unwrap();
        assert_eq!(t.cyclic_shift().cyclic_shift().cyclic_shift(), t);
    }
}

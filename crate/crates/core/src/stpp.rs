//! Triple product property families in finite abelian groups.
//!
//! Everything is additive: the multiplicative quotient `S T^{-1}` is the
//! difference set `S - T`, and a triangle of the group hypergraph is a
//! triple with `a + b + c = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::constructions::CyclicEmbedding;
use crate::error::{Error, Result};
use crate::grid_sets::{is_corner_free_tri, TriSet};
use crate::groups::{count_zero_sum_triples, is_trapezoid_free, AbelianGroup, GroupElem, GroupTriple};

/// Set sizes above which the difference-set method replaces direct loops.
const DIRECT_LOOP_LIMIT: usize = 6;

/// Outcome of a verification; `Invalid` carries a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verified<W> {
    Unchecked,
    Valid,
    Invalid(W),
}

impl<W> Verified<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verified::Valid)
    }
}

/// `s - s' + t - t' + u - u' = 0` with not all three pairs equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TppViolation {
    pub s: (usize, usize),
    pub t: (usize, usize),
    pub u: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StppViolation {
    EmptySet { triple: usize },
    Tpp { triple: usize, violation: TppViolation },
    /// `(s_i - t_i) + (t_j - u_j) + (u_k - s_k) = 0` with `(i, j, k)` not all equal.
    Cross {
        indices: (usize, usize, usize),
        x: (usize, usize),
        y: (usize, usize),
        z: (usize, usize),
    },
}

impl fmt::Display for StppViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StppViolation::EmptySet { triple } => write!(f, "triple {triple} has an empty set"),
            StppViolation::Tpp { triple, violation } => write!(
                f,
                "triple {triple} fails the triple product property: s = {:?}, t = {:?}, u = {:?}",
                violation.s, violation.t, violation.u
            ),
            StppViolation::Cross { indices, .. } => {
                write!(f, "cross solution between triples {indices:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SdppViolation {
    EmptySet { pair: usize },
    /// `a - a' = b - b'` with `(a, b) != (a', b')` inside one pair.
    Double { pair: usize, a: (usize, usize), b: (usize, usize) },
    /// `a_i - a'_j + b_j - b'_k = 0` with `i != k`.
    Cross {
        indices: (usize, usize, usize),
        a: (usize, usize),
        b: (usize, usize),
    },
}

impl fmt::Display for SdppViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdppViolation::EmptySet { pair } => write!(f, "pair {pair} has an empty set"),
            SdppViolation::Double { pair, .. } => write!(f, "pair {pair} fails the double product property"),
            SdppViolation::Cross { indices, .. } => write!(f, "cross solution between pairs {indices:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StppTriple {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub u: Vec<usize>,
}

impl StppTriple {
    pub fn new(s: Vec<usize>, t: Vec<usize>, u: Vec<usize>) -> Self {
        let norm = |mut v: Vec<usize>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        StppTriple {
            s: norm(s),
            t: norm(t),
            u: norm(u),
        }
    }

    pub fn product_size(&self) -> u64 {
        (self.s.len() * self.t.len() * self.u.len()) as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StppFamily {
    pub group: AbelianGroup,
    pub triples: Vec<StppTriple>,
    pub verified: Verified<StppViolation>,
}

impl StppFamily {
    pub fn new(group: AbelianGroup, triples: Vec<StppTriple>) -> Result<Self> {
        for t in &triples {
            if t.s.iter().chain(&t.t).chain(&t.u).any(|&x| x >= group.order()) {
                return Err(Error::GroupMismatch {
                    left: "family element".into(),
                    right: group.to_string(),
                });
            }
        }
        Ok(StppFamily {
            group,
            triples,
            verified: Verified::Unchecked,
        })
    }

    /// Verifies once and caches the verdict.
    pub fn verify(&mut self) -> &Verified<StppViolation> {
        if self.verified == Verified::Unchecked {
            self.verified = verify_stpp(self);
        }
        &self.verified
    }

    fn require_valid(&self) -> Result<()> {
        let verdict = match &self.verified {
            Verified::Unchecked => verify_stpp(self),
            v => v.clone(),
        };
        match verdict {
            Verified::Valid => Ok(()),
            Verified::Invalid(w) => Err(Error::Precondition(format!("family is not an STPP family: {w}"))),
            Verified::Unchecked => unreachable!(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdppFamily {
    pub group: AbelianGroup,
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
    pub verified: Verified<SdppViolation>,
}

impl SdppFamily {
    pub fn new(group: AbelianGroup, pairs: Vec<(Vec<usize>, Vec<usize>)>) -> Result<Self> {
        let norm = |mut v: Vec<usize>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (norm(a), norm(b))).collect();
        for (a, b) in &pairs {
            if a.iter().chain(b).any(|&x| x >= group.order()) {
                return Err(Error::GroupMismatch {
                    left: "family element".into(),
                    right: group.to_string(),
                });
            }
        }
        Ok(SdppFamily {
            group,
            pairs,
            verified: Verified::Unchecked,
        })
    }

    pub fn verify(&mut self) -> &Verified<SdppViolation> {
        if self.verified == Verified::Unchecked {
            self.verified = verify_sdpp(self);
        }
        &self.verified
    }
}

fn difference_set(g: &AbelianGroup, x: &[usize], y: &[usize]) -> BitSet {
    let mut out = BitSet::new(g.order());
    for &a in x {
        for &b in y {
            out.insert(g.sub_idx(a, b));
        }
    }
    out
}

/// Finds `(p, p')` in `x` with `p - p' = d`.
fn find_difference(g: &AbelianGroup, x: &[usize], d: usize) -> Option<(usize, usize)> {
    x.iter()
        .flat_map(|&p| x.iter().map(move |&q| (p, q)))
        .find(|&(p, q)| g.sub_idx(p, q) == d)
}

fn tpp_direct(g: &AbelianGroup, s: &[usize], t: &[usize], u: &[usize]) -> Option<TppViolation> {
    for &s1 in s {
        for &s2 in s {
            let ds = g.sub_idx(s1, s2);
            for &t1 in t {
                for &t2 in t {
                    let dst = g.add_idx(ds, g.sub_idx(t1, t2));
                    for &u1 in u {
                        for &u2 in u {
                            let trivial = s1 == s2 && t1 == t2 && u1 == u2;
                            if !trivial && g.add_idx(dst, g.sub_idx(u1, u2)) == 0 {
                                return Some(TppViolation {
                                    s: (s1, s2),
                                    t: (t1, t2),
                                    u: (u1, u2),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// The only solution of `d_S + d_T + d_U = 0` over the three difference
/// sets is all zeros.
fn tpp_differences(g: &AbelianGroup, s: &[usize], t: &[usize], u: &[usize]) -> Option<TppViolation> {
    let qs = difference_set(g, s, s);
    let qt = difference_set(g, t, t);
    let qu = difference_set(g, u, u);
    for d1 in qs.iter() {
        for d2 in qt.iter() {
            if d1 == 0 && d2 == 0 {
                continue;
            }
            let d3 = g.neg_idx(g.add_idx(d1, d2));
            if qu.contains(d3) {
                let (s1, s2) = find_difference(g, s, d1).expect("difference present");
                let (t1, t2) = find_difference(g, t, d2).expect("difference present");
                let (u1, u2) = find_difference(g, u, d3).expect("difference present");
                return Some(TppViolation {
                    s: (s1, s2),
                    t: (t1, t2),
                    u: (u1, u2),
                });
            }
        }
    }
    None
}

/// Triple product property of `(S, T, U)`; `None` means it holds.
pub fn tpp_violation(g: &AbelianGroup, s: &[usize], t: &[usize], u: &[usize]) -> Option<TppViolation> {
    if s.len().max(t.len()).max(u.len()) <= DIRECT_LOOP_LIMIT {
        tpp_direct(g, s, t, u)
    } else {
        tpp_differences(g, s, t, u)
    }
}

pub fn verify_tpp(g: &AbelianGroup, s: &[usize], t: &[usize], u: &[usize]) -> bool {
    tpp_violation(g, s, t, u).is_none()
}

pub fn verify_stpp(f: &StppFamily) -> Verified<StppViolation> {
    let g = &f.group;
    for (i, t) in f.triples.iter().enumerate() {
        if t.s.is_empty() || t.t.is_empty() || t.u.is_empty() {
            return Verified::Invalid(StppViolation::EmptySet { triple: i });
        }
        if let Some(v) = tpp_violation(g, &t.s, &t.t, &t.u) {
            return Verified::Invalid(StppViolation::Tpp { triple: i, violation: v });
        }
    }
    let xs: Vec<BitSet> = f.triples.iter().map(|t| difference_set(g, &t.s, &t.t)).collect();
    let ys: Vec<BitSet> = f.triples.iter().map(|t| difference_set(g, &t.t, &t.u)).collect();
    // -Z_k = S_k - U_k
    let neg_zs: Vec<BitSet> = f.triples.iter().map(|t| difference_set(g, &t.s, &t.u)).collect();
    let m = f.triples.len();
    for i in 0..m {
        for j in 0..m {
            let mut sums = BitSet::new(g.order());
            for x in xs[i].iter() {
                for y in ys[j].iter() {
                    sums.insert(g.add_idx(x, y));
                }
            }
            for k in 0..m {
                if i == j && j == k || !sums.intersects(&neg_zs[k]) {
                    continue;
                }
                let mut hit = sums.clone();
                hit.intersect_with(&neg_zs[k]);
                let w = hit.iter().next().expect("nonempty intersection");
                let (ti, tj, tk) = (&f.triples[i], &f.triples[j], &f.triples[k]);
                for &s in &ti.s {
                    for &t in &ti.t {
                        let x = g.sub_idx(s, t);
                        for &t2 in &tj.t {
                            for &u in &tj.u {
                                if g.add_idx(x, g.sub_idx(t2, u)) != w {
                                    continue;
                                }
                                let z = g.neg_idx(w);
                                let (u2, s2) = tk
                                    .u
                                    .iter()
                                    .flat_map(|&u2| tk.s.iter().map(move |&s2| (u2, s2)))
                                    .find(|&(u2, s2)| g.sub_idx(u2, s2) == z)
                                    .expect("element of -Z_k");
                                return Verified::Invalid(StppViolation::Cross {
                                    indices: (i, j, k),
                                    x: (s, t),
                                    y: (t2, u),
                                    z: (u2, s2),
                                });
                            }
                        }
                    }
                }
                unreachable!("sumset element without representation");
            }
        }
    }
    Verified::Valid
}

pub fn verify_sdpp(f: &SdppFamily) -> Verified<SdppViolation> {
    let g = &f.group;
    for (i, (a, b)) in f.pairs.iter().enumerate() {
        if a.is_empty() || b.is_empty() {
            return Verified::Invalid(SdppViolation::EmptySet { pair: i });
        }
        // a - a' = b - b'  iff  a - b = a' - b'
        let mut seen: Vec<Option<(usize, usize)>> = vec![None; g.order()];
        for &x in a {
            for &y in b {
                let d = g.sub_idx(x, y);
                if let Some((x2, y2)) = seen[d] {
                    return Verified::Invalid(SdppViolation::Double {
                        pair: i,
                        a: (x, x2),
                        b: (y, y2),
                    });
                }
                seen[d] = Some((x, y));
            }
        }
    }
    // a_i - b'_k = a'_j - b_j for some j forces i = k
    let m = f.pairs.len();
    let diffs: Vec<BitSet> = f.pairs.iter().map(|(a, b)| difference_set(g, a, b)).collect();
    let mut any = BitSet::new(g.order());
    for d in &diffs {
        any.union_with(d);
    }
    for i in 0..m {
        for k in 0..m {
            if i == k {
                continue;
            }
            let lhs = difference_set(g, &f.pairs[i].0, &f.pairs[k].1);
            if !lhs.intersects(&any) {
                continue;
            }
            let mut hit = lhs;
            hit.intersect_with(&any);
            let w = hit.iter().next().expect("nonempty");
            let j = (0..m).find(|&j| diffs[j].contains(w)).expect("some pair");
            let (ai, bk) = f.pairs[i]
                .0
                .iter()
                .flat_map(|&x| f.pairs[k].1.iter().map(move |&y| (x, y)))
                .find(|&(x, y)| g.sub_idx(x, y) == w)
                .expect("representation");
            let (aj, bj) = f.pairs[j]
                .0
                .iter()
                .flat_map(|&x| f.pairs[j].1.iter().map(move |&y| (x, y)))
                .find(|&(x, y)| g.sub_idx(x, y) == w)
                .expect("representation");
            return Verified::Invalid(SdppViolation::Cross {
                indices: (i, j, k),
                a: (ai, aj),
                b: (bj, bk),
            });
        }
    }
    Verified::Valid
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackingReport {
    pub order: u64,
    /// `sum |S||T|`, `sum |T||U|`, `sum |U||S|`.
    pub sums: [u64; 3],
    pub slack: [i64; 3],
}

pub fn packing_bound_check(f: &StppFamily) -> Result<PackingReport> {
    f.require_valid()?;
    let order = f.group.order() as u64;
    let mut sums = [0u64; 3];
    for t in &f.triples {
        let (s, tt, u) = (t.s.len() as u64, t.t.len() as u64, t.u.len() as u64);
        sums[0] += s * tt;
        sums[1] += tt * u;
        sums[2] += u * s;
    }
    let slack = sums.map(|x| order as i64 - x as i64);
    if slack.iter().any(|&x| x < 0) {
        return Err(Error::Invariant(format!("valid family breaks the packing bound: {sums:?} > {order}")));
    }
    Ok(PackingReport { order, sums, slack })
}

pub const OMEGA_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaBound {
    /// The bound on the exponent, clamped to `[2, 3]`.
    pub omega: f64,
    /// False when the family gives nothing better than 3.
    pub improves: bool,
    /// `sum p_i^{omega/3} - |G|` at the returned value.
    pub residual: f64,
    pub tolerance: f64,
}

/// Solves `sum_i p_i^{w/3} = |G|` for `w` in `[2, 3]` by bisection, where
/// `p_i = |S_i||T_i||U_i|`.
pub fn omega_from_products(products: &[u64], order: u64) -> Result<OmegaBound> {
    if products.is_empty() || products.contains(&0) {
        return Err(Error::Precondition("need nonempty triples".into()));
    }
    let g = order as f64;
    let lhs = |w: f64| products.iter().map(|&p| (p as f64).powf(w / 3.0)).sum::<f64>();
    if products.iter().all(|&p| p == 1) {
        if products.len() as u64 > order {
            return Err(Error::Precondition("more unit triples than group elements".into()));
        }
        return Ok(OmegaBound {
            omega: 3.0,
            improves: false,
            residual: lhs(3.0) - g,
            tolerance: OMEGA_TOLERANCE,
        });
    }
    if lhs(3.0) <= g {
        return Ok(OmegaBound {
            omega: 3.0,
            improves: false,
            residual: lhs(3.0) - g,
            tolerance: OMEGA_TOLERANCE,
        });
    }
    if lhs(2.0) >= g {
        return Ok(OmegaBound {
            omega: 2.0,
            improves: true,
            residual: lhs(2.0) - g,
            tolerance: OMEGA_TOLERANCE,
        });
    }
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    while hi - lo > OMEGA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) > g {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    Ok(OmegaBound {
        omega: w,
        improves: w < 3.0 - OMEGA_TOLERANCE,
        residual: lhs(w) - g,
        tolerance: OMEGA_TOLERANCE,
    })
}

pub fn omega_bound(f: &StppFamily) -> Result<OmegaBound> {
    f.require_valid()?;
    let products: Vec<u64> = f.triples.iter().map(StppTriple::product_size).collect();
    omega_from_products(&products, f.group.order() as u64)
}

/// `log(|G| / k) / log(n)` for `k` disjoint induced copies of the
/// `n x n x n` matrix multiplication hypergraph.
pub fn naive_omega_from_packing(order: u64, k: u64, n: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if n <= 1 {
        return Err(Error::Precondition("n must exceed 1".into()));
    }
    Ok((order as f64 / k as f64).ln() / (n as f64).ln())
}

/// Lifts SDPP pairs indexed by `0..m` to STPP triples in `G^3`, one for
/// each point `v` of a corner-free index set:
/// `S_v = A_{v1} x 0 x B_{v3}`, `T_v = B_{v1} x A_{v2} x 0`,
/// `U_v = 0 x B_{v2} x A_{v3}`.
pub fn lift_sdpp_to_stpp(f: &SdppFamily, index_set: &TriSet) -> Result<StppFamily> {
    match &f.verified {
        Verified::Valid => {}
        Verified::Unchecked if verify_sdpp(f).is_valid() => {}
        _ => return Err(Error::Precondition("family is not an SDPP family".into())),
    }
    if !is_corner_free_tri(index_set) {
        return Err(Error::Precondition("index set is not corner-free".into()));
    }
    let m = f.pairs.len();
    if index_set.n() as usize >= m && !index_set.is_empty() {
        return Err(Error::Precondition(format!(
            "index set coordinates reach {} but only {m} pairs are given",
            index_set.n()
        )));
    }
    let g = &f.group;
    let order = g.order();
    let g3 = g.power(3)?;
    let embed = |x: usize, y: usize, z: usize| x + order * (y + order * z);
    let product = |xs: &[usize], ys: &[usize], zs: &[usize]| -> Vec<usize> {
        let mut out = Vec::with_capacity(xs.len() * ys.len() * zs.len());
        for &x in xs {
            for &y in ys {
                for &z in zs {
                    out.push(embed(x, y, z));
                }
            }
        }
        out
    };
    let zero = [0usize];
    let triples = index_set
        .points()
        .map(|(v1, v2, v3)| {
            let (a1, b1) = &f.pairs[v1 as usize];
            let (a2, b2) = &f.pairs[v2 as usize];
            let (a3, b3) = &f.pairs[v3 as usize];
            StppTriple::new(product(a1, &zero, b3), product(b1, a2, &zero), product(&zero, b2, a3))
        })
        .collect();
    StppFamily::new(g3, triples)
}

/// `(⊔ S_i - T_i, ⊔ T_i - U_i, ⊔ U_i - S_i)`, a trapezoid-free triple with
/// exactly `sum |S_i||T_i||U_i|` zero-sum triples.
pub fn stpp_to_trapezoid_witness(f: &StppFamily) -> Result<GroupTriple> {
    f.require_valid()?;
    let g = &f.group;
    let mut parts: [Vec<usize>; 3] = Default::default();
    for t in &f.triples {
        for (p, (x, y)) in [(&t.s, &t.t), (&t.t, &t.u), (&t.u, &t.s)].into_iter().enumerate() {
            parts[p].extend(difference_set(g, x, y).iter());
        }
    }
    let [a, b, c] = parts;
    let triple = GroupTriple::from_indices(g.clone(), a, b, c)?;
    let expected: u64 = f.triples.iter().map(StppTriple::product_size).sum();
    let count = count_zero_sum_triples(&triple);
    if count != expected {
        return Err(Error::Invariant(format!("witness has {count} solutions, expected {expected}")));
    }
    if !is_trapezoid_free(&triple) {
        return Err(Error::Invariant("witness is not equilateral trapezoid-free".into()));
    }
    Ok(triple)
}

/// Image of a family under a mixed-radix embedding into a cyclic group.
pub fn embed_family(f: &StppFamily, e: &CyclicEmbedding) -> Result<StppFamily> {
    if f.group != e.source {
        return Err(Error::GroupMismatch {
            left: f.group.to_string(),
            right: e.source.to_string(),
        });
    }
    let triples = f
        .triples
        .iter()
        .map(|t| StppTriple::new(e.map_set(&t.s), e.map_set(&t.t), e.map_set(&t.u)))
        .collect();
    StppFamily::new(e.target(), triples)
}

// File formats: elements are residue vectors.

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleFile {
    #[serde(rename = "S")]
    pub s: Vec<Vec<u32>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<u32>>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StppFile {
    pub group: String,
    pub triples: Vec<TripleFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<u32>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexSetFile {
    pub n: u32,
    pub points: Vec<[u32; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdppFile {
    pub group: String,
    pub pairs: Vec<PairFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_set: Option<IndexSetFile>,
}

fn to_indices(g: &AbelianGroup, elems: &[Vec<u32>]) -> Result<Vec<usize>> {
    elems.iter().map(|r| g.index_of(&GroupElem::new(r.clone()))).collect()
}

fn to_residues(g: &AbelianGroup, idx: &[usize]) -> Vec<Vec<u32>> {
    idx.iter().map(|&i| g.elem(i).residues).collect()
}

impl StppFile {
    pub fn into_family(&self) -> Result<StppFamily> {
        let g: AbelianGroup = self.group.parse()?;
        let triples = self
            .triples
            .iter()
            .map(|t| Ok(StppTriple::new(to_indices(&g, &t.s)?, to_indices(&g, &t.t)?, to_indices(&g, &t.u)?)))
            .collect::<Result<Vec<_>>>()?;
        StppFamily::new(g, triples)
    }

    pub fn from_family(f: &StppFamily) -> Self {
        StppFile {
            group: f.group.to_string(),
            triples: f
                .triples
                .iter()
                .map(|t| TripleFile {
                    s: to_residues(&f.group, &t.s),
                    t: to_residues(&f.group, &t.t),
                    u: to_residues(&f.group, &t.u),
                })
                .collect(),
        }
    }
}

impl SdppFile {
    pub fn into_family(&self) -> Result<SdppFamily> {
        let g: AbelianGroup = self.group.parse()?;
        let pairs = self
            .pairs
            .iter()
            .map(|p| Ok((to_indices(&g, &p.a)?, to_indices(&g, &p.b)?)))
            .collect::<Result<Vec<_>>>()?;
        SdppFamily::new(g, pairs)
    }

    pub fn index_set(&self) -> Result<Option<TriSet>> {
        self.index_set
            .as_ref()
            .map(|s| TriSet::from_points(s.n, s.points.iter().map(|p| (p[0], p[1], p[2]))))
            .transpose()
    }

    pub fn from_family(f: &SdppFamily, index_set: Option<&TriSet>) -> Self {
        SdppFile {
            group: f.group.to_string(),
            pairs: f
                .pairs
                .iter()
                .map(|(a, b)| PairFile {
                    a: to_residues(&f.group, a),
                    b: to_residues(&f.group, b),
                })
                .collect(),
            index_set: index_set.map(|s| IndexSetFile {
                n: s.n(),
                points: s.points().map(|(a, b, c)| [a, b, c]).collect(),
            }),
        }
    }
}

/// Elements of a family part as group elements, for reporting.
pub fn elems(g: &AbelianGroup, idx: &[usize]) -> Vec<GroupElem> {
    idx.iter().map(|&i| g.elem(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32) -> AbelianGroup {
        AbelianGroup::cyclic(m).unwrap()
    }

    #[test]
    fn tpp_examples() {
        let g = z(4);
        let all: Vec<usize> = (0..4).collect();
        assert!(verify_tpp(&g, &[0], &[0], &all));
        assert!(verify_tpp(&g, &all, &[0], &[0]));
        // S = T = U = {0, 1}: 1 - 0 + 0 - 1 + 0 - 0 = 0
        assert!(!verify_tpp(&g, &[0, 1], &[0, 1], &[0, 1]));
    }

    #[test]
    fn tpp_methods_agree() {
        let g = z(13);
        let mut rng = 99u64;
        for _ in 0..300 {
            let mut pick = || {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let mask = rng >> 40;
                (0..13).filter(|&i| mask >> i & 1 == 1).take(4).collect::<Vec<usize>>()
            };
            let (s, t, u) = (pick(), pick(), pick());
            if s.is_empty() || t.is_empty() || u.is_empty() {
                continue;
            }
            assert_eq!(tpp_direct(&g, &s, &t, &u).is_none(), tpp_differences(&g, &s, &t, &u).is_none());
        }
    }

    #[test]
    fn stpp_examples() {
        let g = z(5);
        let all: Vec<usize> = (0..5).collect();
        let single = StppTriple::new(vec![0], vec![0], all.clone());
        let mut f = StppFamily::new(g.clone(), vec![single.clone()]).unwrap();
        assert!(f.verify().is_valid());
        let twice = StppFamily::new(g.clone(), vec![single.clone(), single]).unwrap();
        assert!(matches!(verify_stpp(&twice), Verified::Invalid(StppViolation::Cross { .. })));
        let empty = StppFamily::new(g, vec![StppTriple::new(vec![], vec![0], vec![0])]).unwrap();
        assert!(matches!(verify_stpp(&empty), Verified::Invalid(StppViolation::EmptySet { .. })));
    }

    #[test]
    fn sdpp_examples() {
        let g = z(5);
        let mut f = SdppFamily::new(g.clone(), vec![(vec![0], vec![0])]).unwrap();
        assert!(f.verify().is_valid());
        let f = SdppFamily::new(g.clone(), vec![(vec![0, 1], vec![0, 2])]).unwrap();
        // differences a - b: 0, 3, 1, 4 are distinct
        assert!(verify_sdpp(&f).is_valid());
        let f = SdppFamily::new(g.clone(), vec![(vec![0, 1], vec![0, 1])]).unwrap();
        assert!(matches!(verify_sdpp(&f), Verified::Invalid(SdppViolation::Double { .. })));
        let f = SdppFamily::new(g, vec![(vec![0], vec![0]), (vec![0], vec![0])]).unwrap();
        assert!(matches!(verify_sdpp(&f), Verified::Invalid(SdppViolation::Cross { .. })));
    }

    #[test]
    fn packing_and_omega_trivial() {
        let g = z(7);
        let all: Vec<usize> = (0..7).collect();
        let f = StppFamily::new(g, vec![StppTriple::new(vec![0], vec![0], all)]).unwrap();
        let r = packing_bound_check(&f).unwrap();
        assert_eq!(r.sums, [1, 7, 7]);
        let w = omega_bound(&f).unwrap();
        assert_eq!(w.omega, 3.0);
        assert!(!w.improves);
        let bad = StppFamily::new(z(4), vec![StppTriple::new(vec![0, 1], vec![0, 1], vec![0, 1])]).unwrap();
        assert!(packing_bound_check(&bad).is_err());
        assert!(omega_bound(&bad).is_err());
    }

    #[test]
    fn omega_single_term_closed_form() {
        for (p, order) in [(8u64, 16u64), (27, 64), (100, 400), (5, 6)] {
            let w = omega_from_products(&[p], order).unwrap();
            let closed = 3.0 * (order as f64).ln() / (p as f64).ln();
            if (2.0..=3.0).contains(&closed) {
                assert!((w.omega - closed).abs() < 1e-6, "{p} {order}");
                assert!(w.residual.abs() <= 1e-6 * order as f64);
            }
        }
        assert!(omega_from_products(&[1, 1, 1], 2).is_err());
    }

    #[test]
    fn naive_omega() {
        assert!((naive_omega_from_packing(125, 1, 5).unwrap() - 3.0).abs() < 1e-12);
        assert!((naive_omega_from_packing(25, 1, 5).unwrap() - 2.0).abs() < 1e-12);
        assert!(naive_omega_from_packing(25, 0, 5).is_err());
        assert!(naive_omega_from_packing(25, 1, 1).is_err());
        // k identical (n, n, n) triples: k n^w = |G|
        let (n, k, order) = (3u64, 4u64, 80u64);
        let w = omega_from_products(&vec![n * n * n; k as usize], order).unwrap();
        assert!((w.omega - naive_omega_from_packing(order, k, n).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn lift_trivial_and_sizes() {
        let g = z(3);
        let f = SdppFamily::new(g.clone(), vec![(vec![0], vec![0])]).unwrap();
        let s = TriSet::from_points(0, [(0, 0, 0)]).unwrap();
        let mut lifted = lift_sdpp_to_stpp(&f, &s).unwrap();
        assert_eq!(lifted.triples.len(), 1);
        assert_eq!(lifted.group.order(), 27);
        assert!(lifted.verify().is_valid());

        let g = z(10);
        let f = SdppFamily::new(g, vec![(vec![0, 1], vec![0, 2]), (vec![4, 5], vec![5, 7])]).unwrap();
        let s = TriSet::from_points(1, [(1, 0, 0), (0, 1, 0)]).unwrap();
        if verify_sdpp(&f).is_valid() {
            let lifted = lift_sdpp_to_stpp(&f, &s).unwrap();
            for (t, v) in lifted.triples.iter().zip(s.points()) {
                assert_eq!(t.s.len(), f.pairs[v.0 as usize].0.len() * f.pairs[v.2 as usize].1.len());
            }
        }
        let not_cf = TriSet::full(1);
        assert!(lift_sdpp_to_stpp(&f, &not_cf).is_err());
    }

    #[test]
    fn witness_trivial() {
        let g = z(5);
        let all: Vec<usize> = (0..5).collect();
        let f = StppFamily::new(g, vec![StppTriple::new(vec![0], vec![0], all.clone())]).unwrap();
        let w = stpp_to_trapezoid_witness(&f).unwrap();
        assert_eq!(w.a, vec![0]);
        assert_eq!(w.b, all);
        assert_eq!(w.c, all);
        assert_eq!(count_zero_sum_triples(&w), 5);
    }

    #[test]
    fn file_round_trip() {
        let text = r#"{"group":"Z2xZ3","triples":[{"S":[[0,0]],"T":[[0,0]],"U":[[0,0],[1,0],[0,1],[1,1],[0,2],[1,2]]}]}"#;
        let file: StppFile = serde_json::from_str(text).unwrap();
        let f = file.into_family().unwrap();
        assert_eq!(f.triples[0].u.len(), 6);
        assert_eq!(serde_json::to_string(&StppFile::from_family(&f)).unwrap(), text);
        let bad = r#"{"group":"Z2xZ3","triples":[{"S":[[0]],"T":[[0,0]],"U":[[0,0]]}]}"#;
        let file: StppFile = serde_json::from_str(bad).unwrap();
        assert!(file.into_family().is_err());
    }
}

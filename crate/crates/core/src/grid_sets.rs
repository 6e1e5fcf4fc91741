//! Point sets in the square grid `[n]^2` and the triangular grid
//! `{(a,b,c) : a+b+c = n}`, with the planar forbidden-configuration
//! predicates.
//!
//! Every skew-type predicate reduces to one question about a family of
//! parallel lines: a line carrying two points at distance `g` forbids any
//! occupied line at offset `±g`. [`first_conflicting_line`] answers it
//! column-wise, picking per line between pairwise gaps and bit-shifted
//! self-overlap, whichever is cheaper.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A subset of the 1-indexed grid `[n]^2`, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridSet {
    n: u32,
    columns: BTreeMap<u32, Vec<u32>>,
    size: usize,
}

impl GridSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("grid side must be positive".into()));
        }
        Ok(GridSet {
            n,
            columns: BTreeMap::new(),
            size: 0,
        })
    }

    pub fn from_points<I: IntoIterator<Item = (u32, u32)>>(n: u32, points: I) -> Result<Self> {
        let mut s = GridSet::new(n)?;
        for (x, y) in points {
            s.insert(x, y)?;
        }
        Ok(s)
    }

    /// Builds a set directly from per-column row lists.
    pub fn from_columns<I: IntoIterator<Item = (u32, Vec<u32>)>>(n: u32, cols: I) -> Result<Self> {
        let mut s = GridSet::new(n)?;
        for (x, rows) in cols {
            for y in rows {
                s.insert(x, y)?;
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Inserts `(x, y)`; returns whether the point was new.
    pub fn insert(&mut self, x: u32, y: u32) -> Result<bool> {
        if !(1..=self.n).contains(&x) || !(1..=self.n).contains(&y) {
            return Err(Error::OutOfRange {
                point: format!("({x}, {y})"),
                n: self.n,
            });
        }
        let col = self.columns.entry(x).or_default();
        match col.binary_search(&y) {
            Ok(_) => Ok(false),
            Err(pos) => {
                col.insert(pos, y);
                self.size += 1;
                Ok(true)
            }
        }
    }

    pub fn remove(&mut self, x: u32, y: u32) -> bool {
        let Some(col) = self.columns.get_mut(&x) else {
            return false;
        };
        match col.binary_search(&y) {
            Ok(pos) => {
                col.remove(pos);
                if col.is_empty() {
                    self.columns.remove(&x);
                }
                self.size -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.columns
            .get(&x)
            .is_some_and(|c| c.binary_search(&y).is_ok())
    }

    /// Sorted rows of column `x` (empty slice when the column is empty).
    pub fn column(&self, x: u32) -> &[u32] {
        self.columns.get(&x).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Nonempty columns in increasing order.
    pub fn columns(&self) -> impl Iterator<Item = (u32, &[u32])> {
        self.columns.iter().map(|(&x, r)| (x, r.as_slice()))
    }

    /// Points in `(x, y)` lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.columns
            .iter()
            .flat_map(|(&x, rows)| rows.iter().map(move |&y| (x, y)))
    }

    pub fn transpose(&self) -> GridSet {
        let mut t = GridSet::new(self.n).expect("n > 0");
        for (x, y) in self.points() {
            t.insert(y, x).expect("in range");
        }
        t
    }
}

/// A subset of `{(a,b,c) in Z_{>=0}^3 : a+b+c = n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriSet {
    n: u32,
    points: BTreeSet<(u32, u32, u32)>,
}

impl TriSet {
    pub fn new(n: u32) -> Self {
        TriSet {
            n,
            points: BTreeSet::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = (u32, u32, u32)>>(n: u32, points: I) -> Result<Self> {
        let mut s = TriSet::new(n);
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    /// All `(n+1)(n+2)/2` points of the triangular grid.
    pub fn full(n: u32) -> Self {
        let mut s = TriSet::new(n);
        for a in 0..=n {
            for b in 0..=n - a {
                s.points.insert((a, b, n - a - b));
            }
        }
        s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn insert(&mut self, p: (u32, u32, u32)) -> Result<bool> {
        if p.0 as u64 + p.1 as u64 + p.2 as u64 != self.n as u64 {
            return Err(Error::OutOfRange {
                point: format!("({}, {}, {})", p.0, p.1, p.2),
                n: self.n,
            });
        }
        Ok(self.points.insert(p))
    }

    pub fn remove(&mut self, p: (u32, u32, u32)) -> bool {
        self.points.remove(&p)
    }

    pub fn contains(&self, p: (u32, u32, u32)) -> bool {
        self.points.contains(&p)
    }

    pub fn points(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.points.iter().copied()
    }

    /// Applies a coordinate permutation: output coordinate `i` is input
    /// coordinate `perm[i]`.
    pub fn permute(&self, perm: [usize; 3]) -> TriSet {
        let mut s = TriSet::new(self.n);
        for (a, b, c) in self.points() {
            let v = [a, b, c];
            s.points.insert((v[perm[0]], v[perm[1]], v[perm[2]]));
        }
        s
    }

    /// The lines of direction `dir`: coordinate `dir` is the line index and
    /// coordinate `dir + 1 (mod 3)` the position along the line.
    pub fn lines(&self, dir: usize) -> BTreeMap<u32, Vec<u32>> {
        let mut lines: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (a, b, c) in self.points() {
            let v = [a, b, c];
            lines.entry(v[dir]).or_default().push(v[(dir + 1) % 3]);
        }
        for pos in lines.values_mut() {
            pos.sort_unstable();
        }
        lines
    }
}

/// The six coordinate permutations of the triangular grid.
pub const S3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    SkewCorner,
    BiSkewCorner,
    Corner,
    Triforce,
    Trapezoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Point {
    Grid(u32, u32),
    Tri(u32, u32, u32),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Grid(x, y) => write!(f, "({x}, {y})"),
            Point::Tri(a, b, c) => write!(f, "({a}, {b}, {c})"),
        }
    }
}

/// A forbidden configuration found in a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub points: Vec<Point>,
    /// The nonzero displacement of the configuration.
    pub gap: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} with gap {}:", self.kind, self.gap)?;
        for p in &self.points {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// Whether the line at index `v` with sorted `positions` has an in-line gap
/// `g` such that line `v + g` or `v - g` is occupied.
fn line_has_conflict(v: u32, positions: &[u32], occupied: &BitSet, occupied_count: usize) -> bool {
    let k = positions.len();
    if k < 2 || occupied_count < 2 {
        return false;
    }
    let span = (positions[k - 1] - positions[0]) as usize + 1;
    let pair_cost = k * (k - 1) / 2;
    let shift_cost = occupied_count * (span / 64 + 1);
    if pair_cost <= shift_cost {
        for i in 0..k {
            for j in i + 1..k {
                let g = positions[j] - positions[i];
                if occupied.contains((v + g) as usize) || (g <= v && occupied.contains((v - g) as usize))
                {
                    return true;
                }
            }
        }
        false
    } else {
        let base = positions[0];
        let bits = BitSet::from_iter_with_len(span, positions.iter().map(|&p| (p - base) as usize));
        occupied.iter().any(|w| {
            let g = (w as i64 - v as i64).unsigned_abs() as usize;
            g > 0 && g < span && bits.overlaps_shifted(g)
        })
    }
}

/// The smallest line index whose gaps hit another occupied line.
fn first_conflicting_line(lines: &BTreeMap<u32, Vec<u32>>, max_index: u32) -> Option<u32> {
    let occupied = BitSet::from_iter_with_len(max_index as usize + 1, lines.keys().map(|&v| v as usize));
    let count = lines.len();
    lines
        .iter()
        .find(|(&v, pos)| line_has_conflict(v, pos, &occupied, count))
        .map(|(&v, _)| v)
}

/// Lexicographically first `(x, y, d)` skew corner `(x,y), (x,y+d), (x+d,y')`.
fn first_skew_corner(s: &GridSet) -> Option<Violation> {
    let x = first_conflicting_line(&s.columns, s.n + 1)?;
    let rows = s.column(x);
    let n = s.n as i64;
    for &y in rows {
        for d in -(n - 1)..=(n - 1) {
            if d == 0 {
                continue;
            }
            let y2 = y as i64 + d;
            let x2 = x as i64 + d;
            if y2 < 1 || y2 > n || x2 < 1 || x2 > n {
                continue;
            }
            if rows.binary_search(&(y2 as u32)).is_ok() {
                if let Some(&y3) = s.column(x2 as u32).first() {
                    return Some(Violation {
                        kind: ViolationKind::SkewCorner,
                        points: vec![
                            Point::Grid(x, y),
                            Point::Grid(x, y2 as u32),
                            Point::Grid(x2 as u32, y3),
                        ],
                        gap: d,
                    });
                }
            }
        }
    }
    unreachable!("conflicting column without witness")
}

/// Skew corner-freeness of a grid set: no `(x,y), (x,y+d), (x+d,y')` with
/// `d != 0`. Returns the lexicographically first violation otherwise.
pub fn skew_corner_violation(s: &GridSet) -> Option<Violation> {
    first_skew_corner(s)
}

pub fn is_skew_corner_free_grid(s: &GridSet) -> bool {
    first_conflicting_line(&s.columns, s.n + 1).is_none()
}

/// Skew corner-freeness in both the vertical and horizontal orientation.
pub fn bi_skew_corner_violation(s: &GridSet) -> Option<Violation> {
    if let Some(mut v) = first_skew_corner(s) {
        v.kind = ViolationKind::BiSkewCorner;
        return Some(v);
    }
    let t = s.transpose();
    first_skew_corner(&t).map(|mut v| {
        v.kind = ViolationKind::BiSkewCorner;
        for p in &mut v.points {
            if let Point::Grid(x, y) = *p {
                *p = Point::Grid(y, x);
            }
        }
        v
    })
}

pub fn is_bi_skew_corner_free(s: &GridSet) -> bool {
    is_skew_corner_free_grid(s) && is_skew_corner_free_grid(&s.transpose())
}

fn tri_point(dir: usize, line: u32, pos: u32, n: u32) -> Point {
    let mut v = [0u32; 3];
    v[dir] = line;
    v[(dir + 1) % 3] = pos;
    v[(dir + 2) % 3] = n - line - pos;
    Point::Tri(v[0], v[1], v[2])
}

/// Skew corner-freeness in the triangular grid: for two points on a line of
/// any of the three directions, the parallel line through the would-be
/// third corner carries no point.
pub fn tri_skew_corner_violation(s: &TriSet) -> Option<Violation> {
    let n = s.n;
    for dir in 0..3 {
        let lines = s.lines(dir);
        let Some(v) = first_conflicting_line(&lines, n) else {
            continue;
        };
        let pos = &lines[&v];
        for &b in pos {
            for &b2 in pos {
                if b == b2 {
                    continue;
                }
                let target = v as i64 + b as i64 - b2 as i64;
                if target < 0 || target > n as i64 {
                    continue;
                }
                if let Some(other) = lines.get(&(target as u32)) {
                    return Some(Violation {
                        kind: ViolationKind::SkewCorner,
                        points: vec![
                            tri_point(dir, v, b, n),
                            tri_point(dir, v, b2, n),
                            tri_point(dir, target as u32, other[0], n),
                        ],
                        gap: b as i64 - b2 as i64,
                    });
                }
            }
        }
        unreachable!("conflicting line without witness");
    }
    None
}

pub fn is_skew_corner_free_tri(s: &TriSet) -> bool {
    (0..3).all(|dir| first_conflicting_line(&s.lines(dir), s.n).is_none())
}

/// A corner `(x+d, y, z), (x, y+d, z), (x, y, z+d)` with `d != 0`.
pub fn tri_corner_violation(s: &TriSet) -> Option<Violation> {
    // Pair points sharing the third coordinate: p = (x+d, y, z), q = (x, y+d, z).
    let lines = s.lines(2);
    for (&z, pos) in &lines {
        // positions along direction 2 are the first coordinate
        for &ap in pos {
            for &aq in pos {
                if ap == aq {
                    continue;
                }
                let d = ap as i64 - aq as i64;
                let bp = s.n - ap - z;
                let z3 = z as i64 + d;
                if z3 < 0 {
                    continue;
                }
                let third = (aq, bp, z3 as u32);
                if aq as i64 + bp as i64 + z3 == s.n as i64 && s.contains(third) {
                    return Some(Violation {
                        kind: ViolationKind::Corner,
                        points: vec![
                            Point::Tri(ap, bp, z),
                            Point::Tri(aq, s.n - aq - z, z),
                            Point::Tri(third.0, third.1, third.2),
                        ],
                        gap: d,
                    });
                }
            }
        }
    }
    None
}

pub fn is_corner_free_tri(s: &TriSet) -> bool {
    tri_corner_violation(s).is_none()
}

/// `(a, b, c) -> (a+1, b+1)`; injective on the triangular grid.
pub fn project_tri_to_grid(s: &TriSet) -> GridSet {
    let mut g = GridSet::new(s.n + 1).expect("n + 1 > 0");
    for (a, b, _) in s.points() {
        g.insert(a + 1, b + 1).expect("coordinates bounded by n");
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_column_is_free() {
        let s = GridSet::from_points(7, (1..=7).map(|y| (1, y))).unwrap();
        assert!(is_skew_corner_free_grid(&s));
        assert!(skew_corner_violation(&s).is_none());
    }

    #[test]
    fn full_two_by_two_fails_with_gap_one() {
        let s = GridSet::from_points(2, [(1, 1), (1, 2), (2, 1), (2, 2)]).unwrap();
        assert!(!is_skew_corner_free_grid(&s));
        let v = skew_corner_violation(&s).unwrap();
        assert_eq!(v.kind, ViolationKind::SkewCorner);
        assert_eq!(v.gap, 1);
        assert_eq!(
            v.points,
            vec![Point::Grid(1, 1), Point::Grid(1, 2), Point::Grid(2, 1)]
        );
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(GridSet::from_points(3, [(0, 1)]).is_err());
        assert!(GridSet::from_points(3, [(1, 4)]).is_err());
        assert!(TriSet::from_points(3, [(1, 1, 2)]).is_err());
        assert!(GridSet::new(0).is_err());
    }

    #[test]
    fn duplicates_are_ignored() {
        let s = GridSet::from_points(3, [(1, 1), (1, 1), (2, 3)]).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn single_row_is_bi_skew_free() {
        let s = GridSet::from_points(6, (1..=6).map(|x| (x, 1))).unwrap();
        assert!(is_bi_skew_corner_free(&s));
        assert!(is_bi_skew_corner_free(&GridSet::new(4).unwrap()));
    }

    #[test]
    fn small_bi_skew_counterexample() {
        let s = GridSet::from_points(3, [(1, 1), (2, 1), (1, 2)]).unwrap();
        assert!(!is_bi_skew_corner_free(&s));
        let v = bi_skew_corner_violation(&s).unwrap();
        assert_eq!(v.kind, ViolationKind::BiSkewCorner);
    }

    #[test]
    fn horizontal_violation_is_reported_in_original_coordinates() {
        // row 1 has gap 1, row 2 occupied; columns each hold one point
        let s = GridSet::from_points(4, [(1, 1), (2, 1), (4, 2)]).unwrap();
        assert!(is_skew_corner_free_grid(&s));
        let v = bi_skew_corner_violation(&s).unwrap();
        for p in &v.points {
            let Point::Grid(x, y) = *p else { panic!() };
            assert!(s.contains(x, y));
        }
    }

    #[test]
    fn side_line_is_tri_free() {
        let n = 6;
        let s = TriSet::from_points(n, (0..=n).map(|b| (0, b, n - b))).unwrap();
        assert!(is_skew_corner_free_tri(&s));
    }

    #[test]
    fn tiny_triangles_fail() {
        assert!(!is_skew_corner_free_tri(&TriSet::full(1)));
        assert!(!is_skew_corner_free_tri(&TriSet::full(2)));
        let v = tri_skew_corner_violation(&TriSet::full(2)).unwrap();
        assert_eq!(v.points.len(), 3);
    }

    #[test]
    fn corner_of_delta_two() {
        let s = TriSet::from_points(1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]).unwrap();
        assert!(!is_corner_free_tri(&s));
        let v = tri_corner_violation(&s).unwrap();
        assert_eq!(v.gap.abs(), 1);
        let single = TriSet::from_points(4, [(1, 1, 2)]).unwrap();
        assert!(is_corner_free_tri(&single));
    }

    #[test]
    fn projection_basics() {
        let s = TriSet::from_points(5, [(0, 0, 5)]).unwrap();
        let g = project_tri_to_grid(&s);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![(1, 1)]);
        let full = TriSet::full(5);
        assert_eq!(project_tri_to_grid(&full).len(), full.len());
    }

    #[test]
    fn dense_column_uses_shift_path() {
        // Column 1 full (gaps 1..n-1) plus column n: must conflict.
        let n = 3000;
        let mut s = GridSet::from_points(n, (1..=n).map(|y| (1, y))).unwrap();
        assert!(is_skew_corner_free_grid(&s));
        s.insert(n, 5).unwrap();
        assert!(!is_skew_corner_free_grid(&s));
        let v = skew_corner_violation(&s).unwrap();
        assert_eq!(v.gap, (n - 1) as i64);
    }
}

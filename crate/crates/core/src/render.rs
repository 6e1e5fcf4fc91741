//! Deterministic SVG and text renderings of point sets.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid_sets::{GridSet, TriSet};
use crate::textio::Certificate;

const STEP: f64 = 20.0;
const MARGIN: f64 = 20.0;
const MEMBER: &str = "#e8710a";
const LATTICE: &str = "#c8c8c8";

fn svg_open(out: &mut String, w: f64, h: f64) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

fn dot(out: &mut String, x: f64, y: f64, member: bool) {
    let (r, fill) = if member { (6.0, MEMBER) } else { (2.0, LATTICE) };
    writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.1}" fill="{fill}"/>"#).unwrap();
}

/// Grid points as a dot matrix, row 1 at the bottom.
pub fn grid_svg(s: &GridSet) -> String {
    let n = s.n() as f64;
    let side = 2.0 * MARGIN + (n - 1.0) * STEP;
    let mut out = String::new();
    svg_open(&mut out, side, side);
    for x in 1..=s.n() {
        for y in 1..=s.n() {
            let px = MARGIN + (x - 1) as f64 * STEP;
            let py = MARGIN + (n - y as f64) * STEP;
            dot(&mut out, px, py, s.contains(x, y));
        }
    }
    out.push_str("</svg>\n");
    out
}

fn tri_position(n: u32, (a, b, _): (u32, u32, u32)) -> (f64, f64) {
    let h = STEP * 3f64.sqrt() / 2.0;
    (
        MARGIN + (b as f64 + a as f64 / 2.0) * STEP,
        MARGIN + (n - a) as f64 * h,
    )
}

/// Triangular lattice with `(0, 0, n)` bottom left, `(0, n, 0)` bottom
/// right and `(n, 0, 0)` on top.
pub fn tri_svg(s: &TriSet) -> String {
    let n = s.n();
    let w = 2.0 * MARGIN + n as f64 * STEP;
    let h = 2.0 * MARGIN + n as f64 * STEP * 3f64.sqrt() / 2.0;
    let mut out = String::new();
    svg_open(&mut out, w, h);
    for p in TriSet::full(n).points() {
        let (x, y) = tri_position(n, p);
        dot(&mut out, x, y, s.contains(p));
    }
    out.push_str("</svg>\n");
    out
}

pub fn grid_text(s: &GridSet) -> String {
    let mut out = String::new();
    for y in (1..=s.n()).rev() {
        let row: Vec<&str> = (1..=s.n()).map(|x| if s.contains(x, y) { "#" } else { "." }).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn tri_text(s: &TriSet) -> String {
    let n = s.n();
    let mut out = String::new();
    for a in (0..=n).rev() {
        out.push_str(&" ".repeat(a as usize));
        let row: Vec<&str> = (0..=n - a)
            .map(|b| if s.contains((a, b, n - a - b)) { "#" } else { "." })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

enum Drawable<'a> {
    Grid(&'a GridSet),
    Tri(TriSet),
}

fn drawable(c: &Certificate) -> Result<Drawable<'_>> {
    match c {
        Certificate::Grid(s) => Ok(Drawable::Grid(s)),
        Certificate::Tri(s) => Ok(Drawable::Tri(s.clone())),
        Certificate::Lines(t) => Ok(Drawable::Tri(t.solutions())),
        Certificate::Group(_) => Err(Error::Precondition("group triples have no planar rendering".into())),
    }
}

/// Line triples are drawn through their solution set.
pub fn svg(c: &Certificate) -> Result<String> {
    Ok(match drawable(c)? {
        Drawable::Grid(g) => grid_svg(g),
        Drawable::Tri(t) => tri_svg(&t),
    })
}

pub fn text_art(c: &Certificate) -> Result<String> {
    Ok(match drawable(c)? {
        Drawable::Grid(g) => grid_text(g),
        Drawable::Tri(t) => tri_text(&t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::load;

    #[test]
    fn single_point() {
        let g = GridSet::from_points(3, [(2, 1)]).unwrap();
        assert_eq!(grid_text(&g), ". . .\n. . .\n. # .\n");
        let svg = grid_svg(&g);
        assert_eq!(svg.matches(MEMBER).count(), 1);
        assert!(svg.contains(r#"<circle cx="40.00" cy="60.00" r="6.0""#));
        let t = TriSet::from_points(2, [(2, 0, 0)]).unwrap();
        assert_eq!(tri_text(&t), "  #\n . .\n. . .\n");
        assert_eq!(tri_svg(&t).matches(MEMBER).count(), 1);
    }

    #[test]
    fn stable_and_idempotent() {
        let c = load("tri 3\n0 1 2\n1 1 1\n3 0 0\n").unwrap();
        let a = svg(&c).unwrap();
        let again = svg(&load(&crate::textio::save(&c)).unwrap()).unwrap();
        assert_eq!(a, again);
        assert_eq!(a.matches(MEMBER).count(), 3);
        assert_eq!(text_art(&c).unwrap().matches('#').count(), 3);
    }
}

//! Plain-text certificate formats.
//!
//! ```text
//! # comments run to the end of the line
//! grid 3          tri 2           lines 4         group Z2xZ3
//! 1 1             0 0 2           A 0 1 4         A 0,0 1,2
//! 1 2             1 1 0           B 0 2           B 0,0
//!                                 C 3             C 1,1
//! ```
//!
//! `save` writes points in sorted order, so `save(load(save(x)))` is
//! byte-identical to `save(x)`.

use std::fmt::Write as _;

use crate::constructions::LineTriple;
use crate::error::{Error, Result};
use crate::grid_sets::{GridSet, TriSet};
use crate::groups::{parse_elem, AbelianGroup, GroupElem, GroupTriple};
use crate::search::Witness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Grid(GridSet),
    Tri(TriSet),
    Lines(LineTriple),
    Group(GroupTriple),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Grid(_) => "grid",
            Certificate::Tri(_) => "tri",
            Certificate::Lines(_) => "lines",
            Certificate::Group(_) => "group",
        }
    }
}

impl From<&Witness> for Certificate {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Grid(s) => Certificate::Grid(s.clone()),
            Witness::Tri(s) => Certificate::Tri(s.clone()),
            Witness::Lines(t) => Certificate::Lines(t.clone()),
            Witness::Group(t) => Certificate::Group(t.clone()),
        }
    }
}

/// A token with its 1-based column.
struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |(c, t)| c + t.len())
    }

    fn int(&self, i: usize) -> Result<u32> {
        let (col, tok) = self.tokens[i];
        tok.parse().map_err(|_| self.err(col, format!("expected a nonnegative integer, found `{tok}`")))
    }

    fn expect_len(&self, len: usize) -> Result<()> {
        if self.tokens.len() < len {
            return Err(self.err(self.end_column(), format!("expected {len} fields, found {}", self.tokens.len())));
        }
        if self.tokens.len() > len {
            let (col, tok) = self.tokens[len];
            return Err(self.err(col, format!("unexpected field `{tok}`")));
        }
        Ok(())
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        tokens.push((s + 1, &body[s..j]));
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn located(line: &Line, column: usize, r: Result<()>) -> Result<()> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => line.err(column, other.to_string()),
    })
}

pub fn load(text: &str) -> Result<Certificate> {
    let lines = tokenize(text);
    let Some(header) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty input; expected a header such as `grid 10`".into(),
        });
    };
    header.expect_len(2)?;
    let body = &lines[1..];
    match header.tokens[0].1 {
        "grid" => {
            let n = header.int(1)?;
            let mut s = GridSet::new(n).map_err(|e| header.err(header.tokens[1].0, e.to_string()))?;
            for l in body {
                l.expect_len(2)?;
                let (x, y) = (l.int(0)?, l.int(1)?);
                located(l, 1, s.insert(x, y).map(|_| ()))?;
            }
            Ok(Certificate::Grid(s))
        }
        "tri" => {
            let n = header.int(1)?;
            let mut s = TriSet::new(n);
            for l in body {
                l.expect_len(3)?;
                let p = (l.int(0)?, l.int(1)?, l.int(2)?);
                located(l, 1, s.insert(p).map(|_| ()))?;
            }
            Ok(Certificate::Tri(s))
        }
        "lines" => {
            let n = header.int(1)?;
            let mut parts: [Option<Vec<u32>>; 3] = Default::default();
            for l in body {
                let slot = role(l)?;
                if parts[slot].is_some() {
                    return Err(l.err(1, "repeated row"));
                }
                let vals = (1..l.tokens.len()).map(|i| l.int(i)).collect::<Result<Vec<_>>>()?;
                if let Some(i) = vals.iter().position(|&v| v > n) {
                    return Err(l.err(l.tokens[i + 1].0, format!("value exceeds n = {n}")));
                }
                parts[slot] = Some(vals);
            }
            let [a, b, c] = parts.map(Option::unwrap_or_default);
            Ok(Certificate::Lines(LineTriple::new(n, a, b, c)?))
        }
        "group" => {
            let (col, lit) = header.tokens[1];
            let g: AbelianGroup = lit.parse().map_err(|e: Error| header.err(col, e.to_string()))?;
            let mut parts: [Option<Vec<usize>>; 3] = Default::default();
            for l in body {
                let slot = role(l)?;
                if parts[slot].is_some() {
                    return Err(l.err(1, "repeated row"));
                }
                let idx = l.tokens[1..]
                    .iter()
                    .map(|&(col, tok)| parse_group_elem(&g, tok).map_err(|e| l.err(col, e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                parts[slot] = Some(idx);
            }
            let [a, b, c] = parts.map(Option::unwrap_or_default);
            Ok(Certificate::Group(GroupTriple::from_indices(g, a, b, c)?))
        }
        other => Err(header.err(1, format!("unknown header `{other}`; expected grid, tri, lines or group"))),
    }
}

fn role(l: &Line) -> Result<usize> {
    match l.tokens[0].1 {
        "A" => Ok(0),
        "B" => Ok(1),
        "C" => Ok(2),
        t => Err(l.err(1, format!("expected A, B or C, found `{t}`"))),
    }
}

/// The identity of the trivial group is written `0`.
fn parse_group_elem(g: &AbelianGroup, tok: &str) -> Result<usize> {
    if g.factors().is_empty() && tok == "0" {
        return Ok(0);
    }
    g.index_of(&parse_elem(g, tok)?)
}

fn elem_literal(e: &GroupElem) -> String {
    if e.residues.is_empty() {
        "0".into()
    } else {
        e.to_string()
    }
}

pub fn save(c: &Certificate) -> String {
    let mut out = String::new();
    match c {
        Certificate::Grid(s) => {
            writeln!(out, "grid {}", s.n()).unwrap();
            for (x, y) in s.points() {
                writeln!(out, "{x} {y}").unwrap();
            }
        }
        Certificate::Tri(s) => {
            writeln!(out, "tri {}", s.n()).unwrap();
            for (a, b, c) in s.points() {
                writeln!(out, "{a} {b} {c}").unwrap();
            }
        }
        Certificate::Lines(t) => {
            writeln!(out, "lines {}", t.n).unwrap();
            for (name, part) in [("A", &t.a), ("B", &t.b), ("C", &t.c)] {
                out.push_str(name);
                for v in part {
                    write!(out, " {v}").unwrap();
                }
                out.push('\n');
            }
        }
        Certificate::Group(t) => {
            writeln!(out, "group {}", t.group).unwrap();
            for (name, part) in [("A", &t.a), ("B", &t.b), ("C", &t.c)] {
                out.push_str(name);
                for &i in part {
                    write!(out, " {}", elem_literal(&t.group.elem(i))).unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let texts = [
            "grid 3\n1 1\n1 3\n2 2\n",
            "tri 2\n0 0 2\n1 1 0\n",
            "lines 4\nA 0 1 4\nB 0 2\nC 3\n",
            "group Z2xZ3\nA 0,0 1,2\nB 0,0\nC 1,1\n",
            "group 1\nA 0\nB 0\nC\n",
            "grid 5\n",
        ];
        for t in texts {
            let c = load(t).unwrap();
            assert_eq!(save(&c), t);
        }
    }

    #[test]
    fn comments_and_order() {
        let c = load("# a set\ngrid 4 # side\n\n3 1\n1 2  # first column\n").unwrap();
        assert_eq!(save(&c), "grid 4\n1 2\n3 1\n");
    }

    #[test]
    fn parse_errors_are_located() {
        let cases = [
            ("", 1, 1),
            ("grid\n", 1, 5),
            ("grid 3\n1 x\n", 2, 3),
            ("grid 3\n1 4\n", 2, 1),
            ("grid 3\n1 2 3\n", 2, 5),
            ("tri 2\n0 0 1\n", 2, 1),
            ("square 3\n", 1, 1),
            ("lines 3\nA 0 5\n", 2, 5),
            ("lines 3\nD 0\n", 2, 1),
            ("group Z3\nA 0 4\n", 2, 5),
            ("group Q8\n", 1, 7),
        ];
        for (text, line, column) in cases {
            match load(text) {
                Err(Error::Parse { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}

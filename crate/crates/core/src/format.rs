//! Text and JSON file formats.
//!
//! Digraph text:
//!
//! ```text
//! digraph <n>
//! <u> <v>
//! ...
//! ```
//!
//! Composition text (factor indices are 1-based and must appear in order):
//!
//! ```text
//! composition <t>
//! outer
//! <u> <v>
//! factor 1 <n_1>
//! <u> <v>
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored everywhere. The JSON
//! forms are `{"n": .., "arcs": [[u, v], ..]}` and
//! `{"outer": <digraph>, "factors": [<digraph>, ..]}`.

use std::fmt::Write;

use crate::composition::Composition;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Parsed input of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphInput {
    Digraph(Digraph),
    Composition(Composition),
}

impl GraphInput {
    /// The digraph algorithms operate on: the input itself or the flattening.
    pub fn digraph(&self) -> &Digraph {
        match self {
            GraphInput::Digraph(d) => d,
            GraphInput::Composition(c) => c.flatten(),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found `{tok}`")))
}

fn parse_arc(line: usize, text: &str, n: usize) -> Result<(usize, usize)> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let [u, v] = toks.as_slice() else {
        return Err(Error::parse(line, format!("expected `<u> <v>`, found `{text}`")));
    };
    let (u, v) = (parse_number(line, u)?, parse_number(line, v)?);
    if u >= n || v >= n {
        return Err(Error::parse(line, format!("arc ({u}, {v}) out of range for {n} vertices")));
    }
    if u == v {
        return Err(Error::parse(line, format!("loop arc ({u}, {v})")));
    }
    Ok((u, v))
}

fn parse_header(line: usize, text: &str, keyword: &str) -> Result<usize> {
    match text.split_whitespace().collect::<Vec<_>>().as_slice() {
        [kw, n] if *kw == keyword => parse_number(line, n),
        _ => Err(Error::parse(line, format!("expected `{keyword} <count>` header, found `{text}`"))),
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = parse_header(hl, header, "digraph")?;
    let arcs = lines
        .map(|(l, s)| parse_arc(l, s, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(Digraph::new(n, arcs).expect("arcs checked while parsing"))
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut s = format!("digraph {}\n", d.n());
    write_arcs(&mut s, d);
    s
}

fn write_arcs(s: &mut String, d: &Digraph) {
    for (u, v) in d.arcs() {
        writeln!(s, "{u} {v}").expect("writing to a String");
    }
}

pub fn parse_composition(text: &str) -> Result<Composition> {
    let mut lines = content_lines(text).peekable();
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let t = parse_header(hl, header, "composition")?;

    let (ol, outer_line) = lines
        .next()
        .ok_or_else(|| Error::parse(hl, "missing `outer` block"))?;
    match outer_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["outer"] => {}
        ["outer", m] if parse_number(ol, m)? == t => {}
        _ => return Err(Error::parse(ol, format!("expected `outer`, found `{outer_line}`"))),
    }

    fn block<'a>(
        lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>,
        n: usize,
    ) -> Result<Vec<(usize, usize)>> {
        let mut arcs = Vec::new();
        while let Some(&(l, s)) = lines.peek() {
            if s.starts_with("factor") {
                break;
            }
            arcs.push(parse_arc(l, s, n)?);
            lines.next();
        }
        Ok(arcs)
    }
    let outer_arcs = block(&mut lines, t)?;
    let mut factors = Vec::with_capacity(t);
    let mut last_line = ol;
    for i in 1..=t {
        let (fl, fh) = match lines.peek() {
            Some(&x) => x,
            None => return Err(Error::parse(last_line, format!("missing block `factor {i}`"))),
        };
        lines.next();
        let ni = match fh.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["factor", idx, ni] => {
                if parse_number(fl, idx)? != i {
                    return Err(Error::parse(fl, format!("expected factor {i}, found `{fh}`")));
                }
                parse_number(fl, ni)?
            }
            _ => return Err(Error::parse(fl, format!("expected `factor {i} <n_{i}>`, found `{fh}`"))),
        };
        if ni == 0 {
            return Err(Error::parse(fl, format!("factor {i} is empty")));
        }
        let arcs = block(&mut lines, ni)?;
        factors.push(Digraph::new(ni, arcs).expect("arcs checked while parsing"));
        last_line = fl;
    }
    if let Some((l, s)) = lines.next() {
        return Err(Error::parse(l, format!("unexpected line `{s}` after {t} factors")));
    }
    let outer = Digraph::new(t, outer_arcs).expect("arcs checked while parsing");
    Composition::new(outer, factors).map_err(|e| Error::parse(hl, e.to_string()))
}

pub fn write_composition(c: &Composition) -> String {
    let mut s = format!("composition {}\nouter\n", c.t());
    write_arcs(&mut s, c.outer());
    for (i, h) in c.factors().iter().enumerate() {
        writeln!(s, "factor {} {}", i + 1, h.n()).expect("writing to a String");
        write_arcs(&mut s, h);
    }
    s
}

/// Accepts either text format or either JSON form, dispatching on the first
/// meaningful token.
pub fn parse_input(text: &str) -> Result<GraphInput> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        return if value.get("outer").is_some() {
            serde_json::from_value(value)
                .map(GraphInput::Composition)
                .map_err(|e| Error::parse(1, e.to_string()))
        } else {
            serde_json::from_value(value)
                .map(GraphInput::Digraph)
                .map_err(|e| Error::parse(1, e.to_string()))
        };
    }
    match content_lines(text).next() {
        Some((_, l)) if l.starts_with("composition") => parse_composition(text).map(GraphInput::Composition),
        _ => parse_digraph(text).map(GraphInput::Digraph),
    }
}

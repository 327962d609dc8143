//! Plain-text instance and solution files.
//!
//! Instance:
//!
//! ```text
//! odimcf 1
//! nodes <N>
//! arcs <A>
//! <tail> <head> <cost> <capacity>     (A lines)
//! commodities <K>
//! <origin> <destination> <demand>     (K lines)
//! certificate                         (optional)
//! <arc ids>                           (K lines, `-` for an empty route)
//! ```
//!
//! Solution:
//!
//! ```text
//! odimcf-solution 1
//! commodities <K>
//! <arc ids>                           (K lines, `-` for an empty route)
//! cost <total>
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::model::{ArcId, Instance, ModelError, Network, Route};

pub const INSTANCE_MAGIC: &str = "odimcf";
pub const SOLUTION_MAGIC: &str = "odimcf-solution";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of file: missing {0}")]
    Missing(String),
    #[error("line {line}: {source}")]
    Model {
        line: usize,
        #[source]
        source: ModelError,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub cost: f64,
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            inner: it.peekable(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.inner
            .next()
            .ok_or_else(|| ParseError::Missing(what.to_string()))
    }

    fn peek(&mut self) -> Option<&(usize, &'a str)> {
        self.inner.peek()
    }

    /// Expects `<keyword> <count>`.
    fn header(&mut self, keyword: &str) -> Result<(usize, usize), ParseError> {
        let (line, text) = self.next(&format!("`{keyword}` section"))?;
        let mut tok = text.split_whitespace();
        if tok.next() != Some(keyword) {
            return Err(syntax(
                line,
                format!("expected `{keyword} <count>`, found `{text}`"),
            ));
        }
        let n = parse_tok(tok.next(), line, "count")?;
        expect_end(tok, line)?;
        Ok((line, n))
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_tok<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

fn expect_end<'a>(mut tok: impl Iterator<Item = &'a str>, line: usize) -> Result<(), ParseError> {
    match tok.next() {
        None => Ok(()),
        Some(t) => Err(syntax(line, format!("unexpected trailing token `{t}`"))),
    }
}

fn parse_magic(lines: &mut Lines<'_>, magic: &str) -> Result<(), ParseError> {
    let (line, text) = lines.next("header")?;
    let mut tok = text.split_whitespace();
    if tok.next() != Some(magic) {
        return Err(syntax(
            line,
            format!("expected `{magic} {FORMAT_VERSION}` header"),
        ));
    }
    let version: u32 = parse_tok(tok.next(), line, "version")?;
    if version != FORMAT_VERSION {
        return Err(syntax(line, format!("unsupported version {version}")));
    }
    expect_end(tok, line)
}

fn parse_route(text: &str, line: usize) -> Result<Route, ParseError> {
    if text == "-" {
        return Ok(Route::empty());
    }
    text.split_whitespace()
        .map(|t| parse_tok::<usize>(Some(t), line, "arc id").map(ArcId))
        .collect::<Result<Vec<_>, _>>()
        .map(Route)
}

fn parse_routes(
    lines: &mut Lines<'_>,
    count: usize,
    what: &str,
) -> Result<Vec<(usize, Route)>, ParseError> {
    (0..count)
        .map(|i| {
            let (line, text) = lines.next(&format!("{what} line {} of {count}", i + 1))?;
            Ok((line, parse_route(text, line)?))
        })
        .collect()
}

fn format_route(out: &mut String, route: &Route) {
    if route.is_empty() {
        out.push('-');
    } else {
        let mut first = true;
        for a in route.arcs() {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{a}").unwrap();
        }
    }
    out.push('\n');
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = Lines::new(text);
    parse_magic(&mut lines, INSTANCE_MAGIC)?;
    let (_, num_nodes) = lines.header("nodes")?;
    let (arcs_line, num_arcs) = lines.header("arcs")?;
    let mut arcs = Vec::with_capacity(num_arcs);
    let mut arc_lines = Vec::with_capacity(num_arcs);
    for i in 0..num_arcs {
        let (line, text) = lines.next(&format!("arc line {} of {num_arcs}", i + 1))?;
        let mut tok = text.split_whitespace();
        let tail = parse_tok(tok.next(), line, "tail")?;
        let head = parse_tok(tok.next(), line, "head")?;
        let cost = parse_tok(tok.next(), line, "cost")?;
        let cap = parse_tok(tok.next(), line, "capacity")?;
        expect_end(tok, line)?;
        arcs.push((tail, head, cost, cap));
        arc_lines.push(line);
    }
    let network = Network::new(num_nodes, arcs).map_err(|e| ParseError::Model {
        line: model_error_arc(&e)
            .and_then(|i| arc_lines.get(i).copied())
            .unwrap_or(arcs_line),
        source: e,
    })?;
    let (k_line, num_commodities) = lines.header("commodities")?;
    let mut commodities = Vec::with_capacity(num_commodities);
    let mut commodity_lines = Vec::with_capacity(num_commodities);
    for i in 0..num_commodities {
        let (line, text) = lines.next(&format!("commodity line {} of {num_commodities}", i + 1))?;
        let mut tok = text.split_whitespace();
        let o = parse_tok(tok.next(), line, "origin")?;
        let d = parse_tok(tok.next(), line, "destination")?;
        let q = parse_tok(tok.next(), line, "demand")?;
        expect_end(tok, line)?;
        commodities.push((o, d, q));
        commodity_lines.push(line);
    }
    let mut instance = Instance::new(network, commodities).map_err(|e| ParseError::Model {
        line: model_error_commodity(&e)
            .and_then(|i| commodity_lines.get(i).copied())
            .unwrap_or(k_line),
        source: e,
    })?;
    if let Some(&(line, text)) = lines.peek() {
        if text != "certificate" {
            return Err(syntax(line, format!("unexpected content `{text}`")));
        }
        lines.next("certificate")?;
        let routes = parse_routes(&mut lines, num_commodities, "certificate")?;
        let route_lines: Vec<usize> = routes.iter().map(|(l, _)| *l).collect();
        let routes: Vec<Route> = routes.into_iter().map(|(_, r)| r).collect();
        instance = instance
            .with_certificate(routes)
            .map_err(|e| ParseError::Model {
                line: match &e {
                    ModelError::InvalidRoute(k) => route_lines[*k],
                    _ => line,
                },
                source: e,
            })?;
    }
    if let Some(&(line, text)) = lines.peek() {
        return Err(syntax(line, format!("unexpected content `{text}`")));
    }
    Ok(instance)
}

fn model_error_arc(e: &ModelError) -> Option<usize> {
    match *e {
        ModelError::NodeOutOfRange { index, .. }
        | ModelError::BadCost { index, .. }
        | ModelError::BadCapacity { index, .. }
        | ModelError::ParallelArc { index, .. } => Some(index),
        ModelError::SelfLoop(index) => Some(index),
        _ => None,
    }
}

fn model_error_commodity(e: &ModelError) -> Option<usize> {
    match *e {
        ModelError::EndpointOutOfRange { index, .. } | ModelError::BadDemand { index, .. } => {
            Some(index)
        }
        ModelError::SameEndpoints(index) => Some(index),
        _ => None,
    }
}

pub fn format_instance(instance: &Instance) -> String {
    let net = &instance.network;
    let mut out = String::new();
    writeln!(out, "{INSTANCE_MAGIC} {FORMAT_VERSION}").unwrap();
    writeln!(out, "nodes {}", net.num_nodes()).unwrap();
    writeln!(out, "arcs {}", net.num_arcs()).unwrap();
    for a in net.arcs() {
        writeln!(out, "{} {} {} {}", a.tail, a.head, a.cost, a.capacity).unwrap();
    }
    writeln!(out, "commodities {}", instance.num_commodities()).unwrap();
    for c in &instance.commodities {
        writeln!(out, "{} {} {}", c.origin, c.destination, c.demand).unwrap();
    }
    if let Some(cert) = &instance.certificate {
        out.push_str("certificate\n");
        for r in cert {
            format_route(&mut out, r);
        }
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, ParseError> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> std::io::Result<()> {
    fs::write(path, format_instance(instance))
}

pub fn parse_solution(text: &str) -> Result<Solution, ParseError> {
    let mut lines = Lines::new(text);
    parse_magic(&mut lines, SOLUTION_MAGIC)?;
    let (_, k) = lines.header("commodities")?;
    let routes = parse_routes(&mut lines, k, "route")?
        .into_iter()
        .map(|(_, r)| r)
        .collect();
    let (line, text) = lines.next("`cost` line")?;
    let mut tok = text.split_whitespace();
    if tok.next() != Some("cost") {
        return Err(syntax(
            line,
            format!("expected `cost <total>`, found `{text}`"),
        ));
    }
    let cost = parse_tok(tok.next(), line, "cost")?;
    expect_end(tok, line)?;
    if let Some(&(line, text)) = lines.peek() {
        return Err(syntax(line, format!("unexpected content `{text}`")));
    }
    Ok(Solution { routes, cost })
}

pub fn format_solution(routes: &[Route], cost: f64) -> String {
    let mut out = String::new();
    writeln!(out, "{SOLUTION_MAGIC} {FORMAT_VERSION}").unwrap();
    writeln!(out, "commodities {}", routes.len()).unwrap();
    for r in routes {
        format_route(&mut out, r);
    }
    writeln!(out, "cost {cost}").unwrap();
    out
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<Solution, ParseError> {
    parse_solution(&fs::read_to_string(path)?)
}

pub fn write_solution(path: impl AsRef<Path>, routes: &[Route], cost: f64) -> std::io::Result<()> {
    fs::write(path, format_solution(routes, cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
odimcf 1
nodes 3
arcs 2
0 1 10 100   # first arc
1 2 20.5 100
commodities 1
0 2 5
certificate
0 1
";

    #[test]
    fn parses_small_instance() {
        let inst = parse_instance(SMALL).unwrap();
        assert_eq!(inst.network.num_nodes(), 3);
        assert_eq!(inst.network.arcs()[1].cost, 20.5);
        assert_eq!(inst.commodities[0].demand, 5.0);
        assert_eq!(
            inst.certificate.as_deref(),
            Some(&[Route(vec![ArcId(0), ArcId(1)])][..])
        );
        assert_eq!(parse_instance(&format_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn truncated_file_names_section() {
        let text = "odimcf 1\nnodes 3\narcs 2\n0 1 10 100\n1 2 20 100\n";
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("commodities"), "{err}");
        let err = parse_instance("odimcf 1\nnodes 3\narcs 2\n0 1 10 100\n").unwrap_err();
        assert!(err.to_string().contains("arc line 2 of 2"), "{err}");
    }

    #[test]
    fn duplicate_arc_rejected_with_line() {
        let text = "odimcf 1\nnodes 2\narcs 2\n0 1 1 1\n0 1 2 2\ncommodities 0\n";
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Model {
                line: 5,
                source: ModelError::ParallelArc { .. }
            }
        ));
    }

    #[test]
    fn bad_tokens_report_line() {
        let text = "odimcf 1\nnodes 2\narcs 1\n0 x 1 1\ncommodities 0\n";
        match parse_instance(text).unwrap_err() {
            ParseError::Syntax { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("head"));
            }
            e => panic!("{e}"),
        }
        assert!(parse_instance("odimcf 2\n").is_err());
        assert!(parse_instance("")
            .unwrap_err()
            .to_string()
            .contains("header"));
    }

    #[test]
    fn solution_round_trip() {
        let routes = vec![Route(vec![ArcId(3), ArcId(1)]), Route::empty()];
        let text = format_solution(&routes, 123.25);
        let sol = parse_solution(&text).unwrap();
        assert_eq!(sol.routes, routes);
        assert_eq!(sol.cost, 123.25);
        assert!(parse_solution("odimcf-solution 1\ncommodities 2\n1\n").is_err());
    }
}

//! Plain-text graph files.
//!
//! ```text
//! # comments run to the end of the line
//! v1: t1 t2
//! v2: a b c d
//! arcs:
//! a b
//! t1 a
//! ```
//!
//! Vertex names are arbitrary whitespace-free tokens. Ids are dense: the
//! `v1` names first, then the `v2` names, in the order listed. Arcs keep
//! their file order, so writing a parsed file reproduces it exactly when it
//! was canonical (no comments, single spaces, headers first).

use std::collections::HashMap;
use std::fmt::Write as _;

use splitdecomp::{validate_split, Digraph, Error as GraphError, SplitDigraph, VertexId};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    File(String),
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line { line, message: message.into() }
}

/// A parsed graph file: a multigraph with vertex names and a `V1`/`V2`
/// partition. Nothing is validated beyond the syntax and name resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub names: Vec<String>,
    pub v1: Vec<VertexId>,
    pub v2: Vec<VertexId>,
    pub graph: Digraph,
    /// Source line of every arc, when parsed from text.
    pub arc_lines: Vec<usize>,
}

impl GraphFile {
    pub fn new(names: Vec<String>, v1: Vec<VertexId>, v2: Vec<VertexId>, graph: Digraph) -> Self {
        GraphFile { names, v1, v2, graph, arc_lines: Vec::new() }
    }

    pub fn from_split(d: &SplitDigraph, names: Vec<String>) -> Self {
        GraphFile::new(names, d.v1(), d.v2(), d.graph().clone())
    }

    /// Names `t0, t1, ...` for `V1` and `s0, s1, ...` for `V2`.
    pub fn from_split_default_names(d: &SplitDigraph) -> Self {
        let mut names = vec![String::new(); d.graph().order()];
        for (i, t) in d.v1().into_iter().enumerate() {
            names[t] = format!("t{i}");
        }
        for (i, s) in d.v2().into_iter().enumerate() {
            names[s] = format!("s{i}");
        }
        GraphFile::from_split(d, names)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut v1_names: Option<Vec<(String, usize)>> = None;
        let mut v2_names: Option<Vec<(String, usize)>> = None;
        let mut arcs_at: Option<usize> = None;
        let mut raw_arcs: Vec<(String, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if arcs_at.is_some() {
                let tokens: Vec<&str> = content.split_whitespace().collect();
                match tokens[..] {
                    [tail, head] => raw_arcs.push((tail.to_string(), head.to_string(), line)),
                    _ => return Err(at(line, format!("expected `tail head`, found {} tokens", tokens.len()))),
                }
                continue;
            }
            let Some((key, rest)) = content.split_once(':') else {
                return Err(at(line, "expected a `v1:`, `v2:` or `arcs:` header"));
            };
            let tokens = || rest.split_whitespace().map(|s| (s.to_string(), line)).collect::<Vec<_>>();
            match key.trim() {
                "v1" if v1_names.is_none() => v1_names = Some(tokens()),
                "v2" if v2_names.is_none() => v2_names = Some(tokens()),
                "arcs" => {
                    if !rest.trim().is_empty() {
                        return Err(at(line, "arcs go on the lines after `arcs:`"));
                    }
                    arcs_at = Some(line);
                }
                "v1" | "v2" => return Err(at(line, format!("duplicate `{}:` header", key.trim()))),
                other => return Err(at(line, format!("unknown header `{other}:`"))),
            }
        }
        let Some(v2_names) = v2_names else {
            return Err(ParseError::File("missing `v2:` header".into()));
        };
        if arcs_at.is_none() {
            return Err(ParseError::File("missing `arcs:` section".into()));
        }
        let v1_names = v1_names.unwrap_or_default();
        let mut ids: HashMap<String, VertexId> = HashMap::new();
        let mut names = Vec::new();
        for (name, line) in v1_names.iter().chain(&v2_names) {
            if ids.insert(name.clone(), names.len()).is_some() {
                return Err(at(*line, format!("vertex `{name}` is listed twice")));
            }
            names.push(name.clone());
        }
        let mut pairs = Vec::with_capacity(raw_arcs.len());
        let mut arc_lines = Vec::with_capacity(raw_arcs.len());
        for (tail, head, line) in &raw_arcs {
            let id = |name: &str| ids.get(name).copied().ok_or_else(|| at(*line, format!("unknown vertex `{name}`")));
            let (t, h) = (id(tail)?, id(head)?);
            if t == h {
                return Err(at(*line, format!("loop at `{tail}`")));
            }
            pairs.push((t, h));
            arc_lines.push(*line);
        }
        let graph = Digraph::from_arcs(names.len(), &pairs).map_err(|e| ParseError::File(e.to_string()))?;
        let n1 = v1_names.len();
        Ok(GraphFile { names, v1: (0..n1).collect(), v2: (n1..n1 + v2_names.len()).collect(), graph, arc_lines })
    }

    /// Canonical text: headers, then one arc per line in arc-id order.
    pub fn write(&self) -> String {
        let list = |vs: &[VertexId]| vs.iter().map(|&v| format!(" {}", self.names[v])).collect::<String>();
        let mut out = format!("v1:{}\nv2:{}\narcs:\n", list(&self.v1), list(&self.v2));
        for (_, a) in self.graph.arcs() {
            let _ = writeln!(out, "{} {}", self.names[a.tail], self.names[a.head]);
        }
        out
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    /// Line of the last arc `tail -> head` (the duplicate, for parallel arcs).
    fn line_of(&self, tail: VertexId, head: VertexId) -> Option<usize> {
        self.graph
            .arcs()
            .filter(|(_, a)| a.tail == tail && a.head == head)
            .last()
            .and_then(|(id, _)| self.arc_lines.get(id.0).copied())
    }

    /// The split digraph, with structural errors translated to names and,
    /// where an arc is to blame, its line.
    pub fn split_digraph(&self) -> Result<SplitDigraph, ParseError> {
        validate_split(self.graph.clone(), &self.v1, &self.v2).map_err(|e| self.explain(e))
    }

    fn explain(&self, e: GraphError) -> ParseError {
        let n = |v: VertexId| self.names.get(v).map_or("?", |s| s.as_str()).to_string();
        let arc_error = |tail, head, message: String| match self.line_of(tail, head) {
            Some(line) => at(line, message),
            None => ParseError::File(message),
        };
        match e {
            GraphError::ParallelArc { tail, head } => {
                arc_error(tail, head, format!("arc {} -> {} appears twice", n(tail), n(head)))
            }
            GraphError::IndependenceViolation { tail, head } => {
                arc_error(tail, head, format!("arc {} -> {} joins two V1 vertices", n(tail), n(head)))
            }
            GraphError::SemicompletenessViolation(u, v) => {
                ParseError::File(format!("V2 vertices {} and {} are not adjacent", n(u), n(v)))
            }
            other => ParseError::File(other.to_string()),
        }
    }
}

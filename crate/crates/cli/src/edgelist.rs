//! Edge-list input files.
//!
//! ```text
//! # comment
//! vertices: a b c
//! a b
//! b c bc
//! ```
//!
//! Each edge line is `u v [label]`. Unlabeled edges get `e<i>` by their
//! position among the non-loop edges. Loops are dropped with a warning.

use std::collections::BTreeSet;

use stp_core::graph::{Graph, GraphBuilder};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct EdgeList {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList, CliError> {
    let mut b = GraphBuilder::new();
    let mut declared: Option<BTreeSet<String>> = None;
    let mut warnings = Vec::new();
    let mut seen_edge = false;
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            if seen_edge || declared.is_some() {
                return Err(CliError::parse(lineno, "the vertices directive must come first"));
            }
            let set: BTreeSet<String> = rest.split_whitespace().map(String::from).collect();
            for v in &set {
                b.vertex(v.clone());
            }
            declared = Some(set);
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (u, v, label) = match tokens.as_slice() {
            [u, v] => (*u, *v, None),
            [u, v, l] => (*u, *v, Some(*l)),
            _ => return Err(CliError::parse(lineno, format!("expected `u v [label]`, got `{line}`"))),
        };
        if let Some(vs) = &declared {
            if let Some(w) = [u, v].into_iter().find(|w| !vs.contains(*w)) {
                return Err(CliError::parse(lineno, format!("vertex `{w}` is not declared")));
            }
        }
        if u == v {
            warnings.push(format!("line {lineno}: loop at `{u}` ignored"));
        }
        match label {
            Some(l) => b.labeled_edge(u, v, l),
            None => b.edge(u, v),
        };
        seen_edge = true;
    }
    let graph = b.build().map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(EdgeList { graph, warnings })
}

pub fn read_edge_list(path: &str) -> Result<EdgeList, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    parse_edge_list(&text)
}

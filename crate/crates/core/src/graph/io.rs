//! Plain-text graph files.
//!
//! ```text
//! vertices 3
//! edge 0 1
//! edge 0 1
//! edge 1 2
//! terminal a 0
//! terminal b 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored when reading. The
//! writer emits exactly the canonical form above (single spaces, `\n` line
//! ends, edges in index order, terminals last).

use super::{Gadget, MultiGraph};
use crate::error::{DacError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: MultiGraph,
    pub terminal_a: Option<usize>,
    pub terminal_b: Option<usize>,
}

impl GraphFile {
    pub fn gadget(&self) -> Result<Gadget> {
        match (self.terminal_a, self.terminal_b) {
            (Some(a), Some(b)) => Gadget::new(self.graph.clone(), a, b),
            _ => Err(DacError::InvalidGraph("graph file declares no terminals a and b".into())),
        }
    }
}

impl From<&Gadget> for GraphFile {
    fn from(g: &Gadget) -> Self {
        GraphFile {
            graph: g.graph().clone(),
            terminal_a: Some(g.a()),
            terminal_b: Some(g.b()),
        }
    }
}

pub fn write_graph_file(file: &GraphFile) -> String {
    let mut s = format!("vertices {}\n", file.graph.vertex_count());
    for &(u, v) in file.graph.edges() {
        s.push_str(&format!("edge {u} {v}\n"));
    }
    if let Some(a) = file.terminal_a {
        s.push_str(&format!("terminal a {a}\n"));
    }
    if let Some(b) = file.terminal_b {
        s.push_str(&format!("terminal b {b}\n"));
    }
    s
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut graph: Option<MultiGraph> = None;
    let (mut ta, mut tb) = (None, None);
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |msg: String| DacError::Parse { line, msg };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("expected a vertex index, got {s:?}")));
        match fields.as_slice() {
            ["vertices", n] => {
                if graph.is_some() {
                    return Err(err("duplicate vertices line".into()));
                }
                graph = Some(MultiGraph::empty(num(n)?));
            }
            ["edge", u, v] => {
                let g = graph.as_mut().ok_or_else(|| err("edge before vertices line".into()))?;
                g.add_edge(num(u)?, num(v)?).map_err(|e| err(e.to_string()))?;
            }
            ["terminal", which, v] => {
                let g = graph.as_ref().ok_or_else(|| err("terminal before vertices line".into()))?;
                let v = num(v)?;
                if v >= g.vertex_count() {
                    return Err(err(format!("terminal {v} out of range")));
                }
                let slot = match *which {
                    "a" => &mut ta,
                    "b" => &mut tb,
                    other => return Err(err(format!("unknown terminal {other:?}"))),
                };
                if slot.replace(v).is_some() {
                    return Err(err(format!("terminal {which} given twice")));
                }
            }
            _ => return Err(err(format!("unrecognised line {trimmed:?}"))),
        }
    }
    let graph = graph.ok_or(DacError::Parse {
        line: 0,
        msg: "missing vertices line".into(),
    })?;
    Ok(GraphFile {
        graph,
        terminal_a: ta,
        terminal_b: tb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_bipartite_dk;
    use proptest::prelude::*;

    #[test]
    fn reads_comments_and_terminals() {
        let f = parse_graph_file("# doubled edge\nvertices 2\n\nedge 0 1\nedge 0 1\nterminal a 0\nterminal b 1\n").unwrap();
        assert_eq!(f.graph.degree(0), 2);
        assert_eq!(f.gadget().unwrap().b(), 1);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "edge 0 1\n",
            "vertices 2\nedge 0 0\n",
            "vertices 2\nedge 0 2\n",
            "vertices 2\nvertices 3\n",
            "vertices 2\nterminal c 0\n",
            "vertices 2\nterminal a 5\n",
            "vertices x\n",
            "vertices 2\nnode 1\n",
            "",
        ] {
            assert!(parse_graph_file(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn canonical_writer_is_inverse_of_parser() {
        let g = complete_bipartite_dk(3).unwrap();
        let text = write_graph_file(&GraphFile::from(&g));
        assert!(text.starts_with("vertices 7\nedge 0 2\n"));
        let back = parse_graph_file(&text).unwrap();
        assert_eq!(back.gadget().unwrap().graph().edges(), g.graph().edges());
        assert_eq!(write_graph_file(&back), text);
    }

    proptest! {
        #[test]
        fn round_trip(n in 2usize..10, raw in proptest::collection::vec((0usize..10, 0usize..10), 0..20), a in 0usize..10) {
            let edges: Vec<_> = raw.into_iter().map(|(x, y)| (x % n, y % n)).filter(|(x, y)| x != y).collect();
            let file = GraphFile { graph: MultiGraph::new(n, &edges).unwrap(), terminal_a: Some(a % n), terminal_b: None };
            let text = write_graph_file(&file);
            let back = parse_graph_file(&text).unwrap();
            prop_assert_eq!(write_graph_file(&back), text);
            prop_assert_eq!(back.graph.edges(), file.graph.edges());
        }
    }
}

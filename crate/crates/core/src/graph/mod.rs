//! Finite multigraphs with a fixed total vertex order.
//!
//! Vertex indices double as the order used by the model: `v < w` iff
//! `v`'s index is smaller. Parallel edges are allowed and counted with
//! multiplicity in degrees; self-loops are rejected. Edge indices are stable
//! and follow insertion order.

mod families;
mod io;
mod lattice;

use std::collections::VecDeque;

pub use families::{
    attach_handle, complete_bipartite_dk, parallel_gadget_dn, path_gadget, single_edge, tree_like, DkLayout,
    TreeLike,
};
pub use io::{parse_graph_file, write_graph_file, GraphFile};
pub use lattice::{z2_box, LatticeBall, LatticeBox, SiteMode};

use crate::error::{DacError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    incidence: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = MultiGraph::empty(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn empty(vertex_count: usize) -> Self {
        MultiGraph {
            vertex_count,
            edges: Vec::new(),
            incidence: vec![Vec::new(); vertex_count],
            labels: None,
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.incidence.push(Vec::new());
        if let Some(labels) = &mut self.labels {
            labels.push(self.vertex_count.to_string());
        }
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(DacError::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(DacError::InvalidGraph(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{}",
                self.vertex_count
            )));
        }
        let e = self.edges.len();
        self.edges.push((u, v));
        self.incidence[u].push(e);
        self.incidence[v].push(e);
        Ok(e)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertex_count {
            return Err(DacError::InvalidGraph("label count differs from vertex count".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Edge indices incident to `v`, one entry per parallel copy.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incidence[v].iter().map(move |&e| self.other_end(e, v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// Copies `other` into `self` with `other`'s vertex `i` mapped to `map[i]`.
    pub(crate) fn splice(&mut self, other: &MultiGraph, map: &[usize]) -> Result<()> {
        for &(u, v) in &other.edges {
            self.add_edge(map[u], map[v])?;
        }
        Ok(())
    }
}

/// Site adjacency used for colour clusters. For a plain graph this is the
/// edge set itself; lattice boxes may add diagonal adjacencies.
pub trait SiteAdjacency {
    fn site_count(&self) -> usize;
    fn for_each_site_neighbor<F: FnMut(usize)>(&self, v: usize, f: F);
}

impl SiteAdjacency for MultiGraph {
    fn site_count(&self) -> usize {
        self.vertex_count
    }

    fn for_each_site_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for w in self.neighbors(v) {
            f(w);
        }
    }
}

/// A connected graph with two distinct terminals `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    graph: MultiGraph,
    a: usize,
    b: usize,
}

impl Gadget {
    pub fn new(graph: MultiGraph, a: usize, b: usize) -> Result<Self> {
        let n = graph.vertex_count();
        if a >= n || b >= n {
            return Err(DacError::InvalidGraph(format!("terminal outside 0..{n}")));
        }
        if a == b {
            return Err(DacError::InvalidGraph("terminals must be distinct".into()));
        }
        if !graph.is_connected() {
            return Err(DacError::InvalidGraph("gadget must be connected".into()));
        }
        Ok(Gadget { graph, a, b })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn into_parts(self) -> (MultiGraph, usize, usize) {
        (self.graph, self.a, self.b)
    }
}

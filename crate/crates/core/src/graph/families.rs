use std::collections::VecDeque;

use super::{Gadget, MultiGraph};
use crate::error::{DacError, Result};

fn labelled(n: usize, edges: &[(usize, usize)], labels: &[&str]) -> MultiGraph {
    MultiGraph::new(n, edges)
        .and_then(|g| g.with_labels(labels.iter().map(|s| s.to_string()).collect()))
        .expect("static family is well formed")
}

/// `a - b`.
pub fn single_edge() -> Gadget {
    Gadget::new(labelled(2, &[(0, 1)], &["a", "b"]), 0, 1).unwrap()
}

/// `a - c - b`.
pub fn path_gadget() -> Gadget {
    Gadget::new(labelled(3, &[(0, 1), (1, 2)], &["a", "c", "b"]), 0, 2).unwrap()
}

/// Edge indices of the named edges of `D^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DkLayout {
    /// `e_1, e_1'` (at `a`) and `e_2, e_2'` (at `b`).
    pub terminal_edges: [usize; 4],
    /// `(f_i, f_i')` for each middle vertex `v_i`.
    pub middle_edges: Vec<(usize, usize)>,
}

impl DkLayout {
    pub fn new(k: usize) -> Self {
        DkLayout {
            terminal_edges: [0, 1, 2, 3],
            middle_edges: (0..k).map(|i| (4 + 2 * i, 5 + 2 * i)).collect(),
        }
    }
}

/// Complete bipartite graph between `{z_1, z_2}` and `{a, b, v_1, ..., v_k}`.
///
/// Vertex order: `a, b, z_1, z_2, v_1, ..., v_k`. Edge order: `e_1 = a z_1`,
/// `e_1' = a z_2`, `e_2 = b z_1`, `e_2' = b z_2`, then `f_i = v_i z_1`,
/// `f_i' = v_i z_2` for each `i` (see [`DkLayout`]).
pub fn complete_bipartite_dk(k: usize) -> Result<Gadget> {
    if k == 0 {
        return Err(DacError::InvalidArgument("D^k needs k >= 1".into()));
    }
    let (a, b, z1, z2) = (0, 1, 2, 3);
    let mut edges = vec![(a, z1), (a, z2), (b, z1), (b, z2)];
    for i in 0..k {
        edges.push((4 + i, z1));
        edges.push((4 + i, z2));
    }
    let mut labels: Vec<String> = ["a", "b", "z1", "z2"].iter().map(|s| s.to_string()).collect();
    labels.extend((1..=k).map(|i| format!("v{i}")));
    let g = MultiGraph::new(k + 4, &edges)?.with_labels(labels)?;
    Gadget::new(g, a, b)
}

/// Terminals `a`, `b` and a middle vertex `c`: `n` parallel edges `a - c`
/// followed by one edge `c - b`.
pub fn parallel_gadget_dn(n: usize) -> Result<Gadget> {
    if n == 0 {
        return Err(DacError::InvalidArgument("D_n needs n >= 1".into()));
    }
    let mut edges = vec![(0, 1); n];
    edges.push((1, 2));
    Gadget::new(labelled(3, &edges, &["a", "c", "b"]), 0, 2)
}

/// Adds a new last vertex joined to the base's first terminal `x` by one
/// edge; the result has terminals (new vertex, `y`).
pub fn attach_handle(base: &Gadget) -> Gadget {
    let mut g = base.graph().clone();
    let handle = g.add_vertex();
    g.add_edge(handle, base.a()).expect("handle edge is valid");
    Gadget::new(g, handle, base.b()).expect("attaching a pendant edge keeps the graph connected")
}

/// Finite truncation of the tree-like graph built on the 3-regular tree.
#[derive(Clone, Debug)]
pub struct TreeLike {
    pub graph: MultiGraph,
    pub root: usize,
    /// Image of each tree vertex, breadth-first from the root.
    pub tree_vertices: Vec<usize>,
    /// Tree level of each entry of `tree_vertices`.
    pub levels: Vec<usize>,
}

/// Replaces every edge of the 3-regular tree between levels `n-1` and `n`
/// (for `n <= depth`) by a copy of `gadget_seq(n)`, gluing `a` to the end
/// closer to the root and `b` to the other end.
///
/// Indices are assigned breadth-first over tree edges: the root is vertex 0,
/// and each gadget copy appends its non-`a` vertices in gadget order.
pub fn tree_like<F>(gadget_seq: F, depth: usize) -> Result<TreeLike>
where
    F: Fn(usize) -> Result<Gadget>,
{
    if depth == 0 {
        return Err(DacError::InvalidArgument("tree depth must be at least 1".into()));
    }
    let gadgets: Vec<Gadget> = (1..=depth).map(&gadget_seq).collect::<Result<_>>()?;
    let mut graph = MultiGraph::empty(1);
    let mut tree_vertices = vec![0];
    let mut levels = vec![0];
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((parent, level)) = queue.pop_front() {
        if level == depth {
            continue;
        }
        let children = if level == 0 { 3 } else { 2 };
        let gadget = &gadgets[level];
        for _ in 0..children {
            let local = gadget.graph();
            let mut map = vec![usize::MAX; local.vertex_count()];
            for (v, slot) in map.iter_mut().enumerate() {
                *slot = if v == gadget.a() { parent } else { graph.add_vertex() };
            }
            graph.splice(local, &map)?;
            let child = map[gadget.b()];
            tree_vertices.push(child);
            levels.push(level + 1);
            queue.push_back((child, level + 1));
        }
    }
    Ok(TreeLike {
        graph,
        root: 0,
        tree_vertices,
        levels,
    })
}

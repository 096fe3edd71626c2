//! Samplers for the divide-and-color measure and cluster / crossing queries.
//!
//! Draw order for [`sample_dac`]: one uniform per edge in index order (edge
//! open iff `u < p`), then one uniform per vertex in index order (`κ(v) = 1`
//! iff `u < r`), and `ξ(v) = κ(min C_v)`. Because the draws do not depend on
//! the parameters, running the same stream at two parameter values couples
//! the samples monotonically in `r`.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use crate::bits::{BondConfig, SiteConfig};
use crate::error::{check_unit, DacError, Result};
use crate::graph::{Gadget, LatticeBall, LatticeBox, MultiGraph, SiteAdjacency};
use crate::uf::ClusterPartition;

pub fn sample_bond<R: Rng + ?Sized>(graph: &MultiGraph, p: f64, rng: &mut R) -> Result<BondConfig> {
    check_unit("p", p)?;
    let mut eta = BondConfig::closed(graph.edge_count());
    for e in 0..graph.edge_count() {
        if rng.random::<f64>() < p {
            eta.0.set(e, true);
        }
    }
    Ok(eta)
}

/// Bond clusters of `eta`, flattened so that root and minimum lookups are O(1).
pub fn clusters(graph: &MultiGraph, eta: &BondConfig) -> Result<ClusterPartition> {
    if eta.len() != graph.edge_count() {
        return Err(DacError::InvalidArgument(format!(
            "bond configuration has {} bits for {} edges",
            eta.len(),
            graph.edge_count()
        )));
    }
    let mut uf = ClusterPartition::singletons(graph.vertex_count());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if eta.is_open(e) {
            uf.union(u, v);
        }
    }
    uf.flatten();
    Ok(uf)
}

/// Draws `κ` for every vertex and paints `ξ(v) = κ(min C_v)`.
pub fn color<R: Rng + ?Sized>(partition: &ClusterPartition, r: f64, rng: &mut R) -> Result<SiteConfig> {
    check_unit("r", r)?;
    let n = partition.len();
    let kappa: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < r).collect();
    let mut xi = SiteConfig::white(n);
    for v in 0..n {
        if kappa[partition.min_of(v)] {
            xi.0.set(v, true);
        }
    }
    Ok(xi)
}

pub fn sample_dac<R: Rng + ?Sized>(graph: &MultiGraph, p: f64, r: f64, rng: &mut R) -> Result<(BondConfig, SiteConfig)> {
    check_unit("p", p)?;
    check_unit("r", r)?;
    let eta = sample_bond(graph, p, rng)?;
    let partition = clusters(graph, &eta)?;
    let xi = color(&partition, r, rng)?;
    Ok((eta, xi))
}

/// Output of the directed-exploration construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSample {
    pub eta: BondConfig,
    pub xi: SiteConfig,
    /// `z(v) = 1` iff `κ(v) = 1` and every directed edge pointing at `v` is
    /// closed. Always `z <= xi`.
    pub z: SiteConfig,
}

/// Builds `(η, ξ)` by exploring directed open clusters in vertex order, and
/// the product-measure witness `z` with `z <= ξ`.
///
/// Each edge `e = <x, y>` carries two directed Bernoulli(`p`) bits, drawn
/// lazily the first time they are read. The vertex colours `κ` are drawn
/// first, one per vertex in index order.
pub fn exploration_coupling<R: Rng + ?Sized>(graph: &MultiGraph, p: f64, r: f64, rng: &mut R) -> Result<CouplingSample> {
    check_unit("p", p)?;
    check_unit("r", r)?;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let kappa: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < r).collect();
    let mut directed: Vec<Option<bool>> = vec![None; 2 * m];
    let mut arrow = |e: usize, from: usize, rng: &mut R| -> bool {
        let slot = 2 * e + usize::from(graph.endpoints(e).0 != from);
        *directed[slot].get_or_insert_with(|| rng.random::<f64>() < p)
    };

    let mut eta: Vec<Option<bool>> = vec![None; m];
    let mut xi: Vec<Option<bool>> = vec![None; n];
    let mut explored_mark = vec![false; n];
    let mut next = 0;
    loop {
        // step 1: least vertex without a colour
        while next < n && xi[next].is_some() {
            next += 1;
        }
        if next == n {
            break;
        }
        let v = next;
        // step 2: explore the directed open cluster of v
        let mut explored = vec![v];
        explored_mark[v] = true;
        let mut frontier: BTreeSet<usize> = BTreeSet::new();
        let mut i = 0;
        loop {
            let vi = explored[i];
            for &e in graph.incident(vi) {
                if eta[e].is_none() {
                    eta[e] = Some(arrow(e, vi, rng));
                }
            }
            // Open edges carrying an assigned value all touch an explored
            // vertex (edges assigned for earlier clusters are closed towards
            // uncoloured vertices), so the reachable set grows only through
            // the open edges at vi.
            for &e in graph.incident(vi) {
                let w = graph.other_end(e, vi);
                if eta[e] == Some(true) && !explored_mark[w] {
                    frontier.insert(w);
                }
            }
            match frontier.pop_first() {
                Some(w) => {
                    explored_mark[w] = true;
                    explored.push(w);
                    i += 1;
                }
                None => break,
            }
        }
        // step 3
        for &w in &explored {
            xi[w] = Some(kappa[v]);
        }
    }

    let mut z = SiteConfig::white(n);
    for v in 0..n {
        let shielded = graph.incident(v).iter().all(|&e| !arrow(e, graph.other_end(e, v), rng));
        if kappa[v] && shielded {
            z.0.set(v, true);
        }
    }
    let eta = BondConfig(crate::bits::Bits::from_fn(m, |e| eta[e].expect("every edge is assigned")));
    let xi = SiteConfig(crate::bits::Bits::from_fn(n, |v| xi[v].expect("every vertex is coloured")));
    debug_assert!(z.0.is_subset_of(&xi.0));
    Ok(CouplingSample { eta, xi, z })
}

/// Maximal set of vertices with the colour of `v` connected to `v` through
/// same-colour sites, under `adjacency`. Returned sorted.
pub fn black_component<A: SiteAdjacency>(adjacency: &A, xi: &SiteConfig, v: usize) -> Result<Vec<usize>> {
    let n = adjacency.site_count();
    if v >= n || xi.len() != n {
        return Err(DacError::InvalidArgument("vertex or configuration does not fit the graph".into()));
    }
    let colour = xi.is_black(v);
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut queue = VecDeque::from([v]);
    let mut out = vec![];
    while let Some(u) = queue.pop_front() {
        out.push(u);
        adjacency.for_each_site_neighbor(u, |w| {
            if !seen[w] && xi.is_black(w) == colour {
                seen[w] = true;
                queue.push_back(w);
            }
        });
    }
    out.sort_unstable();
    Ok(out)
}

/// Whether a black path joins the bottom row to the top row of a
/// `[0, n] × [0, 3n]` box, using the box's site adjacency.
pub fn vertical_crossing(lattice: &LatticeBox, xi: &SiteConfig) -> Result<bool> {
    if lattice.height() != 3 * lattice.width() {
        return Err(DacError::Geometry(format!(
            "crossing box must be [0,n]x[0,3n], got [0,{}]x[0,{}]",
            lattice.width(),
            lattice.height()
        )));
    }
    if xi.len() != lattice.site_count() {
        return Err(DacError::Geometry("site configuration does not fit the box".into()));
    }
    let mut scratch = Scratch::default();
    Ok(scratch.crosses(lattice, xi))
}

/// Whether the open cluster of the origin reaches graph distance `n`.
pub fn one_arm(ball: &LatticeBall, eta: &BondConfig, n: usize) -> Result<bool> {
    if n > ball.radius() {
        return Err(DacError::Geometry(format!("arm length {n} exceeds ball radius {}", ball.radius())));
    }
    if eta.len() != ball.graph().edge_count() {
        return Err(DacError::Geometry("bond configuration does not fit the ball".into()));
    }
    Ok(open_radius(ball, eta) >= n)
}

/// Largest distance from the origin reached by its open cluster.
pub fn open_radius(ball: &LatticeBall, eta: &BondConfig) -> usize {
    let g = ball.graph();
    let mut seen = vec![false; g.vertex_count()];
    seen[ball.origin()] = true;
    let mut queue = VecDeque::from([ball.origin()]);
    let mut best = 0;
    while let Some(u) = queue.pop_front() {
        best = best.max(ball.distance(u));
        for &e in g.incident(u) {
            let w = g.other_end(e, u);
            if eta.is_open(e) && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    best
}

/// The pivotality event `E_{a,b}` on a sampled pair: `a` and `b` share a
/// bond cluster, or a black path inside `V \ C_a` joins `b` to a vertex at
/// distance 1 from `C_a`.
pub fn pivotal(gadget: &Gadget, eta: &BondConfig, xi: &SiteConfig) -> Result<bool> {
    let g = gadget.graph();
    if xi.len() != g.vertex_count() {
        return Err(DacError::InvalidArgument("site configuration does not fit the graph".into()));
    }
    let uf = clusters(g, eta)?;
    let ra = uf.root(gadget.a());
    if uf.root(gadget.b()) == ra {
        return Ok(true);
    }
    if !xi.is_black(gadget.b()) {
        return Ok(false);
    }
    let n = g.vertex_count();
    let in_ca = |v: usize| uf.root(v) == ra;
    let mut seen = vec![false; n];
    seen[gadget.b()] = true;
    let mut queue = VecDeque::from([gadget.b()]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u) {
            if in_ca(w) {
                return Ok(true);
            }
            if !seen[w] && xi.is_black(w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}

/// Reusable buffers for hot sampling loops.
#[derive(Default)]
pub(crate) struct Scratch {
    pub eta: BondConfig,
    pub xi: SiteConfig,
    pub partition: Option<ClusterPartition>,
    kappa: Vec<bool>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<usize>,
}

impl Scratch {
    /// Same draws and result as [`sample_dac`], without allocating.
    pub fn sample<R: Rng + ?Sized>(&mut self, graph: &MultiGraph, p: f64, r: f64, rng: &mut R) {
        let (n, m) = (graph.vertex_count(), graph.edge_count());
        if self.eta.len() != m {
            self.eta = BondConfig::closed(m);
        }
        if self.xi.len() != n {
            self.xi = SiteConfig::white(n);
        }
        let uf = match &mut self.partition {
            Some(uf) if uf.len() == n => {
                uf.reset();
                uf
            }
            slot => slot.insert(ClusterPartition::singletons(n)),
        };
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            let open = rng.random::<f64>() < p;
            self.eta.0.set(e, open);
            if open {
                uf.union(u, v);
            }
        }
        uf.flatten();
        self.kappa.clear();
        self.kappa.extend((0..n).map(|_| rng.random::<f64>() < r));
        for v in 0..n {
            self.xi.0.set(v, self.kappa[uf.min_of(v)]);
        }
    }

    fn next_epoch(&mut self, n: usize) -> u32 {
        if self.stamp.len() != n || self.epoch == u32::MAX {
            self.stamp = vec![0; n];
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    pub fn crosses(&mut self, lattice: &LatticeBox, xi: &SiteConfig) -> bool {
        let epoch = self.next_epoch(lattice.site_count());
        self.queue.clear();
        for v in lattice.bottom_row() {
            if xi.is_black(v) {
                self.stamp[v] = epoch;
                self.queue.push(v);
            }
        }
        let top = lattice.height();
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            if lattice.coords(u).1 == top {
                return true;
            }
            let (stamp, queue) = (&mut self.stamp, &mut self.queue);
            lattice.for_each_site_neighbor(u, |w| {
                if stamp[w] != epoch && xi.is_black(w) {
                    stamp[w] = epoch;
                    queue.push(w);
                }
            });
        }
        false
    }
}

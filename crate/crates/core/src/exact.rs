//! Exact probabilities by enumeration over bond configurations.
//!
//! Every function enumerates the `2^|E|` edge subsets by an integer counter
//! (bit `e` set = edge `e` open), tallies integer counts per number of open
//! edges (and, where colours matter, per number of clusters and black
//! clusters), and only then expands the tallies into a [`BiPoly`]. The
//! counter range is split into chunks that run through [`map_reduce`], and
//! tallies merge by addition.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bits::SiteConfig;
use crate::error::{DacError, Result};
use crate::exec::{map_reduce, Exec};
use crate::graph::{complete_bipartite_dk, DkLayout, Gadget, MultiGraph};
use crate::poly::BiPoly;
use crate::rational::{self, Q};
use crate::uf::ClusterPartition;

/// Enumeration limits. Exceeding one is an error, never a silent fallback.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_edges: usize,
    pub max_clusters: usize,
    pub exec: Exec,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_edges: 24,
            max_clusters: 20,
            exec: Exec::default(),
        }
    }
}

impl Caps {
    pub fn with_exec(exec: Exec) -> Self {
        Caps { exec, ..Caps::default() }
    }

    fn check_edges(&self, graph: &MultiGraph) -> Result<()> {
        let m = graph.edge_count();
        if m > self.max_edges || m > 62 {
            return Err(DacError::CapExceeded {
                what: "edges",
                count: m,
                cap: self.max_edges.min(62),
            });
        }
        Ok(())
    }

    fn check_clusters(&self, count: usize) -> Result<()> {
        if count > self.max_clusters || count > 30 {
            return Err(DacError::CapExceeded {
                what: "clusters",
                count,
                cap: self.max_clusters.min(30),
            });
        }
        Ok(())
    }
}

const CHUNK_BITS: u32 = 12;

/// Splits `0..2^m` into chunks and folds `visit(mask, open_edges, clusters)`
/// into a per-chunk state.
fn enumerate<T, F>(graph: &MultiGraph, exec: Exec, identity: impl Fn() -> T + Sync + Send, visit: F, merge: impl Fn(T, T) -> T + Sync + Send) -> T
where
    T: Send,
    F: Fn(&mut T, u64, u32, &mut ClusterPartition) + Sync + Send,
{
    let m = graph.edge_count() as u32;
    let chunk_bits = CHUNK_BITS.min(m);
    let chunks = 1usize << (m - chunk_bits);
    map_reduce(
        exec,
        chunks,
        &identity,
        |chunk| {
            let mut acc = identity();
            let mut uf = ClusterPartition::singletons(graph.vertex_count());
            let base = (chunk as u64) << chunk_bits;
            for low in 0..1u64 << chunk_bits {
                let mask = base | low;
                uf.reset();
                for (e, &(u, v)) in graph.edges().iter().enumerate() {
                    if mask >> e & 1 == 1 {
                        uf.union(u, v);
                    }
                }
                visit(&mut acc, mask, mask.count_ones(), &mut uf);
            }
            acc
        },
        merge,
    )
}

fn add_vec(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// `Σ_k counts[k] p^k (1-p)^(m-k)`.
fn bond_poly(counts: &[u64], m: u32) -> BiPoly {
    counts.iter().enumerate().fold(BiPoly::zero(), |acc, (k, &c)| {
        if c == 0 {
            acc
        } else {
            &acc + &BiPoly::bernstein_p(k as u32, m).scale(&Q::from_integer(BigInt::from(c)))
        }
    })
}

/// Probability that the terminals share a bond cluster, as a polynomial in `p`.
pub fn connection_poly(gadget: &Gadget, caps: &Caps) -> Result<BiPoly> {
    let graph = gadget.graph();
    caps.check_edges(graph)?;
    let m = graph.edge_count();
    let (a, b) = (gadget.a(), gadget.b());
    let counts = enumerate(
        graph,
        caps.exec,
        || vec![0u64; m + 1],
        |acc, _, k, uf| {
            if uf.same(a, b) {
                acc[k as usize] += 1;
            }
        },
        add_vec,
    );
    Ok(bond_poly(&counts, m as u32))
}

/// Tally layout for colour-dependent events: `[open][clusters][black]`.
struct ColourTally {
    m: usize,
    c: usize,
}

impl ColourTally {
    fn len(&self) -> usize {
        (self.m + 1) * (self.c + 1) * (self.c + 1)
    }

    fn at(&self, k: u32, clusters: usize, black: u32) -> usize {
        (k as usize * (self.c + 1) + clusters) * (self.c + 1) + black as usize
    }

    /// `Σ T[k][c][j] p^k (1-p)^(m-k) r^j (1-r)^(c-j)`.
    fn expand(&self, table: &[u64]) -> BiPoly {
        let mut out = BiPoly::zero();
        for c in 0..=self.c {
            for j in 0..=c {
                let counts: Vec<u64> = (0..=self.m).map(|k| table[self.at(k as u32, c, j as u32)]).collect();
                if counts.iter().all(|&x| x == 0) {
                    continue;
                }
                let pp = bond_poly(&counts, self.m as u32);
                out = &out + &(&pp * &BiPoly::bernstein_r(j as u32, c as u32));
            }
        }
        out
    }
}

/// Probability of the pivotality event `E_{a,b}`: `a` and `b` share a bond
/// cluster, or some vertex at graph distance 1 from `C_a` (outside `C_a`) is
/// joined to `b` by a black path.
///
/// Black paths are taken inside `V \ C_a`, so the event never looks at the
/// colour of `C_a`; the colourings of the remaining clusters are enumerated
/// exhaustively.
pub fn pivotality_poly(gadget: &Gadget, caps: &Caps) -> Result<BiPoly> {
    pivotality_poly_where(gadget, caps, |_| true)
}

/// `P(E_{a,b} ∩ {η ∈ B})` for a bond event `B` given as a predicate on the
/// edge mask.
pub fn pivotality_poly_where<B>(gadget: &Gadget, caps: &Caps, bond_event: B) -> Result<BiPoly>
where
    B: Fn(u64) -> bool + Sync + Send,
{
    let graph = gadget.graph();
    caps.check_edges(graph)?;
    let n = graph.vertex_count();
    caps.check_clusters(n.saturating_sub(1))?;
    let layout = ColourTally {
        m: graph.edge_count(),
        c: n.saturating_sub(1),
    };
    let (a, b) = (gadget.a(), gadget.b());
    let table = enumerate(
        graph,
        caps.exec,
        || vec![0u64; layout.len()],
        |acc, mask, k, uf| {
            if !bond_event(mask) {
                return;
            }
            let root_a = uf.find(a);
            if uf.find(b) == root_a {
                acc[layout.at(k, 0, 0)] += 1;
                return;
            }
            let lab = label_clusters(graph, uf, root_a);
            let c = lab.count;
            let bc = lab.of[b];
            for colouring in 0..1u32 << c {
                if colouring >> bc & 1 == 0 {
                    continue;
                }
                let mut reach = 1u32 << bc;
                loop {
                    let mut next = reach;
                    let mut bits = reach;
                    while bits != 0 {
                        let i = bits.trailing_zeros();
                        bits &= bits - 1;
                        next |= lab.adjacent[i as usize] & colouring;
                    }
                    if next == reach {
                        break;
                    }
                    reach = next;
                }
                if reach & lab.touches_a != 0 {
                    acc[layout.at(k, c, colouring.count_ones())] += 1;
                }
            }
        },
        add_vec,
    );
    Ok(layout.expand(&table))
}

struct ClusterLabels {
    count: usize,
    /// Cluster id per vertex (`u32::MAX` inside `C_a`).
    of: Vec<u32>,
    /// Bitmask of clusters adjacent to each cluster, excluding `C_a`.
    adjacent: Vec<u32>,
    /// Clusters with a vertex at distance 1 from `C_a`.
    touches_a: u32,
}

fn label_clusters(graph: &MultiGraph, uf: &mut ClusterPartition, root_a: usize) -> ClusterLabels {
    let n = graph.vertex_count();
    let mut id_of_root = vec![u32::MAX; n];
    let mut of = vec![u32::MAX; n];
    let mut count = 0;
    for v in 0..n {
        let r = uf.find(v);
        if r == root_a {
            continue;
        }
        if id_of_root[r] == u32::MAX {
            id_of_root[r] = count;
            count += 1;
        }
        of[v] = id_of_root[r];
    }
    let mut adjacent = vec![0u32; count as usize];
    let mut touches_a = 0;
    for &(u, v) in graph.edges() {
        match (of[u], of[v]) {
            (u32::MAX, u32::MAX) => {}
            (u32::MAX, cv) => touches_a |= 1 << cv,
            (cu, u32::MAX) => touches_a |= 1 << cu,
            (cu, cv) if cu != cv => {
                adjacent[cu as usize] |= 1 << cv;
                adjacent[cv as usize] |= 1 << cu;
            }
            _ => {}
        }
    }
    ClusterLabels {
        count: count as usize,
        of,
        adjacent,
        touches_a,
    }
}

/// An event depending on the colours of finitely many vertices, stored as a
/// truth table over the colour patterns of its support (bit `i` of a pattern
/// is the colour of `support[i]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorEvent {
    support: Vec<usize>,
    table: Vec<bool>,
}

const MAX_SUPPORT: usize = 16;

impl ColorEvent {
    pub fn from_predicate(support: Vec<usize>, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        if support.len() > MAX_SUPPORT {
            return Err(DacError::CapExceeded {
                what: "event support",
                count: support.len(),
                cap: MAX_SUPPORT,
            });
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != support.len() {
            return Err(DacError::InvalidArgument("event support has repeated vertices".into()));
        }
        let k = support.len();
        let table = (0..1usize << k)
            .map(|pat| {
                let colours: Vec<bool> = (0..k).map(|i| pat >> i & 1 == 1).collect();
                f(&colours)
            })
            .collect();
        Ok(ColorEvent { support, table })
    }

    /// Disjunction of conjunctions of `(vertex, black?)` requirements.
    pub fn any_of(clauses: &[Vec<(usize, bool)>]) -> Result<Self> {
        let mut support: Vec<usize> = clauses.iter().flatten().map(|&(v, _)| v).collect();
        support.sort_unstable();
        support.dedup();
        let pos: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let clauses = clauses.to_vec();
        ColorEvent::from_predicate(support, move |c| {
            clauses.iter().any(|cl| cl.iter().all(|&(v, want)| c[pos[&v]] == want))
        })
    }

    pub fn cylinder(requirements: &[(usize, bool)]) -> Result<Self> {
        ColorEvent::any_of(&[requirements.to_vec()])
    }

    pub fn all_black(vertices: &[usize]) -> Result<Self> {
        ColorEvent::cylinder(&vertices.iter().map(|&v| (v, true)).collect::<Vec<_>>())
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn holds_for_pattern(&self, pattern: usize) -> bool {
        self.table[pattern]
    }

    pub fn holds(&self, xi: &SiteConfig) -> bool {
        let pat = self
            .support
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &v)| acc | usize::from(xi.is_black(v)) << i);
        self.table[pat]
    }
}

/// One term of the conditioning decomposition over `m_x = (min C_{x_1}, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub mins: Vec<usize>,
    /// `ν_p(m_x = mins)`, a polynomial in `p`.
    pub bond: BiPoly,
    /// `ν_r[f(κ(mins_1), ..., κ(mins_k))]`, a polynomial in `r`.
    pub colour: BiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventDecomposition {
    pub total: BiPoly,
    pub terms: Vec<DecompositionTerm>,
}

impl EventDecomposition {
    /// `Σ bond · colour` recomputed from the terms.
    pub fn recombine(&self) -> BiPoly {
        self.terms
            .iter()
            .fold(BiPoly::zero(), |acc, t| &acc + &(&t.bond * &t.colour))
    }
}

/// `μ_{p,r}(A)` by conditioning on the vector of cluster minima of the
/// support of `A`.
pub fn event_prob_poly(graph: &MultiGraph, event: &ColorEvent, caps: &Caps) -> Result<EventDecomposition> {
    caps.check_edges(graph)?;
    let n = graph.vertex_count();
    if let Some(&bad) = event.support.iter().find(|&&v| v >= n) {
        return Err(DacError::InvalidArgument(format!("event vertex {bad} outside the graph")));
    }
    if n > 256 {
        return Err(DacError::CapExceeded {
            what: "vertices",
            count: n,
            cap: 256,
        });
    }
    let m = graph.edge_count();
    let support = event.support.clone();
    let pack = |uf: &mut ClusterPartition| -> u128 {
        support.iter().enumerate().fold(0u128, |key, (i, &x)| {
            let r = uf.find(x);
            key | (min_in_cluster(uf, r) as u128) << (8 * i)
        })
    };
    let tallies: HashMap<u128, Vec<u64>> = enumerate(
        graph,
        caps.exec,
        HashMap::new,
        |acc, _, k, uf| {
            let key = pack(uf);
            acc.entry(key).or_insert_with(|| vec![0u64; m + 1])[k as usize] += 1;
        },
        |mut a, b| {
            for (key, counts) in b {
                match a.get_mut(&key) {
                    Some(slot) => {
                        for (x, y) in slot.iter_mut().zip(counts) {
                            *x += y;
                        }
                    }
                    None => {
                        a.insert(key, counts);
                    }
                }
            }
            a
        },
    );
    let k = event.support.len();
    let ordered: BTreeMap<Vec<usize>, Vec<u64>> = tallies
        .into_iter()
        .map(|(key, counts)| ((0..k).map(|i| (key >> (8 * i) & 0xff) as usize).collect(), counts))
        .collect();
    let mut terms = Vec::with_capacity(ordered.len());
    let mut total = BiPoly::zero();
    for (mins, counts) in ordered {
        let bond = bond_poly(&counts, m as u32);
        let colour = colour_poly(event, &mins);
        total = &total + &(&bond * &colour);
        terms.push(DecompositionTerm { mins, bond, colour });
    }
    Ok(EventDecomposition { total, terms })
}

// ClusterPartition keeps the minimum per root; read it through min_of on the root.
fn min_in_cluster(uf: &ClusterPartition, root: usize) -> usize {
    uf.min_of(root)
}

/// `ν_r[f(κ(v_1), ..., κ(v_k))]` where equal `v_i` share one `κ` value.
fn colour_poly(event: &ColorEvent, mins: &[usize]) -> BiPoly {
    let mut distinct = mins.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let d = distinct.len() as u32;
    let slot: Vec<usize> = mins.iter().map(|v| distinct.binary_search(v).unwrap()).collect();
    let mut counts = vec![0u64; d as usize + 1];
    for colouring in 0..1usize << d {
        let pattern = slot
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &s)| acc | (colouring >> s & 1) << i);
        if event.table[pattern] {
            counts[colouring.count_ones() as usize] += 1;
        }
    }
    counts.iter().enumerate().fold(BiPoly::zero(), |acc, (j, &c)| {
        if c == 0 {
            acc
        } else {
            &acc + &BiPoly::bernstein_r(j as u32, d).scale(&Q::from_integer(BigInt::from(c)))
        }
    })
}

/// The full site law: entry `ξ` (as a vertex bitmask) is `μ_{p,r}(ξ)`.
pub fn site_law(graph: &MultiGraph, caps: &Caps) -> Result<Vec<BiPoly>> {
    caps.check_edges(graph)?;
    let n = graph.vertex_count();
    if n > 12 {
        return Err(DacError::CapExceeded {
            what: "vertices",
            count: n,
            cap: 12,
        });
    }
    caps.check_clusters(n)?;
    let layout = ColourTally {
        m: graph.edge_count(),
        c: n,
    };
    let stride = layout.len();
    let table = enumerate(
        graph,
        caps.exec,
        || vec![0u64; stride << n],
        |acc, _, k, uf| {
            let roots: Vec<usize> = {
                let mut r: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
                r.sort_unstable();
                r.dedup();
                r
            };
            let c = roots.len();
            let masks: Vec<u64> = roots
                .iter()
                .map(|&root| (0..n).filter(|&v| uf.find(v) == root).fold(0u64, |m, v| m | 1 << v))
                .collect();
            for colouring in 0..1u32 << c {
                let xi = (0..c).filter(|&i| colouring >> i & 1 == 1).fold(0u64, |m, i| m | masks[i]);
                acc[xi as usize * stride + layout.at(k, c, colouring.count_ones())] += 1;
            }
        },
        add_vec,
    );
    Ok((0..1usize << n)
        .map(|xi| layout.expand(&table[xi * stride..(xi + 1) * stride]))
        .collect())
}

/// A violated domination inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationWitness {
    /// Site configurations (vertex bitmasks) forming the increasing event.
    pub event: Vec<u64>,
    pub lower: Q,
    pub dac: Q,
    pub upper: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationReport {
    pub max_degree: usize,
    /// `r (1-p)^Δ`.
    pub lower_param: Q,
    /// `1 - (1-r)(1-p)^Δ`.
    pub upper_param: Q,
    pub increasing_events: usize,
    /// Largest of `ν_lower(A) - μ(A)` and `μ(A) - ν_upper(A)` over all events.
    pub worst_slack: Q,
    pub violation: Option<DominationWitness>,
}

impl DominationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `ν_{r(1-p)^Δ} ≤ μ_{p,r} ≤ ν_{1-(1-r)(1-p)^Δ}` on every increasing
/// event of a graph with at most 4 vertices.
pub fn check_domination_exact(graph: &MultiGraph, p: &Q, r: &Q, caps: &Caps) -> Result<DominationReport> {
    rational::check_unit("p", p)?;
    rational::check_unit("r", r)?;
    let n = graph.vertex_count();
    if n > 4 {
        return Err(DacError::CapExceeded {
            what: "vertices",
            count: n,
            cap: 4,
        });
    }
    let law: Vec<Q> = site_law(graph, caps)?.iter().map(|f| f.eval(p, r)).collect();
    let delta = graph.max_degree();
    let shrink = rational::pow(&(Q::one() - p), delta as u64);
    let lower_param = r * &shrink;
    let upper_param = Q::one() - (Q::one() - r) * &shrink;
    let product = |q: &Q| -> Vec<Q> {
        (0..1u64 << n)
            .map(|xi| {
                let k = xi.count_ones() as u64;
                rational::pow(q, k) * rational::pow(&(Q::one() - q), n as u64 - k)
            })
            .collect()
    };
    let lo_law = product(&lower_param);
    let hi_law = product(&upper_param);

    let configs = 1usize << n;
    let mut increasing = 0;
    let mut worst: Option<Q> = None;
    let mut violation = None;
    for event in 0u64..1 << configs {
        if !is_up_set(event, n) {
            continue;
        }
        increasing += 1;
        let members: Vec<usize> = (0..configs).filter(|&x| event >> x & 1 == 1).collect();
        let sum = |law: &[Q]| members.iter().fold(Q::zero(), |acc, &x| acc + &law[x]);
        let (lo, mid, hi) = (sum(&lo_law), sum(&law), sum(&hi_law));
        let slack = std::cmp::max(&lo - &mid, &mid - &hi);
        if worst.as_ref().is_none_or(|w| &slack > w) {
            worst = Some(slack.clone());
        }
        if violation.is_none() && (lo > mid || mid > hi) {
            violation = Some(DominationWitness {
                event: members.iter().map(|&x| x as u64).collect(),
                lower: lo,
                dac: mid,
                upper: hi,
            });
        }
    }
    Ok(DominationReport {
        max_degree: delta,
        lower_param,
        upper_param,
        increasing_events: increasing,
        worst_slack: worst.unwrap_or_else(Q::zero),
        violation,
    })
}

/// `event` (a set of vertex bitmasks, itself a bitmask over `2^n` configs)
/// is closed under turning vertices black.
pub fn is_up_set(event: u64, n: usize) -> bool {
    (0..1u64 << n).all(|xi| {
        event >> xi & 1 == 0 || (0..n).all(|v| event >> (xi | 1 << v) & 1 == 1)
    })
}

/// `P(B_k) = (1-p)^4 (1 - (1-p^2)^k)`, where `B_k` is the event that the four
/// terminal edges of `D^k` are closed and some pair `f_i, f_i'` is open.
pub fn bk_probability(p: &Q, k: u64) -> Q {
    let one = Q::one();
    rational::pow(&(&one - p), 4) * (&one - rational::pow(&(&one - p * p), k))
}

/// `P(B_k)` as a polynomial, by enumeration over the edges of `D^k`.
pub fn bk_poly_enumerated(k: usize, caps: &Caps) -> Result<BiPoly> {
    let gadget = complete_bipartite_dk(k)?;
    let graph = gadget.graph();
    caps.check_edges(graph)?;
    let m = graph.edge_count();
    let mask = bk_mask(k);
    let counts = enumerate(
        graph,
        caps.exec,
        || vec![0u64; m + 1],
        |acc, bits, open, _| {
            if mask(bits) {
                acc[open as usize] += 1;
            }
        },
        add_vec,
    );
    Ok(bond_poly(&counts, m as u32))
}

/// Indicator of `B_k` on an edge mask of `D^k`.
pub fn bk_mask(k: usize) -> impl Fn(u64) -> bool + Sync + Send {
    let layout = DkLayout::new(k);
    let terminal = layout.terminal_edges.iter().fold(0u64, |m, &e| m | 1 << e);
    let pairs: Vec<u64> = layout.middle_edges.iter().map(|&(f, g)| 1 << f | 1 << g).collect();
    move |bits| bits & terminal == 0 && pairs.iter().any(|&pair| bits & pair == pair)
}

pub fn bk_probability_enumerated(p: &Q, k: usize, caps: &Caps) -> Result<Q> {
    Ok(bk_poly_enumerated(k, caps)?.eval(p, &Q::zero()))
}

/// `Σ_x μ(ξ)` style helper: evaluates a polynomial and checks it lies in `[0, 1]`.
pub fn probability_at(f: &BiPoly, p: &Q, r: &Q) -> Result<Q> {
    let v = f.eval(p, r);
    if !rational::in_unit(&v) {
        return Err(DacError::InvalidArgument(format!("value {} is not a probability", rational::show(&v))));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parallel_gadget_dn, path_gadget, single_edge};
    use crate::rational::q;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn connection_of_small_gadgets() {
        assert_eq!(connection_poly(&single_edge(), &caps()).unwrap(), BiPoly::p());
        assert_eq!(connection_poly(&path_gadget(), &caps()).unwrap(), BiPoly::p().pow(2));
    }

    #[test]
    fn pivotality_of_small_gadgets() {
        let edge = &BiPoly::p() + &(&BiPoly::one_minus_p() * &BiPoly::r());
        assert_eq!(pivotality_poly(&single_edge(), &caps()).unwrap(), edge);
        assert_eq!(pivotality_poly(&path_gadget(), &caps()).unwrap(), edge.pow(2));
    }

    #[test]
    fn dn_closed_forms() {
        for n in 1..=6u32 {
            let g = parallel_gadget_dn(n as usize).unwrap();
            let closed = &BiPoly::one() - &BiPoly::one_minus_p().pow(n);
            let h = connection_poly(&g, &caps()).unwrap();
            assert_eq!(h, &BiPoly::p() * &closed);
            let f = pivotality_poly(&g, &caps()).unwrap();
            let near = &BiPoly::p() + &(&BiPoly::one_minus_p() * &BiPoly::r());
            let far = &(&BiPoly::p() * &BiPoly::r()) + &(&BiPoly::one_minus_p() * &BiPoly::r().pow(2));
            let expected = &(&closed * &near) + &(&BiPoly::one_minus_p().pow(n) * &far);
            assert_eq!(f, expected, "n = {n}");
            assert_eq!(f.at_p(&Q::zero()), BiPoly::r().pow(2));
        }
    }

    #[test]
    fn caps_are_enforced() {
        let big = parallel_gadget_dn(24).unwrap();
        assert!(matches!(connection_poly(&big, &caps()), Err(DacError::CapExceeded { what: "edges", .. })));
        let tight = Caps {
            max_clusters: 2,
            ..caps()
        };
        let d = complete_bipartite_dk(1).unwrap();
        assert!(matches!(pivotality_poly(&d, &tight), Err(DacError::CapExceeded { what: "clusters", .. })));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let d = complete_bipartite_dk(5).unwrap();
        let seq = pivotality_poly(&d, &Caps::with_exec(Exec::Sequential)).unwrap();
        let par = pivotality_poly(&d, &Caps::with_exec(Exec::Parallel)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn single_vertex_event_is_r() {
        let d = complete_bipartite_dk(2).unwrap();
        for v in 0..6 {
            let e = ColorEvent::all_black(&[v]).unwrap();
            assert_eq!(event_prob_poly(d.graph(), &e, &caps()).unwrap().total, BiPoly::r());
        }
    }

    #[test]
    fn both_ends_black_on_an_edge() {
        let g = single_edge();
        let e = ColorEvent::all_black(&[0, 1]).unwrap();
        let d = event_prob_poly(g.graph(), &e, &caps()).unwrap();
        let expected = &(&BiPoly::p() * &BiPoly::r()) + &(&BiPoly::one_minus_p() * &BiPoly::r().pow(2));
        assert_eq!(d.total, expected);
        assert_eq!(d.recombine(), d.total);
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.terms[0].mins, vec![0, 0]);
        assert_eq!(d.terms[0].bond, BiPoly::p());
        assert_eq!(d.terms[0].colour, BiPoly::r());
    }

    #[test]
    fn fixed_p_gives_polynomial_in_r_of_bounded_degree() {
        let g = path_gadget();
        let e = ColorEvent::any_of(&[vec![(0, true), (2, false)], vec![(1, true)]]).unwrap();
        let f = event_prob_poly(g.graph(), &e, &caps()).unwrap().total.at_p(&q(1, 3));
        assert!(f.is_univariate_r());
        assert!(f.degree_r() <= 3);
    }

    #[test]
    fn site_law_sums_to_one() {
        let g = MultiGraph::new(3, &[(0, 1), (1, 2), (0, 1)]).unwrap();
        let law = site_law(&g, &caps()).unwrap();
        let total = law.iter().fold(BiPoly::zero(), |a, f| &a + f);
        assert_eq!(total, BiPoly::one());
    }

    #[test]
    fn up_sets_of_two_vertices() {
        // up-sets of {0,1}^2: ∅, {11}, {01,11}, {10,11}, {01,10,11}, all
        let count = (0u64..16).filter(|&e| is_up_set(e, 2)).count();
        assert_eq!(count, 6);
        // Dedekind numbers
        assert_eq!((0u64..256).filter(|&e| is_up_set(e, 3)).count(), 20);
        assert_eq!((0u64..65536).filter(|&e| is_up_set(e, 4)).count(), 168);
    }

    #[test]
    fn domination_trivial_cases() {
        let g = MultiGraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let rep = check_domination_exact(&g, &Q::zero(), &q(1, 3), &caps()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.lower_param, q(1, 3));
        assert_eq!(rep.upper_param, q(1, 3));
        assert_eq!(rep.worst_slack, Q::zero());
        let rep = check_domination_exact(&g, &q(1, 2), &q(1, 2), &caps()).unwrap();
        assert!(rep.passed());
        let rep = check_domination_exact(&g, &q(1, 2), &Q::one(), &caps()).unwrap();
        assert_eq!(rep.upper_param, Q::one());
        assert!(rep.passed());
        let five = MultiGraph::new(5, &[]).unwrap();
        assert!(check_domination_exact(&five, &q(1, 2), &q(1, 2), &caps()).is_err());
    }

    #[test]
    fn bk_examples() {
        assert_eq!(bk_probability(&Q::zero(), 3), Q::zero());
        assert_eq!(bk_probability(&Q::one(), 3), Q::zero());
        assert_eq!(bk_probability(&q(1, 3), 2), q(272, 6561));
        assert_eq!(bk_probability_enumerated(&q(1, 3), 2, &caps()).unwrap(), q(272, 6561));
    }
}

//! Finite pieces of the square lattice.

use std::collections::HashMap;

use super::{MultiGraph, SiteAdjacency};
use crate::error::{DacError, Result};

/// Site adjacency used for colour clusters in a box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteMode {
    /// `|dx| + |dy| = 1`.
    NearestNeighbor,
    /// `max(|dx|, |dy|) = 1` (the matching graph).
    Star,
}

impl std::str::FromStr for SiteMode {
    type Err = DacError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nn" => Ok(SiteMode::NearestNeighbor),
            "star" => Ok(SiteMode::Star),
            _ => Err(DacError::InvalidArgument(format!("unknown site mode {s:?}, expected nn or star"))),
        }
    }
}

/// The box `[0, width] × [0, height]` with nearest-neighbour bonds.
///
/// Vertex `(x, y)` has index `y * (width + 1) + x`. Bonds always live on the
/// nearest-neighbour edges; `mode` only changes which sites count as adjacent
/// for colour clusters.
#[derive(Clone, Debug)]
pub struct LatticeBox {
    width: usize,
    height: usize,
    mode: SiteMode,
    graph: MultiGraph,
}

pub fn z2_box(width: usize, height: usize, mode: SiteMode) -> Result<LatticeBox> {
    if width == 0 || height == 0 {
        return Err(DacError::Geometry("box sides must be positive".into()));
    }
    let cols = width + 1;
    let mut graph = MultiGraph::empty(cols * (height + 1));
    for y in 0..=height {
        for x in 0..=width {
            let v = y * cols + x;
            if x < width {
                graph.add_edge(v, v + 1)?;
            }
            if y < height {
                graph.add_edge(v, v + cols)?;
            }
        }
    }
    Ok(LatticeBox {
        width,
        height,
        mode,
        graph,
    })
}

impl LatticeBox {
    /// The crossing box `[0, n] × [0, 3n]`.
    pub fn crossing_box(n: usize, mode: SiteMode) -> Result<Self> {
        z2_box(n, 3 * n, mode)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mode(&self) -> SiteMode {
        self.mode
    }

    pub fn with_mode(&self, mode: SiteMode) -> LatticeBox {
        LatticeBox { mode, ..self.clone() }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * (self.width + 1) + x
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % (self.width + 1), v / (self.width + 1))
    }

    pub fn bottom_row(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.width).map(move |x| self.index(x, 0))
    }

    pub fn top_row(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.width).map(move |x| self.index(x, self.height))
    }

    /// Number of unordered adjacent site pairs under the box's mode.
    pub fn site_adjacency_count(&self) -> usize {
        let nn = self.graph.edge_count();
        match self.mode {
            SiteMode::NearestNeighbor => nn,
            SiteMode::Star => nn + 2 * self.width * self.height,
        }
    }
}

impl SiteAdjacency for LatticeBox {
    fn site_count(&self) -> usize {
        self.graph.vertex_count()
    }

    #[inline]
    fn for_each_site_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        let (x, y) = self.coords(v);
        let (x, y) = (x as isize, y as isize);
        let (w, h) = (self.width as isize, self.height as isize);
        let mut visit = |dx: isize, dy: isize| {
            let (nx, ny) = (x + dx, y + dy);
            if (0..=w).contains(&nx) && (0..=h).contains(&ny) {
                f(self.index(nx as usize, ny as usize));
            }
        };
        visit(1, 0);
        visit(-1, 0);
        visit(0, 1);
        visit(0, -1);
        if self.mode == SiteMode::Star {
            visit(1, 1);
            visit(1, -1);
            visit(-1, 1);
            visit(-1, -1);
        }
    }
}

/// The graph-distance ball of radius `radius` around the origin, with every
/// lattice bond between two of its points.
///
/// Vertices are indexed shell by shell, so the origin is vertex 0 and
/// `distance(v)` is nondecreasing in `v`.
#[derive(Clone, Debug)]
pub struct LatticeBall {
    radius: usize,
    graph: MultiGraph,
    distance: Vec<usize>,
}

impl LatticeBall {
    pub fn new(radius: usize) -> Result<Self> {
        let r = radius as i64;
        let mut points = vec![];
        for d in 0..=r {
            for x in -d..=d {
                let rest = d - x.abs();
                points.push((x, rest));
                if rest != 0 {
                    points.push((x, -rest));
                }
            }
        }
        let index: HashMap<(i64, i64), usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut graph = MultiGraph::empty(points.len());
        for (i, &(x, y)) in points.iter().enumerate() {
            for nb in [(x + 1, y), (x, y + 1)] {
                if let Some(&j) = index.get(&nb) {
                    graph.add_edge(i, j)?;
                }
            }
        }
        let distance = points.iter().map(|&(x, y)| (x.abs() + y.abs()) as usize).collect();
        Ok(LatticeBall {
            radius,
            graph,
            distance,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn origin(&self) -> usize {
        0
    }

    pub fn distance(&self, v: usize) -> usize {
        self.distance[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box() {
        let b = z2_box(1, 1, SiteMode::NearestNeighbor).unwrap();
        assert_eq!(b.graph().vertex_count(), 4);
        assert_eq!(b.graph().edge_count(), 4);
        assert_eq!(b.site_adjacency_count(), 4);
        let s = b.with_mode(SiteMode::Star);
        assert_eq!(s.site_adjacency_count(), 6);
        let mut n = 0;
        for v in 0..4 {
            s.for_each_site_neighbor(v, |_| n += 1);
        }
        assert_eq!(n, 12);
    }

    #[test]
    fn crossing_box_shape() {
        let b = LatticeBox::crossing_box(2, SiteMode::NearestNeighbor).unwrap();
        assert_eq!((b.width(), b.height()), (2, 6));
        assert_eq!(b.graph().vertex_count(), 3 * 7);
        assert_eq!(b.graph().edge_count(), 2 * 7 + 3 * 6);
        assert_eq!(b.coords(b.index(2, 5)), (2, 5));
        assert!(z2_box(0, 3, SiteMode::Star).is_err());
    }

    #[test]
    fn ball_layout() {
        let ball = LatticeBall::new(3).unwrap();
        // 2r^2 + 2r + 1 points
        assert_eq!(ball.graph().vertex_count(), 25);
        assert_eq!(ball.distance(ball.origin()), 0);
        assert_eq!(ball.graph().degree(0), 4);
        let d: Vec<_> = (0..25).map(|v| ball.distance(v)).collect();
        assert!(d.windows(2).all(|w| w[0] <= w[1]));
        for &(u, v) in ball.graph().edges() {
            assert_eq!(ball.distance(u).abs_diff(ball.distance(v)), 1);
        }
    }
}

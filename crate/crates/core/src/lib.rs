//! Divide-and-color (DaC) percolation toolkit.
//!
//! The model on a multigraph `G`: open every edge independently with
//! probability `p`, then paint every bond cluster black with probability `r`
//! (independently across clusters). The crate covers
//!
//! * [`graph`]: multigraphs with a fixed vertex order and the graph families
//!   used throughout (gadgets, tree-like substitutions, lattice boxes),
//! * [`sampler`]: exact samplers for the model, the directed-exploration
//!   coupling and cluster / crossing queries,
//! * [`exact`]: exact rational polynomials in `(p, r)` for connection,
//!   pivotality and arbitrary finite colour events,
//! * [`tree`]: critical values of tree-like graphs and the inequality
//!   certificates built on them,
//! * [`mc`]: Monte Carlo experiments on boxes of the square lattice.
//!
//! Data-parallel loops (edge-subset enumeration, sample batches) run on rayon
//! when the `parallel` feature is enabled and fall back to a sequential loop
//! otherwise. Results do not depend on which path executes.

pub mod bits;
pub mod error;
pub mod exact;
pub mod exec;
pub mod graph;
pub mod mc;
pub mod poly;
pub mod rational;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod surd;
pub mod tree;
pub mod uf;

pub use error::{DacError, Result};
pub use exec::Exec;
pub use graph::{Gadget, LatticeBall, LatticeBox, MultiGraph, SiteMode};
pub use poly::BiPoly;
pub use rational::Q;

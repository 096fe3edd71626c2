//! Monte Carlo estimates on finite graphs and square-lattice boxes.
//!
//! Samples are split into batches of [`BATCH_SIZE`]; batch `i` draws from
//! stream `(seed, i)` and returns integer tallies, so results depend only on
//! the seed and never on the thread count. Reusing the seed at different
//! `r` (or `p`) couples the runs through common random numbers.

mod critical;
mod decay;
mod scan;

use rand_chacha::ChaCha8Rng;

use crate::bits::{BondConfig, SiteConfig};
use crate::error::{DacError, Result};
use crate::exec::{map_reduce, Exec};
use crate::graph::{LatticeBall, LatticeBox, MultiGraph, SiteAdjacency};
use crate::rng::{batch_len, batches, stream};
use crate::sampler::{open_radius, sample_bond, Scratch};
use crate::stats::{wilson, Z95};

pub use critical::{
    crossing_thresholds, duality_check, finite_size_criterion, rc_estimate, CriterionReport, CriterionVerdict, DualityReport, Probe,
    RcCurvePoint, ThresholdSample, DUALITY_TOLERANCE,
};
pub use decay::{arm_counts, psi_fit, PsiFit};
pub use scan::{continuity_scan, CurveSource, McCurve, PairScan, ScanReport, ScanSettings};

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub successes: u64,
    pub samples: u64,
    pub seed: u64,
    pub p: f64,
    pub r: f64,
    /// Box or ball size, when the event lives on a lattice.
    pub size: Option<usize>,
}

impl EstimatorResult {
    pub fn from_counts(successes: u64, samples: u64, seed: u64, p: f64, r: f64, size: Option<usize>) -> Self {
        let (ci_lo, ci_hi) = wilson(successes, samples, Z95);
        EstimatorResult {
            estimate: successes as f64 / samples as f64,
            ci_lo,
            ci_hi,
            successes,
            samples,
            seed,
            p,
            r,
            size,
        }
    }

    pub const CSV_HEADER: &'static str = "p,r,L,samples,estimate,ci_lo,ci_hi,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.8},{:.8},{:.8},{}",
            self.p,
            self.r,
            self.size.map(|l| l.to_string()).unwrap_or_default(),
            self.samples,
            self.estimate,
            self.ci_lo,
            self.ci_hi,
            self.seed
        )
    }
}

/// An event on a sampled `(η, ξ)` pair.
pub trait McEvent: Sync {
    fn holds(&self, eta: &BondConfig, xi: &SiteConfig) -> bool;
}

impl<F: ?Sized> McEvent for F
where
    F: Fn(&BondConfig, &SiteConfig) -> bool + Sync,
{
    fn holds(&self, eta: &BondConfig, xi: &SiteConfig) -> bool {
        self(eta, xi)
    }
}

fn check_params(p: f64, r: f64, samples: usize) -> Result<()> {
    crate::error::check_unit("p", p)?;
    crate::error::check_unit("r", r)?;
    if samples < MIN_SAMPLES {
        return Err(DacError::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    Ok(())
}

/// Runs `body` once per sample, batch by batch, summing what it returns.
pub(crate) fn tally<S, F>(samples: usize, seed: u64, exec: Exec, scratch: impl Fn() -> S + Sync + Send, body: F) -> u64
where
    F: Fn(&mut ChaCha8Rng, &mut S) -> u64 + Sync + Send,
{
    map_reduce(
        exec,
        batches(samples),
        || 0u64,
        |b| {
            let mut rng = stream(seed, b as u64);
            let mut s = scratch();
            (0..batch_len(samples, b)).map(|_| body(&mut rng, &mut s)).sum()
        },
        |a, b| a + b,
    )
}

/// Frequency of `event` under `P_{p,r}` on `graph`.
pub fn estimate_event<E: McEvent + ?Sized>(graph: &MultiGraph, event: &E, p: f64, r: f64, samples: usize, seed: u64, exec: Exec) -> Result<EstimatorResult> {
    check_params(p, r, samples)?;
    let hits = tally(samples, seed, exec, Scratch::default, |rng, s| {
        s.sample(graph, p, r, rng);
        u64::from(event.holds(&s.eta, &s.xi))
    });
    Ok(EstimatorResult::from_counts(hits, samples as u64, seed, p, r, None))
}

/// Frequency of the vertical crossing `V_L` of `[0, L] × [0, 3L]`.
pub fn estimate_crossing(lattice: &LatticeBox, p: f64, r: f64, samples: usize, seed: u64, exec: Exec) -> Result<EstimatorResult> {
    check_params(p, r, samples)?;
    crate::sampler::vertical_crossing(lattice, &SiteConfig::white(lattice.site_count()))?;
    let hits = tally(samples, seed, exec, Scratch::default, |rng, s| {
        s.sample(lattice.graph(), p, r, rng);
        let xi = std::mem::take(&mut s.xi);
        let hit = s.crosses(lattice, &xi);
        s.xi = xi;
        u64::from(hit)
    });
    Ok(EstimatorResult::from_counts(hits, samples as u64, seed, p, r, Some(lattice.width())))
}

/// Frequency of the one-arm event `M_n` under bond percolation at `p`.
pub fn estimate_one_arm(p: f64, n: usize, samples: usize, seed: u64, exec: Exec) -> Result<EstimatorResult> {
    check_params(p, 0.0, samples)?;
    let ball = LatticeBall::new(n)?;
    let hits = tally(samples, seed, exec, || (), |rng, _| {
        let eta = sample_bond(ball.graph(), p, rng).expect("p checked");
        u64::from(open_radius(&ball, &eta) >= n)
    });
    Ok(EstimatorResult::from_counts(hits, samples as u64, seed, p, 0.0, Some(n)))
}

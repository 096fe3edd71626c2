use rand::Rng;

use super::{estimate_one_arm, EstimatorResult, MIN_SAMPLES};
use crate::error::{check_unit, DacError, Result};
use crate::exec::{map_reduce, Exec};
use crate::graph::{LatticeBox, SiteAdjacency, SiteMode};
use crate::rng::{batch_len, batches, stream};
use crate::uf::ClusterPartition;

/// Allowed deviation of `r_c + r_c^*` from 1.
pub const DUALITY_TOLERANCE: f64 = 0.05;

/// Bisection stops once the bracket is this narrow.
const BRACKET_WIDTH: f64 = 1.0 / 64.0;

/// Per-sample crossing thresholds: sample `i` crosses at colour parameter
/// `r` iff `thresholds[i] < r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSample {
    /// Sorted ascending.
    pub thresholds: Vec<f64>,
    pub seed: u64,
    pub p: f64,
    pub size: usize,
}

impl ThresholdSample {
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn crossings_at(&self, r: f64) -> u64 {
        self.thresholds.partition_point(|&t| t < r) as u64
    }

    pub fn estimate_at(&self, r: f64) -> EstimatorResult {
        EstimatorResult::from_counts(self.crossings_at(r), self.len() as u64, self.seed, self.p, r, Some(self.size))
    }
}

struct Bottleneck {
    bonds: ClusterPartition,
    sites: ClusterPartition,
    weight: Vec<f64>,
    order: Vec<u32>,
    added: Vec<bool>,
}

impl Bottleneck {
    fn new(n: usize) -> Self {
        Bottleneck {
            bonds: ClusterPartition::singletons(n),
            sites: ClusterPartition::singletons(n + 2),
            weight: vec![0.0; n],
            order: (0..n as u32).collect(),
            added: vec![false; n],
        }
    }

    /// Same draws as `sample_dac`; returns the least `r` at which the
    /// sample has a black vertical crossing (crossing at `r` iff value < `r`).
    fn threshold<R: Rng + ?Sized>(&mut self, lattice: &LatticeBox, p: f64, rng: &mut R) -> f64 {
        let g = lattice.graph();
        let n = g.vertex_count();
        self.bonds.reset();
        for &(u, v) in g.edges() {
            if rng.random::<f64>() < p {
                self.bonds.union(u, v);
            }
        }
        self.bonds.flatten();
        // κ uniforms first, then each vertex takes the uniform of its cluster minimum
        for w in self.weight.iter_mut() {
            *w = rng.random::<f64>();
        }
        for v in 0..n {
            let m = self.bonds.min_of(v);
            if m != v {
                self.weight[v] = self.weight[m];
            }
        }
        let weight = &self.weight;
        self.order.sort_unstable_by_key(|&v| weight[v as usize].to_bits());
        self.sites.reset();
        self.added.iter_mut().for_each(|a| *a = false);
        let (bottom, top) = (n, n + 1);
        let height = lattice.height();
        for &v in &self.order {
            let v = v as usize;
            self.added[v] = true;
            let y = lattice.coords(v).1;
            if y == 0 {
                self.sites.union(v, bottom);
            }
            if y == height {
                self.sites.union(v, top);
            }
            let (sites, added) = (&mut self.sites, &self.added);
            lattice.for_each_site_neighbor(v, |w| {
                if added[w] {
                    sites.union(v, w);
                }
            });
            if self.sites.same(bottom, top) {
                return self.weight[v];
            }
        }
        unreachable!("the full box always crosses")
    }
}

/// Crossing thresholds of `samples` independent samples at bond parameter `p`.
pub fn crossing_thresholds(lattice: &LatticeBox, p: f64, samples: usize, seed: u64, exec: Exec) -> Result<ThresholdSample> {
    check_unit("p", p)?;
    if lattice.height() != 3 * lattice.width() {
        return Err(DacError::Geometry(format!(
            "crossing box must be [0,n]x[0,3n], got [0,{}]x[0,{}]",
            lattice.width(),
            lattice.height()
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(DacError::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let n = lattice.site_count();
    let mut thresholds = map_reduce(
        exec,
        batches(samples),
        Vec::new,
        |b| {
            let mut rng = stream(seed, b as u64);
            let mut bn = Bottleneck::new(n);
            (0..batch_len(samples, b)).map(|_| bn.threshold(lattice, p, &mut rng)).collect::<Vec<f64>>()
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    thresholds.sort_unstable_by(f64::total_cmp);
    Ok(ThresholdSample {
        thresholds,
        seed,
        p,
        size: lattice.width(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub r: f64,
    pub result: EstimatorResult,
}

/// Bisection estimate of the colour parameter at which `P(V_L) = 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RcCurvePoint {
    pub p: f64,
    pub size: usize,
    pub mode: SiteMode,
    pub samples: usize,
    pub seed: u64,
    /// In probe order; starts with `r = 0` and `r = 1`.
    pub probes: Vec<Probe>,
    /// Bisection bracket: estimate below 1/2 at `r_lo`, at least 1/2 at `r_hi`.
    pub r_lo: f64,
    pub r_hi: f64,
    /// Widest probe interval whose confidence intervals exclude 1/2 on
    /// each side.
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Linear interpolation of the two bracket probes at level 1/2.
    pub estimate: f64,
}

impl RcCurvePoint {
    /// Half-width of `[ci_lo, ci_hi]`.
    pub fn uncertainty(&self) -> f64 {
        (self.ci_hi - self.ci_lo) / 2.0
    }

    pub fn mid(&self) -> f64 {
        (self.ci_lo + self.ci_hi) / 2.0
    }

    pub const CSV_HEADER: &'static str = "p,rc_lo,rc_hi,L";

    pub fn csv_row(&self) -> String {
        format!("{},{:.6},{:.6},{}", self.p, self.ci_lo, self.ci_hi, self.size)
    }
}

/// Bisection in `r` on the crossing frequency of `[0, L] × [0, 3L]`.
///
/// All probes read the same samples (one threshold per sample), which is
/// the same as rerunning the seeded sampler at each probed `r`.
pub fn rc_estimate(p: f64, size: usize, samples: usize, mode: SiteMode, seed: u64, exec: Exec) -> Result<RcCurvePoint> {
    check_unit("p", p)?;
    if p >= 0.5 {
        return Err(DacError::ParameterRange {
            name: "p",
            value: format!("{p} (needs p < 1/2)"),
        });
    }
    let lattice = LatticeBox::crossing_box(size, mode)?;
    let sample = crossing_thresholds(&lattice, p, samples, seed, exec)?;
    rc_from_thresholds(&sample, mode)
}

pub(crate) fn rc_from_thresholds(sample: &ThresholdSample, mode: SiteMode) -> Result<RcCurvePoint> {
    let level = 0.5;
    let mut probes = Vec::new();
    let mut probe = |r: f64| {
        let result = sample.estimate_at(r);
        probes.push(Probe { r, result: result.clone() });
        result
    };
    let (at0, at1) = (probe(0.0), probe(1.0));
    if at0.estimate >= level || at1.estimate < level {
        return Err(DacError::NoCrossing(format!(
            "crossing frequency {} at r = 0 and {} at r = 1 does not bracket 1/2",
            at0.estimate, at1.estimate
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let (mut est_lo, mut est_hi) = (at0.estimate, at1.estimate);
    while hi - lo > BRACKET_WIDTH {
        let mid = (lo + hi) / 2.0;
        let res = probe(mid);
        if res.estimate < level {
            lo = mid;
            est_lo = res.estimate;
        } else {
            hi = mid;
            est_hi = res.estimate;
        }
    }
    let ci_lo = probes.iter().filter(|pr| pr.result.ci_hi < level).map(|pr| pr.r).fold(0.0, f64::max);
    let ci_hi = probes.iter().filter(|pr| pr.result.ci_lo > level).map(|pr| pr.r).fold(1.0, f64::min);
    let estimate = if est_hi > est_lo {
        lo + (hi - lo) * (level - est_lo) / (est_hi - est_lo)
    } else {
        (lo + hi) / 2.0
    };
    Ok(RcCurvePoint {
        p: sample.p,
        size: sample.size,
        mode,
        samples: sample.len(),
        seed: sample.seed,
        probes,
        r_lo: lo,
        r_hi: hi,
        ci_lo,
        ci_hi,
        estimate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub p: f64,
    pub size: usize,
    pub nn: RcCurvePoint,
    pub star: RcCurvePoint,
    pub sum: f64,
    /// `[nn.ci_lo + star.ci_lo, nn.ci_hi + star.ci_hi]`.
    pub sum_lo: f64,
    pub sum_hi: f64,
    pub tolerance: f64,
    /// The sum interval meets `[1 - tolerance, 1 + tolerance]`.
    pub within: bool,
}

impl DualityReport {
    pub const CSV_HEADER: &'static str = "p,L,rc,rc_star,sum,sum_lo,sum_hi,within";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            self.p, self.size, self.nn.estimate, self.star.estimate, self.sum, self.sum_lo, self.sum_hi, self.within
        )
    }
}

/// `r_c` from nearest-neighbour crossings and `r_c^*` from star crossings
/// of the same box, with the same seed.
pub fn duality_check(p: f64, size: usize, samples: usize, seed: u64, exec: Exec) -> Result<DualityReport> {
    let nn = rc_estimate(p, size, samples, SiteMode::NearestNeighbor, seed, exec)?;
    let star = rc_estimate(p, size, samples, SiteMode::Star, seed, exec)?;
    let sum = nn.estimate + star.estimate;
    let (sum_lo, sum_hi) = (nn.ci_lo + star.ci_lo, nn.ci_hi + star.ci_hi);
    let within = sum_lo <= 1.0 + DUALITY_TOLERANCE && sum_hi >= 1.0 - DUALITY_TOLERANCE;
    Ok(DualityReport {
        p,
        size,
        nn,
        star,
        sum,
        sum_lo,
        sum_hi,
        tolerance: DUALITY_TOLERANCE,
        within,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionVerdict {
    /// Both premises hold at 95% confidence, so `a >= r_c(p)`.
    Holds,
    /// Some premise fails at 95% confidence.
    Fails,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub gamma: f64,
    pub arm: EstimatorResult,
    /// `(3L+1)(L+1)` times the one-arm interval.
    pub arm_term: (f64, f64),
    pub crossing: EstimatorResult,
    pub verdict: CriterionVerdict,
}

/// The finite-size criterion: `(3L+1)(L+1) ν_p(M_{⌊L/3⌋}) <= γ` and
/// `P_{p,a}(V_L) >= 1 - γ` imply `a >= r_c(p)`. The constant `γ` is an
/// input; no value is built in.
pub fn finite_size_criterion(p: f64, a: f64, size: usize, gamma: f64, samples: usize, seed: u64, exec: Exec) -> Result<CriterionReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(DacError::ParameterRange {
            name: "gamma",
            value: gamma.to_string(),
        });
    }
    let arm = estimate_one_arm(p, size / 3, samples, seed, exec)?;
    let factor = ((3 * size + 1) * (size + 1)) as f64;
    let arm_term = (factor * arm.ci_lo, factor * arm.ci_hi);
    let lattice = LatticeBox::crossing_box(size, SiteMode::NearestNeighbor)?;
    let crossing = super::estimate_crossing(&lattice, p, a, samples, seed, exec)?;
    let verdict = if arm_term.1 <= gamma && crossing.ci_lo >= 1.0 - gamma {
        CriterionVerdict::Holds
    } else if arm_term.0 > gamma || crossing.ci_hi < 1.0 - gamma {
        CriterionVerdict::Fails
    } else {
        CriterionVerdict::Undetermined
    };
    Ok(CriterionReport {
        gamma,
        arm,
        arm_term,
        crossing,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::estimate_crossing;

    #[test]
    fn thresholds_reproduce_direct_sampling() {
        for mode in [SiteMode::NearestNeighbor, SiteMode::Star] {
            let b = LatticeBox::crossing_box(4, mode).unwrap();
            let th = crossing_thresholds(&b, 0.3, 1500, 5, Exec::Sequential).unwrap();
            for r in [0.2, 0.45, 0.55, 0.7] {
                let direct = estimate_crossing(&b, 0.3, r, 1500, 5, Exec::Sequential).unwrap();
                assert_eq!(direct.successes, th.crossings_at(r), "{mode:?} r = {r}");
            }
        }
    }

    #[test]
    fn bracket_is_consistent() {
        let pt = rc_estimate(0.1, 6, 2000, SiteMode::NearestNeighbor, 3, Exec::Parallel).unwrap();
        assert!(pt.r_hi - pt.r_lo <= 1.0 / 64.0);
        assert!(pt.ci_lo <= pt.r_lo && pt.r_hi <= pt.ci_hi);
        assert!(pt.r_lo <= pt.estimate && pt.estimate <= pt.r_hi);
        let lo = pt.probes.iter().find(|pr| pr.r == pt.r_lo).unwrap();
        let hi = pt.probes.iter().find(|pr| pr.r == pt.r_hi).unwrap();
        assert!(lo.result.estimate < 0.5 && hi.result.estimate >= 0.5);
        // monotone in r through common random numbers
        let mut sorted = pt.probes.clone();
        sorted.sort_by(|a, b| a.r.total_cmp(&b.r));
        assert!(sorted.windows(2).all(|w| w[0].result.successes <= w[1].result.successes));
        assert_eq!(sorted.last().unwrap().result.estimate, 1.0);
    }

    #[test]
    fn rejects_supercritical_bonds() {
        assert!(rc_estimate(0.5, 4, 200, SiteMode::NearestNeighbor, 1, Exec::Sequential).is_err());
    }

    #[test]
    fn criterion_needs_gamma_in_range() {
        assert!(finite_size_criterion(0.1, 0.7, 6, 0.0, 200, 1, Exec::Sequential).is_err());
        let rep = finite_size_criterion(0.1, 0.95, 6, 0.5, 2000, 1, Exec::Sequential).unwrap();
        assert_eq!(rep.verdict, CriterionVerdict::Fails);
    }
}

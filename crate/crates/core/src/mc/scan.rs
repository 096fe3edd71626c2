use super::rc_estimate;
use crate::error::{DacError, Result};
use crate::exec::Exec;
use crate::graph::SiteMode;
use crate::tree::{CriticalCurve, CurveMethod, CurvePoint};

/// Anything that can place a critical-value bracket at a given `p`.
pub trait CurveSource {
    fn point(&self, p: f64) -> Result<CurvePoint>;
}

impl<F> CurveSource for F
where
    F: Fn(f64) -> Result<CurvePoint>,
{
    fn point(&self, p: f64) -> Result<CurvePoint> {
        self(p)
    }
}

/// Monte Carlo `r_c` brackets from nearest-neighbour crossings of the
/// `[0, L] × [0, 3L]` box.
#[derive(Clone, Copy, Debug)]
pub struct McCurve {
    pub size: usize,
    pub samples: usize,
    pub mode: SiteMode,
    pub seed: u64,
    pub exec: Exec,
}

impl CurveSource for McCurve {
    fn point(&self, p: f64) -> Result<CurvePoint> {
        let pt = rc_estimate(p, self.size, self.samples, self.mode, self.seed, self.exec)?;
        Ok(CurvePoint {
            p,
            r_lo: pt.ci_lo,
            r_hi: pt.ci_hi,
            method: CurveMethod::MonteCarlo,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSettings {
    /// Number of interval halvings applied to a candidate pair.
    pub refine_depth: u32,
    /// A refined difference must exceed `factor` times the Lipschitz
    /// extrapolation of the coarse one to be flagged.
    pub factor: f64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            refine_depth: 3,
            factor: 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairScan {
    pub p_a: f64,
    pub p_b: f64,
    pub jump: f64,
    /// Sum of the two bracket half-widths.
    pub noise: f64,
    /// `jump > noise`, so the pair was refined.
    pub candidate: bool,
    /// Final sub-interval, its jump and noise after refinement.
    pub refined: Option<(f64, f64, f64, f64)>,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    /// Grid points plus every refinement point, sorted by `p`.
    pub curve: CriticalCurve,
    pub pairs: Vec<PairScan>,
    pub max_jump: f64,
    pub flagged: bool,
}

impl ScanReport {
    pub const CSV_HEADER: &'static str = "p_a,p_b,jump,noise,candidate,fine_a,fine_b,fine_jump,fine_noise,flagged";

    pub fn csv_rows(&self) -> Vec<String> {
        self.pairs
            .iter()
            .map(|s| {
                let fine = match s.refined {
                    Some((a, b, j, n)) => format!("{a},{b},{j:.6},{n:.6}"),
                    None => ",,,".into(),
                };
                format!("{},{},{:.6},{:.6},{},{fine},{}", s.p_a, s.p_b, s.jump, s.noise, s.candidate, s.flagged)
            })
            .collect()
    }
}

fn half_width(pt: &CurvePoint) -> f64 {
    (pt.r_hi - pt.r_lo) / 2.0
}

fn gap(a: &CurvePoint, b: &CurvePoint) -> (f64, f64) {
    ((b.mid() - a.mid()).abs(), half_width(a) + half_width(b))
}

/// Compares neighbouring grid points. A difference larger than the bracket
/// noise is a candidate; candidates are halved `refine_depth` times toward
/// the larger sub-jump and flagged when the jump survives: a continuous
/// curve's differences shrink with the spacing, a jump does not.
pub fn continuity_scan<S: CurveSource + ?Sized>(source: &S, grid: &[f64], settings: ScanSettings) -> Result<ScanReport> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(DacError::InvalidArgument("grid must be nonempty and strictly increasing".into()));
    }
    let mut points = grid.iter().map(|&p| source.point(p)).collect::<Result<Vec<_>>>()?;
    let mut extra = Vec::new();
    let mut pairs = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (jump, noise) = gap(a, b);
        let mut scan = PairScan {
            p_a: a.p,
            p_b: b.p,
            jump,
            noise,
            candidate: jump > noise,
            refined: None,
            flagged: false,
        };
        if scan.candidate {
            let (mut lo, mut hi) = (a.clone(), b.clone());
            for _ in 0..settings.refine_depth {
                let mid = source.point((lo.p + hi.p) / 2.0)?;
                extra.push(mid.clone());
                if gap(&lo, &mid).0 >= gap(&mid, &hi).0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let (fine_jump, fine_noise) = gap(&lo, &hi);
            let ratio = (hi.p - lo.p) / (b.p - a.p);
            scan.flagged = fine_jump > fine_noise && fine_jump > settings.factor * jump * ratio;
            scan.refined = Some((lo.p, hi.p, fine_jump, fine_noise));
        }
        pairs.push(scan);
    }
    points.extend(extra);
    points.sort_by(|a, b| a.p.total_cmp(&b.p));
    Ok(ScanReport {
        curve: CriticalCurve { points },
        max_jump: pairs.iter().map(|s| s.jump).fold(0.0, f64::max),
        flagged: pairs.iter().any(|s| s.flagged),
        pairs,
    })
}

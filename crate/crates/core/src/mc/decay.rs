use crate::error::{check_unit, DacError, Result};
use crate::exec::{map_reduce, Exec};
use crate::graph::LatticeBall;
use crate::rng::{batch_len, batches, stream};
use crate::sampler::{open_radius, sample_bond};
use crate::stats::{weighted_line, Z95};

use super::MIN_SAMPLES;

/// `counts[n]` = number of samples whose open cluster of the origin
/// reaches distance exactly `n` (capped at `nmax`).
pub fn arm_counts(p: f64, nmax: usize, samples: usize, seed: u64, exec: Exec) -> Result<Vec<u64>> {
    check_unit("p", p)?;
    if samples < MIN_SAMPLES {
        return Err(DacError::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let ball = LatticeBall::new(nmax)?;
    Ok(map_reduce(
        exec,
        batches(samples),
        || vec![0u64; nmax + 1],
        |b| {
            let mut rng = stream(seed, b as u64);
            let mut h = vec![0u64; nmax + 1];
            for _ in 0..batch_len(samples, b) {
                let eta = sample_bond(ball.graph(), p, &mut rng).expect("p checked");
                h[open_radius(&ball, &eta).min(nmax)] += 1;
            }
            h
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiFit {
    pub p: f64,
    pub samples: usize,
    pub seed: u64,
    /// `(n, frequency of M_n)` for every requested `n`.
    pub frequencies: Vec<(usize, f64)>,
    /// Points that entered the fit.
    pub used: Vec<usize>,
    /// Dropped because no sample reached `n`.
    pub zero_counts: Vec<usize>,
    /// Dropped because every sample reached `n`.
    pub saturated: Vec<usize>,
    /// Fitted slope of `-log ν_p(M_n)` against `n`; `None` with fewer than
    /// two usable points.
    pub psi: Option<f64>,
    pub se: Option<f64>,
    /// `psi - 1.96 se > 0`.
    pub positive: bool,
}

impl PsiFit {
    pub const CSV_HEADER: &'static str = "n,frequency,used";

    pub fn csv_rows(&self) -> Vec<String> {
        self.frequencies
            .iter()
            .map(|&(n, f)| format!("{n},{f:.8},{}", self.used.contains(&n)))
            .collect()
    }
}

/// Weighted least-squares decay rate of the one-arm probability.
///
/// All `n` share one set of samples on the ball of radius `max(n_list)`.
pub fn psi_fit(p: f64, n_list: &[usize], samples: usize, seed: u64, exec: Exec) -> Result<PsiFit> {
    check_unit("p", p)?;
    if p >= 0.5 {
        return Err(DacError::ParameterRange {
            name: "p",
            value: format!("{p} (needs p < 1/2)"),
        });
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(DacError::InvalidArgument("n list must be positive and strictly increasing".into()));
    }
    let nmax = *n_list.last().expect("nonempty");
    let counts = arm_counts(p, nmax, samples, seed, exec)?;
    let total = samples as f64;
    let mut fit = PsiFit {
        p,
        samples,
        seed,
        frequencies: Vec::new(),
        used: Vec::new(),
        zero_counts: Vec::new(),
        saturated: Vec::new(),
        psi: None,
        se: None,
        positive: false,
    };
    let mut points = Vec::new();
    for &n in n_list {
        let reach: u64 = counts[n..].iter().sum();
        let f = reach as f64 / total;
        fit.frequencies.push((n, f));
        if reach == 0 {
            fit.zero_counts.push(n);
        } else if reach == samples as u64 {
            fit.saturated.push(n);
        } else {
            // delta method: Var(-log f) ≈ (1 - f) / (N f)
            points.push((n as f64, -f.ln(), total * f / (1.0 - f)));
            fit.used.push(n);
        }
    }
    if let Some(line) = weighted_line(&points) {
        fit.positive = line.slope - Z95 * line.slope_se > 0.0;
        fit.psi = Some(line.slope);
        fit.se = Some(line.slope_se);
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_sums_to_samples() {
        let h = arm_counts(0.3, 6, 700, 2, Exec::Sequential).unwrap();
        assert_eq!(h.iter().sum::<u64>(), 700);
        assert_eq!(h, arm_counts(0.3, 6, 700, 2, Exec::Parallel).unwrap());
        let h = arm_counts(0.0, 4, 200, 2, Exec::Sequential).unwrap();
        assert_eq!(h[0], 200);
    }

    #[test]
    fn fast_decay_is_positive() {
        let fit = psi_fit(0.1, &[1, 2, 3, 4, 5, 6], 20_000, 4, Exec::Parallel).unwrap();
        assert!(fit.positive, "{fit:?}");
        assert!(fit.psi.unwrap() > 1.0);
        // frequencies can only fall with n
        assert!(fit.frequencies.windows(2).all(|w| w[0].1 >= w[1].1));
    }

    #[test]
    fn zero_counts_are_dropped() {
        let fit = psi_fit(0.0, &[1, 2], 200, 1, Exec::Sequential).unwrap();
        assert_eq!(fit.zero_counts, vec![1, 2]);
        assert!(fit.psi.is_none() && !fit.positive);
        assert!(psi_fit(0.2, &[3, 2], 200, 1, Exec::Sequential).is_err());
        assert!(psi_fit(0.5, &[1, 2], 200, 1, Exec::Sequential).is_err());
    }
}

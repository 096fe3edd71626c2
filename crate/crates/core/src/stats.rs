//! Binomial intervals and a small weighted least-squares fit.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // clamp rounding noise so the interval always contains the estimate
    ((centre - half).clamp(0.0, phat), (centre + half).clamp(phat, 1.0))
}

/// Standard deviation of the mean of `n` Bernoulli(`q`) draws.
pub fn binomial_sigma(q: f64, n: u64) -> f64 {
    (q * (1.0 - q) / n as f64).sqrt()
}

/// Result of fitting `y = intercept + slope * x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
}

/// Weighted least squares with weights `1 / variance`; `slope_se` is the
/// model-based standard error. Needs at least two distinct `x`.
pub fn weighted_line(points: &[(f64, f64, f64)]) -> Option<LinearFit> {
    let sw: f64 = points.iter().map(|p| p.2).sum();
    if points.len() < 2 || sw <= 0.0 {
        return None;
    }
    let xbar = points.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let ybar = points.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = points.iter().map(|p| p.2 * (p.0 - xbar).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| p.2 * (p.0 - xbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    Some(LinearFit {
        slope,
        intercept: ybar - slope * xbar,
        slope_se: (1.0 / sxx).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate_and_degenerates_at_edges() {
        let (lo, hi) = wilson(100, 100, Z95);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.96 && lo < 1.0);
        let (lo, hi) = wilson(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi < 0.04);
        let (lo, hi) = wilson(37, 100, Z95);
        assert!(lo < 0.37 && 0.37 < hi);
        // textbook value for 37/100
        assert!((lo - 0.2813).abs() < 1e-3 && (hi - 0.4685).abs() < 1e-3);
    }

    #[test]
    fn exact_line_is_recovered() {
        let pts: Vec<_> = (0..6).map(|i| (i as f64, 2.0 + 0.5 * i as f64, 1.0)).collect();
        let fit = weighted_line(&pts).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 2.0).abs() < 1e-12);
        assert!(weighted_line(&pts[..1]).is_none());
    }
}

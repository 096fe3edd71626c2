use num_traits::{One, Signed, Zero};

use super::certificate::{Certificate, CertificateBundle, CriticalCurve, CurveMethod, CurvePoint, Status};
use super::{display_q, rc_root, RcRoot};
use crate::error::{DacError, Result};
use crate::exact::{connection_poly, pivotality_poly, Caps};
use crate::graph::parallel_gadget_dn;
use crate::poly::BiPoly;
use crate::rational::{self, q, Q};
use crate::surd::Surd;

const DAC_LEMMA: &str = "tree lemma (colour part) applied to limsup/liminf of f^(D_n)";

/// Exact curve and certificates for the tree built from the parallel
/// gadgets `D_n`.
#[derive(Clone, Debug)]
pub struct DiscontinuityReport {
    pub bundle: CertificateBundle,
    pub curve: CriticalCurve,
    /// `1/√2 - 1/2`.
    pub jump: Surd,
}

fn one_over_root2() -> Surd {
    Surd::new(Q::zero(), q(1, 2), 2)
}

/// Critical value of the `D_n` tree at `p`, from the closed-form root of
/// the limiting pivotality: `1/√2` at `p = 0`, `(1/2 - p)/(1 - p)` after.
pub fn dn_limit_point(p: f64) -> Result<CurvePoint> {
    if !(0.0..1.0).contains(&p) {
        return Err(DacError::ParameterRange {
            name: "p",
            value: p.to_string(),
        });
    }
    let r = if p == 0.0 { std::f64::consts::FRAC_1_SQRT_2 } else { ((0.5 - p) / (1.0 - p)).max(0.0) };
    Ok(CurvePoint {
        p,
        r_lo: r,
        r_hi: r,
        method: CurveMethod::ExactRoot,
    })
}

/// `h^(D_n) = p (1 - (1-p)^n)`.
pub fn dn_connection(n: u32) -> BiPoly {
    &BiPoly::p() * &(&BiPoly::one() - &BiPoly::one_minus_p().pow(n))
}

/// `f^(D_n) = (1 - q^n)(p + q r) + q^n (p r + q r^2)` with `q = 1 - p`.
pub fn dn_pivotality(n: u32) -> BiPoly {
    let qn = BiPoly::one_minus_p().pow(n);
    let near = &BiPoly::p() + &(&BiPoly::one_minus_p() * &BiPoly::r());
    let far = &(&BiPoly::p() * &BiPoly::r()) + &(&BiPoly::one_minus_p() * &BiPoly::r().pow(2));
    &(&(&BiPoly::one() - &qn) * &near) + &(&qn * &far)
}

/// Pointwise limit of `f^(D_n)(p, ·)`: `r^2` at `p = 0`, `p + (1-p) r` otherwise.
pub fn dn_limit(p: &Q) -> BiPoly {
    if p.is_zero() {
        BiPoly::r().pow(2)
    } else {
        (&BiPoly::p() + &(&BiPoly::one_minus_p() * &BiPoly::r())).at_p(p)
    }
}

/// Checks the closed forms against enumeration for `n <= n_max`, the
/// monotone approach of `f^(D_n)` to its limit on every grid point, and
/// emits the limiting curve.
pub fn discontinuity_family_certificate(grid: &[Q], n_max: u32, caps: &Caps) -> Result<DiscontinuityReport> {
    let half = rational::half();
    for p in grid {
        if p.is_negative() || p > &half {
            return Err(DacError::ParameterRange {
                name: "p",
                value: rational::show(p),
            });
        }
    }
    if n_max == 0 {
        return Err(DacError::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut bundle = CertificateBundle::new("discontinuity at 0 for the tree built from D_n");

    let mut closed = Certificate::new("h^(D_n) and f^(D_n) equal their closed forms", "exact enumeration");
    let mut fs = Vec::new();
    for n in 1..=n_max {
        let g = parallel_gadget_dn(n as usize)?;
        let h = connection_poly(&g, caps)?;
        let f = pivotality_poly(&g, caps)?;
        closed = closed
            .check(format!("h^(D_{n}) = p(1-(1-p)^{n})"), Status::from_bool(h == dn_connection(n)))
            .check(format!("f^(D_{n}) closed form"), Status::from_bool(f == dn_pivotality(n)));
        fs.push(f);
    }
    bundle.push(closed);

    // p - h_n = p (1-p)^n >= 0 and h_n -> p: p_c = 1/2
    let gap = &BiPoly::p() - &dn_connection(1);
    let pc = Certificate::new("p_c = 1/2", "tree lemma (bond part) with lim h^(D_n)(p) = p")
        .with("p - h^(D_n)(p)", "p (1-p)^n")
        .check(
            "p - h^(D_1) = p(1-p)",
            Status::from_bool(gap == &BiPoly::p() * &BiPoly::one_minus_p()),
        );
    bundle.push(pc);

    let r_grid: Vec<Q> = (0..=8).map(|i| q(i, 8)).collect();
    let mut curve = CriticalCurve::default();
    let target = one_over_root2();
    for p in grid {
        let limit = dn_limit(p);
        let mut c;
        if p.is_zero() {
            c = Certificate::new("r_c(0) = 1/√2", DAC_LEMMA).with("f^(D_n)(0, r)", "r^2 for every n");
            for (n, f) in fs.iter().enumerate() {
                c = c.check(format!("f^(D_{})(0, ·) = r^2", n + 1), Status::from_bool(f.at_p(p) == limit));
            }
            let root = rc_root(&limit, p)?;
            let inside = target.cmp_q(&root.lo()).is_ge() && target.cmp_q(&root.hi()).is_le();
            c = c
                .with("bracket", format!("[{}, {}]", display_q(&root.lo()), display_q(&root.hi())))
                .check("1/√2 inside bracket", Status::from_bool(inside));
            for (n, f) in fs.iter().enumerate() {
                let rn = rc_root(f, p)?;
                let ok = target.cmp_q(&rn.lo()).is_ge() && target.cmp_q(&rn.hi()).is_le();
                c = c.check(format!("rc_root(f^(D_{}), 0) brackets 1/√2", n + 1), Status::from_bool(ok));
            }
            curve.points.push(CurvePoint {
                p: 0.0,
                r_lo: rational::to_f64(&root.lo()),
                r_hi: rational::to_f64(&root.hi()),
                method: CurveMethod::ExactRoot,
            });
        } else {
            let value = (&half - p) / (Q::one() - p);
            c = Certificate::new(format!("r_c({}) = (1/2-p)/(1-p) = {}", rational::show(p), display_q(&value)), DAC_LEMMA)
                .with("lim f^(D_n)(p, r)", "p + (1-p) r");
            // limit - f_n = q^n (1-r)(p + (1-p) r): nonnegative and shrinking in n
            let mut monotone = true;
            for r in &r_grid {
                let lim = limit.eval(&Q::zero(), r);
                let mut prev: Option<Q> = None;
                for f in &fs {
                    let gap = &lim - f.eval(p, r);
                    if gap.is_negative() || prev.as_ref().is_some_and(|g| &gap > g) {
                        monotone = false;
                    }
                    prev = Some(gap);
                }
            }
            c = c.check(format!("0 <= lim - f^(D_n) nonincreasing in n <= {n_max} on r in {{0, 1/8, ..., 1}}"), Status::from_bool(monotone));
            let root = rc_root(&limit, p)?;
            let ok = match &root {
                RcRoot::Bracket(b) => b.contains(&value),
                RcRoot::Zero => value.is_zero(),
                RcRoot::One => value.is_one(),
            };
            c = c.check("rc_root of the limit matches the closed form", Status::from_bool(ok));
            // gadget-level roots sit above the limit root and decrease to it
            let mut prev_hi: Option<Q> = None;
            let mut above = true;
            for f in &fs {
                let rn = rc_root(f, p)?;
                if rn.hi() < value || prev_hi.as_ref().is_some_and(|hi| &rn.lo() > hi) {
                    above = false;
                }
                prev_hi = Some(rn.hi());
            }
            c = c.check("rc_root(f^(D_n), p) nonincreasing in n and >= limit root", Status::from_bool(above));
            let v = rational::to_f64(&value);
            curve.points.push(CurvePoint {
                p: rational::to_f64(p),
                r_lo: v,
                r_hi: v,
                method: CurveMethod::Certificate,
            });
        }
        bundle.push(c);
    }

    let jump = one_over_root2() - Surd::rational(half.clone(), 2);
    let jc = Certificate::new("r_c jumps at p = 0", "closed forms above")
        .with("r_c(0)", "1/√2")
        .with("lim_{p->0+} (1/2-p)/(1-p)", "1/2")
        .with("jump 1/√2 - 1/2", format!("{:.6}", jump.to_f64()))
        .check("jump > 0", Status::from_bool(jump.signum() > 0));
    bundle.push(jc);
    bundle.conclude("r_c is discontinuous at p = 0 while p_c = 1/2");
    Ok(DiscontinuityReport { bundle, curve, jump })
}

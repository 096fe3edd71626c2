use std::str::FromStr;

use num_traits::One;

use super::certificate::{Certificate, CertificateBundle, Status};
use super::{display_q, rc_root};
use crate::error::{DacError, Result};
use crate::exact::{pivotality_poly, Caps};
use crate::graph::{path_gadget, single_edge, tree_like, Gadget};
use crate::rational::{self, Q};

/// Constant gadget families whose tree-like graph has maximal degree 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RcFamily {
    EdgeGadget,
    PathGadget,
}

impl FromStr for RcFamily {
    type Err = DacError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-gadget" | "edge" => Ok(RcFamily::EdgeGadget),
            "path-gadget" | "path" => Ok(RcFamily::PathGadget),
            other => Err(DacError::InvalidArgument(format!("unknown family {other:?} (edge-gadget, path-gadget)"))),
        }
    }
}

impl RcFamily {
    pub fn gadget(self) -> Gadget {
        match self {
            RcFamily::EdgeGadget => single_edge(),
            RcFamily::PathGadget => path_gadget(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RcFamily::EdgeGadget => "edge-gadget",
            RcFamily::PathGadget => "path-gadget",
        }
    }

    /// Exact rational critical value, where one exists for every `p`.
    pub fn closed_form(self, p: &Q) -> Option<Q> {
        match self {
            RcFamily::EdgeGadget => {
                let v = (rational::half() - p) / (Q::one() - p);
                Some(if v < Q::from_integer(0.into()) { Q::from_integer(0.into()) } else { v })
            }
            RcFamily::PathGadget => None,
        }
    }
}

/// Checks `1 - (1 - r_c(0))/(1-p)^Δ <= r_c(p) <= r_c(0)/(1-p)^Δ` on the
/// grid for the tree built from a constant gadget.
///
/// Exact values are compared when the family has a rational closed form;
/// otherwise the bisection brackets are compared conservatively, and a
/// check that only the bracket leaves undecided is inconclusive.
pub fn rcbounds_check(family: RcFamily, grid: &[Q], caps: &Caps) -> Result<CertificateBundle> {
    let gadget = family.gadget();
    let delta = tree_like(|_| Ok(gadget.clone()), 3)?.graph.max_degree();
    let f = pivotality_poly(&gadget, caps)?;
    let zero = Q::from_integer(0.into());
    let rc0 = rc_root(&f, &zero)?;
    let (rc0_lo, rc0_hi) = match family.closed_form(&zero) {
        Some(v) => (v.clone(), v),
        None => (rc0.lo(), rc0.hi()),
    };
    let mut bundle = CertificateBundle::new(format!("critical value bounds for the {} tree, Δ = {delta}", family.name()));
    for p in grid {
        if !(&zero <= p && p < &Q::one()) {
            return Err(DacError::ParameterRange {
                name: "p",
                value: rational::show(p),
            });
        }
        let shrink = rational::pow(&(Q::one() - p), delta as u64);
        let root = rc_root(&f, p)?;
        let (lo, hi) = match family.closed_form(p) {
            Some(v) => {
                let inside = root.lo() <= v && v <= root.hi();
                if !inside {
                    return Err(DacError::InvalidArgument(format!(
                        "closed form for {} disagrees with the root at p = {}",
                        family.name(),
                        rational::show(p)
                    )));
                }
                (v.clone(), v)
            }
            None => (root.lo(), root.hi()),
        };
        // the lower bound grows with r_c(0), the upper bound too
        let lower_worst = Q::one() - (Q::one() - &rc0_hi) / &shrink;
        let lower_best = Q::one() - (Q::one() - &rc0_lo) / &shrink;
        let upper_worst = &rc0_lo / &shrink;
        let upper_best = &rc0_hi / &shrink;
        // at p = 0 both bounds are r_c(0) itself
        let identity = p == &zero;
        let lower = if identity || lower_worst <= lo {
            Status::Pass
        } else if lower_best <= hi {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        let upper = if identity || hi <= upper_worst {
            Status::Pass
        } else if lo <= upper_best {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        let value = if lo == hi {
            display_q(&lo)
        } else {
            format!("[{:.12}, {:.12}]", rational::to_f64(&lo), rational::to_f64(&hi))
        };
        bundle.push(
            Certificate::new(
                format!("1 - (1-r_c(0))/(1-p)^{delta} <= r_c(p) <= r_c(0)/(1-p)^{delta} at p = {}", rational::show(p)),
                "domination by product measures",
            )
            .with("r_c(p)", value)
            .with("lower bound", display_q(&lower_worst))
            .with("upper bound", display_q(&upper_worst))
            .check("lower <= r_c(p)", lower)
            .check("r_c(p) <= upper", upper),
        );
    }
    Ok(bundle)
}

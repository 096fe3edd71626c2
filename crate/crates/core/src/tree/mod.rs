//! Critical values of tree-like graphs from gadget polynomials, and the
//! certificates built on them.
//!
//! For a constant gadget sequence the tree lemmas reduce to comparing a
//! single polynomial with `1/2`: `h(p) < 1/2` gives `p <= p_c`, `h(p) > 1/2`
//! gives `p >= p_c`, and likewise `f(p, r)` against `r_c(p)`.

mod certificate;
mod dk;
mod nonbounded;
mod rcbounds;
mod threshold;

use num_traits::{One, Zero};

use crate::error::{DacError, Result};
use crate::poly::BiPoly;
use crate::rational::{self, Q};

pub use certificate::{Certificate, CertificateBundle, CriticalCurve, CurveMethod, CurvePoint, Evidence, Status};
pub use dk::{fact4_search, nonmonotonicity_certificate, Fact4Outcome};
pub use nonbounded::{discontinuity_family_certificate, dn_connection, dn_limit, dn_limit_point, dn_pivotality, DiscontinuityReport};
pub use rcbounds::{rcbounds_check, RcFamily};
pub use threshold::{bounded_degree_certificate, r0, r1, BridgeFamily, ThresholdFamily};

/// Bracket width used by [`pc_root`] and [`rc_root`].
pub fn tolerance() -> Q {
    Q::new(1.into(), num_bigint::BigInt::one() << 40)
}

/// Closed interval `[lo, hi]` containing a root; `lo == hi` when the root
/// was hit exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Q,
    pub hi: Q,
}

impl Bracket {
    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn mid_f64(&self) -> f64 {
        (rational::to_f64(&self.lo) + rational::to_f64(&self.hi)) / 2.0
    }
}

/// Critical value of the colour parameter at fixed `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RcRoot {
    /// `f(p, 0) >= 1/2`.
    Zero,
    /// `f(p, 1) <= 1/2`.
    One,
    Bracket(Bracket),
}

impl RcRoot {
    pub fn lo(&self) -> Q {
        match self {
            RcRoot::Zero => Q::zero(),
            RcRoot::One => Q::one(),
            RcRoot::Bracket(b) => b.lo.clone(),
        }
    }

    pub fn hi(&self) -> Q {
        match self {
            RcRoot::Zero => Q::zero(),
            RcRoot::One => Q::one(),
            RcRoot::Bracket(b) => b.hi.clone(),
        }
    }
}

const GRID: i64 = 64;

/// Values on the grid `0, 1/64, ..., 1`.
fn grid_values(at: impl Fn(&Q) -> Q) -> Vec<Q> {
    (0..=GRID).map(|i| at(&rational::q(i, GRID))).collect()
}

/// Bisects `g(x) = 1/2` for increasing `g` with `g(lo) < 1/2 < g(hi)`.
fn bisect(mut lo: Q, mut hi: Q, g: impl Fn(&Q) -> Q) -> Bracket {
    let half = rational::half();
    let tol = tolerance();
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / rational::int(2);
        match g(&mid).cmp(&half) {
            std::cmp::Ordering::Less => lo = mid,
            std::cmp::Ordering::Greater => hi = mid,
            std::cmp::Ordering::Equal => {
                return Bracket {
                    lo: mid.clone(),
                    hi: mid,
                }
            }
        }
    }
    Bracket { lo, hi }
}

/// Solves `h(p) = 1/2` for a connection polynomial.
pub fn pc_root(h: &BiPoly) -> Result<Bracket> {
    if !h.is_univariate_p() {
        return Err(DacError::InvalidArgument("connection polynomial must not depend on r".into()));
    }
    let at = |p: &Q| h.eval(p, &Q::zero());
    let values = grid_values(at);
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DacError::NonMonotone("h is not strictly increasing on the 1/64 grid".into()));
    }
    let half = rational::half();
    let (h0, h1) = (at(&Q::zero()), at(&Q::one()));
    if !(h0 < half && half < h1) {
        return Err(DacError::NoCrossing(format!(
            "h(0) = {}, h(1) = {}",
            rational::show(&h0),
            rational::show(&h1)
        )));
    }
    Ok(bisect(Q::zero(), Q::one(), at))
}

/// Solves `f(p, r) = 1/2` in `r`, with the boundary conventions of
/// [`RcRoot`].
pub fn rc_root(f: &BiPoly, p: &Q) -> Result<RcRoot> {
    rational::check_unit("p", p)?;
    let g = f.at_p(p);
    let at = |r: &Q| g.eval(&Q::zero(), r);
    let values = grid_values(at);
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(DacError::NonMonotone(format!(
            "f({}, r) decreases somewhere on the 1/64 grid",
            rational::show(p)
        )));
    }
    let half = rational::half();
    if at(&Q::zero()) >= half {
        return Ok(RcRoot::Zero);
    }
    if at(&Q::one()) <= half {
        return Ok(RcRoot::One);
    }
    Ok(RcRoot::Bracket(bisect(Q::zero(), Q::one(), at)))
}

/// Renders a rational exactly when short, otherwise as a decimal with the
/// size of the exact value.
pub fn display_q(x: &Q) -> String {
    let s = rational::show(x);
    if s.len() <= 48 {
        s
    } else {
        format!("{:.12} (exact value has {} digits)", rational::to_f64(x), s.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::Surd;
    use crate::rational::q;

    #[test]
    fn identity_root_is_half() {
        let b = pc_root(&BiPoly::p()).unwrap();
        assert_eq!(b.lo, rational::half());
        assert_eq!(b.hi, rational::half());
    }

    #[test]
    fn square_root_bracket() {
        let b = pc_root(&BiPoly::p().pow(2)).unwrap();
        assert!(b.width() <= tolerance());
        let s = Surd::new(Q::zero(), q(1, 2), 2);
        assert!(s.cmp_q(&b.lo).is_ge() && s.cmp_q(&b.hi).is_le());
        let half = rational::half();
        assert!(b.lo.clone() * &b.lo <= half && half <= b.hi.clone() * &b.hi);
    }

    #[test]
    fn pc_root_errors() {
        let low = BiPoly::p().scale(&q(1, 3));
        assert!(matches!(pc_root(&low), Err(DacError::NoCrossing(_))));
        assert!(matches!(pc_root(&BiPoly::r()), Err(DacError::InvalidArgument(_))));
        let bump = &BiPoly::p() - &BiPoly::p().pow(2).scale(&q(3, 2));
        assert!(matches!(pc_root(&bump), Err(DacError::NonMonotone(_))));
    }

    #[test]
    fn edge_gadget_rc() {
        let f = &BiPoly::p() + &(&BiPoly::one_minus_p() * &BiPoly::r());
        assert_eq!(rc_root(&f, &Q::zero()).unwrap().lo(), rational::half());
        for (n, d) in [(1, 10), (1, 5), (1, 3), (2, 5)] {
            let p = q(n, d);
            let exact = (rational::half() - &p) / (Q::one() - &p);
            match rc_root(&f, &p).unwrap() {
                RcRoot::Bracket(b) => assert!(b.contains(&exact) && b.width() <= tolerance()),
                other => panic!("{other:?}"),
            }
        }
        assert_eq!(rc_root(&f, &rational::half()).unwrap(), RcRoot::Zero);
        assert_eq!(rc_root(&BiPoly::r().scale(&q(1, 3)), &Q::zero()).unwrap(), RcRoot::One);
    }

    #[test]
    fn rc_root_rejects_decreasing() {
        assert!(matches!(rc_root(&BiPoly::one_minus_r(), &Q::zero()), Err(DacError::NonMonotone(_))));
    }
}

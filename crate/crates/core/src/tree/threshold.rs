use num_traits::{One, Zero};

use super::certificate::{Certificate, CertificateBundle, Status};
use super::display_q;
use crate::error::{DacError, Result};
use crate::exact::{connection_poly, Caps};
use crate::graph::{Gadget, MultiGraph};
use crate::rational::{self, q, Q};
use crate::surd::Surd;

/// Two-terminal graphs `G_n` with terminals `x_n, y_n` whose connection
/// probability sharpens to a step at `1/2`.
pub trait ThresholdFamily {
    fn name(&self) -> String;

    /// `c_n(p) = P_p(x_n <-> y_n)`, exact.
    fn connection(&self, n: usize, p: &Q) -> Result<Q>;

    /// The graph itself, when small enough to build.
    fn graph(&self, n: usize) -> Result<Gadget>;
}

/// Iterated Wheatstone bridge, two copies in parallel.
///
/// A bridge has connection polynomial `g(p) = 2p^2 + 2p^3 - 5p^4 + 2p^5`
/// with `g(1/2) = 1/2` and `g'(1/2) > 1`. Substituting the level `n-1`
/// graph for every bridge edge gives `g^n`; the parallel pair gives
/// `c_n = 1 - (1 - g^n)^2`, so `c_n(1/2) = 3/4`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BridgeFamily;

const BRIDGE: [(usize, usize); 5] = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)];

impl BridgeFamily {
    pub fn bridge_poly(p: &Q) -> Q {
        let p2 = p * p;
        let p3 = &p2 * p;
        let p4 = &p3 * p;
        let p5 = &p4 * p;
        q(2, 1) * p2 + q(2, 1) * p3 - q(5, 1) * p4 + q(2, 1) * p5
    }

    pub fn iterate(n: usize, p: &Q) -> Q {
        (0..n).fold(p.clone(), |x, _| BridgeFamily::bridge_poly(&x))
    }

    /// Level `n` bridge between vertices 0 and 1.
    fn level(n: usize) -> Result<MultiGraph> {
        if n == 0 {
            return MultiGraph::new(2, &[(0, 1)]);
        }
        let inner = BridgeFamily::level(n - 1)?;
        let mut g = MultiGraph::empty(4);
        for &(u, v) in &BRIDGE {
            let mut map = vec![0; inner.vertex_count()];
            map[0] = u;
            map[1] = v;
            for slot in map.iter_mut().skip(2) {
                *slot = g.add_vertex();
            }
            g.splice(&inner, &map)?;
        }
        // renumber so the terminals are 0 and 1
        let n = g.vertex_count();
        let perm: Vec<usize> = (0..n).map(|v| match v {
            3 => 1,
            1 => 3,
            v => v,
        }).collect();
        let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        MultiGraph::new(n, &edges)
    }
}

impl ThresholdFamily for BridgeFamily {
    fn name(&self) -> String {
        "iterated Wheatstone bridge, doubled".into()
    }

    fn connection(&self, n: usize, p: &Q) -> Result<Q> {
        rational::check_unit("p", p)?;
        let c = BridgeFamily::iterate(n, p);
        Ok(Q::one() - rational::pow(&(Q::one() - c), 2))
    }

    fn graph(&self, n: usize) -> Result<Gadget> {
        if n > 4 {
            return Err(DacError::CapExceeded {
                what: "bridge level",
                count: n,
                cap: 4,
            });
        }
        let single = BridgeFamily::level(n)?;
        let mut g = MultiGraph::empty(2);
        for _ in 0..2 {
            let mut map = vec![0; single.vertex_count()];
            map[1] = 1;
            for slot in map.iter_mut().skip(2) {
                *slot = g.add_vertex();
            }
            g.splice(&single, &map)?;
        }
        Gadget::new(g, 0, 1)
    }
}

/// `(√5 - 1)/2`, the positive root of `r(1+r) = 1`.
pub fn r0() -> Surd {
    Surd::new(q(-1, 2), q(1, 2), 5)
}

/// `1/2`, the root of `(2/3)(1+r) = 1`.
pub fn r1() -> Q {
    rational::half()
}

/// `p (1 - (1-p)^Δ) - 1/2`.
fn phi(p: &Q, delta: usize) -> Q {
    p * (Q::one() - rational::pow(&(Q::one() - p), delta as u64)) - rational::half()
}

/// Largest tested `p' > 1/2` with `p'(1-(1-p')^Δ) < 1/2`, after 40 bisection
/// steps on `[1/2, 1]`.
fn p_prime(delta: usize) -> Option<(Q, Q)> {
    let (mut lo, mut hi) = (rational::half(), Q::one());
    if phi(&lo, delta) >= Q::zero() || phi(&hi, delta) <= Q::zero() {
        return None;
    }
    for _ in 0..40 {
        let mid = (&lo + &hi) / rational::int(2);
        if phi(&mid, delta) < Q::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

/// Arithmetic of the bounded-degree construction plus the family checks at
/// the listed depths.
pub fn bounded_degree_certificate(family: &dyn ThresholdFamily, delta: usize, depths: &[usize], caps: &Caps) -> Result<CertificateBundle> {
    if delta == 0 {
        return Err(DacError::InvalidArgument("Δ must be positive".into()));
    }
    let mut bundle = CertificateBundle::new(format!("bounded-degree discontinuity at 1/2, Δ = {delta}"));
    let one = Surd::rational(Q::one(), 5);
    let root = r0();
    let half = rational::half();

    let identity = root.clone() * (one.clone() + root.clone()) - one.clone();
    bundle.push(
        Certificate::new("r_0 = (√5-1)/2 solves r(1+r) = 1", "exact arithmetic in Q(√5)")
            .with("r_0", format!("{root} ≈ {:.12}", root.to_f64()))
            .check("r_0 (1 + r_0) - 1 = 0", Status::from_bool(identity.is_zero()))
            .check("r_0 > 0", Status::from_bool(root.signum() > 0)),
    );
    let r1v = r1();
    bundle.push(
        Certificate::new("r_1 = 1/2 solves (2/3)(1+r) = 1", "exact arithmetic")
            .check("(2/3)(1 + r_1) = 1", Status::from_bool(q(2, 3) * (Q::one() + &r1v) == Q::one())),
    );
    bundle.push(
        Certificate::new("r_1 < r_0", "exact comparison in Q(√5)")
            .check("r_0 - r_1 > 0", Status::from_bool(root.cmp_q(&r1v).is_gt())),
    );
    let at_r0 = (root.clone() + one.clone()) * Surd::rational(half.clone(), 5) * root.clone();
    let at_r1 = (&r1v + Q::one()) / rational::int(2) * &r1v;
    bundle.push(
        Certificate::new("((r+1)/2) r < 1/2 exactly for r < r_0", "upper bound on lim f^(D_n)(p, r) for p < 1/2")
            .check("((r_0+1)/2) r_0 = 1/2", Status::from_bool(at_r0.cmp_q(&half).is_eq()))
            .with("((r_1+1)/2) r_1", rational::show(&at_r1))
            .check("((r_1+1)/2) r_1 < 1/2", Status::strict(&at_r1, &half, true)),
    );

    let mut pc = Certificate::new(format!("some p' > 1/2 has p'(1-(1-p')^{delta}) < 1/2"), "connection bound 1-(1-p)^Δ and the tree lemma (bond part)");
    match p_prime(delta) {
        Some((lo, hi)) => {
            let v = phi(&lo, delta) + &half;
            pc = pc
                .with("p'", format!("{} ≈ {:.10}", rational::show(&lo), rational::to_f64(&lo)))
                .with("root of p(1-(1-p)^Δ) = 1/2 in", format!("[{:.10}, {:.10}]", rational::to_f64(&lo), rational::to_f64(&hi)))
                .with("p'(1-(1-p')^Δ)", display_q(&v))
                .check("p' > 1/2", Status::strict(&lo, &half, false))
                .check("p'(1-(1-p')^Δ) < 1/2", Status::strict(&v, &half, true));
        }
        None => pc = pc.check("bisection bracket on [1/2, 1]", Status::Fail),
    }
    bundle.push(pc);

    let mut p1 = Certificate::new(format!("{}: c_n(1/2) > 2/3", family.name()), "threshold family property (1)");
    for &n in depths {
        let c = family.connection(n, &half)?;
        p1 = p1.with(format!("c_{n}(1/2)"), display_q(&c)).check(format!("c_{n}(1/2) > 2/3"), Status::strict(&c, &q(2, 3), false));
    }
    if let Ok(g) = family.graph(1) {
        if g.graph().edge_count() <= caps.max_edges {
            let h = connection_poly(&g, caps)?;
            let by_enum = h.eval(&half, &Q::zero());
            p1 = p1
                .with("c_1(1/2) by enumeration", rational::show(&by_enum))
                .check("enumeration = closed form", Status::from_bool(by_enum == family.connection(1, &half)?));
        }
    }
    bundle.push(p1);

    let p_low = q(2, 5);
    let mut p2 = Certificate::new(format!("{}: c_n(p) -> 0 for p < 1/2", family.name()), "threshold family property (2), trend at tested depths");
    let mut prev: Option<Q> = None;
    for &n in depths {
        let c = family.connection(n, &p_low)?;
        p2 = p2.with(format!("c_{n}(2/5)"), display_q(&c));
        if let Some(pv) = &prev {
            p2 = p2.check(format!("c_{n}(2/5) < previous"), Status::strict(&c, pv, true));
        }
        prev = Some(c);
    }
    bundle.push(p2);
    bundle.notes.push(format!(
        "property (3), a degree bound uniform in n, is not claimed for {}: its terminal degrees double with each level",
        family.name()
    ));
    bundle.conclude("r_c(p) >= r_0 for p < 1/2 and r_c(1/2) <= r_1 < r_0, given a family with properties (1)-(3)");
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BiPoly;

    #[test]
    fn bridge_polynomial_matches_enumeration() {
        let g = Gadget::new(BridgeFamily::level(1).unwrap(), 0, 1).unwrap();
        let h = connection_poly(&g, &Caps::default()).unwrap();
        let expected = BiPoly::p().pow(2).scale(&q(2, 1))
            + BiPoly::p().pow(3).scale(&q(2, 1))
            + BiPoly::p().pow(4).scale(&q(-5, 1))
            + BiPoly::p().pow(5).scale(&q(2, 1));
        assert_eq!(h, expected);
        assert_eq!(BridgeFamily::bridge_poly(&rational::half()), rational::half());
        let slope = h.d_dp().eval(&rational::half(), &Q::zero());
        assert_eq!(slope, q(13, 8));
    }

    #[test]
    fn level_two_is_the_second_iterate() {
        let g = Gadget::new(BridgeFamily::level(2).unwrap(), 0, 1).unwrap();
        assert_eq!(g.graph().edge_count(), 25);
        let caps = Caps {
            max_edges: 25,
            ..Caps::default()
        };
        let h = connection_poly(&g, &caps).unwrap();
        let p = q(2, 5);
        assert_eq!(h.eval(&p, &Q::zero()), BridgeFamily::iterate(2, &p));
    }

    #[test]
    fn doubled_family() {
        let fam = BridgeFamily;
        for n in 0..5 {
            assert_eq!(fam.connection(n, &rational::half()).unwrap(), q(3, 4));
        }
        let g = fam.graph(1).unwrap();
        assert_eq!(g.graph().edge_count(), 10);
        assert_eq!(g.graph().max_degree(), 4);
    }

    #[test]
    fn certificate_passes_for_small_delta() {
        for delta in 3..=5 {
            let b = bounded_degree_certificate(&BridgeFamily, delta, &[1, 2, 3, 4], &Caps::default()).unwrap();
            assert_eq!(b.status(), Status::Pass, "{b}");
        }
    }

    #[test]
    fn p_prime_bracket() {
        let (lo, _) = p_prime(5).unwrap();
        assert!(lo > rational::half());
        assert!(phi(&lo, 5) < Q::zero());
    }
}

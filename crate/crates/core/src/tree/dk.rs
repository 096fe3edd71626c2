use num_traits::{One, Zero};

use super::certificate::{Certificate, CertificateBundle, Status};
use super::{display_q, pc_root, rc_root, RcRoot};
use crate::error::Result;
use crate::exact::{bk_probability, connection_poly, pivotality_poly, Caps};
use crate::graph::complete_bipartite_dk;
use crate::rational::{self, q, Q};

const BOND_LEMMA: &str = "tree lemma (bond part): h(p) < 1/2 for the constant gadget gives p <= p_c, strictly by continuity";
const DAC_LEMMA: &str = "tree lemma (colour part): f(p,r) > 1/2 gives r_c(p) <= r, f(p,r) < 1/2 gives r_c(p) >= r, strictly by continuity in r";

/// Largest `k` for which facts (1)-(3) are also evaluated from the full
/// enumerated polynomials.
const EXACT_K: usize = 6;

/// Result of looking for `(p_0, k)` with `P(B_k) > 17/18`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact4Outcome {
    Found { p0: Q, k: u64, pb: Q, bound: Q },
    /// No pair on the scanned grid works; carries the largest `P(B_k)` seen
    /// and the smallest bound on `f(p_0, 2/3)`.
    NotFound { best_pb: Q, best_bound: Q, reason: String },
}

fn threshold() -> Q {
    q(17, 18)
}

/// `f(p_0, 2/3) <= (2/3)^2 P(B_k) + (1 - P(B_k))`.
fn fact4_bound(pb: &Q) -> Q {
    q(4, 9) * pb + (Q::one() - pb)
}

fn pb_f64(p: f64, k: u64) -> f64 {
    (1.0 - p).powi(4) * -((k as f64) * (-p * p).ln_1p()).exp_m1()
}

/// Scans `p_0 = 2^-m` (or the given `p_0`) and `k = 2^j` (or the given `k`)
/// in increasing order and returns the first pair passing exactly.
///
/// Floats only screen candidates; every reported pass is re-checked in
/// exact arithmetic.
pub fn fact4_search(p0: Option<&Q>, k: Option<u64>) -> Fact4Outcome {
    let p0s: Vec<Q> = match p0 {
        Some(p) => vec![p.clone()],
        None => (2..=16).map(|m| Q::new(1.into(), num_bigint::BigInt::one() << m)).collect(),
    };
    let ks: Vec<u64> = match k {
        Some(k) => vec![k],
        None => (0..=40).map(|j| 1u64 << j).collect(),
    };
    let mut best_pb = Q::zero();
    let mut reasons = Vec::new();
    for p in &p0s {
        let ceiling = rational::pow(&(Q::one() - p), 4);
        if p.is_zero() || p >= &q(1, 3) {
            reasons.push(format!("p_0 = {} is not in (0, 1/3)", rational::show(p)));
            continue;
        }
        if ceiling <= threshold() {
            // P(B_k) < (1-p_0)^4 for every k
            reasons.push(format!(
                "p_0 = {}: P(B_k) < (1-p_0)^4 = {} <= 17/18 for every k",
                rational::show(p),
                display_q(&ceiling)
            ));
            best_pb = best_pb.max(ceiling.clone());
            continue;
        }
        let pf = rational::to_f64(p);
        for &k in &ks {
            let exact_needed = pb_f64(pf, k) > 17.0 / 18.0 - 1e-9 || ks.len() == 1;
            if !exact_needed {
                continue;
            }
            // huge k are only reachable by the screen; cap the exact work
            if k > 1 << 24 {
                continue;
            }
            let pb = bk_probability(p, k);
            if pb > threshold() {
                let bound = fact4_bound(&pb);
                if bound < rational::half() {
                    return Fact4Outcome::Found {
                        p0: p.clone(),
                        k,
                        pb,
                        bound,
                    };
                }
            }
            best_pb = best_pb.max(pb);
        }
        reasons.push(format!("p_0 = {}: no scanned k reaches 17/18", rational::show(p)));
    }
    let best_bound = fact4_bound(&best_pb);
    Fact4Outcome::NotFound {
        best_pb,
        best_bound,
        reason: reasons.join("; "),
    }
}

/// Facts (1)-(4) for the tree built from `D^k`.
///
/// With `k` unset, `k` comes from the fact-(4) search and facts (1)-(3)
/// use bounds valid for every `k`; with `k <= 6` they are also evaluated
/// from the enumerated polynomials.
pub fn nonmonotonicity_certificate(k: Option<usize>, p0: Option<&Q>, caps: &Caps) -> Result<CertificateBundle> {
    let search = fact4_search(p0, k.map(|k| k as u64));
    let k = match (&search, k) {
        (_, Some(k)) => k,
        (Fact4Outcome::Found { k, .. }, None) => *k as usize,
        (Fact4Outcome::NotFound { .. }, None) => 3,
    };
    complete_bipartite_dk(k)?;
    let mut bundle = CertificateBundle::new(format!("non-monotone r_c on the tree built from D^{k}"));
    let third = q(1, 3);
    let two_thirds = q(2, 3);
    let half = rational::half();

    let exact = if k <= EXACT_K {
        let g = complete_bipartite_dk(k)?;
        Some((connection_poly(&g, caps)?, pivotality_poly(&g, caps)?))
    } else {
        None
    };

    // fact 1: h(1/3) <= 25/81 < 1/2. a or b isolated already disconnects
    // them, so h <= 1 - (2(1-p)^2 - (1-p)^4) for every k.
    let qq = Q::one() - &third;
    let h_bound = Q::one() - (q(2, 1) * rational::pow(&qq, 2) - rational::pow(&qq, 4));
    let mut c1 = Certificate::new(format!("p_c > 1/3 for D^{k}"), BOND_LEMMA)
        .with("1 - P(a or b isolated) at p = 1/3 (any k)", display_q(&h_bound))
        .check("bound <= 25/81", Status::from_bool(h_bound <= q(25, 81)))
        .check("bound < 1/2", Status::strict(&h_bound, &half, true));
    if let Some((h, _)) = &exact {
        let v = h.eval(&third, &Q::zero());
        c1 = c1
            .with(format!("h^(D^{k})(1/3) by enumeration"), display_q(&v))
            .check("h(1/3) <= 25/81", Status::from_bool(v <= q(25, 81)));
        if let Ok(b) = pc_root(h) {
            c1 = c1.with("p_c bracket", format!("[{:.10}, {:.10}]", rational::to_f64(&b.lo), rational::to_f64(&b.hi)));
        }
    }
    bundle.push(c1);

    // fact 2: at p = 0 every cluster is a single vertex, so
    // f(0, r) = r (1 - (1-r)^2) for every k.
    let f0 = &two_thirds * (Q::one() - rational::pow(&(Q::one() - &two_thirds), 2));
    let mut c2 = Certificate::new(format!("r_c(0) < 2/3 for D^{k}"), DAC_LEMMA)
        .with("r (1 - (1-r)^2) at r = 2/3 (any k)", display_q(&f0))
        .check("value = 16/27", Status::from_bool(f0 == q(16, 27)))
        .check("value > 1/2", Status::strict(&f0, &half, false));
    if let Some((_, f)) = &exact {
        let v = f.eval(&Q::zero(), &two_thirds);
        c2 = c2
            .with(format!("f^(D^{k})(0, 2/3) by enumeration"), display_q(&v))
            .check("f(0, 2/3) = 16/27", Status::from_bool(v == q(16, 27)));
        if let Ok(root) = rc_root(f, &Q::zero()) {
            c2 = c2.with("r_c(0) bracket", bracket_text(&root));
        }
    }
    bundle.push(c2);

    // fact 3: if a terminal edge is open then C_b is at distance <= 1 from
    // C_a, so a black C_b suffices: f >= r (1 - (1-p)^4) for every k.
    let f13 = &two_thirds * (Q::one() - rational::pow(&(Q::one() - &third), 4));
    let mut c3 = Certificate::new(format!("r_c(1/3) < 2/3 for D^{k}"), DAC_LEMMA)
        .with("r (1 - (1-p)^4) at (1/3, 2/3) (any k)", display_q(&f13))
        .check("bound >= 130/243", Status::from_bool(f13 >= q(130, 243)))
        .check("bound > 1/2", Status::strict(&f13, &half, false));
    if let Some((_, f)) = &exact {
        let v = f.eval(&third, &two_thirds);
        c3 = c3
            .with(format!("f^(D^{k})(1/3, 2/3) by enumeration"), display_q(&v))
            .check("f(1/3, 2/3) >= 130/243", Status::from_bool(v >= q(130, 243)));
        if let Ok(root) = rc_root(f, &third) {
            c3 = c3.with("r_c(1/3) bracket", bracket_text(&root));
        }
    }
    bundle.push(c3);

    // fact 4: on B_k the terminals are isolated and z_1, z_2 share a
    // cluster, so E needs two independent black clusters.
    let c4 = match &search {
        Fact4Outcome::Found { p0, k: kk, pb, bound } if *kk as usize == k => {
            Certificate::new(format!("r_c(p_0) > 2/3 for D^{k}, p_0 = {}", rational::show(p0)), DAC_LEMMA)
                .with("p_0", rational::show(p0))
                .with("P(B_k) = (1-p_0)^4 (1 - (1-p_0^2)^k)", display_q(pb))
                .check("P(B_k) > 17/18", Status::strict(pb, &threshold(), false))
                .check("p_0 < 1/3", Status::strict(p0, &third, true))
                .with("(2/3)^2 P(B_k) + (1 - P(B_k))", display_q(bound))
                .check("f(p_0, 2/3) bound < 1/2", Status::strict(bound, &half, true))
        }
        Fact4Outcome::Found { .. } => unreachable!("search ran with the certificate's k"),
        Fact4Outcome::NotFound {
            best_pb,
            best_bound,
            reason,
        } => Certificate::new(format!("r_c(p_0) > 2/3 for D^{k}, some p_0 < 1/3"), DAC_LEMMA)
            .with("search", reason.clone())
            .with("best P(B_k)", display_q(best_pb))
            .with("best bound on f(p_0, 2/3)", display_q(best_bound))
            .check("P(B_k) > 17/18 found", Status::Fail),
    };
    bundle.push(c4);

    if let Fact4Outcome::Found { p0, .. } = &search {
        bundle.conclude(format!(
            "r_c(0) < 2/3, r_c({}) > 2/3 and r_c(1/3) < 2/3 with 1/3 < p_c: r_c is not monotone on [0, p_c)",
            rational::show(p0)
        ));
    }
    Ok(bundle)
}

fn bracket_text(root: &RcRoot) -> String {
    format!("[{:.10}, {:.10}]", rational::to_f64(&root.lo()), rational::to_f64(&root.hi()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_refused() {
        match fact4_search(Some(&q(1, 3)), None) {
            Fact4Outcome::NotFound { best_pb, .. } => assert!(best_pb <= q(16, 81)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(fact4_search(Some(&q(1, 4)), None), Fact4Outcome::NotFound { .. }));
    }

    #[test]
    fn small_k_never_passes() {
        for k in 1..=8 {
            assert!(matches!(fact4_search(None, Some(k)), Fact4Outcome::NotFound { .. }));
        }
    }

    #[test]
    fn screen_agrees_with_exact_near_the_first_pass() {
        let p = q(1, 128);
        for k in [1u64 << 14, 1 << 15, 1 << 16] {
            let exact = rational::to_f64(&bk_probability(&p, k));
            assert!((exact - pb_f64(1.0 / 128.0, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn k3_facts_one_to_three_pass() {
        let b = nonmonotonicity_certificate(Some(3), None, &Caps::default()).unwrap();
        assert!(b.certificates[..3].iter().all(|c| c.passed()), "{b}");
        assert_eq!(b.certificates[3].status, Status::Fail);
        assert!(b.conclusion.is_none());
    }
}

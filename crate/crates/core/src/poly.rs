//! Bivariate polynomials in `(p, r)` with exact rational coefficients.
//!
//! Stored in the expanded monomial basis `p^i r^j`; zero coefficients are
//! never kept, so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Q};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Q>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        BiPoly::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn p() -> Self {
        BiPoly::monomial(1, 0, Q::one())
    }

    pub fn r() -> Self {
        BiPoly::monomial(0, 1, Q::one())
    }

    pub fn one_minus_p() -> Self {
        &BiPoly::one() - &BiPoly::p()
    }

    pub fn one_minus_r() -> Self {
        &BiPoly::one() - &BiPoly::r()
    }

    /// `p^k (1-p)^(n-k)` expanded.
    pub fn bernstein_p(k: u32, n: u32) -> Self {
        Self::bernstein(k, n, false)
    }

    /// `r^k (1-r)^(n-k)` expanded.
    pub fn bernstein_r(k: u32, n: u32) -> Self {
        Self::bernstein(k, n, true)
    }

    fn bernstein(k: u32, n: u32, in_r: bool) -> Self {
        assert!(k <= n);
        let m = n - k;
        let mut out = BiPoly::zero();
        let mut binom = BigInt::one();
        for t in 0..=m {
            // (1-x)^m = Σ_t C(m,t) (-x)^t
            let c = if t % 2 == 0 { binom.clone() } else { -binom.clone() };
            let e = k + t;
            let key = if in_r { (0, e) } else { (e, 0) };
            out.add_term(key, Q::from_integer(c));
            binom = binom * BigInt::from(m - t) / BigInt::from(t + 1);
        }
        out
    }

    pub fn add_term(&mut self, key: (u32, u32), c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree_p(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_r(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn is_univariate_p(&self) -> bool {
        self.terms.keys().all(|k| k.1 == 0)
    }

    pub fn is_univariate_r(&self) -> bool {
        self.terms.keys().all(|k| k.0 == 0)
    }

    pub fn eval(&self, p: &Q, r: &Q) -> Q {
        let pp = powers(p, self.degree_p());
        let rp = powers(r, self.degree_r());
        self.terms
            .iter()
            .fold(Q::zero(), |acc, ((i, j), c)| acc + c * &pp[*i as usize] * &rp[*j as usize])
    }

    /// Substitutes `p`, leaving a polynomial in `r` alone.
    pub fn at_p(&self, p: &Q) -> BiPoly {
        let pp = powers(p, self.degree_p());
        let mut out = BiPoly::zero();
        for ((i, j), c) in &self.terms {
            out.add_term((0, *j), c * &pp[*i as usize]);
        }
        out
    }

    /// Substitutes `r`, leaving a polynomial in `p` alone.
    pub fn at_r(&self, r: &Q) -> BiPoly {
        let rp = powers(r, self.degree_r());
        let mut out = BiPoly::zero();
        for ((i, j), c) in &self.terms {
            out.add_term((*i, 0), c * &rp[*j as usize]);
        }
        out
    }

    pub fn eval_f64(&self, p: f64, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|((i, j), c)| rational::to_f64(c) * p.powi(*i as i32) * r.powi(*j as i32))
            .sum()
    }

    pub fn d_dp(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i, j), c) in &self.terms {
            if *i > 0 {
                out.add_term((i - 1, *j), c * rational::int(*i as i64));
            }
        }
        out
    }

    pub fn d_dr(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                out.add_term((*i, j - 1), c * rational::int(*j as i64));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        let mut out = BiPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &Q) -> BiPoly {
        let mut out = BiPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// CSV rows `i,j,numerator,denominator` ordered by `(i, j)`, with header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,numerator,denominator\n");
        for ((i, j), c) in &self.terms {
            s.push_str(&format!("{i},{j},{},{}\n", c.numer(), c.denom()));
        }
        s
    }

    pub fn from_csv(text: &str) -> crate::Result<BiPoly> {
        let mut out = BiPoly::zero();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("i,") {
                continue;
            }
            let bad = |msg: &str| crate::DacError::Parse {
                line: n + 1,
                msg: msg.to_string(),
            };
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(bad("expected 4 fields"));
            }
            let i: u32 = f[0].parse().map_err(|_| bad("bad exponent"))?;
            let j: u32 = f[1].parse().map_err(|_| bad("bad exponent"))?;
            let num: BigInt = f[2].parse().map_err(|_| bad("bad numerator"))?;
            let den: BigInt = f[3].parse().map_err(|_| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            out.add_term((i, j), Q::new(num, den));
        }
        Ok(out)
    }
}

fn powers(x: &Q, n: u32) -> Vec<Q> {
    let mut v = Vec::with_capacity(n as usize + 1);
    v.push(Q::one());
    for k in 0..n as usize {
        let next = &v[k] * x;
        v.push(next);
    }
    v
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &o.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-Q::one())
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, o: BiPoly) -> BiPoly {
        &self + &o
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, o: BiPoly) -> BiPoly {
        &self - &o
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, o: BiPoly) -> BiPoly {
        &self * &o
    }
}

/// Expanded form, highest total degree last: `p + r - p*r`.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (i + j, std::cmp::Reverse(i)));
        for (n, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let vars = monomial_name(key.0, key.1);
            if vars.is_empty() {
                write!(f, "{}", rational::show(&mag))?;
            } else if mag.is_one() {
                f.write_str(&vars)?;
            } else {
                write!(f, "{}*{}", rational::show(&mag), vars)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

fn monomial_name(i: u32, j: u32) -> String {
    let one = |v: &str, e: u32| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let (a, b) = (one("p", i), one("r", j));
    match (a.is_empty(), b.is_empty()) {
        (true, _) => b,
        (_, true) => a,
        _ => format!("{a}*{b}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn pivot_of_single_edge_prints_expanded() {
        let f = &BiPoly::p() + &(&BiPoly::one_minus_p() * &BiPoly::r());
        assert_eq!(f.to_string(), "p + r - p*r");
    }

    #[test]
    fn bernstein_sums_to_one() {
        let n = 7;
        let total = (0..=n).fold(BiPoly::zero(), |acc, k| {
            let c = Q::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)));
            &acc + &BiPoly::bernstein_p(k, n).scale(&c)
        });
        assert_eq!(total, BiPoly::one());
    }

    #[test]
    fn no_zero_coefficients_survive() {
        let x = &BiPoly::p() - &BiPoly::p();
        assert!(x.is_zero());
        assert_eq!(x.to_string(), "0");
    }

    #[test]
    fn csv_round_trip() {
        let f = (&BiPoly::p() + &BiPoly::r().scale(&q(-3, 7))).pow(3);
        assert_eq!(BiPoly::from_csv(&f.to_csv()).unwrap(), f);
    }

    #[test]
    fn derivatives() {
        let f = BiPoly::p().pow(3) * BiPoly::r().pow(2);
        assert_eq!(f.d_dp(), BiPoly::monomial(2, 2, q(3, 1)));
        assert_eq!(f.d_dr(), BiPoly::monomial(3, 1, q(2, 1)));
    }

    fn small_poly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec((0u32..4, 0u32..4, -5i64..5, 1i64..5), 0..6).prop_map(|ts| {
            let mut out = BiPoly::zero();
            for (i, j, n, d) in ts {
                out.add_term((i, j), q(n, d));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), pn in 0i64..9, rn in 0i64..9) {
            let (p, r) = (q(pn, 8), q(rn, 8));
            prop_assert_eq!((&f * &g).eval(&p, &r), f.eval(&p, &r) * g.eval(&p, &r));
            prop_assert_eq!((&f + &g).eval(&p, &r), f.eval(&p, &r) + g.eval(&p, &r));
            prop_assert_eq!(f.at_p(&p).eval(&Q::zero(), &r), f.eval(&p, &r));
            prop_assert_eq!(f.at_r(&r).eval(&p, &Q::zero()), f.eval(&p, &r));
        }
    }
}

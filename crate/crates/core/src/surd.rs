//! Exact arithmetic in `Q(√d)` for the few irrational constants that appear
//! in the certificates (`1/√2`, `(√5 − 1)/2`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::rational::{self, Q};

/// `a + b·√d` with `d` a positive non-square integer (or any `d` when `b = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Q,
    pub b: Q,
    pub d: u64,
}

impl Surd {
    pub fn new(a: Q, b: Q, d: u64) -> Self {
        Surd { a, b, d }
    }

    pub fn rational(a: Q, d: u64) -> Self {
        Surd { a, b: Q::zero(), d }
    }

    /// `√d` itself.
    pub fn root(d: u64) -> Self {
        Surd::new(Q::zero(), rational::int(1), d)
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²·d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * rational::int(self.d as i64);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * (self.d as f64).sqrt()
    }

    /// Exact comparison with a rational.
    pub fn cmp_q(&self, x: &Q) -> Ordering {
        (self.clone() - Surd::rational(x.clone(), self.d)).signum().cmp(&0)
    }

    fn check(&self, other: &Surd) {
        assert!(
            self.d == other.d || self.b.is_zero() || other.b.is_zero(),
            "mixing Q(√{}) and Q(√{})",
            self.d,
            other.d
        );
    }

    fn field(&self, other: &Surd) -> u64 {
        if self.b.is_zero() {
            other.d
        } else {
            self.d
        }
    }
}

fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.check(other);
        Some((self.clone() - other.clone()).signum().cmp(&0))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        self.check(&o);
        let d = self.field(&o);
        Surd::new(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        self + (-o)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.a, -self.b, self.d)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        self.check(&o);
        let d = self.field(&o);
        let dq = rational::int(d as i64);
        Surd::new(
            &self.a * &o.a + &self.b * &o.b * dq,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", rational::show(&self.a));
        }
        if !self.a.is_zero() {
            write!(f, "{} ", rational::show(&self.a))?;
            f.write_str(if self.b.is_negative() { "- " } else { "+ " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        write!(f, "{}·√{}", rational::show(&self.b.abs()), self.d)
    }
}

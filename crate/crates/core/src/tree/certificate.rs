use std::cmp::Ordering;
use std::fmt;

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    /// Status of the strict claim `lhs < rhs` (or `lhs > rhs` when `less`
    /// is false). Equality is the undecided boundary case.
    pub fn strict(lhs: &Q, rhs: &Q, less: bool) -> Status {
        match (lhs.cmp(rhs), less) {
            (Ordering::Equal, _) => Status::Inconclusive,
            (Ordering::Less, true) | (Ordering::Greater, false) => Status::Pass,
            _ => Status::Fail,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Worst of two statuses.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub claim: String,
    pub lemma: String,
    pub evidence: Vec<Evidence>,
    pub status: Status,
}

impl Certificate {
    pub fn new(claim: impl Into<String>, lemma: impl Into<String>) -> Self {
        Certificate {
            claim: claim.into(),
            lemma: lemma.into(),
            evidence: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn with(mut self, label: impl Into<String>, value: impl Into<String>) -> Self {
        self.evidence.push(Evidence {
            label: label.into(),
            value: value.into(),
        });
        self
    }

    /// Records a checked condition; the certificate keeps the worst status.
    pub fn check(mut self, label: impl Into<String>, status: Status) -> Self {
        self.evidence.push(Evidence {
            label: label.into(),
            value: status.to_string(),
        });
        self.status = self.status.and(status);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim:  {}", self.claim)?;
        writeln!(f, "lemma:  {}", self.lemma)?;
        for e in &self.evidence {
            writeln!(f, "  {} = {}", e.label, e.value)?;
        }
        writeln!(f, "status: {}", self.status)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateBundle {
    pub title: String,
    pub certificates: Vec<Certificate>,
    pub notes: Vec<String>,
    /// Emitted only when every certificate passes.
    pub conclusion: Option<String>,
}

impl CertificateBundle {
    pub fn new(title: impl Into<String>) -> Self {
        CertificateBundle {
            title: title.into(),
            certificates: Vec::new(),
            notes: Vec::new(),
            conclusion: None,
        }
    }

    pub fn push(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    pub fn status(&self) -> Status {
        self.certificates.iter().fold(Status::Pass, |s, c| s.and(c.status))
    }

    pub fn conclude(&mut self, text: impl Into<String>) {
        if self.status() == Status::Pass {
            self.conclusion = Some(text.into());
        }
    }

    pub fn report(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CertificateBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.title)?;
        for (i, c) in self.certificates.iter().enumerate() {
            writeln!(f, "[{}]", i + 1)?;
            write!(f, "{c}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        if let Some(c) = &self.conclusion {
            writeln!(f, "conclusion: {c}")?;
        }
        writeln!(f, "overall: {}", self.status())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveMethod {
    ExactRoot,
    Certificate,
    MonteCarlo,
}

impl fmt::Display for CurveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveMethod::ExactRoot => "exact-root",
            CurveMethod::Certificate => "certificate",
            CurveMethod::MonteCarlo => "MC",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    pub method: CurveMethod,
}

impl CurvePoint {
    pub fn mid(&self) -> f64 {
        (self.r_lo + self.r_hi) / 2.0
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CriticalCurve {
    pub points: Vec<CurvePoint>,
}

impl CriticalCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,r_lo,r_hi,method\n");
        for pt in &self.points {
            s.push_str(&format!("{},{:.12},{:.12},{}\n", pt.p, pt.r_lo, pt.r_hi, pt.method));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn strict_comparisons() {
        assert_eq!(Status::strict(&q(1, 3), &q(1, 2), true), Status::Pass);
        assert_eq!(Status::strict(&q(1, 2), &q(1, 2), true), Status::Inconclusive);
        assert_eq!(Status::strict(&q(2, 3), &q(1, 2), true), Status::Fail);
        assert_eq!(Status::strict(&q(2, 3), &q(1, 2), false), Status::Pass);
    }

    #[test]
    fn bundle_status_is_worst() {
        let mut b = CertificateBundle::new("t");
        b.push(Certificate::new("x", "y").check("a", Status::Pass));
        b.conclude("done");
        assert_eq!(b.conclusion.as_deref(), Some("done"));
        b.push(Certificate::new("x", "y").check("a", Status::Inconclusive));
        assert_eq!(b.status(), Status::Inconclusive);
        b.push(Certificate::new("x", "y").check("a", Status::Fail));
        assert_eq!(b.status(), Status::Fail);
        assert!(b.report().contains("overall: fail"));
    }
}

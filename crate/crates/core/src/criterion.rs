//! Common result type for every inequality in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Relative margin a ratio must clear before a verdict is issued, so that
/// states sitting exactly on a boundary are not flagged by round-off.
pub const RATIO_MARGIN: f64 = 1e-9;

/// Kind of nonclassicality certified by a violated inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    None,
    Entanglement,
    EprSteering,
    BellNonlocality,
    GenuineEntanglement,
    GenuineBell,
}

impl Verdict {
    /// Verdict for a hybrid partition with `t` trusted (quantum) sites out
    /// of `n`: `t = n` is entanglement, `t = 0` Bell nonlocality, anything
    /// in between steering.
    pub fn for_partition(n: usize, t: usize) -> Self {
        if t == 0 {
            Verdict::BellNonlocality
        } else if t >= n {
            Verdict::Entanglement
        } else {
            Verdict::EprSteering
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::None => "none",
            Verdict::Entanglement => "entanglement",
            Verdict::EprSteering => "epr-steering",
            Verdict::BellNonlocality => "bell-nonlocality",
            Verdict::GenuineEntanglement => "genuine-entanglement",
            Verdict::GenuineBell => "genuine-bell",
        };
        f.write_str(s)
    }
}

/// Direction in which an inequality is violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    /// Classical models satisfy `lhs ≤ rhs`; `lhs > rhs` is the violation.
    Exceeds,
    /// Classical models satisfy `lhs ≥ rhs`; `lhs < rhs` is the violation
    /// (variance-type bounds).
    Below,
}

/// Both sides of one inequality and the verdict.
///
/// `ratio` is oriented so that `ratio > 1` always means "violated":
/// `lhs/rhs` for [`Sense::Exceeds`] and `rhs/lhs` for [`Sense::Below`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub sense: Sense,
    pub verdict: Verdict,
    pub inequality_id: String,
}

fn quotient(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

impl CriterionResult {
    pub fn new(id: impl Into<String>, lhs: f64, rhs: f64, sense: Sense, on_violation: Verdict) -> Self {
        let ratio = match sense {
            Sense::Exceeds => quotient(lhs, rhs),
            Sense::Below => quotient(rhs, lhs),
        };
        let verdict = if ratio > 1.0 + RATIO_MARGIN { on_violation } else { Verdict::None };
        Self { lhs, rhs, ratio, sense, verdict, inequality_id: id.into() }
    }

    pub fn exceeds(id: impl Into<String>, lhs: f64, rhs: f64, on_violation: Verdict) -> Self {
        Self::new(id, lhs, rhs, Sense::Exceeds, on_violation)
    }

    pub fn below(id: impl Into<String>, lhs: f64, rhs: f64, on_violation: Verdict) -> Self {
        Self::new(id, lhs, rhs, Sense::Below, on_violation)
    }

    pub fn violated(&self) -> bool {
        self.verdict != Verdict::None
    }
}

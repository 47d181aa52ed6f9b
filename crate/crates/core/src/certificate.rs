use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dyadic::Dyadic;

/// Absolute slack tolerance for every inequality check.
pub const TOLERANCE: f64 = 1e-12;

/// Outcome of checking `lhs ≤ rhs` for one named bound.
///
/// `holds ⇔ lhs ≤ rhs + TOLERANCE`. A certificate whose precondition is not
/// met is vacuous: `applicable = false`, both sides zero, `holds = true`.
/// Report-only certificates (`asserted = false`) record an observation that
/// is not a theorem and never count as failures.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundCertificate {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub applicable: bool,
    pub asserted: bool,
    pub params: BTreeMap<String, f64>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub exact: Option<ExactSides>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub note: Option<String>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub parts: Vec<BoundCertificate>,
}

/// Exact rational sides, rendered as `num/2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactSides {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl BoundCertificate {
    pub fn check(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        BoundCertificate {
            name: name.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: lhs <= rhs + TOLERANCE,
            applicable: true,
            asserted: true,
            params: BTreeMap::new(),
            exact: None,
            note: None,
            parts: Vec::new(),
        }
    }

    /// Checks `lhs ≤ rhs` exactly; the floating sides are derived.
    pub fn check_exact(name: impl Into<String>, lhs: Dyadic, rhs: Dyadic) -> Self {
        let mut c = Self::check(name, lhs.to_f64(), rhs.to_f64());
        c.exact = Some(ExactSides {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds: lhs <= rhs,
        });
        c
    }

    pub fn not_applicable(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Self::check(name, 0.0, 0.0);
        c.applicable = false;
        c.note = Some(reason.into());
        c
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn with_part(mut self, part: BoundCertificate) -> Self {
        self.parts.push(part);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Re-evaluates `holds` with a looser absolute tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.holds = self.lhs <= self.rhs + tolerance;
        self.params.insert("tolerance".into(), tolerance);
        self
    }

    pub fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    /// True when this certificate or an asserted part fails.
    pub fn is_failure(&self) -> bool {
        self.asserted && !self.holds
    }

    /// This certificate followed by all nested parts, depth first.
    pub fn flatten(&self) -> Vec<&BoundCertificate> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(c.parts.iter().rev());
        }
        out
    }

    /// Every asserted certificate in the tree holds.
    pub fn all_asserted_hold(&self) -> bool {
        self.flatten().iter().all(|c| !c.is_failure())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_matches_tolerance() {
        assert!(BoundCertificate::check("a", 1.0, 1.0).holds);
        assert!(BoundCertificate::check("a", 1.0 + 5e-13, 1.0).holds);
        assert!(!BoundCertificate::check("a", 1.0 + 1e-11, 1.0).holds);
        let c = BoundCertificate::check("a", 2.0, 1.0).report_only();
        assert!(!c.holds && !c.is_failure());
    }

    #[test]
    fn flatten_visits_parts() {
        let c = BoundCertificate::check("root", 0.0, 1.0)
            .with_part(
                BoundCertificate::check("a", 0.0, 1.0)
                    .with_part(BoundCertificate::check("b", 2.0, 1.0)),
            )
            .with_part(BoundCertificate::check("c", 0.0, 1.0));
        let names: Vec<_> = c.flatten().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["root", "a", "b", "c"]);
        assert!(!c.all_asserted_hold());
    }

    #[test]
    fn exact_sides() {
        let c = BoundCertificate::check_exact("v", Dyadic::new(3, 2), Dyadic::ONE);
        let ex = c.exact.unwrap();
        assert_eq!(ex.lhs, "3/2^2");
        assert!(ex.holds);
    }
}

//! Named identity-residual records, the primary output of the verification
//! engine and the CLI.

use serde::{Deserialize, Serialize};

/// One named identity check: residual magnitude against a tolerance.
///
/// For ordinary checks `pass` means `residual < tol`. Negative controls
/// (deliberately corrupted inputs) invert the logic: there `pass` means the
/// residual **exceeds** `tol`, guarding against vacuous tolerances.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidualReport {
    pub identity: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub control: bool,
}

impl ResidualReport {
    /// Ordinary check: pass iff the residual is finite and below tol.
    pub fn check(identity: impl Into<String>, residual: f64, tol: f64) -> Self {
        ResidualReport {
            identity: identity.into(),
            residual,
            tol,
            pass: residual.is_finite() && residual < tol,
            control: false,
        }
    }

    /// Negative control: pass iff the residual exceeds the floor.
    pub fn control(identity: impl Into<String>, residual: f64, floor: f64) -> Self {
        ResidualReport {
            identity: identity.into(),
            residual,
            tol: floor,
            pass: residual.is_finite() && residual > floor,
            control: true,
        }
    }

    /// Boolean check encoded as a 0/1 residual.
    pub fn flag(identity: impl Into<String>, ok: bool) -> Self {
        ResidualReport {
            identity: identity.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tol: 0.5,
            pass: ok,
            control: false,
        }
    }
}

/// True iff every report in the slice passes.
pub fn all_pass(reports: &[ResidualReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Largest residual among non-control entries.
pub fn max_residual(reports: &[ResidualReport]) -> f64 {
    reports
        .iter()
        .filter(|r| !r.control)
        .map(|r| r.residual)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_logic() {
        assert!(ResidualReport::check("a", 1e-12, 1e-10).pass);
        assert!(!ResidualReport::check("a", 1e-8, 1e-10).pass);
        assert!(!ResidualReport::check("a", f64::NAN, 1e-10).pass);
        assert!(ResidualReport::control("c", 1e-3, 1e-5).pass);
        assert!(!ResidualReport::control("c", 1e-7, 1e-5).pass);
    }

    #[test]
    fn json_shape() {
        let r = ResidualReport::check("wdvv[1,2]", 3.0e-9, 1e-7);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"identity\":\"wdvv[1,2]\""));
        assert!(s.contains("\"pass\":true"));
        assert!(!s.contains("control"));
        let back: ResidualReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}

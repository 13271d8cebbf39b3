/// Truncation, tolerance and contour parameters governing every numerical
/// routine in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Relative truncation threshold for series evaluation.
    pub series_tol: f64,
    /// Pass/fail threshold for identity residuals.
    pub identity_tol: f64,
    /// Number of trapezoid nodes for Cauchy differentiation contours.
    pub contour_points: usize,
    /// Contour radius as a fraction of the coordinate scale.
    pub contour_radius_scale: f64,
    /// Square cutoff max(|m|,|n|) <= K for the lattice-sum oracles.
    pub lattice_cutoff: i64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            series_tol: 1e-16,
            identity_tol: 1e-10,
            contour_points: 32,
            contour_radius_scale: 1e-2,
            lattice_cutoff: 200,
        }
    }
}

impl EvalConfig {
    /// Checks the structural invariants of the configuration.
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.series_tol > 0.0
            && self.identity_tol > 0.0
            && self.contour_radius_scale > 0.0
            && self.contour_points >= 8
            && self.contour_points % 2 == 0
            && self.lattice_cutoff > 0;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::InvalidPoint(
                "EvalConfig: tolerances must be positive, contour_points >= 8 and even".into(),
            ))
        }
    }

    /// Copy with a different number of contour nodes.
    pub fn with_contour_points(mut self, n: usize) -> Self {
        self.contour_points = n;
        self
    }

    /// Copy with a different identity tolerance.
    pub fn with_identity_tol(mut self, tol: f64) -> Self {
        self.identity_tol = tol;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        EvalConfig::default().validate().unwrap();
    }

    #[test]
    fn odd_contour_points_rejected() {
        let cfg = EvalConfig::default().with_contour_points(33);
        assert!(cfg.validate().is_err());
    }
}

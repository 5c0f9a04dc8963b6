//! Numerical tolerances shared by every module.

/// Tolerance knobs for root finding, rank decisions, membership tests and
/// point-coincidence checks.
///
/// All fields must be strictly positive; [`ToleranceConfig::validate`]
/// enforces this for configurations coming from the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Residual target `|p(ζ)| ≤ root_residual · max|coeff|` for polynomial roots.
    pub root_residual: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub rank_rel: f64,
    /// Relative residual threshold for operator-membership verdicts.
    pub membership_rel: f64,
    /// Distance below which two points count as the same point.
    pub sep: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            root_residual: 1e-12,
            rank_rel: 1e-8,
            membership_rel: 1e-8,
            sep: 1e-10,
        }
    }
}

impl ToleranceConfig {
    /// Checks that every tolerance is strictly positive and finite.
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("root_residual", self.root_residual),
            ("rank_rel", self.rank_rel),
            ("membership_rel", self.membership_rel),
            ("sep", self.sep),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(crate::Error::InvalidInput(format!(
                    "tolerance `{name}` must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

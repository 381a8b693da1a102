//! Central numeric policy: every tolerance used by the crate in one place.

use serde::{Deserialize, Serialize};

/// Tolerances shared across the numeric checks.
///
/// All structural comparisons (orthogonality, Gram preservation, Hermiticity)
/// use `structural`; the SDP engine uses `sdp_residual` for feasibility and
/// `cert_epsilon` as the certification margin on the validated dual bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NumericPolicy {
    /// Structural comparisons: orthogonality, reconstruction residuals.
    pub structural: f64,
    /// Gram-matrix deviation tolerated for "exact" symbolic sets.
    pub gram: f64,
    /// Fourier-frame phase pattern tolerance in witness recovery.
    pub frame: f64,
    /// Consensus/feasibility residual at which the SDP stops.
    pub sdp_residual: f64,
    /// A set is certified PPT-indistinguishable when the validated dual
    /// bound is below `1 - cert_epsilon`.
    pub cert_epsilon: f64,
    /// Relative Hermiticity requirement on flagged operators.
    pub hermiticity: f64,
    /// Schmidt coefficients below this are treated as zero.
    pub schmidt_trim: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy {
            structural: 1e-10,
            gram: 1e-12,
            frame: 1e-9,
            sdp_residual: 1e-7,
            cert_epsilon: 1e-3,
            hermiticity: 1e-12,
            schmidt_trim: 1e-12,
        }
    }
}

impl NumericPolicy {
    /// Policy with every structural knob scaled by `factor` (>= 1 loosens).
    pub fn scaled(factor: f64) -> Self {
        let d = NumericPolicy::default();
        NumericPolicy {
            structural: d.structural * factor,
            gram: d.gram * factor,
            frame: d.frame * factor,
            sdp_residual: d.sdp_residual * factor,
            cert_epsilon: d.cert_epsilon,
            hermiticity: d.hermiticity * factor,
            schmidt_trim: d.schmidt_trim * factor,
        }
    }
}

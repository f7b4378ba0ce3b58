use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Certification thresholds. All are dimensionless.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Closedness residual `‖dω‖∞ / (1 + ‖ω‖∞)`.
    pub closed: f64,
    /// Definiteness margin `λ_min / (tr/3)` below which a point is marginal.
    pub pd: f64,
    /// `|det F|` relative to the product of frame row norms.
    pub frame: f64,
    /// `|det Λ|` relative to the product of lattice row norms.
    pub lattice: f64,
    /// Q-field variation relative to its mean trace.
    pub hk: f64,
    /// Period drift relative to `1 + max |period|`.
    pub period: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            closed: 1e-10,
            pd: 1e-10,
            frame: 1e-8,
            lattice: 1e-8,
            hk: 1e-9,
            period: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("tolerances.closed", self.closed),
            ("tolerances.pd", self.pd),
            ("tolerances.frame", self.frame),
            ("tolerances.lattice", self.lattice),
            ("tolerances.hk", self.hk),
            ("tolerances.period", self.period),
        ];
        for (name, v) in checks {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        Ok(())
    }
}

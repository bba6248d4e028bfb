use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Action scale and particle mass. Defaults to natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem { hbar: 1.0, mass: 1.0 }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let units = UnitSystem { hbar, mass };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.hbar) && ok(self.mass) {
            Ok(())
        } else {
            Err(Error::InvalidUnits { hbar: self.hbar, mass: self.mass })
        }
    }

    /// Free-space wavenumber `sqrt(2 m E) / hbar`.
    pub fn wavenumber(&self, energy: f64) -> f64 {
        (2.0 * self.mass * energy).sqrt() / self.hbar
    }

    /// Local `kappa^2 = 2 m (V - E) / hbar^2`; negative above the barrier top.
    pub fn kappa_sq(&self, potential: f64, energy: f64) -> f64 {
        2.0 * self.mass * (potential - energy) / (self.hbar * self.hbar)
    }

    /// Inverse incident flux `m / (hbar k)`.
    pub fn inverse_flux(&self, k: f64) -> f64 {
        self.mass / (self.hbar * k)
    }
}

use crate::{Error, Result};

/// Physical scales shared by every computation.
///
/// Continuum quantities use `hbar` and `mass`; lattice quantities use
/// `lattice_dx` and `hopping`. The default is the natural-unit system
/// `hbar = mass = lattice_dx = hopping = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
    pub lattice_dx: f64,
    pub hopping: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            lattice_dx: 1.0,
            hopping: 1.0,
        }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64, lattice_dx: f64, hopping: f64) -> Result<Self> {
        let units = Self {
            hbar,
            mass,
            lattice_dx,
            hopping,
        };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.hbar) && ok(self.mass) && ok(self.lattice_dx) && ok(self.hopping)) {
            return Err(Error::InvalidParameter("units must be finite and strictly positive"));
        }
        Ok(())
    }

    /// hbar^2 / 2m, the coefficient of the continuum kinetic energy.
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

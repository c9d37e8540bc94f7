//! Maps between wave number and energy for the continuum and the
//! tight-binding chain.
//!
//! The lattice relation `E = -t cos(K dx)` is two-to-one; which preimage is
//! meant is fixed by a [`BoundaryBranch`].

#[allow(unused_imports)]
use num_traits::Float;

use crate::{ComplexEnergy, ComplexWaveNumber, Units, C64, I};

/// Energies within this distance of the real axis (relative to the hopping)
/// are treated as real when choosing the lattice branch.
pub const REAL_AXIS_SNAP: f64 = 1e-12;

/// Which of the two lattice wave numbers belongs to an energy.
///
/// `Retarded` is the outgoing (decaying-in-time) continuation: for complex
/// energies it selects `Re K in (0, pi/dx)`. `Advanced` is its time reverse,
/// `K_adv(E) = -conj(K_ret(conj E))`. On the real axis outside the band
/// both select the spatially decaying solution `|e^{iK dx}| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryBranch {
    #[default]
    Retarded,
    Advanced,
}

/// `E = hbar^2 K^2 / 2m`.
pub fn continuum_dispersion(k: ComplexWaveNumber, units: &Units) -> ComplexEnergy {
    let kk = k.to_complex();
    ComplexEnergy::from_complex(kk * kk * units.kinetic_scale())
}

/// `E = -t cos(K dx)`.
pub fn lattice_dispersion(k: ComplexWaveNumber, units: &Units) -> ComplexEnergy {
    let phase = k.to_complex() * units.lattice_dx;
    ComplexEnergy::from_complex(-phase.cos() * units.hopping)
}

/// `z = e^{iK dx}` on the requested branch, given `E = -t (z + 1/z) / 2`.
pub fn outgoing_factor(energy: C64, hopping: f64, branch: BoundaryBranch) -> C64 {
    match branch {
        BoundaryBranch::Retarded => retarded_factor(energy, hopping),
        BoundaryBranch::Advanced => retarded_factor(energy.conj(), hopping).conj(),
    }
}

fn retarded_factor(energy: C64, hopping: f64) -> C64 {
    let e = energy / hopping;
    let w = C64::new(1.0, 0.0) - e * e;
    // sqrt(1 - e^2) on the principal branch equals sin(K dx) whenever
    // Re K dx lies in (0, pi); on the cut (real e, |e| > 1) take the limit
    // from above, which is the bound-state solution.
    let root = if e.im.abs() <= REAL_AXIS_SNAP && e.re.abs() > 1.0 {
        let magnitude = (e.re * e.re - 1.0).sqrt();
        C64::new(0.0, -e.re.signum() * magnitude)
    } else {
        w.sqrt()
    };
    -e + I * root
}

/// Inverse of [`lattice_dispersion`] on the requested branch.
pub fn lattice_wavenumber(energy: ComplexEnergy, units: &Units, branch: BoundaryBranch) -> ComplexWaveNumber {
    let z = outgoing_factor(energy.to_complex(), units.hopping, branch);
    ComplexWaveNumber::from_complex(-I * z.ln() / units.lattice_dx)
}

/// `K` with `e^{iK dx} = z`, taking the principal logarithm.
pub fn wavenumber_from_factor(z: C64, units: &Units) -> ComplexWaveNumber {
    ComplexWaveNumber::from_complex(-I * z.ln() / units.lattice_dx)
}

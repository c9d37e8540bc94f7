//! Complex wave numbers, complex energies and classified resonant states.

use crate::C64;

/// Width below which a pole counts as a (real-energy) bound or anti-bound state.
pub const GAMMA_THRESHOLD: f64 = 1e-10;

/// `K = k - i kappa`. A decaying resonance has `k > 0` and `kappa > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexWaveNumber {
    pub k: f64,
    pub kappa: f64,
}

impl ComplexWaveNumber {
    pub fn new(k: f64, kappa: f64) -> Self {
        Self { k, kappa }
    }

    pub fn from_complex(z: C64) -> Self {
        Self { k: z.re, kappa: -z.im }
    }

    pub fn to_complex(self) -> C64 {
        C64::new(self.k, -self.kappa)
    }

    pub fn is_finite(&self) -> bool {
        self.k.is_finite() && self.kappa.is_finite()
    }
}

/// `E = epsilon - i Gamma/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    pub epsilon: f64,
    pub half_gamma: f64,
}

impl ComplexEnergy {
    pub fn new(epsilon: f64, half_gamma: f64) -> Self {
        Self {
            epsilon,
            half_gamma,
        }
    }

    pub fn from_complex(z: C64) -> Self {
        Self {
            epsilon: z.re,
            half_gamma: -z.im,
        }
    }

    pub fn to_complex(self) -> C64 {
        C64::new(self.epsilon, -self.half_gamma)
    }

    pub fn gamma(&self) -> f64 {
        2.0 * self.half_gamma
    }

    pub fn is_finite(&self) -> bool {
        self.epsilon.is_finite() && self.half_gamma.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateKind {
    Bound,
    AntiBound,
    Resonant,
    AntiResonant,
}

impl StateKind {
    /// Classifies a pole from its wave number and energy.
    ///
    /// `|Gamma| <= GAMMA_THRESHOLD` gives a real-energy state: bound when the
    /// wave function decays (`Im K > 0`), anti-bound otherwise. A finite width
    /// is resonant when it decays in time (`Gamma > 0`).
    pub fn classify(wave_number: ComplexWaveNumber, energy: ComplexEnergy) -> Self {
        let gamma = energy.gamma();
        if gamma.abs() <= GAMMA_THRESHOLD {
            if wave_number.kappa < 0.0 {
                StateKind::Bound
            } else {
                StateKind::AntiBound
            }
        } else if gamma > 0.0 {
            StateKind::Resonant
        } else {
            StateKind::AntiResonant
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StateKind::Bound => "bound",
            StateKind::AntiBound => "anti_bound",
            StateKind::Resonant => "resonant",
            StateKind::AntiResonant => "anti_resonant",
        }
    }
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        }
    }
}

/// A pole of some open system together with the residual of the equation
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantState {
    pub wave_number: ComplexWaveNumber,
    pub energy: ComplexEnergy,
    pub parity: Parity,
    pub kind: StateKind,
    pub residual: f64,
}

impl ResonantState {
    /// Builds a state and classifies it with [`StateKind::classify`].
    pub fn new(wave_number: C64, energy: C64, parity: Parity, residual: f64) -> Self {
        let wave_number = ComplexWaveNumber::from_complex(wave_number);
        let energy = ComplexEnergy::from_complex(energy);
        Self {
            wave_number,
            energy,
            parity,
            kind: StateKind::classify(wave_number, energy),
            residual,
        }
    }

    pub fn k(&self) -> C64 {
        self.wave_number.to_complex()
    }

    pub fn e(&self) -> C64 {
        self.energy.to_complex()
    }

    pub fn gamma(&self) -> f64 {
        self.energy.gamma()
    }
}

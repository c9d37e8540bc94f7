//! Flux and lifetime identities: the imaginary part of a segment energy
//! expectation against the momentum flux through the segment boundary, the
//! width-flux relation of an exact resonance, and particle number in a
//! volume expanding with the escaping wave.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::delta_well::{siegert_function, DoubleDeltaEigenfunction, DoubleDeltaModel};
use crate::{Error, ResonantState, Result, StateKind, Units, C64};

/// Largest `|F(K)|` accepted by [`gamma_flux_identity`] for a resonant input.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Uniformly sampled complex wave function.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWaveFunction {
    pub x_min: f64,
    pub dx: f64,
    pub values: Vec<C64>,
}

impl SampledWaveFunction {
    pub fn new(x_min: f64, dx: f64, values: Vec<C64>) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) || !x_min.is_finite() {
            return Err(Error::InvalidParameter("grid spacing must be positive"));
        }
        if values.len() < 5 {
            return Err(Error::InvalidParameter("need at least 5 samples"));
        }
        Ok(Self { x_min, dx, values })
    }

    /// Builds from explicit abscissae, which must be uniform to `1e-12` relative.
    pub fn from_grid(grid: &[f64], values: Vec<C64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if grid.len() < 5 {
            return Err(Error::InvalidParameter("need at least 5 samples"));
        }
        let dx = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
        let scale = grid[0].abs().max(grid[grid.len() - 1].abs()).max(dx);
        for (i, &x) in grid.iter().enumerate() {
            if (x - (grid[0] + dx * i as f64)).abs() > 1e-12 * scale {
                return Err(Error::InvalidParameter("grid must be uniform"));
            }
        }
        Self::new(grid[0], dx, values)
    }

    /// Samples `f` at `n` equally spaced points on `[x_min, x_max]`.
    pub fn from_fn(x_min: f64, x_max: f64, n: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        if n < 5 || !(x_max > x_min) {
            return Err(Error::InvalidParameter("need at least 5 samples on a nonempty interval"));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let values = (0..n).map(|i| f(x_min + dx * i as f64)).collect();
        Self::new(x_min, dx, values)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.dx * i as f64
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    /// Grid index of `x`, which must be a node inside the grid.
    fn node(&self, x: f64, half_width: f64) -> Result<usize> {
        let pos = (x - self.x_min) / self.dx;
        let i = pos.round();
        if (pos - i).abs() > 1e-6 || i < 0.0 || i as usize >= self.values.len() {
            return Err(Error::SegmentOutOfGrid { half_width });
        }
        Ok(i as usize)
    }

    fn segment(&self, half_width: f64) -> Result<(usize, usize)> {
        if !(half_width > 0.0) {
            return Err(Error::SegmentOutOfGrid { half_width });
        }
        let lo = self.node(-half_width, half_width)?;
        let hi = self.node(half_width, half_width)?;
        if hi < lo + 2 {
            return Err(Error::SegmentOutOfGrid { half_width });
        }
        Ok((lo, hi))
    }

    /// Second-order first derivative at node `i`.
    fn derivative(&self, i: usize) -> C64 {
        let v = &self.values;
        let n = v.len();
        let h = self.dx;
        if i == 0 {
            (v[0] * -3.0 + v[1] * 4.0 - v[2]) / (2.0 * h)
        } else if i == n - 1 {
            (v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) / (2.0 * h)
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        }
    }

    /// Second-order second derivative at node `i`.
    fn second_derivative(&self, i: usize) -> C64 {
        let v = &self.values;
        let n = v.len();
        let h2 = self.dx * self.dx;
        if i == 0 {
            (v[0] * 2.0 - v[1] * 5.0 + v[2] * 4.0 - v[3]) / h2
        } else if i == n - 1 {
            (v[n - 1] * 2.0 - v[n - 2] * 5.0 + v[n - 3] * 4.0 - v[n - 4]) / h2
        } else {
            (v[i + 1] - v[i] * 2.0 + v[i - 1]) / h2
        }
    }
}

/// `int_{-L}^{L} psi^* (-hbar^2/2m psi'' + V psi) dx` by the trapezoid rule.
pub fn energy_expectation(
    psi: &SampledWaveFunction,
    potential: &dyn Fn(f64) -> f64,
    half_width: f64,
    units: &Units,
) -> Result<C64> {
    let (lo, hi) = psi.segment(half_width)?;
    let c = units.kinetic_scale();
    let mut sum = C64::new(0.0, 0.0);
    for i in lo..=hi {
        let v = psi.values[i];
        let h_psi = psi.second_derivative(i) * -c + v * potential(psi.x(i));
        let w = if i == lo || i == hi { 0.5 } else { 1.0 };
        sum += v.conj() * h_psi * w;
    }
    Ok(sum * psi.dx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentReport {
    pub half_width: f64,
    pub energy_expectation: C64,
    /// `Re <psi|p_n|psi>` summed over both boundary points.
    pub boundary_flux: f64,
    /// `|Im <H> + (hbar/2m) flux|`.
    pub imbalance: f64,
}

/// Momentum flux through `x = +-L` compared with the segment energy.
pub fn boundary_flux(
    psi: &SampledWaveFunction,
    potential: &dyn Fn(f64) -> f64,
    half_width: f64,
    units: &Units,
) -> Result<SegmentReport> {
    let (lo, hi) = psi.segment(half_width)?;
    let current = |i: usize| (psi.values[i].conj() * psi.derivative(i)).im;
    let flux = units.hbar * (current(hi) - current(lo));
    let energy = energy_expectation(psi, potential, half_width, units)?;
    Ok(SegmentReport {
        half_width,
        energy_expectation: energy,
        boundary_flux: flux,
        imbalance: (energy.im + units.hbar / (2.0 * units.mass) * flux).abs(),
    })
}

/// `Gamma = 2 hbar^2 k kappa / m` for a continuum wave number.
pub fn width_from_wavenumber(k: C64, units: &Units) -> f64 {
    -2.0 * units.hbar * units.hbar * k.re * k.im / units.mass
}

/// Lattice analogue: `Gamma = 2 t sin(k dx) sinh(kappa dx)`.
pub fn lattice_width_from_wavenumber(k: C64, units: &Units) -> f64 {
    let a = k.re * units.lattice_dx;
    let b = -k.im * units.lattice_dx;
    2.0 * units.hopping * a.sin() * b.sinh()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFluxIdentity {
    /// `(Gamma/2) int_{-L}^{L} |psi|^2`.
    pub lhs: f64,
    /// `(hbar^2 k / 2m) (|psi(L)|^2 + |psi(-L)|^2)`.
    pub rhs: f64,
    pub relative_gap: f64,
}

/// Evaluates the width-flux identity with the exact eigenfunction and
/// closed-form integrals.
pub fn gamma_flux_identity(
    state: &ResonantState,
    model: &DoubleDeltaModel,
    half_width: f64,
    units: &Units,
) -> Result<GammaFluxIdentity> {
    if !(half_width > model.half_separation) {
        return Err(Error::InvalidParameter("L must exceed l"));
    }
    let k = state.k();
    if matches!(state.kind, StateKind::Resonant | StateKind::AntiResonant) {
        let (f, _) = siegert_function(model, state.parity, k);
        if !(f.norm() < ROOT_TOLERANCE) {
            return Err(Error::NotARoot(f.norm()));
        }
    }
    let psi = DoubleDeltaEigenfunction::new(model, k, state.parity);
    let lhs = 0.5 * state.gamma() * psi.norm_between(-half_width, half_width);
    let rhs = units.kinetic_scale() * k.re * psi.boundary_density(half_width);
    let scale = lhs.abs().max(rhs.abs());
    let relative_gap = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(GammaFluxIdentity {
        lhs,
        rhs,
        relative_gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeSample {
    pub t: f64,
    pub half_width: f64,
    /// `e^{-Gamma t/hbar} int_{-L}^{L} |psi|^2`.
    pub number: f64,
    /// The same with the integral replaced by its growing tail term
    /// `(|B|^2 + |C|^2) e^{2 kappa L} / 2 kappa`.
    pub tail_number: f64,
}

/// Particle number inside `|x| < L(t) = hbar k t / m`.
pub fn expanding_volume_number(
    state: &ResonantState,
    model: &DoubleDeltaModel,
    t_grid: &[f64],
    units: &Units,
) -> Result<Vec<VolumeSample>> {
    if state.kind != StateKind::Resonant {
        return Err(Error::NotDecaying);
    }
    if t_grid.iter().any(|&t| !(t > 0.0)) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be positive and increasing"));
    }
    let k = state.k();
    let kappa = -k.im;
    let psi = DoubleDeltaEigenfunction::new(model, k, state.parity);
    let amp = psi.outer_left.norm_sqr() + psi.outer_right.norm_sqr();
    let velocity = units.hbar * k.re / units.mass;
    Ok(t_grid
        .iter()
        .map(|&t| {
            let l = velocity * t;
            let decay = (-state.gamma() * t / units.hbar).exp();
            VolumeSample {
                t,
                half_width: l,
                number: decay * psi.norm_between(-l, l),
                tail_number: amp * (2.0 * kappa * l - state.gamma() * t / units.hbar).exp() / (2.0 * kappa),
            }
        })
        .collect())
}

/// Particle number inside a fixed window `|x| < L`, which simply decays.
pub fn fixed_volume_number(
    state: &ResonantState,
    model: &DoubleDeltaModel,
    half_width: f64,
    t_grid: &[f64],
    units: &Units,
) -> Vec<(f64, f64)> {
    let psi = DoubleDeltaEigenfunction::new(model, state.k(), state.parity);
    let n0 = psi.norm_between(-half_width, half_width);
    t_grid
        .iter()
        .map(|&t| (t, n0 * (-state.gamma() * t / units.hbar).exp()))
        .collect()
}

/// Normalisation `1/sqrt(2 kappa)` of a pure outgoing tail under a Gaussian
/// convergence factor.
pub fn regularized_norm(state: &ResonantState) -> Result<f64> {
    let kappa = state.wave_number.kappa;
    if !(kappa > 0.0) {
        return Err(Error::NonPositiveKappa);
    }
    Ok(1.0 / (2.0 * kappa).sqrt())
}

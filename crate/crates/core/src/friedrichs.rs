//! Tight-binding chain with an adatom coupled to the origin.
//!
//! Even states `psi(x) = B z^{|x|}` (with `z = e^{iK dx}`) and adatom
//! amplitude `F` exist when `z` solves the quartic
//! `z^4 + 2 Ed z^3 + 4 g^2 z^2 - 2 Ed z - 1 = 0`
//! (energies in units of the hopping). Odd states vanish at the origin and do
//! not feel the adatom, so they are not treated here.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dispersion::wavenumber_from_factor;
use crate::dynamics::WaveField;
use crate::lattice::{Adatom, LatticeModel};
use crate::{ComplexEnergy, ComplexWaveNumber, Error, Parity, ResonantState, Result, StateKind, Units, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedrichsModel {
    /// `g / t`.
    pub g_tilde: f64,
    /// `E_d / t`.
    pub ed_tilde: f64,
    pub hopping: f64,
}

impl FriedrichsModel {
    pub fn new(g_tilde: f64, ed_tilde: f64, hopping: f64) -> Result<Self> {
        if !(hopping.is_finite() && hopping > 0.0) {
            return Err(Error::InvalidParameter("hopping must be positive"));
        }
        if !(g_tilde.is_finite() && g_tilde >= 0.0) || !ed_tilde.is_finite() {
            return Err(Error::InvalidParameter("need finite g >= 0 and finite E_d"));
        }
        Ok(Self {
            g_tilde,
            ed_tilde,
            hopping,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.g_tilde * self.hopping
    }

    pub fn level(&self) -> f64 {
        self.ed_tilde * self.hopping
    }

    /// Ascending coefficients of the quartic in `z`.
    pub fn quartic(&self) -> [f64; 5] {
        let (g, ed) = (self.g_tilde, self.ed_tilde);
        [-1.0, -2.0 * ed, 4.0 * g * g, 2.0 * ed, 1.0]
    }

    /// The truncated chain on `-L..=L` carrying this adatom.
    pub fn lattice(&self, half_width: usize) -> Result<LatticeModel> {
        LatticeModel::free(half_width, self.hopping)?.with_adatom(Adatom {
            coupling: self.coupling(),
            level: self.level(),
        })
    }
}

pub fn quartic_residual(model: &FriedrichsModel, z: C64) -> f64 {
    let c = model.quartic();
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedrichsState {
    /// `e^{iK dx}`.
    pub z: C64,
    pub wave_number: ComplexWaveNumber,
    pub energy: ComplexEnergy,
    pub kind: StateKind,
    /// Chain amplitude at the origin `B`.
    pub chain_amplitude: C64,
    /// Adatom amplitude `F`; one unless the adatom decouples.
    pub adatom_amplitude: C64,
    pub residual: f64,
}

impl FriedrichsState {
    pub fn b_over_f(&self) -> C64 {
        self.chain_amplitude / self.adatom_amplitude
    }

    pub fn to_resonant(&self) -> ResonantState {
        ResonantState {
            wave_number: self.wave_number,
            energy: self.energy,
            parity: Parity::Even,
            kind: self.kind,
            residual: self.residual,
        }
    }
}

/// Root label in canonical order.
pub fn root_label(index: usize) -> char {
    (b'a' + index as u8) as char
}

fn state_from_factor(model: &FriedrichsModel, z: C64) -> FriedrichsState {
    let t = model.hopping;
    let units = Units {
        hopping: t,
        ..Units::default()
    };
    let e = -(z + z.inv()) * (0.5 * t);
    let k = wavenumber_from_factor(z, &units);
    let energy = ComplexEnergy::from_complex(e);
    // Two equivalent connection conditions: F (E - E_d) = g B at the adatom
    // and B (E + t z) = g F at the origin. Use the better conditioned one.
    let via_adatom = e - model.level();
    let via_origin = e + z * t;
    let g = model.coupling();
    let (b, f) = if via_adatom.norm() <= 1e-14 * t && via_origin.norm() <= 1e-14 * t {
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    } else if via_origin.norm() >= via_adatom.norm() {
        (C64::new(g, 0.0) / via_origin, C64::new(1.0, 0.0))
    } else {
        (via_adatom / g, C64::new(1.0, 0.0))
    };
    FriedrichsState {
        z,
        wave_number: k,
        energy,
        kind: StateKind::classify(k, energy),
        chain_amplitude: b,
        adatom_amplitude: f,
        residual: quartic_residual(model, z),
    }
}

/// The four quartic roots, ordered by kind (bound, anti-bound, resonant,
/// anti-resonant) and then by decreasing `Re K`; labels `a`..`d` follow this
/// order.
pub fn quartic_roots(model: &FriedrichsModel) -> Result<Vec<FriedrichsState>> {
    let mut roots = crate::poly::real_roots_of(&model.quartic())?;
    for z in roots.iter_mut() {
        if z.im.abs() <= 1e-15 * z.norm() {
            z.im = 0.0;
        }
    }
    let mut states: Vec<FriedrichsState> = roots.into_iter().map(|z| state_from_factor(model, z)).collect();
    states.sort_by(|a, b| {
        a.kind
            .cmp(&b.kind)
            .then(b.wave_number.k.total_cmp(&a.wave_number.k))
    });
    Ok(states)
}

/// `min_+- |(E - E_d) sqrt(E^2 - t^2) -+ g^2|`.
pub fn energy_plane_check(state: &FriedrichsState, model: &FriedrichsModel) -> f64 {
    let e = state.energy.to_complex();
    let t = model.hopping;
    let g2 = model.coupling() * model.coupling();
    let lhs = (e - model.level()) * (e * e - t * t).sqrt();
    (lhs - g2).norm().min((lhs + g2).norm())
}

/// `B z^{|x|}` on `-L..=L` plus the adatom amplitude.
pub fn eigenfunction(state: &FriedrichsState, half_width: usize) -> WaveField {
    let l = half_width as i64;
    let sites = (-l..=l)
        .map(|x| state.chain_amplitude * state.z.powi(x.abs() as i32))
        .collect();
    WaveField {
        sites,
        adatom: Some(state.adatom_amplitude),
        time: 0.0,
    }
}

/// Largest `|(H psi)(x) - E psi(x)|` over interior sites and the adatom.
pub fn stencil_residual(field: &WaveField, model: &FriedrichsModel, energy: C64) -> f64 {
    let t = model.hopping;
    let n = field.sites.len();
    let origin = n / 2;
    let f = field.adatom.unwrap_or(C64::new(0.0, 0.0));
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        let mut h = (field.sites[i - 1] + field.sites[i + 1]) * (-0.5 * t);
        if i == origin {
            h += f * model.coupling();
        }
        worst = worst.max((h - field.sites[i] * energy).norm());
    }
    let h_d = field.sites[origin] * model.coupling() + f * model.level();
    worst.max((h_d - f * energy).norm())
}

/// All four roots at one parameter value, in tracked order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub ed_tilde: f64,
    pub roots: Vec<FriedrichsState>,
}

/// Solves the quartic along `ed_values` (at fixed `g_tilde`) and orders the
/// roots at every point to minimise the total z-plane displacement from the
/// previous point. The first point uses the canonical order.
pub fn sweep(g_tilde: f64, hopping: f64, ed_values: &[f64]) -> Result<Vec<SweepPoint>> {
    let mut out: Vec<SweepPoint> = Vec::with_capacity(ed_values.len());
    for &ed in ed_values {
        let model = FriedrichsModel::new(g_tilde, ed, hopping)?;
        let mut roots = quartic_roots(&model)?;
        if let Some(prev) = out.last() {
            let prev_z: Vec<C64> = prev.roots.iter().map(|s| s.z).collect();
            roots = track(&prev_z, roots);
        }
        out.push(SweepPoint { ed_tilde: ed, roots });
    }
    Ok(out)
}

/// Reorders `next` so that `next[i]` continues `prev[i]`, by exhaustive
/// search over the assignments.
pub fn track(prev: &[C64], next: Vec<FriedrichsState>) -> Vec<FriedrichsState> {
    let n = prev.len().min(next.len());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_cost = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let cost: f64 = p.iter().enumerate().map(|(i, &j)| (prev[i] - next[j].z).norm_sqr()).sum();
        if cost < best_cost {
            best_cost = cost;
            best = p.to_vec();
        }
    });
    best.into_iter().map(|j| next[j]).collect()
}

fn permute(p: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

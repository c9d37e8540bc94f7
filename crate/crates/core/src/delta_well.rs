//! Exact resonances of the repulsive double-delta barrier
//! `V(x) = V0 (delta(x + l) + delta(x - l))`, with `a = hbar^2 / (2 m V0)`.
//!
//! Resonant wave numbers solve `1 - 2iKa = -+ e^{2iKl}` (upper sign even,
//! lower sign odd). The S matrix shares the same poles through its
//! denominator `(2iKa - 1)^2 - e^{4iKl}`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dispersion::continuum_dispersion;
use crate::newton::{self, NewtonOptions};
use crate::{ComplexWaveNumber, Error, Parity, ResonantState, Result, Units, C64, I};

/// Two resonances closer than this (in units of `1/l`) are the same root.
pub const DEDUP_DISTANCE: f64 = 1e-8;

/// Denominator magnitude below which [`s_matrix`] reports a pole.
pub const POLE_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDeltaModel {
    /// `a / l`; small values mean strong barriers.
    pub a_over_l: f64,
    /// Half the separation between the two deltas.
    pub half_separation: f64,
}

impl DoubleDeltaModel {
    pub fn new(a_over_l: f64, half_separation: f64) -> Result<Self> {
        if !(a_over_l.is_finite() && a_over_l > 0.0) {
            return Err(Error::InvalidParameter("a/l must be positive"));
        }
        if !(half_separation.is_finite() && half_separation > 0.0) {
            return Err(Error::InvalidParameter("l must be positive"));
        }
        Ok(Self {
            a_over_l,
            half_separation,
        })
    }

    /// Model with `l = 1`.
    pub fn with_ratio(a_over_l: f64) -> Result<Self> {
        Self::new(a_over_l, 1.0)
    }

    /// The length `a = hbar^2 / (2 m V0)`.
    pub fn a(&self) -> f64 {
        self.a_over_l * self.half_separation
    }

    /// `V0` for the given units.
    pub fn strength(&self, units: &Units) -> f64 {
        units.kinetic_scale() / self.a()
    }
}

/// `F(K) = 1 - 2iKa + s e^{2iKl}` with `s = +1` (even) or `-1` (odd),
/// together with `F'(K)`.
pub fn siegert_function(model: &DoubleDeltaModel, parity: Parity, k: C64) -> (C64, C64) {
    let a = model.a();
    let l = model.half_separation;
    let s = match parity {
        Parity::Odd => -1.0,
        _ => 1.0,
    };
    let e = (I * k * (2.0 * l)).exp();
    let f = C64::new(1.0, 0.0) - I * k * (2.0 * a) + e * s;
    let df = -I * (2.0 * a) + I * e * (2.0 * l * s);
    (f, df)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    /// Window on `xi = Re K * l`, open at the lower end.
    pub xi_min: f64,
    pub xi_max: f64,
    /// Newton stops once `|F(K)| < tol`.
    pub tol: f64,
    /// Also return the anti-resonant partners `K' = -conj(K)`.
    pub include_mirror: bool,
}

impl RootSearch {
    pub fn window(xi_min: f64, xi_max: f64) -> Self {
        Self {
            xi_min,
            xi_max,
            tol: 1e-13,
            include_mirror: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiegertRoots {
    /// Sorted by `Re K`.
    pub states: Vec<ResonantState>,
    /// Seeds from which Newton did not converge.
    pub unconverged_seeds: usize,
    /// Set when the modulus curve has a closed branch near the origin, the
    /// situation in which the lowest even resonance is absent.
    pub closed_branch: bool,
}

/// Decay seeds `eta = kappa l` tried at every real-part seed. The roots move
/// deeper into the lower half plane as `a/l` grows, roughly like
/// `ln(2 |K| a) / 2l`.
const ETA_SEEDS: [f64; 10] = [0.01, 0.1, 0.3, 0.6, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0];

/// All resonances of one parity whose `Re K * l` lies in the window.
///
/// Newton is seeded on a lattice of `xi` values spaced `pi/8` apart (from
/// just inside the window to past its end) times [`ETA_SEEDS`]; converged
/// roots with `Im K < 0` inside the window are deduplicated and sorted.
pub fn siegert_roots(
    model: &DoubleDeltaModel,
    parity: Parity,
    search: &RootSearch,
    units: &Units,
) -> Result<SiegertRoots> {
    if matches!(parity, Parity::None) {
        return Err(Error::InvalidParameter("double-delta roots need an explicit parity"));
    }
    if !(search.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let xi_min = search.xi_min.max(0.0);
    if !(search.xi_max > xi_min) || !search.xi_max.is_finite() {
        return Err(Error::EmptyWindow);
    }
    let l = model.half_separation;
    let opts = NewtonOptions {
        tol: search.tol,
        max_iter: 60,
    };
    let spacing = core::f64::consts::PI / 8.0;
    let n_xi = ((search.xi_max - xi_min) / spacing).ceil() as usize + 2;

    let mut found: Vec<C64> = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();
    let mut unconverged = 0;
    for i in 0..n_xi {
        let xi = xi_min + spacing * (i as f64 + 0.5);
        for &eta in &ETA_SEEDS {
            let seed = C64::new(xi, -eta) / l;
            let Some(root) = newton::solve(|k| siegert_function(model, parity, k), seed, &opts) else {
                unconverged += 1;
                continue;
            };
            let kl = root.root * l;
            let inside = kl.re > xi_min && kl.re <= search.xi_max && kl.re > 1e-9;
            if !inside || kl.im >= 0.0 {
                continue;
            }
            if found.iter().any(|k| (k - root.root).norm() * l < DEDUP_DISTANCE) {
                continue;
            }
            found.push(root.root);
            residuals.push(root.residual);
        }
    }

    let mut states: Vec<ResonantState> = Vec::with_capacity(found.len() * 2);
    for (k, residual) in found.into_iter().zip(residuals) {
        let e = continuum_dispersion(ComplexWaveNumber::from_complex(k), units).to_complex();
        states.push(ResonantState::new(k, e, parity, residual));
        if search.include_mirror {
            let mirror = -k.conj();
            let (f, _) = siegert_function(model, parity, mirror);
            let e = continuum_dispersion(ComplexWaveNumber::from_complex(mirror), units).to_complex();
            states.push(ResonantState::new(mirror, e, parity, f.norm()));
        }
    }
    states.sort_by(|a, b| a.wave_number.k.total_cmp(&b.wave_number.k));
    Ok(SiegertRoots {
        states,
        unconverged_seeds: unconverged,
        closed_branch: modulus_curve_splits(model),
    })
}

/// Anti-bound states (`K = -i kappa`, `kappa > 0`) of one parity with
/// `kappa l <= eta_max`, located by sign changes on a fine grid and refined
/// by bisection.
pub fn anti_bound_roots(model: &DoubleDeltaModel, parity: Parity, eta_max: f64, units: &Units) -> Vec<ResonantState> {
    let l = model.half_separation;
    let g = |eta: f64| siegert_function(model, parity, C64::new(0.0, -eta / l)).0.re;
    let n = 4000;
    let mut out = Vec::new();
    let mut prev_eta = 1e-9;
    let mut prev = g(prev_eta);
    for i in 1..=n {
        let eta = eta_max * i as f64 / n as f64;
        let cur = g(eta);
        if prev == 0.0 || prev.signum() != cur.signum() {
            let (mut lo, mut hi) = (prev_eta, eta);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(lo).signum() == g(mid).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-16 * hi {
                    break;
                }
            }
            let eta = 0.5 * (lo + hi);
            let k = C64::new(0.0, -eta / l);
            let e = continuum_dispersion(ComplexWaveNumber::from_complex(k), units).to_complex();
            out.push(ResonantState::new(k, e, parity, g(eta).abs()));
        }
        prev_eta = eta;
        prev = cur;
    }
    out
}

/// One abscissa of the two real curves whose crossings are the resonances.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityCurveSample {
    pub xi: f64,
    /// `eta = l/2a + xi / tan(2 xi)` (phase condition).
    pub eta_fixed_point: f64,
    /// All `eta > 0` with `xi = (l/2a) sqrt(e^{4 eta} - (1 - 2a eta / l)^2)`
    /// (modulus condition), ascending. One value on the unbounded branch,
    /// two more where the closed branch near the origin is crossed.
    pub eta_circle: Vec<f64>,
}

fn modulus_excess(model: &DoubleDeltaModel, eta: f64) -> f64 {
    let c = 2.0 * model.a_over_l;
    (4.0 * eta).exp() - (1.0 - c * eta).powi(2)
}

/// Samples the phase and modulus curves on `xi_grid` (each `xi > 0`).
pub fn parity_curves(model: &DoubleDeltaModel, xi_grid: &[f64]) -> Result<Vec<ParityCurveSample>> {
    if xi_grid.iter().any(|&xi| !(xi > 0.0)) {
        return Err(Error::InvalidParameter("xi grid values must be positive"));
    }
    let inv = 1.0 / (2.0 * model.a_over_l);
    let c = 2.0 * model.a_over_l;
    Ok(xi_grid
        .iter()
        .map(|&xi| {
            let eta_fixed_point = inv + xi / (2.0 * xi).tan();
            // (l/2a)^2 h(eta) = xi^2  <=>  h(eta) = (c xi)^2
            let target = (c * xi).powi(2);
            let h = |eta: f64| modulus_excess(model, eta) - target;
            // h grows without bound; find where it is increasing and positive
            let mut eta_hi = 1.0;
            while h(eta_hi) <= 0.0 || (4.0 * eta_hi).exp() < 8.0 * (1.0 + c * eta_hi).powi(2) {
                eta_hi *= 1.5;
            }
            let n = 4000;
            let mut roots = Vec::new();
            let mut prev_eta = 0.0;
            let mut prev = h(0.0);
            for i in 1..=n {
                let eta = eta_hi * i as f64 / n as f64;
                let cur = h(eta);
                if prev.signum() != cur.signum() {
                    let (mut lo, mut hi) = (prev_eta, eta);
                    for _ in 0..100 {
                        let mid = 0.5 * (lo + hi);
                        if h(lo).signum() == h(mid).signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    roots.push(0.5 * (lo + hi));
                }
                prev_eta = eta;
                prev = cur;
            }
            ParityCurveSample {
                xi,
                eta_fixed_point,
                eta_circle: roots,
            }
        })
        .collect())
}

/// Whether the modulus curve splits into a closed branch near the origin
/// plus an unbounded branch, i.e. `e^{4 eta} < (1 - 2a eta / l)^2` somewhere
/// on `eta > 0`.
pub fn modulus_curve_splits(model: &DoubleDeltaModel) -> bool {
    // The only interior minimum of e^{4eta} - (1 - c eta)^2 sits where
    // 1 - c eta = -c/2, i.e. eta = 1/c + 1/2.
    let c = 2.0 * model.a_over_l;
    modulus_excess(model, 1.0 / c + 0.5) < 0.0
}

/// The value of `a/l` above which the modulus curve splits, by bisection on
/// `ln(c/2) - 1 - 2/c = 0` with `c = 2a/l` (tangency of the two terms).
pub fn critical_ratio() -> f64 {
    let f = |c: f64| (0.5 * c).ln() - 1.0 - 2.0 / c;
    let (mut lo, mut hi) = (2.0 * core::f64::consts::E, 20.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.25 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub reflection: C64,
    pub transmission: C64,
}

/// `(2iKa - 1)^2 - e^{4iKl}`.
pub fn s_matrix_denominator(model: &DoubleDeltaModel, k: C64) -> C64 {
    let a = model.a();
    let l = model.half_separation;
    let u = I * k * (2.0 * a) - 1.0;
    u * u - (I * k * (4.0 * l)).exp()
}

/// Reflection and transmission amplitudes, analytically continued to
/// complex `K`.
pub fn s_matrix(model: &DoubleDeltaModel, k: C64) -> Result<ScatteringAmplitudes> {
    let a = model.a();
    let l = model.half_separation;
    let d = s_matrix_denominator(model, k);
    if d.norm() < POLE_THRESHOLD {
        return Err(Error::AtPole(d.norm()));
    }
    let phase = k * (2.0 * l);
    let reflection = (I * k * (4.0 * a) * phase.cos() + I * phase.sin() * 2.0) / d;
    let transmission = -(k * k) * (4.0 * a * a) / d;
    Ok(ScatteringAmplitudes {
        reflection,
        transmission,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionSample {
    pub k: f64,
    pub transmission: f64,
}

/// `T = |t(k)|^2` on a real grid. Grid points that hit a pole of the
/// continued formula (only `k = 0`) are reported as `T = 0`.
pub fn transmission_scan(model: &DoubleDeltaModel, k_grid: &[f64]) -> Vec<TransmissionSample> {
    k_grid
        .iter()
        .map(|&k| TransmissionSample {
            k,
            transmission: s_matrix(model, C64::new(k, 0.0))
                .map(|s| s.transmission.norm_sqr())
                .unwrap_or(0.0),
        })
        .collect()
}

/// Indices of strict interior local maxima.
pub fn local_maxima(samples: &[TransmissionSample]) -> Vec<usize> {
    (1..samples.len().saturating_sub(1))
        .filter(|&i| {
            samples[i].transmission > samples[i - 1].transmission
                && samples[i].transmission >= samples[i + 1].transmission
        })
        .collect()
}

/// The resonant eigenfunction of a root, normalised to `F = 1`:
/// `B e^{-iKx}` (x < -l), `F e^{iKx} + G e^{-iKx}` (|x| < l), `C e^{iKx}` (x > l),
/// with `G = +-F`, `B = +-C` for even/odd parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDeltaEigenfunction {
    pub k: C64,
    pub half_separation: f64,
    pub inner_plus: C64,
    pub inner_minus: C64,
    pub outer_right: C64,
    pub outer_left: C64,
}

impl DoubleDeltaEigenfunction {
    pub fn new(model: &DoubleDeltaModel, k: C64, parity: Parity) -> Self {
        let s = match parity {
            Parity::Odd => -1.0,
            _ => 1.0,
        };
        let l = model.half_separation;
        // continuity at x = l: e^{iKl} + s e^{-iKl} = C e^{iKl}
        let c = C64::new(1.0, 0.0) + (-I * k * (2.0 * l)).exp() * s;
        Self {
            k,
            half_separation: l,
            inner_plus: C64::new(1.0, 0.0),
            inner_minus: C64::new(s, 0.0),
            outer_right: c,
            outer_left: c * s,
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let l = self.half_separation;
        let ikx = I * self.k * x;
        if x > l {
            self.outer_right * ikx.exp()
        } else if x < -l {
            self.outer_left * (-ikx).exp()
        } else {
            self.inner_plus * ikx.exp() + self.inner_minus * (-ikx).exp()
        }
    }

    /// `int_lo^hi |psi|^2 dx` in closed form.
    pub fn norm_between(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let l = self.half_separation;
        let kappa = -self.k.im;
        let k = self.k.re;
        let mut total = 0.0;
        // x < -l: |B|^2 e^{-2 kappa x}
        let (a, b) = (lo, hi.min(-l));
        if b > a {
            total += self.outer_left.norm_sqr() * exp_integral(C64::new(-2.0 * kappa, 0.0), a, b).re;
        }
        // |x| < l
        let (a, b) = (lo.max(-l), hi.min(l));
        if b > a {
            let cross = self.inner_plus * self.inner_minus.conj() * exp_integral(C64::new(0.0, 2.0 * k), a, b);
            total += self.inner_plus.norm_sqr() * exp_integral(C64::new(2.0 * kappa, 0.0), a, b).re
                + self.inner_minus.norm_sqr() * exp_integral(C64::new(-2.0 * kappa, 0.0), a, b).re
                + 2.0 * cross.re;
        }
        // x > l: |C|^2 e^{2 kappa x}
        let (a, b) = (lo.max(l), hi);
        if b > a {
            total += self.outer_right.norm_sqr() * exp_integral(C64::new(2.0 * kappa, 0.0), a, b).re;
        }
        total
    }

    /// `|psi(L)|^2 + |psi(-L)|^2`.
    pub fn boundary_density(&self, half_width: f64) -> f64 {
        self.eval(half_width).norm_sqr() + self.eval(-half_width).norm_sqr()
    }
}

/// `int_a^b e^{c x} dx` for complex `c`, stable as `c -> 0`.
pub(crate) fn exp_integral(c: C64, a: f64, b: f64) -> C64 {
    let w = c * (b - a);
    let start = (c * a).exp();
    if w.norm() < 1e-4 {
        // (e^w - 1)/w = 1 + w/2 + w^2/6 + w^3/24 + w^4/120
        let series = C64::new(1.0, 0.0) + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0)));
        start * series * (b - a)
    } else {
        start * (w.exp() - 1.0) / c
    }
}

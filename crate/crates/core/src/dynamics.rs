//! Time evolution on the truncated lattice, `i hbar dPsi/dt = H_eff Psi`,
//! with the boundary term held at the value belonging to one eigenstate.
//!
//! For that eigenstate the truncation is exact, so bound states stay
//! stationary, resonances decay as `e^{-Gamma t / 2 hbar}` and
//! anti-resonances grow.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::lattice::LatticeModel;
use crate::{Error, ResonantState, Result, Units, C64, I};

/// Largest accepted step, in units of `hbar / t`.
pub const DT_MAX: f64 = 0.1;

/// Default step, in units of `hbar / t`.
pub const DT_DEFAULT: f64 = 0.05;

/// Amplitude above which a run is abandoned.
pub const OVERFLOW_GUARD: f64 = 1e100;

/// Amplitudes on sites `-L..=L` (index `x + L`) and optionally on an adatom.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub sites: Vec<C64>,
    pub adatom: Option<C64>,
    pub time: f64,
}

impl WaveField {
    pub fn zeros(model: &LatticeModel) -> Self {
        Self {
            sites: alloc::vec![C64::new(0.0, 0.0); model.site_count()],
            adatom: model.adatom.map(|_| C64::new(0.0, 0.0)),
            time: 0.0,
        }
    }

    /// Splits a flat vector laid out like the effective Hamiltonian.
    pub fn from_vector(model: &LatticeModel, v: &[C64]) -> Result<Self> {
        if v.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                found: v.len(),
            });
        }
        let n = model.site_count();
        Ok(Self {
            sites: v[..n].to_vec(),
            adatom: (v.len() > n).then(|| v[n]),
            time: 0.0,
        })
    }

    pub fn half_width(&self) -> usize {
        self.sites.len() / 2
    }

    /// Amplitude at site `x`.
    pub fn site(&self, x: i64) -> C64 {
        self.sites[(x + self.half_width() as i64) as usize]
    }

    pub fn is_finite(&self) -> bool {
        self.sites.iter().chain(self.adatom.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.sites.iter().chain(self.adatom.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `sum_{|x| <= lw} |Psi|^2`, plus the adatom.
    pub fn window_norm(&self, lw: usize) -> f64 {
        let l = self.half_width();
        let lw = lw.min(l);
        let sites: f64 = self.sites[l - lw..=l + lw].iter().map(|z| z.norm_sqr()).sum();
        sites + self.adatom.map_or(0.0, |f| f.norm_sqr())
    }

    /// `a * self + b * other`, at the time of `self`.
    pub fn combine(&self, a: C64, other: &WaveField, b: C64) -> Result<Self> {
        if self.sites.len() != other.sites.len() || self.adatom.is_some() != other.adatom.is_some() {
            return Err(Error::DimensionMismatch {
                expected: self.sites.len(),
                found: other.sites.len(),
            });
        }
        Ok(Self {
            sites: self.sites.iter().zip(&other.sites).map(|(x, y)| x * a + y * b).collect(),
            adatom: self.adatom.zip(other.adatom).map(|(x, y)| x * a + y * b),
            time: self.time,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    /// Step in units of `hbar / t`.
    pub dt: f64,
    pub t_end: f64,
    /// Record a snapshot every this many steps (the initial and final
    /// fields are always recorded).
    pub record_every: usize,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_end: f64, record_every: usize) -> Result<Self> {
        let cfg = Self { dt, t_end, record_every };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= DT_MAX * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter("dt must lie in (0, 0.1] hbar/t"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter("t_end must be finite and non-negative"));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be positive"));
        }
        Ok(())
    }

    /// Number of steps, `t_end / dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// `V_eff = -(t/2) e^{iK dx}` for the state whose boundary is imposed.
pub fn boundary_from_state(state: &ResonantState, hopping: f64, units: &Units) -> C64 {
    -(I * state.k() * units.lattice_dx).exp() * (0.5 * hopping)
}

struct Generator<'a> {
    model: &'a LatticeModel,
    onsite: Vec<f64>,
    boundary: C64,
    /// `-i / hbar`
    factor: C64,
}

impl Generator<'_> {
    /// `out = -(i/hbar) H_eff psi` on the flat layout.
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        let n = self.onsite.len();
        let hop = -0.5 * self.model.hopping;
        for i in 0..n {
            let mut h = psi[i] * self.onsite[i];
            if i > 0 {
                h += psi[i - 1] * hop;
            }
            if i + 1 < n {
                h += psi[i + 1] * hop;
            }
            out[i] = h;
        }
        out[0] += psi[0] * self.boundary;
        out[n - 1] += psi[n - 1] * self.boundary;
        if let Some(a) = self.model.adatom {
            let o = self.model.index(0);
            out[o] += psi[n] * a.coupling;
            out[n] = psi[o] * a.coupling + psi[n] * a.level;
        }
        for z in out.iter_mut() {
            *z *= self.factor;
        }
    }
}

fn flatten(field: &WaveField) -> Vec<C64> {
    let mut v = field.sites.clone();
    v.extend(field.adatom);
    v
}

/// Evolves with the boundary of `state` (see [`boundary_from_state`]).
pub fn evolve(
    model: &LatticeModel,
    init: &WaveField,
    state: &ResonantState,
    cfg: &EvolutionConfig,
    units: &Units,
) -> Result<Vec<WaveField>> {
    let boundary = boundary_from_state(state, model.hopping, units);
    evolve_with_boundary(model, init, boundary, cfg, units.hbar)
}

/// Classical RK4 with a fixed boundary term; returns the recorded snapshots.
pub fn evolve_with_boundary(
    model: &LatticeModel,
    init: &WaveField,
    boundary: C64,
    cfg: &EvolutionConfig,
    hbar: f64,
) -> Result<Vec<WaveField>> {
    cfg.validate()?;
    if init.sites.len() != model.site_count() || init.adatom.is_some() != model.adatom.is_some() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: init.sites.len() + usize::from(init.adatom.is_some()),
        });
    }
    if !init.is_finite() {
        return Err(Error::InvalidParameter("initial field must be finite"));
    }
    let l = model.half_width as i64;
    let gen = Generator {
        model,
        onsite: (-l..=l).map(|x| model.onsite(x)).collect(),
        boundary,
        factor: C64::new(0.0, -1.0 / hbar),
    };
    let dt = cfg.dt * hbar / model.hopping;
    let steps = cfg.steps();
    let dim = model.dim();
    let mut psi = flatten(init);
    let (mut k1, mut k2, mut k3, mut k4) = (
        alloc::vec![C64::new(0.0, 0.0); dim],
        alloc::vec![C64::new(0.0, 0.0); dim],
        alloc::vec![C64::new(0.0, 0.0); dim],
        alloc::vec![C64::new(0.0, 0.0); dim],
    );
    let mut tmp = alloc::vec![C64::new(0.0, 0.0); dim];
    let snapshot = |psi: &[C64], time: f64| -> WaveField {
        let mut f = WaveField::from_vector(model, psi).expect("layout matches model");
        f.time = time;
        f
    };
    let mut out = alloc::vec![snapshot(&psi, init.time)];
    for step in 1..=steps {
        gen.apply(&psi, &mut k1);
        for i in 0..dim {
            tmp[i] = psi[i] + k1[i] * (0.5 * dt);
        }
        gen.apply(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = psi[i] + k2[i] * (0.5 * dt);
        }
        gen.apply(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = psi[i] + k3[i] * dt;
        }
        gen.apply(&tmp, &mut k4);
        for i in 0..dim {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        let time = init.time + step as f64 * dt;
        if psi.iter().any(|z| !(z.norm() < OVERFLOW_GUARD)) {
            return Err(Error::UnstableStep { time });
        }
        if step % cfg.record_every == 0 || step == steps {
            out.push(snapshot(&psi, time));
        }
    }
    Ok(out)
}

/// `max |Psi(x, t) - psi(x) e^{-iEt/hbar}|` over all recorded sites, the
/// adatom and times, where `psi` is the first snapshot.
pub fn eigenstate_phase_check(snapshots: &[WaveField], energy: C64, hbar: f64) -> f64 {
    let Some(first) = snapshots.first() else {
        return 0.0;
    };
    let mut worst: f64 = 0.0;
    for snap in snapshots {
        let phase = (-I * energy * ((snap.time - first.time) / hbar)).exp();
        let pairs = snap.sites.iter().zip(&first.sites).chain(snap.adatom.iter().zip(first.adatom.iter()));
        for (now, then) in pairs {
            worst = worst.max((now - then * phase).norm());
        }
    }
    worst
}

/// `max |(|Psi(x, t)| - |Psi(x, 0)|)| / max |Psi(x, 0)|` over the snapshots.
pub fn modulus_drift(snapshots: &[WaveField]) -> f64 {
    let Some(first) = snapshots.first() else {
        return 0.0;
    };
    let scale = first.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for snap in snapshots {
        let pairs = snap.sites.iter().zip(&first.sites).chain(snap.adatom.iter().zip(first.adatom.iter()));
        for (now, then) in pairs {
            worst = worst.max((now.norm() - then.norm()).abs());
        }
    }
    worst / scale
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSample {
    pub t: f64,
    /// `sum_{|x| <= L'} |Psi|^2` plus the adatom.
    pub norm: f64,
    /// Probability current leaving the window, so that `dN/dt = -outflow`.
    pub outflow: f64,
}

/// Particle number in `|x| <= lw` and the current through its edges.
pub fn window_norm_series(
    snapshots: &[WaveField],
    lw: usize,
    hopping: f64,
    boundary: C64,
    hbar: f64,
) -> Result<Vec<WindowSample>> {
    let Some(first) = snapshots.first() else {
        return Ok(Vec::new());
    };
    let l = first.half_width();
    if lw > l {
        return Err(Error::InvalidParameter("window exceeds the lattice"));
    }
    Ok(snapshots
        .iter()
        .map(|s| {
            let outflow = if lw < l {
                let lw = lw as i64;
                let right = (s.site(lw).conj() * s.site(lw + 1)).im;
                let left = (s.site(-lw).conj() * s.site(-lw - 1)).im;
                hopping / hbar * (right + left)
            } else {
                let edge = s.sites[0].norm_sqr() + s.sites[2 * l].norm_sqr();
                -2.0 / hbar * boundary.im * edge
            };
            WindowSample {
                t: s.time,
                norm: s.window_norm(lw),
                outflow,
            }
        })
        .collect())
}

/// Where to read an amplitude from a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Site(i64),
    Adatom,
}

/// `(t, Psi(probe, t))` over the snapshots.
pub fn amplitude_series(snapshots: &[WaveField], probe: Probe) -> Vec<(f64, C64)> {
    snapshots
        .iter()
        .map(|s| {
            let v = match probe {
                Probe::Site(x) => s.site(x),
                Probe::Adatom => s.adatom.unwrap_or(C64::new(0.0, 0.0)),
            };
            (s.time, v)
        })
        .collect()
}

/// Decay rate `-2 d ln|Psi| / dt` fitted over samples with `|Psi| > floor`.
pub fn fitted_decay_rate(series: &[(f64, C64)], floor: f64) -> Option<f64> {
    let (ts, ys): (Vec<f64>, Vec<f64>) = series
        .iter()
        .filter(|(_, z)| z.norm() > floor)
        .map(|(t, z)| (*t, z.norm().ln()))
        .unzip();
    crate::stats::linear_fit(&ts, &ys).map(|fit| -2.0 * fit.slope)
}

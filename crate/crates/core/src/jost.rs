//! Partial-wave scattering through Jost functions.
//!
//! The radial equation `chi'' = (U + l(l+1)/r^2 - k^2) chi`, `U = 2mV/hbar^2`,
//! is integrated inward from the edge of the potential, starting on the free outgoing
//! (`+`) or incoming (`-`) Riccati-Hankel solution. Near the origin the
//! irregular part `c r^{-l}` dominates and `(2l+1) c` is the Jost function;
//! `S_l = (-1)^l f_- / f_+` and resonances are zeros of `f_+`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::newton::{self, NewtonOptions};
use crate::{Error, Parity, ResonantState, Result, Units, C64, I};

/// `|Im k| r` at the starting radius above which the asymptotic exponentials overflow.
pub const GROWTH_GUARD: f64 = 300.0;

/// Required bound on `|U(r_max)| r_max^2`.
pub const TAIL_BOUND: f64 = 1e-8;

/// Largest relative spread of the two innermost intercept samples.
pub const EXTRAPOLATION_SPREAD: f64 = 1e-3;

/// Built-in radial potentials (energies in the units of [`Units`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialPotential {
    Free,
    /// `V0 e^{-r/a}`; negative strength is attractive.
    Exponential { strength: f64, decay_length: f64 },
    /// `-depth` for `r < radius`, zero outside.
    SquareWell { depth: f64, radius: f64 },
}

impl RadialPotential {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Free => 0.0,
            RadialPotential::Exponential { strength, decay_length } => strength * (-r / decay_length).exp(),
            RadialPotential::SquareWell { depth, radius } => {
                if r < radius {
                    -depth
                } else {
                    0.0
                }
            }
        }
    }

    /// Length scale used for default grids.
    pub fn range(&self) -> f64 {
        match *self {
            RadialPotential::Free => 1.0,
            RadialPotential::Exponential { decay_length, .. } => decay_length,
            RadialPotential::SquareWell { radius, .. } => radius,
        }
    }

    /// Radii where the potential is discontinuous; the grid puts nodes there.
    pub fn breakpoints(&self) -> Option<f64> {
        match *self {
            RadialPotential::SquareWell { radius, .. } => Some(radius),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            RadialPotential::Free => true,
            RadialPotential::Exponential { strength, decay_length } => strength.is_finite() && decay_length > 0.0,
            RadialPotential::SquareWell { depth, radius } => depth.is_finite() && radius > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("potential parameters out of range"))
        }
    }
}

/// One partial wave of a radial scattering problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub l: u32,
    pub potential: RadialPotential,
    pub r_max: f64,
    pub r_min: f64,
    /// Largest radial step; near the origin steps shrink to `ratio * r`.
    pub step: f64,
    pub ratio: f64,
    pub units: Units,
}

impl RadialProblem {
    /// Defaults: `r_max = 40 range`, `r_min = 1e-4 range`, `step = range/400`.
    pub fn new(l: u32, potential: RadialPotential, units: Units) -> Result<Self> {
        let range = potential.range();
        let prob = Self {
            l,
            potential,
            r_max: 40.0 * range,
            r_min: 1e-4 * range,
            step: range / 400.0,
            ratio: 0.005,
            units,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn with_l(mut self, l: u32) -> Self {
        self.l = l;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.potential.validate()?;
        self.units.validate()?;
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.r_min) && ok(self.r_max) && ok(self.step) && ok(self.ratio)) || self.r_min >= self.r_max {
            return Err(Error::InvalidParameter("need 0 < r_min < r_max and positive steps"));
        }
        let tail = self.reduced(self.r_max).abs() * self.r_max * self.r_max;
        if !(tail < TAIL_BOUND) {
            return Err(Error::BadPotential(tail));
        }
        Ok(())
    }

    /// `U(r) = 2m V(r) / hbar^2`.
    pub fn reduced(&self, r: f64) -> f64 {
        self.potential.value(r) / self.units.kinetic_scale()
    }

    /// Where the inward integration starts: the edge of a compactly
    /// supported potential, otherwise the radius beyond which
    /// `|U| r^2 < TAIL_BOUND`, capped at `r_max`. Starting further out only
    /// feeds the incoming component, which grows inward like `e^{2 |Im k| r}`
    /// relative to the outgoing one.
    pub fn start_radius(&self) -> f64 {
        match self.potential {
            RadialPotential::Free => self.r_max,
            RadialPotential::SquareWell { radius, .. } => radius.min(self.r_max),
            RadialPotential::Exponential { decay_length, .. } => {
                let tail = |r: f64| self.reduced(r).abs() * r * r;
                // |U| r^2 decreases beyond r = 2 decay_length
                let (mut lo, mut hi) = (2.0 * decay_length, self.r_max);
                if lo >= hi || tail(lo) < TAIL_BOUND {
                    return lo.min(hi);
                }
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if tail(mid) < TAIL_BOUND {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            }
        }
    }

    /// Integration nodes from [`Self::start_radius`] down to `r_min`, descending. The grid
    /// does not depend on `k`, so `f_+-(k)` stays smooth in `k`; keep
    /// `|k| step` well below one.
    pub fn grid(&self) -> Vec<f64> {
        let h_max = self.step;
        let mut stops = Vec::new();
        let start = self.start_radius().max(self.r_min);
        if let Some(b) = self.potential.breakpoints() {
            if b > self.r_min && b < start {
                stops.push(b);
            }
        }
        stops.push(self.r_min);
        let mut nodes = alloc::vec![start];
        let mut r = start;
        for stop in stops {
            while r > stop {
                let h = h_max.min(self.ratio * r);
                // avoid a sliver step before the stop
                let next = if r - h <= stop + 0.25 * h { stop } else { r - h };
                nodes.push(next);
                r = next;
            }
        }
        nodes
    }
}

/// Sign of the Jost solution: `+` behaves as `e^{ikr}`, `-` as `e^{-ikr}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JostSign {
    Plus,
    Minus,
}

/// Outgoing Riccati-Hankel function `e^{ikr} sum_m (l+m)!/(m!(l-m)!) (i/2kr)^m`
/// and its derivative.
pub fn riccati_hankel(l: u32, k: C64, r: f64) -> (C64, C64) {
    let e = (I * k * r).exp();
    let a = I / (k * 2.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut dsum = C64::new(0.0, 0.0);
    let mut coeff = 1.0;
    for m in 0..=l {
        if m > 0 {
            // (l+m)!/(m!(l-m)!) from the previous term
            coeff *= ((l + m) * (l - m + 1)) as f64 / m as f64;
        }
        let term = a.powu(m) * coeff * r.powi(-(m as i32));
        sum += term;
        dsum += term * (-(m as f64) / r);
    }
    (e * sum, e * (I * k * sum + dsum))
}

/// Samples of a Jost solution, ascending in `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct JostSolution {
    pub r: Vec<f64>,
    pub value: Vec<C64>,
    pub derivative: Vec<C64>,
}

fn check_growth(prob: &RadialProblem, k: C64) -> Result<()> {
    let g = k.im.abs() * prob.start_radius();
    if !(g < GROWTH_GUARD) {
        return Err(Error::Overflow(g));
    }
    Ok(())
}

/// Integrates the Jost solution inward with classical RK4.
pub fn jost_solution(prob: &RadialProblem, k: C64, sign: JostSign) -> Result<JostSolution> {
    prob.validate()?;
    check_growth(prob, k)?;
    let k = match sign {
        JostSign::Plus => k,
        JostSign::Minus => -k,
    };
    let nodes = prob.grid();
    let l = prob.l;
    let centrifugal = (l * (l + 1)) as f64;
    let k2 = k * k;
    let breakpoint = prob.potential.breakpoints();
    let rhs = |r: f64, seg_mid: f64, y: (C64, C64)| -> (C64, C64) {
        // evaluate a discontinuous potential on the side of the current segment
        let r_eval = match breakpoint {
            Some(b) if r == b => r + (seg_mid - r) * 1e-9,
            _ => r,
        };
        let w = C64::new(prob.reduced(r_eval) + centrifugal / (r * r), 0.0) - k2;
        (y.1, w * y.0)
    };
    let (f0, df0) = riccati_hankel(l, k, nodes[0]);
    let mut y = (f0, df0);
    let mut out_r = Vec::with_capacity(nodes.len());
    let mut out_f = Vec::with_capacity(nodes.len());
    let mut out_df = Vec::with_capacity(nodes.len());
    out_r.push(nodes[0]);
    out_f.push(y.0);
    out_df.push(y.1);
    for w in nodes.windows(2) {
        let (r0, r1) = (w[0], w[1]);
        let h = r1 - r0;
        let mid = 0.5 * (r0 + r1);
        let a = rhs(r0, mid, y);
        let b = rhs(r0 + 0.5 * h, mid, (y.0 + a.0 * (0.5 * h), y.1 + a.1 * (0.5 * h)));
        let c = rhs(r0 + 0.5 * h, mid, (y.0 + b.0 * (0.5 * h), y.1 + b.1 * (0.5 * h)));
        let d = rhs(r1, mid, (y.0 + c.0 * h, y.1 + c.1 * h));
        y.0 += (a.0 + (b.0 + c.0) * 2.0 + d.0) * (h / 6.0);
        y.1 += (a.1 + (b.1 + c.1) * 2.0 + d.1) * (h / 6.0);
        out_r.push(r1);
        out_f.push(y.0);
        out_df.push(y.1);
    }
    out_r.reverse();
    out_f.reverse();
    out_df.reverse();
    Ok(JostSolution {
        r: out_r,
        value: out_f,
        derivative: out_df,
    })
}

/// `r^l ((l+1) f - r f')`, which removes the regular `r^{l+1}` part and
/// tends to `(2l+1) c` for `f ~ c r^{-l}`.
fn intercept(l: u32, r: f64, f: C64, df: C64) -> C64 {
    (f * (l as f64 + 1.0) - df * r) * r.powi(l as i32)
}

/// The Jost function `f_+-(k)`, extrapolated to `r = 0` in `r^2` from the
/// innermost node and the node nearest `2 r_min`.
pub fn jost_function(prob: &RadialProblem, k: C64, sign: JostSign) -> Result<C64> {
    let sol = jost_solution(prob, k, sign)?;
    let r1 = sol.r[0];
    let j = sol
        .r
        .iter()
        .position(|&r| r >= 2.0 * r1)
        .unwrap_or(sol.r.len() - 1)
        .max(1);
    let r2 = sol.r[j];
    let a = intercept(prob.l, r1, sol.value[0], sol.derivative[0]);
    let b = intercept(prob.l, r2, sol.value[j], sol.derivative[j]);
    let (s1, s2) = (r1 * r1, r2 * r2);
    let limit = (a * s2 - b * s1) / (s2 - s1);
    // Near a zero of the Jost function the limit itself vanishes, so the
    // spread is measured against the size of the solution inside the range.
    let range = prob.potential.range();
    let size = sol
        .r
        .iter()
        .zip(&sol.value)
        .take_while(|(r, _)| **r <= range)
        .map(|(r, f)| f.norm() * (r / range).powi(prob.l as i32))
        .fold(limit.norm(), f64::max);
    let spread = (a - b).norm() / size.max(f64::MIN_POSITIVE);
    if !(spread < EXTRAPOLATION_SPREAD) {
        return Err(Error::ExtrapolationUnstable(spread));
    }
    Ok(limit)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostPair {
    pub k: C64,
    pub f_plus: C64,
    pub f_minus: C64,
}

pub fn jost_pair(prob: &RadialProblem, k: C64) -> Result<JostPair> {
    Ok(JostPair {
        k,
        f_plus: jost_function(prob, k, JostSign::Plus)?,
        f_minus: jost_function(prob, k, JostSign::Minus)?,
    })
}

/// `S_l(k) = (-1)^l f_-(k) / f_+(k)`.
pub fn partial_wave_smatrix(prob: &RadialProblem, k: C64) -> Result<C64> {
    let pair = jost_pair(prob, k)?;
    if !(pair.f_plus.norm() > 1e-12 * pair.f_minus.norm()) {
        return Err(Error::AtPole(pair.f_plus.norm()));
    }
    let sign = if prob.l.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(pair.f_minus / pair.f_plus * sign)
}

/// `P_l(x)` for `l = 0..=l_max` by the three-term recurrence.
pub fn legendre(l_max: u32, x: f64) -> Vec<f64> {
    let mut p = alloc::vec![1.0];
    if l_max >= 1 {
        p.push(x);
    }
    for l in 2..=l_max as usize {
        let lf = l as f64;
        let next = ((2.0 * lf - 1.0) * x * p[l - 1] - (lf - 1.0) * p[l - 2]) / lf;
        p.push(next);
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub k: f64,
    /// `S_l` for `l = 0..=l_max`.
    pub s_matrix: Vec<C64>,
    /// `(theta, dsigma/dOmega)`.
    pub differential: Vec<(f64, f64)>,
    /// `(pi/k^2) sum (2l+1) |1 - S_l|^2`.
    pub total: f64,
    /// Share of the total carried by the last partial wave.
    pub truncation: f64,
}

/// Partial-wave sums up to `l_max` at real `k > 0`, with the amplitude
/// `f(theta) = sum (2l+1) (S_l - 1) / (2ik) P_l(cos theta)`.
pub fn cross_section(base: &RadialProblem, l_max: u32, k: f64, thetas: &[f64]) -> Result<CrossSection> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter("k must be real and positive"));
    }
    let kk = C64::new(k, 0.0);
    let s_matrix: Vec<C64> = (0..=l_max)
        .map(|l| partial_wave_smatrix(&base.with_l(l), kk))
        .collect::<Result<_>>()?;
    let terms: Vec<f64> = s_matrix
        .iter()
        .enumerate()
        .map(|(l, s)| (2 * l + 1) as f64 * (C64::new(1.0, 0.0) - s).norm_sqr())
        .collect();
    let sum: f64 = terms.iter().sum();
    let total = core::f64::consts::PI / (k * k) * sum;
    let truncation = if sum > 0.0 { terms[terms.len() - 1] / sum } else { 0.0 };
    let differential = thetas
        .iter()
        .map(|&theta| {
            let p = legendre(l_max, theta.cos());
            let amp: C64 = s_matrix
                .iter()
                .enumerate()
                .map(|(l, s)| (s - 1.0) * ((2 * l + 1) as f64 * p[l]))
                .sum::<C64>()
                / (I * 2.0 * k);
            (theta, amp.norm_sqr())
        })
        .collect();
    Ok(CrossSection {
        k,
        s_matrix,
        differential,
        total,
        truncation,
    })
}

/// Rectangle in the complex k plane with a seed grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRegion {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub n_re: usize,
    pub n_im: usize,
}

impl KRegion {
    pub fn contains(&self, k: C64) -> bool {
        let (dr, di) = (
            1e-9 * (self.re.1 - self.re.0).abs().max(1.0),
            1e-9 * (self.im.1 - self.im.0).abs().max(1.0),
        );
        k.re >= self.re.0 - dr && k.re <= self.re.1 + dr && k.im >= self.im.0 - di && k.im <= self.im.1 + di
    }

    fn node(&self, i: usize, j: usize) -> C64 {
        let fr = if self.n_re > 1 { i as f64 / (self.n_re - 1) as f64 } else { 0.5 };
        let fi = if self.n_im > 1 { j as f64 / (self.n_im - 1) as f64 } else { 0.5 };
        C64::new(
            self.re.0 + (self.re.1 - self.re.0) * fr,
            self.im.0 + (self.im.1 - self.im.0) * fi,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSearch {
    pub states: Vec<ResonantState>,
    pub unconverged_seeds: usize,
}

/// Zeros of `f_+(k)` inside `region`: local minima of `|f_+|` on the seed
/// grid are refined by Newton with a central-difference derivative.
pub fn pole_search(prob: &RadialProblem, region: &KRegion) -> Result<PoleSearch> {
    if region.n_re == 0 || region.n_im == 0 || !(region.re.1 >= region.re.0 && region.im.1 >= region.im.0) {
        return Err(Error::EmptyWindow);
    }
    prob.validate()?;
    let f = |k: C64| jost_function(prob, k, JostSign::Plus).ok();
    let mut grid = alloc::vec![f64::INFINITY; region.n_re * region.n_im];
    for j in 0..region.n_im {
        for i in 0..region.n_re {
            if let Some(v) = f(region.node(i, j)) {
                grid[j * region.n_re + i] = v.norm();
            }
        }
    }
    let at = |i: usize, j: usize| grid[j * region.n_re + i];
    let mut states: Vec<ResonantState> = Vec::new();
    let mut unconverged = 0;
    for j in 0..region.n_im {
        for i in 0..region.n_re {
            let v = at(i, j);
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            // |f_+| can change by many decades across the region, so the
            // tolerance follows the largest neighbouring value
            let mut local = v;
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= region.n_re as i64 || jj >= region.n_im as i64 {
                        continue;
                    }
                    let w = at(ii as usize, jj as usize);
                    if w < v {
                        is_min = false;
                    }
                    if w.is_finite() {
                        local = local.max(w);
                    }
                }
            }
            if !is_min {
                continue;
            }
            let opts = NewtonOptions {
                tol: 1e-11 * local.max(f64::MIN_POSITIVE),
                max_iter: 60,
            };
            let seed = region.node(i, j);
            let Some(root) = newton::solve_numeric(f, seed, 1e-6, &opts) else {
                unconverged += 1;
                continue;
            };
            let k = root.root;
            if !region.contains(k) || states.iter().any(|s| (s.k() - k).norm() < 1e-8 * k.norm().max(1.0)) {
                continue;
            }
            let e = k * k * prob.units.kinetic_scale();
            states.push(ResonantState::new(k, e, Parity::None, root.residual));
        }
    }
    states.sort_by(|a, b| a.wave_number.k.total_cmp(&b.wave_number.k).then(a.wave_number.kappa.total_cmp(&b.wave_number.kappa)));
    Ok(PoleSearch {
        states,
        unconverged_seeds: unconverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(l: u32) -> RadialProblem {
        RadialProblem::new(l, RadialPotential::Free, Units::default()).unwrap()
    }

    #[test]
    fn riccati_hankel_solves_free_equation() {
        for l in 0..4 {
            let k = C64::new(1.3, -0.2);
            let r = 0.7;
            let h = 1e-4;
            let (f, _) = riccati_hankel(l, k, r);
            let (fp, _) = riccati_hankel(l, k, r + h);
            let (fm, _) = riccati_hankel(l, k, r - h);
            let second = (fp - f * 2.0 + fm) / (h * h);
            let expected = f * (C64::new((l * (l + 1)) as f64 / (r * r), 0.0) - k * k);
            assert!((second - expected).norm() < 1e-5 * expected.norm().max(1.0), "l={l}");
        }
    }

    #[test]
    fn free_s_wave_is_plane_wave() {
        let k = C64::new(0.8, 0.0);
        let sol = jost_solution(&free(0), k, JostSign::Plus).unwrap();
        for (r, f) in sol.r.iter().zip(&sol.value).step_by(97) {
            assert!((f - (I * k * *r).exp()).norm() < 1e-10);
        }
        let f = jost_function(&free(0), k, JostSign::Plus).unwrap();
        assert!((f - 1.0).norm() < 1e-8);
    }

    #[test]
    fn free_s_matrix_is_one() {
        for l in 0..=3 {
            for k in [0.3, 1.0, 2.5] {
                let s = partial_wave_smatrix(&free(l), C64::new(k, 0.0)).unwrap();
                assert!((s - 1.0).norm() < 1e-7, "l={l} k={k} s={s}");
            }
        }
    }

    #[test]
    fn unitarity_for_exponential_well() {
        let p = RadialProblem::new(
            1,
            RadialPotential::Exponential {
                strength: -3.0,
                decay_length: 1.0,
            },
            Units::default(),
        )
        .unwrap();
        for k in [0.2, 0.9, 1.7] {
            let s = partial_wave_smatrix(&p, C64::new(k, 0.0)).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn guards() {
        let p = free(0);
        assert!(matches!(jost_function(&p, C64::new(1.0, -10.0), JostSign::Plus), Err(Error::Overflow(_))));
        let mut bad = p;
        bad.potential = RadialPotential::Exponential {
            strength: 1.0,
            decay_length: 10.0,
        };
        assert!(matches!(bad.validate(), Err(Error::BadPotential(_))));
    }

    #[test]
    fn legendre_values() {
        let p = legendre(3, 0.5);
        assert!((p[2] - (-0.125)).abs() < 1e-15);
        assert!((p[3] - (-0.4375)).abs() < 1e-15);
    }

    #[test]
    fn unitarity_limit_cross_section() {
        // S_0 = -1 only: sigma = 4 pi / k^2; check the formula on a free problem
        let cs = cross_section(&free(0), 2, 1.0, &[0.0, 1.0]).unwrap();
        assert!(cs.total.abs() < 1e-12);
        assert!(cs.differential.iter().all(|(_, d)| d.abs() < 1e-12));
        let term = |s: C64| core::f64::consts::PI * (C64::new(1.0, 0.0) - s).norm_sqr();
        assert!((term(C64::new(-1.0, 0.0)) - 4.0 * core::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn free_problem_has_no_poles() {
        let region = KRegion {
            re: (0.1, 2.0),
            im: (-1.0, 1.0),
            n_re: 6,
            n_im: 6,
        };
        assert!(pole_search(&free(0), &region).unwrap().states.is_empty());
    }
}

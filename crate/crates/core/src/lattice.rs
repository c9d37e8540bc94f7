//! Open tight-binding chains truncated to `|x| <= L` by energy-dependent
//! boundary terms.
//!
//! Outside the truncated region the chain is free, so an outgoing wave
//! `e^{iK|x|}` can be folded into a single complex on-site term
//! `V_eff(E) = -(t/2) e^{iK dx}` at `x = +-L`. Resonances are fixed points
//! `E = eig(H_eff(E))`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dispersion::{lattice_wavenumber, outgoing_factor, BoundaryBranch};
use crate::linalg::ComplexMatrix;
use crate::{ComplexEnergy, Error, Parity, ResonantState, Result, Units, C64};

/// A two-level impurity attached to the origin site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adatom {
    /// Hopping `g` between the adatom and site 0.
    pub coupling: f64,
    /// On-site energy `E_d` of the adatom.
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeModel {
    pub half_width: usize,
    pub hopping: f64,
    onsite: BTreeMap<i64, f64>,
    pub adatom: Option<Adatom>,
}

impl LatticeModel {
    /// Chain on `-L..=L` with on-site potentials given as `(site, value)`.
    /// Every site must satisfy `|x| < L`.
    pub fn new(half_width: usize, hopping: f64, onsite: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::InvalidParameter("L must be at least 1"));
        }
        if !(hopping.is_finite() && hopping > 0.0) {
            return Err(Error::InvalidParameter("hopping must be positive"));
        }
        let mut map = BTreeMap::new();
        for (x, v) in onsite {
            if x.unsigned_abs() as usize >= half_width {
                return Err(Error::InvalidParameter("potential must vanish at and beyond |x| = L"));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter("on-site potential must be finite"));
            }
            if v != 0.0 {
                map.insert(x, v);
            }
        }
        Ok(Self {
            half_width,
            hopping,
            onsite: map,
            adatom: None,
        })
    }

    pub fn free(half_width: usize, hopping: f64) -> Result<Self> {
        Self::new(half_width, hopping, core::iter::empty())
    }

    /// `L = 2` chain with `V0 = v0_over_t * t` on sites `+-1`.
    pub fn two_site(v0_over_t: f64, hopping: f64) -> Result<Self> {
        let v = v0_over_t * hopping;
        Self::new(2, hopping, [(-1, v), (1, v)])
    }

    pub fn with_adatom(mut self, adatom: Adatom) -> Result<Self> {
        if !(adatom.coupling.is_finite() && adatom.level.is_finite()) {
            return Err(Error::InvalidParameter("adatom parameters must be finite"));
        }
        self.adatom = Some(adatom);
        Ok(self)
    }

    pub fn onsite(&self, x: i64) -> f64 {
        self.onsite.get(&x).copied().unwrap_or(0.0)
    }

    pub fn onsite_entries(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.onsite.iter().map(|(&x, &v)| (x, v))
    }

    pub fn site_count(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Matrix dimension: sites plus one row for the adatom, if any.
    pub fn dim(&self) -> usize {
        self.site_count() + usize::from(self.adatom.is_some())
    }

    /// Matrix index of site `x`.
    pub fn index(&self, x: i64) -> usize {
        (x + self.half_width as i64) as usize
    }

    /// Index of the row normalised to one in eigenvectors: the adatom if
    /// present, otherwise the origin.
    pub fn anchor(&self) -> usize {
        if self.adatom.is_some() {
            self.site_count()
        } else {
            self.half_width
        }
    }

    /// Units consistent with the model's hopping.
    pub fn units(&self, base: &Units) -> Units {
        Units {
            hopping: self.hopping,
            ..*base
        }
    }
}

/// `V_eff(E) = (E - i sqrt(t^2 - E^2)) / 2` on the requested branch, which
/// equals `-(t/2) e^{iK dx}` with `E = -t cos(K dx)`.
pub fn effective_potential(energy: C64, hopping: f64, branch: BoundaryBranch) -> C64 {
    -outgoing_factor(energy, hopping, branch) * (0.5 * hopping)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub matrix: ComplexMatrix,
    pub energy_used: C64,
    pub branch: BoundaryBranch,
}

/// Tridiagonal `-t/2` hopping, on-site potentials and `V_eff(E)` at both ends.
pub fn assemble(model: &LatticeModel, energy: C64, branch: BoundaryBranch) -> EffectiveHamiltonian {
    let n = model.dim();
    let sites = model.site_count();
    let mut h = ComplexMatrix::zeros(n);
    let off = C64::new(-0.5 * model.hopping, 0.0);
    let l = model.half_width as i64;
    for x in -l..=l {
        let i = model.index(x);
        h[(i, i)] = C64::new(model.onsite(x), 0.0);
        if i + 1 < sites {
            h[(i, i + 1)] = off;
            h[(i + 1, i)] = off;
        }
    }
    let v = effective_potential(energy, model.hopping, branch);
    h[(0, 0)] += v;
    h[(sites - 1, sites - 1)] += v;
    if let Some(a) = model.adatom {
        let d = sites;
        let o = model.index(0);
        h[(d, d)] = C64::new(a.level, 0.0);
        h[(d, o)] = C64::new(a.coupling, 0.0);
        h[(o, d)] = C64::new(a.coupling, 0.0);
    }
    EffectiveHamiltonian {
        matrix: h,
        energy_used: energy,
        branch,
    }
}

/// All eigenvalues of the effective Hamiltonian.
pub fn eigenvalues_small(h: &EffectiveHamiltonian) -> Result<Vec<C64>> {
    h.matrix.eigenvalues()
}

/// Right eigenvector for `eigenvalue`, scaled so that the origin (or the
/// adatom, when present) has amplitude one.
pub fn eigenvector(model: &LatticeModel, h: &EffectiveHamiltonian, eigenvalue: C64) -> Vec<C64> {
    h.matrix.eigenvector(eigenvalue, 2, model.anchor())
}

/// `ln |det(H_eff(E) - E)|`; `-inf` when the factorisation is exactly singular.
pub fn log_abs_determinant(model: &LatticeModel, energy: C64, branch: BoundaryBranch) -> f64 {
    assemble(model, energy, branch).matrix.shifted(energy).log_abs_det()
}

/// Rectangular mesh of complex energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMesh {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl EnergyMesh {
    pub fn new(re: (f64, f64), im: (f64, f64), n_re: usize, n_im: usize) -> Result<Self> {
        let finite = re.0.is_finite() && re.1.is_finite() && im.0.is_finite() && im.1.is_finite();
        if !finite || re.1 <= re.0 || im.1 <= im.0 || n_re < 2 || n_im < 2 {
            return Err(Error::InvalidParameter("mesh must be a nondegenerate finite rectangle"));
        }
        Ok(Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            n_re,
            n_im,
        })
    }

    /// Node `(i, j)`, `i` along the real axis.
    pub fn node(&self, i: usize, j: usize) -> C64 {
        let re = self.re_min + (self.re_max - self.re_min) * i as f64 / (self.n_re - 1) as f64;
        let im = self.im_min + (self.im_max - self.im_min) * j as f64 / (self.n_im - 1) as f64;
        C64::new(re, im)
    }

    pub fn cell(&self) -> (f64, f64) {
        (
            (self.re_max - self.re_min) / (self.n_re - 1) as f64,
            (self.im_max - self.im_min) / (self.n_im - 1) as f64,
        )
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes in storage order: imaginary index outer, real index inner.
    pub fn nodes(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.n_im).flat_map(move |j| (0..self.n_re).map(move |i| self.node(i, j)))
    }
}

/// `ln |D(E)|` over a mesh, with local minima flagged as pole candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantField {
    pub mesh: EnergyMesh,
    /// Storage order of [`EnergyMesh::nodes`].
    pub log_abs: Vec<f64>,
    /// Mesh indices `(i, j)` of interior local minima, deepest first.
    pub minima: Vec<(usize, usize)>,
}

impl DeterminantField {
    pub fn from_values(mesh: EnergyMesh, log_abs: Vec<f64>) -> Result<Self> {
        if log_abs.len() != mesh.len() {
            return Err(Error::DimensionMismatch {
                expected: mesh.len(),
                found: log_abs.len(),
            });
        }
        let at = |i: usize, j: usize| log_abs[j * mesh.n_re + i];
        let mut minima = Vec::new();
        for j in 1..mesh.n_im - 1 {
            for i in 1..mesh.n_re - 1 {
                let v = at(i, j);
                let lower = (j - 1..=j + 1)
                    .flat_map(|jj| (i - 1..=i + 1).map(move |ii| (ii, jj)))
                    .filter(|&p| p != (i, j))
                    .all(|(ii, jj)| v < at(ii, jj));
                if lower {
                    minima.push((i, j));
                }
            }
        }
        minima.sort_by(|a, b| at(a.0, a.1).total_cmp(&at(b.0, b.1)));
        Ok(Self { mesh, log_abs, minima })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.log_abs[j * self.mesh.n_re + i]
    }

    /// Energies of the flagged minima, deepest first.
    pub fn candidates(&self) -> Vec<C64> {
        self.minima.iter().map(|&(i, j)| self.mesh.node(i, j)).collect()
    }
}

pub fn determinant_scan(model: &LatticeModel, mesh: &EnergyMesh, branch: BoundaryBranch) -> DeterminantField {
    let values = mesh.nodes().map(|e| log_abs_determinant(model, e, branch)).collect();
    DeterminantField::from_values(*mesh, values).expect("mesh length matches")
}

/// Record of the fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// `E^(0), E^(1), ...`
    pub postulates: Vec<C64>,
    /// `|E^(q) - E^(q-1)|` for `q >= 1`.
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl IterationTrace {
    /// `(q, log10 |E^(q) - target|)` for every postulate not equal to the target.
    pub fn log_errors(&self, target: C64) -> Vec<(f64, f64)> {
        self.postulates
            .iter()
            .enumerate()
            .filter_map(|(q, e)| {
                let d = (e - target).norm();
                (d > 0.0).then(|| (q as f64, d.log10()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistentOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// `E^(q) = (1 - beta) E^(q-1) + beta * lambda`; `1` is the plain iteration.
    pub mixing: f64,
    pub branch: BoundaryBranch,
}

impl Default for SelfConsistentOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100,
            mixing: 1.0,
            branch: BoundaryBranch::Retarded,
        }
    }
}

/// Eigenvalue closest to `target`; near-ties go to the smaller `|Im|`.
fn closest(eigs: &[C64], target: C64) -> C64 {
    let mut best = eigs[0];
    let mut best_d = (best - target).norm();
    for &l in &eigs[1..] {
        let d = (l - target).norm();
        if d < best_d - 1e-14 || ((d - best_d).abs() <= 1e-14 && l.im.abs() < best.im.abs()) {
            best = l;
            best_d = d;
        }
    }
    best
}

/// Iterates `E <- eigenvalue of H_eff(E) closest to E` from `e0`.
pub fn self_consistent_pole(
    model: &LatticeModel,
    e0: C64,
    opts: &SelfConsistentOptions,
    units: &Units,
) -> Result<(ResonantState, IterationTrace)> {
    if !(e0.re.is_finite() && e0.im.is_finite()) {
        return Err(Error::InvalidParameter("initial postulate must be finite"));
    }
    if !(opts.tol > 0.0) || !(opts.mixing > 0.0 && opts.mixing <= 1.0) {
        return Err(Error::InvalidParameter("need tol > 0 and mixing in (0, 1]"));
    }
    let mut trace = IterationTrace {
        postulates: alloc::vec![e0],
        residuals: Vec::new(),
        converged: false,
        iterations: 0,
    };
    let mut e = e0;
    for q in 1..=opts.max_iter {
        let h = assemble(model, e, opts.branch);
        let eigs = eigenvalues_small(&h)?;
        let lambda = closest(&eigs, e);
        let next = e * (1.0 - opts.mixing) + lambda * opts.mixing;
        let residual = (next - e).norm();
        trace.postulates.push(next);
        trace.residuals.push(residual);
        trace.iterations = q;
        if !residual.is_finite() {
            return Err(Error::NotConverged(alloc::boxed::Box::new(trace)));
        }
        if residual < opts.tol {
            trace.converged = true;
            e = next;
            break;
        }
        if let Some(period) = detect_cycle(&trace, opts.tol) {
            return Err(Error::OscillationDetected {
                period,
                trace: alloc::boxed::Box::new(trace),
            });
        }
        e = next;
    }
    if !trace.converged {
        return Err(Error::NotConverged(alloc::boxed::Box::new(trace)));
    }
    let h = assemble(model, e, opts.branch);
    let vector = eigenvector(model, &h, e);
    let units = model.units(units);
    let k = lattice_wavenumber(ComplexEnergy::from_complex(e), &units, opts.branch).to_complex();
    let residual = *trace.residuals.last().unwrap_or(&0.0);
    let state = ResonantState::new(k, e, site_parity(model, &vector), residual);
    Ok((state, trace))
}

/// A return to an earlier postulate (period >= 2) while the step size is not
/// shrinking.
fn detect_cycle(trace: &IterationTrace, tol: f64) -> Option<usize> {
    let p = &trace.postulates;
    let r = &trace.residuals;
    let last = p.len() - 1;
    for period in 2..=8.min(last) {
        if (p[last] - p[last - period]).norm() < tol && r[r.len() - 1] >= 0.9 * r[r.len() - period] {
            return Some(period);
        }
    }
    None
}

/// Parity of the site amplitudes under `x -> -x`.
pub fn site_parity(model: &LatticeModel, v: &[C64]) -> Parity {
    let l = model.half_width as i64;
    let scale = (-l..=l).map(|x| v[model.index(x)].norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Parity::None;
    }
    let (mut even, mut odd) = (0.0f64, 0.0f64);
    for x in 1..=l {
        let (a, b) = (v[model.index(x)], v[model.index(-x)]);
        even = even.max((a - b).norm());
        odd = odd.max((a + b).norm());
    }
    odd = odd.max(v[model.index(0)].norm());
    if even < 1e-6 * scale {
        Parity::Even
    } else if odd < 1e-6 * scale {
        Parity::Odd
    } else {
        Parity::None
    }
}

/// The four exact poles of the `L = 2` chain with `V0` on sites `+-1`, in
/// units of the hopping: the odd bound state `z = -1/(2 V0)` and the three
/// roots of `2 V0 z^3 - z^2 + 2 V0 z + 1 = 0`, with `E = -(z + 1/z)/2`.
pub fn exact_two_site_reference(v0_over_t: f64) -> Result<Vec<ResonantState>> {
    if !(v0_over_t.is_finite() && v0_over_t > 0.0) {
        return Err(Error::InvalidParameter("V0/t must be positive"));
    }
    let v = v0_over_t;
    let coeffs = [1.0, 2.0 * v, -1.0, 2.0 * v];
    let cubic = |z: C64| ((z * (2.0 * v) - 1.0) * z + 2.0 * v) * z + 1.0;
    let units = Units::default();
    let to_state = |z: C64, parity: Parity, residual: f64| {
        let e = -(z + z.inv()) * 0.5;
        let k = crate::dispersion::wavenumber_from_factor(z, &units).to_complex();
        ResonantState::new(k, e, parity, residual)
    };
    let mut states = alloc::vec![to_state(C64::new(-0.5 / v, 0.0), Parity::Odd, 0.0)];
    for z in crate::poly::real_roots_of(&coeffs)? {
        let z = if z.im.abs() < 1e-14 * z.norm() { C64::new(z.re, 0.0) } else { z };
        states.push(to_state(z, Parity::Even, cubic(z).norm()));
    }
    states.sort_by(|a, b| a.kind.cmp(&b.kind).then(b.energy.epsilon.total_cmp(&a.energy.epsilon)));
    Ok(states)
}

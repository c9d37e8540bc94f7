use std::path::Path;

use resonant_core::delta_well::{siegert_roots, DoubleDeltaModel, RootSearch};
use resonant_core::flux::{
    boundary_flux, expanding_volume_number, fixed_volume_number, gamma_flux_identity, width_from_wavenumber,
    SampledWaveFunction,
};
use resonant_core::{Complex64, Parity, ResonantState};

use super::delta_well::model;
use super::{linspace, Ctx};
use crate::failure::{config_error, core};
use crate::output::{cx, Table};

fn chosen_state(ctx: &Ctx) -> anyhow::Result<(DoubleDeltaModel, ResonantState)> {
    let f = &ctx.cfg.flux;
    let m = model(f.a_over_l, ctx.cfg.delta_well.half_separation)?;
    let parity = match f.parity.parities() {
        [p] => *p,
        _ => return Err(config_error("[flux] parity must be even or odd")),
    };
    let search = RootSearch::window(0.0, 4.0 * std::f64::consts::PI);
    let found = siegert_roots(&m, parity, &search, &ctx.units).map_err(core)?;
    let state = found
        .states
        .get(f.root)
        .copied()
        .ok_or_else(|| config_error(format!("[flux] only {} {} roots below Re K l = 4 pi", found.states.len(), parity.as_str())))?;
    Ok((m, state))
}

/// Reads `x, re, im` rows; `#` lines and a non-numeric first line are skipped.
pub fn read_wavefunction(path: &Path) -> anyhow::Result<SampledWaveFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = cols.iter().take(3).map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 3 => {
                xs.push(v[0]);
                vs.push(Complex64::new(v[1], v[2]));
            }
            _ if xs.is_empty() => continue,
            _ => return Err(config_error(format!("{}:{}: expected x,re,im", path.display(), n + 1))),
        }
    }
    SampledWaveFunction::from_grid(&xs, vs).map_err(core)
}

pub fn report(ctx: &mut Ctx) -> anyhow::Result<()> {
    let f = ctx.cfg.flux.clone();
    if let Some(file) = &f.wavefunction {
        let psi = read_wavefunction(Path::new(file))?;
        let mut t = Table::new("segments", &["L", "ReH", "ImH", "flux", "imbalance"])
            .comment(format!("sampled wave function {file}, V = 0 on the grid"));
        let free = |_: f64| 0.0;
        for &lw in &f.half_widths {
            let r = boundary_flux(&psi, &free, lw, &ctx.units).map_err(core)?;
            let [hr, hi] = cx(r.energy_expectation);
            t.push(vec![lw.into(), hr, hi, r.boundary_flux.into(), r.imbalance.into()]);
        }
        return ctx.write(t);
    }
    let (m, s) = chosen_state(ctx)?;
    let l = m.half_separation;
    let mut t = Table::new("identity", &["L", "lhs", "rhs", "relative_gap"]).comment(format!(
        "a/l = {}, {} root {}: K = {} {:+}i, Gamma = {}, Gamma from K = {}",
        m.a_over_l,
        s.parity.as_str(),
        f.root,
        s.k().re,
        s.k().im,
        s.gamma(),
        width_from_wavenumber(s.k(), &ctx.units)
    ));
    for &lw in &f.half_widths {
        let g = gamma_flux_identity(&s, &m, lw * l, &ctx.units).map_err(core)?;
        t.push(vec![(lw * l).into(), g.lhs.into(), g.rhs.into(), g.relative_gap.into()]);
    }
    ctx.write(t)
}

pub fn expanding(ctx: &mut Ctx) -> anyhow::Result<()> {
    let f = ctx.cfg.flux.clone();
    if !(f.t_max > 0.0) || f.t_points < 1 {
        return Err(config_error("[flux] need t_max > 0 and t_points >= 1"));
    }
    let (m, s) = chosen_state(ctx)?;
    let times = linspace(f.t_max / f.t_points as f64, f.t_max, f.t_points);
    let grow = expanding_volume_number(&s, &m, &times, &ctx.units).map_err(core)?;
    let fixed = fixed_volume_number(&s, &m, 2.0 * m.half_separation, &times, &ctx.units);
    let mut t = Table::new("volume", &["t", "L", "N_expanding", "N_tail", "N_fixed"]).comment(format!(
        "a/l = {}, {} root {}, fixed window |x| < {}",
        m.a_over_l,
        match s.parity {
            Parity::Odd => "odd",
            _ => "even",
        },
        f.root,
        2.0 * m.half_separation
    ));
    for (g, (_, n)) in grow.iter().zip(&fixed) {
        t.push(vec![g.t.into(), g.half_width.into(), g.number.into(), g.tail_number.into(), (*n).into()]);
    }
    ctx.write(t)
}

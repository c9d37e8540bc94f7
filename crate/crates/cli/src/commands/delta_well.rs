use rayon::prelude::*;
use resonant_core::delta_well::{
    anti_bound_roots, local_maxima, parity_curves, siegert_roots, transmission_scan, DoubleDeltaModel, RootSearch,
};
use resonant_core::{Parity, ResonantState, Units};

use super::{linspace, Ctx};
use crate::failure::{config_error, core};
use crate::output::{cx, Cell, Table};

pub fn model(a_over_l: f64, half_separation: f64) -> anyhow::Result<DoubleDeltaModel> {
    DoubleDeltaModel::new(a_over_l, half_separation).map_err(|e| config_error(format!("[delta_well] {e}")))
}

pub const ROOT_COLUMNS: [&str; 10] = ["parity", "kind", "ReK", "ImK", "ReE", "ImE", "Gamma", "ReKl", "ImKl", "residual"];

pub fn state_row(s: &ResonantState, l: f64) -> Vec<Cell> {
    let [kr, ki] = cx(s.k());
    let [er, ei] = cx(s.e());
    vec![
        s.parity.as_str().into(),
        s.kind.as_str().into(),
        kr,
        ki,
        er,
        ei,
        s.gamma().into(),
        (s.k().re * l).into(),
        (s.k().im * l).into(),
        s.residual.into(),
    ]
}

pub fn roots_table(
    m: &DoubleDeltaModel,
    parities: &[Parity],
    search: &RootSearch,
    units: &Units,
    name: &str,
) -> anyhow::Result<(Table, Vec<ResonantState>)> {
    let mut t = Table::new(name, &ROOT_COLUMNS).comment(format!(
        "a/l = {}, l = {}, window {} < Re K l <= {}",
        m.a_over_l, m.half_separation, search.xi_min, search.xi_max
    ));
    let mut all = Vec::new();
    for &p in parities {
        let found = siegert_roots(m, p, search, units).map_err(core)?;
        if found.closed_branch {
            t.comments.push(format!("{}: modulus curve has a closed branch near the origin", p.as_str()));
        }
        all.extend(found.states);
    }
    for s in &all {
        t.push(state_row(s, m.half_separation));
    }
    Ok((t, all))
}

pub fn curves_table(m: &DoubleDeltaModel, xi: &[f64], name: &str) -> anyhow::Result<Table> {
    let samples: Vec<_> = xi
        .par_chunks(64)
        .map(|c| parity_curves(m, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(core)?
        .into_iter()
        .flatten()
        .collect();
    let mut t = Table::new(name, &["xi", "eta_phase", "eta_circle_1", "eta_circle_2", "eta_circle_3"])
        .comment(format!("a/l = {}; eta_circle_* is nan where that branch is absent", m.a_over_l));
    for s in samples {
        let c = |i: usize| Cell::Num(s.eta_circle.get(i).copied().unwrap_or(f64::NAN));
        t.push(vec![s.xi.into(), s.eta_fixed_point.into(), c(0), c(1), c(2)]);
    }
    Ok(t)
}

pub fn transmission_tables(m: &DoubleDeltaModel, k: &[f64], name: &str) -> (Table, Table) {
    let samples: Vec<_> = k.par_chunks(256).flat_map_iter(|c| transmission_scan(m, c)).collect();
    let mut t = Table::new(name, &["k", "T"]).comment(format!("a/l = {}, l = {}", m.a_over_l, m.half_separation));
    for s in &samples {
        t.push(vec![s.k.into(), s.transmission.into()]);
    }
    let mut peaks = Table::new(format!("{name}_peaks"), &["k", "T"]);
    for i in local_maxima(&samples) {
        peaks.push(vec![samples[i].k.into(), samples[i].transmission.into()]);
    }
    (t, peaks)
}

fn search(ctx: &Ctx) -> RootSearch {
    let d = &ctx.cfg.delta_well;
    RootSearch {
        xi_min: d.xi_min,
        xi_max: d.xi_max,
        tol: d.tol,
        include_mirror: d.include_mirror,
    }
}

pub fn roots(ctx: &mut Ctx) -> anyhow::Result<()> {
    let d = &ctx.cfg.delta_well;
    let m = model(d.a_over_l, d.half_separation)?;
    let (t, states) = roots_table(&m, d.parity.parities(), &search(ctx), &ctx.units, "roots")?;
    ctx.write(t)?;
    let mut anti = Table::new("anti_bound", &ROOT_COLUMNS);
    for &p in d.parity.parities() {
        for s in anti_bound_roots(&m, p, 4.0, &ctx.units) {
            anti.push(state_row(&s, m.half_separation));
        }
    }
    ctx.write(anti)?;
    ctx.out.note("roots", states.len());
    Ok(())
}

pub fn curves(ctx: &mut Ctx) -> anyhow::Result<()> {
    let d = &ctx.cfg.delta_well;
    let m = model(d.a_over_l, d.half_separation)?;
    let lo = d.xi_min.max(0.0);
    let step = (d.xi_max - lo) / d.xi_points.max(1) as f64;
    let xi = linspace(lo + step, d.xi_max, d.xi_points);
    ctx.write(curves_table(&m, &xi, "curves")?)?;
    let (r, _) = roots_table(&m, d.parity.parities(), &search(ctx), &ctx.units, "roots")?;
    ctx.write(r)
}

pub fn transmission(ctx: &mut Ctx) -> anyhow::Result<()> {
    let d = &ctx.cfg.delta_well;
    if !(d.k_min > 0.0 && d.k_max > d.k_min) || d.k_points < 2 {
        return Err(config_error("[delta_well] need 0 < k_min < k_max and k_points >= 2"));
    }
    let m = model(d.a_over_l, d.half_separation)?;
    let k = linspace(d.k_min, d.k_max, d.k_points);
    let (t, peaks) = transmission_tables(&m, &k, "transmission");
    ctx.write(t)?;
    ctx.write(peaks)?;
    let (r, _) = roots_table(&m, d.parity.parities(), &search(ctx), &ctx.units, "roots")?;
    ctx.write(r)
}

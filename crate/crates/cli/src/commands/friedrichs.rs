use resonant_core::dynamics::WaveField;
use resonant_core::friedrichs::{
    eigenfunction, energy_plane_check, quartic_roots, root_label, stencil_residual, sweep as sweep_roots,
    FriedrichsModel, FriedrichsState,
};

use super::{linspace, Ctx};
use crate::failure::{config_error, core};
use crate::output::{cx, Cell, Table};

pub fn model(g: f64, ed: f64, hopping: f64) -> anyhow::Result<FriedrichsModel> {
    FriedrichsModel::new(g, ed, hopping).map_err(|e| config_error(format!("[friedrichs] {e}")))
}

pub fn roots_table(m: &FriedrichsModel, states: &[FriedrichsState], name: &str) -> Table {
    let mut t = Table::new(
        name,
        &[
            "root_id", "kind", "Rez", "Imz", "ReK", "ImK", "ReE", "ImE", "Gamma", "ReB", "ImB", "ReF", "ImF",
            "residual", "energy_check",
        ],
    )
    .comment(format!("g/t = {}, Ed/t = {}, z = e^(iK)", m.g_tilde, m.ed_tilde));
    for (i, s) in states.iter().enumerate() {
        let mut row: Vec<Cell> = vec![root_label(i).into(), s.kind.as_str().into()];
        row.extend(cx(s.z));
        row.extend(cx(s.wave_number.to_complex()));
        row.extend(cx(s.energy.to_complex()));
        row.push(s.energy.gamma().into());
        row.extend(cx(s.chain_amplitude));
        row.extend(cx(s.adatom_amplitude));
        row.push(s.residual.into());
        row.push(energy_plane_check(s, m).into());
        t.push(row);
    }
    t
}

/// Chain sites `|x| <= half_width` as `x, re, im`; the adatom amplitude goes
/// into a comment line.
pub fn field_table(field: &WaveField, half_width: usize, name: &str) -> Table {
    let mut t = Table::new(name, &["x", "re", "im"]).comment(format!("t = {}", field.time));
    if let Some(f) = field.adatom {
        t.comments.push(format!("adatom = {} {:+}i", f.re, f.im));
    }
    let l = half_width.min(field.half_width()) as i64;
    for x in -l..=l {
        let [r, i] = cx(field.site(x));
        t.push(vec![(x as f64).into(), r, i]);
    }
    t
}

pub fn sweep_table(g: f64, hopping: f64, ed: &[f64], name: &str) -> anyhow::Result<Table> {
    let points = sweep_roots(g, hopping, ed).map_err(core)?;
    let mut t = Table::new(name, &["Ed", "root_id", "ReK", "ImK", "ReE", "ImE", "kind"])
        .comment(format!("g/t = {g}; root ids follow continuity in Ed"));
    for p in &points {
        for (i, s) in p.roots.iter().enumerate() {
            let [kr, ki] = cx(s.wave_number.to_complex());
            let [er, ei] = cx(s.energy.to_complex());
            t.push(vec![p.ed_tilde.into(), root_label(i).into(), kr, ki, er, ei, s.kind.as_str().into()]);
        }
    }
    Ok(t)
}

pub fn roots(ctx: &mut Ctx) -> anyhow::Result<()> {
    let f = &ctx.cfg.friedrichs;
    let m = model(f.g_tilde, f.ed_tilde, ctx.units.hopping)?;
    let states = quartic_roots(&m).map_err(core)?;
    ctx.write(roots_table(&m, &states, "roots"))
}

pub fn sweep(ctx: &mut Ctx) -> anyhow::Result<()> {
    let f = &ctx.cfg.friedrichs;
    if !(f.ed_max > f.ed_min) || f.ed_points < 2 {
        return Err(config_error("[friedrichs] need ed_min < ed_max and ed_points >= 2"));
    }
    let ed = linspace(f.ed_min, f.ed_max, f.ed_points);
    ctx.write(sweep_table(f.g_tilde, ctx.units.hopping, &ed, "sweep")?)
}

pub fn eigenfunctions(ctx: &mut Ctx) -> anyhow::Result<()> {
    let f = &ctx.cfg.friedrichs;
    let m = model(f.g_tilde, f.ed_tilde, ctx.units.hopping)?;
    let states = quartic_roots(&m).map_err(core)?;
    ctx.write(roots_table(&m, &states, "roots"))?;
    for (i, s) in states.iter().enumerate() {
        let field = eigenfunction(s, f.half_width);
        let residual = stencil_residual(&field, &m, s.energy.to_complex());
        let t = field_table(&field, f.half_width, &format!("eigenfunction_{}", root_label(i)))
            .comment(format!("stencil residual {residual:e}"));
        ctx.write(t)?;
    }
    Ok(())
}

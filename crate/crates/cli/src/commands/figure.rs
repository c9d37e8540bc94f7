//! Plot-ready tables, one CSV per panel.

use rayon::prelude::*;
use resonant_core::delta_well::RootSearch;
use resonant_core::friedrichs::{eigenfunction, quartic_roots, root_label};
use resonant_core::lattice::{self_consistent_pole, EnergyMesh, LatticeModel};
use resonant_core::{Complex64, Error};

use super::{delta_well, dynamics, friedrichs, lattice, linspace, Ctx};
use crate::config::DynamicsConfig;
use crate::failure::{config_error, core};
use crate::output::Table;

pub const IDS: [&str; 7] = ["fig3", "fig4", "fig5", "fig8", "fig9", "fig12", "fig13"];

/// `a/l` of panels (a) to (e) of the double-delta figures.
pub const PANEL_RATIOS: [f64; 5] = [0.1, 1.0, 3.5, 4.0, 10.0];

const XI_MAX: f64 = 3.0 * std::f64::consts::PI;
const FRAME_TIMES: [f64; 4] = [0.0, 20.0, 40.0, 60.0];

pub fn run(ctx: &mut Ctx) -> anyhow::Result<()> {
    let id = ctx.cfg.figure.id.trim().to_ascii_lowercase();
    let ids: Vec<&str> = if id == "all" {
        IDS.to_vec()
    } else if let Some(&known) = IDS.iter().find(|&&f| f == id) {
        vec![known]
    } else {
        return Err(config_error(format!("unknown figure {id:?}; expected one of {} or all", IDS.join(", "))));
    };
    for f in ids {
        match f {
            "fig3" => fig3(ctx)?,
            "fig4" => fig4(ctx)?,
            "fig5" => fig5(ctx)?,
            "fig8" => fig8(ctx)?,
            "fig9" => fig9(ctx)?,
            "fig12" => fig12(ctx)?,
            "fig13" => fig13(ctx)?,
            _ => unreachable!(),
        }
    }
    Ok(())
}

fn panel(i: usize) -> char {
    (b'a' + i as u8) as char
}

fn roots_both(ctx: &Ctx, a_over_l: f64, name: &str) -> anyhow::Result<Table> {
    let m = delta_well::model(a_over_l, 1.0)?;
    let search = RootSearch::window(0.0, XI_MAX);
    let parities = crate::config::ParityChoice::Both.parities();
    Ok(delta_well::roots_table(&m, parities, &search, &ctx.units, name)?.0)
}

fn fig3(ctx: &mut Ctx) -> anyhow::Result<()> {
    let xi = linspace(XI_MAX / 3000.0, XI_MAX, 3000);
    let tables = PANEL_RATIOS
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let m = delta_well::model(r, 1.0)?;
            let curves = delta_well::curves_table(&m, &xi, &format!("fig3{}_curves", panel(i)))?;
            let roots = roots_both(ctx, r, &format!("fig3{}_roots", panel(i)))?;
            Ok((curves, roots))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    for (c, r) in tables {
        ctx.write(c)?;
        ctx.write(r)?;
    }
    Ok(())
}

fn fig4(ctx: &mut Ctx) -> anyhow::Result<()> {
    let k = linspace(XI_MAX / 3000.0, XI_MAX, 3000);
    let tables = PANEL_RATIOS
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let m = delta_well::model(r, 1.0)?;
            let (t, peaks) = delta_well::transmission_tables(&m, &k, &format!("fig4{}_transmission", panel(i)));
            let roots = roots_both(ctx, r, &format!("fig4{}_roots", panel(i)))?;
            Ok((t, peaks, roots))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    for (t, p, r) in tables {
        ctx.write(t)?;
        ctx.write(p)?;
        ctx.write(r)?;
    }
    Ok(())
}

fn fig5(ctx: &mut Ctx) -> anyhow::Result<()> {
    let ed = linspace(-2.0, 2.0, 401);
    let t = friedrichs::sweep_table(0.1, ctx.units.hopping, &ed, "fig5_sweep")?;
    ctx.write(t)
}

fn two_site(ctx: &Ctx) -> anyhow::Result<LatticeModel> {
    LatticeModel::two_site(1.0, ctx.units.hopping).map_err(core)
}

fn fig8(ctx: &mut Ctx) -> anyhow::Result<()> {
    let model = two_site(ctx)?;
    let t = ctx.units.hopping;
    let mesh = EnergyMesh::new((-t, t), (-0.5 * t, 0.0), 200, 200).map_err(core)?;
    let field = lattice::scan_field(&model, &mesh, resonant_core::dispersion::BoundaryBranch::Retarded)?;
    let (grid, minima) = lattice::field_tables(&field, "fig8_logD");
    ctx.write(grid.comment("V0/t = 1"))?;
    ctx.write(minima)
}

fn fig9(ctx: &mut Ctx) -> anyhow::Result<()> {
    let model = two_site(ctx)?;
    let mut opts = lattice::options(&ctx.cfg.lattice);
    opts.branch = resonant_core::dispersion::BoundaryBranch::Retarded;
    let e0 = Complex64::new(-0.3, -0.1) * ctx.units.hopping;
    let trace = match self_consistent_pole(&model, e0, &opts, &ctx.units) {
        Ok((_, trace)) => trace,
        Err(Error::NotConverged(trace) | Error::OscillationDetected { trace, .. }) => *trace,
        Err(e) => return Err(core(e)),
    };
    let mut t = Table::new("fig9_convergence", &["q", "log10_residual", "ReE", "ImE"])
        .comment("V0/t = 1, E0 = -0.3 - 0.1i; residual after iteration q");
    for (q, r) in trace.residuals.iter().enumerate() {
        let e = trace.postulates[q + 1];
        t.push(vec![(q + 1).into(), r.log10().into(), e.re.into(), e.im.into()]);
    }
    ctx.write(t)
}

fn fig12(ctx: &mut Ctx) -> anyhow::Result<()> {
    let m = friedrichs::model(0.1, -0.5, ctx.units.hopping)?;
    let states = quartic_roots(&m).map_err(core)?;
    ctx.write(friedrichs::roots_table(&m, &states, "fig12_roots"))?;
    for (i, s) in states.iter().enumerate() {
        let field = eigenfunction(s, 20);
        ctx.write(friedrichs::field_table(&field, 20, &format!("fig12_{}_t0", root_label(i))))?;
    }
    Ok(())
}

fn fig13(ctx: &mut Ctx) -> anyhow::Result<()> {
    let base = DynamicsConfig {
        t_end: 60.0,
        record_every: 20,
        frame_half_width: 20,
        ..ctx.cfg.dynamics.clone()
    };
    let base = DynamicsConfig {
        model: crate::config::DynamicsModelConfig {
            g_tilde: 0.1,
            ed_tilde: -0.5,
            ..base.model
        },
        ..base
    };
    let hopping = ctx.units.hopping;
    let units = ctx.units;
    let runs = ['a', 'b', 'c', 'd']
        .par_iter()
        .map(|&c| {
            let cfg = DynamicsConfig {
                state: c.to_string(),
                ..base.clone()
            };
            dynamics::simulate(&cfg, hopping, &units)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let hbar_over_t = units.hbar / hopping;
    for r in &runs {
        for &target in &FRAME_TIMES {
            let snap = r
                .snapshots
                .iter()
                .min_by(|a, b| (a.time - target * hbar_over_t).abs().total_cmp(&(b.time - target * hbar_over_t).abs()))
                .expect("at least the initial snapshot");
            let name = format!("fig13_{}_t{:02}", r.label, target as u32);
            ctx.write(friedrichs::field_table(snap, 20, &name))?;
        }
        ctx.write(dynamics::adatom_table(r, &format!("fig13_{}_adatom", r.label)))?;
    }
    Ok(())
}

use resonant_core::dynamics::{
    amplitude_series, boundary_from_state, eigenstate_phase_check, evolve, fitted_decay_rate, modulus_drift,
    window_norm_series, EvolutionConfig, Probe, WaveField,
};
use resonant_core::friedrichs::{eigenfunction, quartic_roots, root_label, FriedrichsState};
use serde_json::json;

use super::friedrichs::{field_table, model};
use super::Ctx;
use crate::config::DynamicsConfig;
use crate::failure::{config_error, core};
use crate::output::{cx, Table};

pub struct Run {
    pub label: char,
    pub state: FriedrichsState,
    pub snapshots: Vec<WaveField>,
}

pub fn pick(states: &[FriedrichsState], label: &str) -> anyhow::Result<(char, FriedrichsState)> {
    let mut chars = label.trim().chars();
    let (Some(c), None) = (chars.next(), chars.next()) else {
        return Err(config_error(format!("[dynamics] state must be a single root label, got {label:?}")));
    };
    let c = c.to_ascii_lowercase();
    (0..states.len())
        .find(|&i| root_label(i) == c)
        .map(|i| (c, states[i]))
        .ok_or_else(|| config_error(format!("[dynamics] no root labelled {c:?}")))
}

pub fn simulate(d: &DynamicsConfig, hopping: f64, units: &resonant_core::Units) -> anyhow::Result<Run> {
    let m = model(d.model.g_tilde, d.model.ed_tilde, hopping)?;
    let states = quartic_roots(&m).map_err(core)?;
    let (label, state) = pick(&states, &d.state)?;
    let lattice = m.lattice(d.model.half_width).map_err(core)?;
    let cfg = EvolutionConfig::new(d.dt, d.t_end, d.record_every).map_err(|e| config_error(format!("[dynamics] {e}")))?;
    let init = eigenfunction(&state, d.model.half_width);
    let snapshots = evolve(&lattice, &init, &state.to_resonant(), &cfg, units).map_err(core)?;
    Ok(Run { label, state, snapshots })
}

pub fn adatom_table(run: &Run, name: &str) -> Table {
    let mut t = Table::new(name, &["t", "ReF", "ImF", "absF2"]).comment(format!("state {}", run.label));
    for (time, f) in amplitude_series(&run.snapshots, Probe::Adatom) {
        let [r, i] = cx(f);
        t.push(vec![time.into(), r, i, f.norm_sqr().into()]);
    }
    t
}

pub fn run(ctx: &mut Ctx) -> anyhow::Result<()> {
    let d = ctx.cfg.dynamics.clone();
    let hopping = ctx.units.hopping;
    let r = simulate(&d, hopping, &ctx.units)?;
    let e = r.state.energy.to_complex();
    let gamma = r.state.energy.gamma();

    let mut frames = Vec::new();
    for (i, snap) in r.snapshots.iter().enumerate() {
        let name = format!("frame_{i:04}");
        ctx.write(field_table(snap, d.frame_half_width, &name))?;
        frames.push(json!({ "file": format!("{name}.csv"), "t": snap.time }));
    }
    ctx.write(adatom_table(&r, "adatom"))?;

    let boundary = boundary_from_state(&r.state.to_resonant(), hopping, &ctx.units);
    let lw = d.frame_half_width.min(d.model.half_width);
    let series = window_norm_series(&r.snapshots, lw, hopping, boundary, ctx.units.hbar).map_err(core)?;
    let mut t = Table::new("norm", &["t", "N_window", "outflow"]).comment(format!("window |x| <= {lw}"));
    for w in &series {
        t.push(vec![w.t.into(), w.norm.into(), w.outflow.into()]);
    }
    ctx.write(t)?;

    let fitted = fitted_decay_rate(&amplitude_series(&r.snapshots, Probe::Adatom), 1e-300);
    let phase = eigenstate_phase_check(&r.snapshots, e, ctx.units.hbar);
    let drift = modulus_drift(&r.snapshots);
    let dt_phys = d.dt * ctx.units.hbar / hopping;
    let meta = json!({
        "units": { "hbar": ctx.units.hbar, "mass": ctx.units.mass, "lattice_dx": ctx.units.lattice_dx, "hopping": hopping },
        "state": r.label.to_string(),
        "kind": r.state.kind.as_str(),
        "E": [e.re, e.im],
        "Gamma": gamma,
        "dt": dt_phys,
        "fitted_decay_rate": fitted,
        "phase_check": phase,
        "modulus_drift": drift,
        "frames": frames,
    });
    ctx.out.write_json("frames", &meta)?;
    ctx.out.note("Gamma", gamma);
    ctx.out.note("phase_check", phase);
    ctx.out.note("modulus_drift", drift);
    Ok(())
}

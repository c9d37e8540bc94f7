use rayon::prelude::*;
use resonant_core::dispersion::BoundaryBranch;
use resonant_core::lattice::{
    exact_two_site_reference, log_abs_determinant, self_consistent_pole, DeterminantField, EnergyMesh, IterationTrace,
    LatticeModel, SelfConsistentOptions,
};
use resonant_core::{Complex64, Error};

use super::delta_well::{state_row, ROOT_COLUMNS};
use super::Ctx;
use crate::config::{LatticeConfig, LatticePreset};
use crate::failure::{config_error, core};
use crate::output::{cx, Table};

pub fn scan_field(model: &LatticeModel, mesh: &EnergyMesh, branch: BoundaryBranch) -> anyhow::Result<DeterminantField> {
    let nodes: Vec<Complex64> = mesh.nodes().collect();
    let values: Vec<f64> = nodes.par_iter().map(|&e| log_abs_determinant(model, e, branch)).collect();
    DeterminantField::from_values(*mesh, values).map_err(core)
}

pub fn field_tables(field: &DeterminantField, name: &str) -> (Table, Table) {
    let mesh = &field.mesh;
    let mut t = Table::new(name, &["ReE", "ImE", "logD"])
        .comment(format!("{} x {} mesh, real index fastest; logD = ln|det(E - H_eff(E))|", mesh.n_re, mesh.n_im));
    for (e, v) in mesh.nodes().zip(&field.log_abs) {
        let [r, i] = cx(e);
        t.push(vec![r, i, (*v).into()]);
    }
    let mut m = Table::new(format!("{name}_minima"), &["ReE", "ImE", "logD"]).comment("local minima, deepest first");
    for &(i, j) in &field.minima {
        let [r, im] = cx(mesh.node(i, j));
        m.push(vec![r, im, field.value(i, j).into()]);
    }
    (t, m)
}

pub fn trace_table(trace: &IterationTrace, name: &str) -> Table {
    let mut t = Table::new(name, &["q", "ReE", "ImE", "residual"])
        .comment("residual = |E_q - E_{q-1}|; nan for the initial postulate");
    for (q, e) in trace.postulates.iter().enumerate() {
        let [r, i] = cx(*e);
        let res = if q == 0 { f64::NAN } else { trace.residuals[q - 1] };
        t.push(vec![q.into(), r, i, res.into()]);
    }
    t
}

fn mesh(l: &LatticeConfig) -> anyhow::Result<EnergyMesh> {
    EnergyMesh::new(
        (l.re_range[0], l.re_range[1]),
        (l.im_range[0], l.im_range[1]),
        l.n_re,
        l.n_im,
    )
    .map_err(|e| config_error(format!("[lattice] {e}")))
}

pub fn scan(ctx: &mut Ctx) -> anyhow::Result<()> {
    let l = &ctx.cfg.lattice;
    let model = l.build(&ctx.units)?;
    let field = scan_field(&model, &mesh(l)?, l.branch.into())?;
    let (t, m) = field_tables(&field, "scan");
    ctx.out.note("minima", field.minima.len());
    ctx.write(t)?;
    ctx.write(m)
}

pub fn options(l: &LatticeConfig) -> SelfConsistentOptions {
    SelfConsistentOptions {
        tol: l.tol,
        max_iter: l.max_iter,
        mixing: l.mixing,
        branch: l.branch.into(),
    }
}

pub fn solve(ctx: &mut Ctx) -> anyhow::Result<()> {
    let l = &ctx.cfg.lattice;
    let model = l.build(&ctx.units)?;
    let e0 = Complex64::new(l.e0[0], l.e0[1]);
    match self_consistent_pole(&model, e0, &options(l), &ctx.units) {
        Ok((state, trace)) => {
            ctx.out.note("iterations", trace.iterations);
            ctx.write(trace_table(&trace, "trace"))?;
            let mut t = Table::new("pole", &ROOT_COLUMNS);
            t.push(state_row(&state, ctx.units.lattice_dx));
            ctx.write(t)
        }
        Err(e) => {
            if let Error::NotConverged(trace) | Error::OscillationDetected { trace, .. } = &e {
                ctx.out.note("iterations", trace.iterations);
                ctx.write(trace_table(trace, "trace"))?;
            }
            Err(core(e))
        }
    }
}

pub fn exact(ctx: &mut Ctx) -> anyhow::Result<()> {
    let l = &ctx.cfg.lattice;
    if l.preset != LatticePreset::TwoSite {
        return Err(config_error("[lattice] exact poles are available for preset = \"two-site\" only"));
    }
    let t_h = ctx.units.hopping;
    let mut t = Table::new("exact", &ROOT_COLUMNS).comment(format!("V0/t = {}", l.v0));
    for s in exact_two_site_reference(l.v0).map_err(core)? {
        let mut row = state_row(&s, ctx.units.lattice_dx);
        let [er, ei] = cx(s.e() * t_h);
        row[4] = er;
        row[5] = ei;
        row[6] = (s.gamma() * t_h).into();
        t.push(row);
    }
    ctx.write(t)
}

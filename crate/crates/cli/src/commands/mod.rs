//! One module per subcommand. Each writes its tables into the [`Output`].

pub mod delta_well;
pub mod dynamics;
pub mod figure;
pub mod flux;
pub mod friedrichs;
pub mod jost;
pub mod lattice;

use resonant_core::Units;

use crate::args::Command;
use crate::config::RunConfig;
use crate::output::{Output, Table};

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub units: Units,
    pub out: &'a mut Output,
}

impl Ctx<'_> {
    pub fn units_line(&self) -> String {
        let u = &self.units;
        format!(
            "units: hbar = {}, m = {}, dx = {}, t = {}",
            u.hbar, u.mass, u.lattice_dx, u.hopping
        )
    }

    /// Writes a table with the units line in front of its comments.
    pub fn write(&mut self, mut t: Table) -> anyhow::Result<()> {
        t.comments.insert(0, self.units_line());
        self.out.write_table(&t)
    }
}

/// Evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn dispatch(cmd: &Command, ctx: &mut Ctx) -> anyhow::Result<()> {
    use crate::args::*;
    match cmd {
        Command::DeltaWell(DeltaWellCmd::Roots(_)) => delta_well::roots(ctx),
        Command::DeltaWell(DeltaWellCmd::Curves(_)) => delta_well::curves(ctx),
        Command::DeltaWell(DeltaWellCmd::Transmission(_)) => delta_well::transmission(ctx),
        Command::Flux(FluxCmd::Report(_)) => flux::report(ctx),
        Command::Flux(FluxCmd::Expanding(_)) => flux::expanding(ctx),
        Command::Lattice(LatticeCmd::Scan(_)) => lattice::scan(ctx),
        Command::Lattice(LatticeCmd::Solve(_)) => lattice::solve(ctx),
        Command::Lattice(LatticeCmd::Exact(_)) => lattice::exact(ctx),
        Command::Friedrichs(FriedrichsCmd::Roots(_)) => friedrichs::roots(ctx),
        Command::Friedrichs(FriedrichsCmd::Sweep(_)) => friedrichs::sweep(ctx),
        Command::Friedrichs(FriedrichsCmd::Eigenfunction(_)) => friedrichs::eigenfunctions(ctx),
        Command::Dynamics(DynamicsCmd::Run(_)) => dynamics::run(ctx),
        Command::Jost(JostCmd::Smatrix(_)) => jost::smatrix(ctx),
        Command::Jost(JostCmd::Poles(_)) => jost::poles(ctx),
        Command::Jost(JostCmd::Sigma(_)) => jost::sigma(ctx),
        Command::Figure(_) => figure::run(ctx),
        Command::Replay(_) => unreachable!("replay is resolved before dispatch"),
    }
}

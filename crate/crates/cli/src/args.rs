//! Command-line grammar. Every flag that mirrors a config key overrides it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{BranchChoice, LatticePreset, ParityChoice, PotentialFamily, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "resonant", version, about = "Siegert resonances of open one-dimensional systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: $RESONANT_OUTPUT_DIR/<command> or ./resonant-out/<command>).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parameter scans (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Also write every table as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Double-delta well: exact roots, parity curves, transmission.
    #[command(subcommand)]
    DeltaWell(DeltaWellCmd),
    /// Flux and lifetime identities.
    #[command(subcommand)]
    Flux(FluxCmd),
    /// Tight-binding chains with effective-potential boundaries.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Chain with a side-coupled adatom.
    #[command(subcommand)]
    Friedrichs(FriedrichsCmd),
    /// Time evolution of a resonant eigenfunction.
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    /// Partial-wave Jost functions.
    #[command(subcommand)]
    Jost(JostCmd),
    /// Data behind one figure (or `all`).
    Figure(FigureArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct DeltaWellArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a_over_l: Option<f64>,
    #[arg(long)]
    pub parity: Option<ParityChoice>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Also list the anti-resonant partners.
    #[arg(long)]
    pub include_mirror: bool,
}

#[derive(Debug, Subcommand)]
pub enum DeltaWellCmd {
    Roots(DeltaWellArgs),
    Curves(DeltaWellArgs),
    Transmission(DeltaWellArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct FluxArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a_over_l: Option<f64>,
    #[arg(long)]
    pub parity: Option<ParityChoice>,
    #[arg(long)]
    pub root: Option<usize>,
    /// Sampled wave function (`x,re,im` CSV) to test instead of the exact one.
    #[arg(long)]
    pub wavefunction: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum FluxCmd {
    Report(FluxArgs),
    Expanding(FluxArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct LatticeArgs {
    #[arg(long)]
    pub preset: Option<LatticePreset>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// First postulate as `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
    pub e0: Option<[f64; 2]>,
    /// Chain description (TOML: `half_width`, `[sites]`, optional `[adatom]`); implies `--preset custom`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub branch: Option<BranchChoice>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    Scan(LatticeArgs),
    Solve(LatticeArgs),
    Exact(LatticeArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct FriedrichsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub g_tilde: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ed_tilde: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum FriedrichsCmd {
    Roots(FriedrichsArgs),
    Sweep(FriedrichsArgs),
    Eigenfunction(FriedrichsArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct DynamicsArgs {
    /// TOML file with `g_tilde`, `ed_tilde`, `half_width`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Root label `a`..`d`.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum DynamicsCmd {
    Run(DynamicsArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct JostArgs {
    #[arg(long)]
    pub potential: Option<PotentialFamily>,
    #[arg(long, allow_negative_numbers = true)]
    pub strength: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub depth: Option<f64>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum JostCmd {
    Smatrix(JostArgs),
    Poles(JostArgs),
    Sigma(JostArgs),
}

#[derive(Debug, Args, Clone)]
pub struct FigureArgs {
    /// fig3, fig4, fig5, fig8, fig9, fig12, fig13 or all.
    pub id: String,
}

#[derive(Debug, Args, Clone)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `re,im`, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([num(a)?, num(b)?])
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| crate::failure::config_error(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| crate::failure::config_error(format!("{}: {e}", path.display())))
}

fn set<T: Clone>(slot: &mut T, v: &Option<T>) {
    if let Some(v) = v {
        *slot = v.clone();
    }
}

impl Command {
    /// Space-separated command path, as recorded in the manifest.
    pub fn name(&self) -> String {
        let (a, b) = match self {
            Command::DeltaWell(c) => (
                "delta-well",
                match c {
                    DeltaWellCmd::Roots(_) => "roots",
                    DeltaWellCmd::Curves(_) => "curves",
                    DeltaWellCmd::Transmission(_) => "transmission",
                },
            ),
            Command::Flux(c) => (
                "flux",
                match c {
                    FluxCmd::Report(_) => "report",
                    FluxCmd::Expanding(_) => "expanding",
                },
            ),
            Command::Lattice(c) => (
                "lattice",
                match c {
                    LatticeCmd::Scan(_) => "scan",
                    LatticeCmd::Solve(_) => "solve",
                    LatticeCmd::Exact(_) => "exact",
                },
            ),
            Command::Friedrichs(c) => (
                "friedrichs",
                match c {
                    FriedrichsCmd::Roots(_) => "roots",
                    FriedrichsCmd::Sweep(_) => "sweep",
                    FriedrichsCmd::Eigenfunction(_) => "eigenfunction",
                },
            ),
            Command::Dynamics(DynamicsCmd::Run(_)) => ("dynamics", "run"),
            Command::Jost(c) => (
                "jost",
                match c {
                    JostCmd::Smatrix(_) => "smatrix",
                    JostCmd::Poles(_) => "poles",
                    JostCmd::Sigma(_) => "sigma",
                },
            ),
            Command::Figure(_) => return "figure".into(),
            Command::Replay(_) => return "replay".into(),
        };
        format!("{a} {b}")
    }

    /// Folds the flags into the configuration.
    pub fn apply(&self, cfg: &mut RunConfig) -> anyhow::Result<()> {
        match self {
            Command::DeltaWell(c) => {
                let a = match c {
                    DeltaWellCmd::Roots(a) | DeltaWellCmd::Curves(a) | DeltaWellCmd::Transmission(a) => a,
                };
                let d = &mut cfg.delta_well;
                set(&mut d.a_over_l, &a.a_over_l);
                set(&mut d.parity, &a.parity);
                set(&mut d.xi_min, &a.xi_min);
                set(&mut d.xi_max, &a.xi_max);
                set(&mut d.tol, &a.tol);
                d.include_mirror |= a.include_mirror;
            }
            Command::Flux(FluxCmd::Report(a) | FluxCmd::Expanding(a)) => {
                let f = &mut cfg.flux;
                set(&mut f.a_over_l, &a.a_over_l);
                set(&mut f.parity, &a.parity);
                set(&mut f.root, &a.root);
                if a.wavefunction.is_some() {
                    f.wavefunction = a.wavefunction.clone();
                }
            }
            Command::Lattice(LatticeCmd::Scan(a) | LatticeCmd::Solve(a) | LatticeCmd::Exact(a)) => {
                let l = &mut cfg.lattice;
                set(&mut l.preset, &a.preset);
                set(&mut l.v0, &a.v0);
                set(&mut l.e0, &a.e0);
                if let Some(path) = &a.model {
                    l.model = read_toml(path)?;
                    l.preset = LatticePreset::Custom;
                }
                set(&mut l.tol, &a.tol);
                set(&mut l.max_iter, &a.max_iter);
                set(&mut l.branch, &a.branch);
            }
            Command::Friedrichs(
                FriedrichsCmd::Roots(a) | FriedrichsCmd::Sweep(a) | FriedrichsCmd::Eigenfunction(a),
            ) => {
                set(&mut cfg.friedrichs.g_tilde, &a.g_tilde);
                set(&mut cfg.friedrichs.ed_tilde, &a.ed_tilde);
            }
            Command::Dynamics(DynamicsCmd::Run(a)) => {
                let d = &mut cfg.dynamics;
                if let Some(path) = &a.model {
                    d.model = read_toml(path)?;
                }
                set(&mut d.state, &a.state);
                set(&mut d.dt, &a.dt);
                set(&mut d.t_end, &a.t_end);
            }
            Command::Jost(JostCmd::Smatrix(a) | JostCmd::Poles(a) | JostCmd::Sigma(a)) => {
                let j = &mut cfg.jost;
                set(&mut j.potential, &a.potential);
                set(&mut j.strength, &a.strength);
                set(&mut j.depth, &a.depth);
                set(&mut j.l, &a.l);
                set(&mut j.k, &a.k);
            }
            Command::Figure(f) => cfg.figure.id = f.id.clone(),
            Command::Replay(_) => {}
        }
        Ok(())
    }

    /// Rebuilds a command (without flags) from its recorded name.
    pub fn from_name(name: &str) -> Option<Command> {
        let mut it = name.split_whitespace();
        let head = it.next()?;
        let sub = it.next().unwrap_or("");
        let cmd = match (head, sub) {
            ("delta-well", "roots") => Command::DeltaWell(DeltaWellCmd::Roots(Default::default())),
            ("delta-well", "curves") => Command::DeltaWell(DeltaWellCmd::Curves(Default::default())),
            ("delta-well", "transmission") => Command::DeltaWell(DeltaWellCmd::Transmission(Default::default())),
            ("flux", "report") => Command::Flux(FluxCmd::Report(Default::default())),
            ("flux", "expanding") => Command::Flux(FluxCmd::Expanding(Default::default())),
            ("lattice", "scan") => Command::Lattice(LatticeCmd::Scan(Default::default())),
            ("lattice", "solve") => Command::Lattice(LatticeCmd::Solve(Default::default())),
            ("lattice", "exact") => Command::Lattice(LatticeCmd::Exact(Default::default())),
            ("friedrichs", "roots") => Command::Friedrichs(FriedrichsCmd::Roots(Default::default())),
            ("friedrichs", "sweep") => Command::Friedrichs(FriedrichsCmd::Sweep(Default::default())),
            ("friedrichs", "eigenfunction") => Command::Friedrichs(FriedrichsCmd::Eigenfunction(Default::default())),
            ("dynamics", "run") => Command::Dynamics(DynamicsCmd::Run(Default::default())),
            ("jost", "smatrix") => Command::Jost(JostCmd::Smatrix(Default::default())),
            ("jost", "poles") => Command::Jost(JostCmd::Poles(Default::default())),
            ("jost", "sigma") => Command::Jost(JostCmd::Sigma(Default::default())),
            ("figure", _) => Command::Figure(FigureArgs { id: String::new() }),
            _ => return None,
        };
        Some(cmd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn names_round_trip() {
        for name in [
            "delta-well roots",
            "delta-well transmission",
            "flux expanding",
            "lattice solve",
            "friedrichs sweep",
            "dynamics run",
            "jost sigma",
        ] {
            assert_eq!(Command::from_name(name).unwrap().name(), name);
        }
        assert!(Command::from_name("nope").is_none());
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::try_parse_from(["resonant", "delta-well", "roots", "--a-over-l", "0.1", "--parity", "even"]).unwrap();
        let mut cfg = RunConfig::default();
        cli.command.apply(&mut cfg).unwrap();
        assert_eq!(cfg.delta_well.a_over_l, 0.1);
        assert_eq!(cfg.delta_well.parity, ParityChoice::Even);
        let cli = Cli::try_parse_from(["resonant", "lattice", "solve", "--e0", "-0.3,-0.1"]).unwrap();
        cli.command.apply(&mut cfg).unwrap();
        assert_eq!(cfg.lattice.e0, [-0.3, -0.1]);
    }
}

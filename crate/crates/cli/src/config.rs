//! Run configuration: a TOML file with one section per module. Unknown keys
//! are rejected; flags given on the command line are applied on top.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use resonant_core::dispersion::BoundaryBranch;
use resonant_core::jost::RadialPotential;
use resonant_core::lattice::{Adatom, LatticeModel};
use resonant_core::{Parity, Units};
use serde::{Deserialize, Serialize};

use crate::failure::config_error;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Only consumed by randomized checks; recorded for reproducibility.
    pub seed: u64,
    pub units: UnitsConfig,
    pub delta_well: DeltaWellConfig,
    pub flux: FluxConfig,
    pub lattice: LatticeConfig,
    pub friedrichs: FriedrichsConfig,
    pub dynamics: DynamicsConfig,
    pub jost: JostConfig,
    pub figure: FigureConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UnitsConfig {
    pub hbar: f64,
    pub mass: f64,
    pub lattice_dx: f64,
    pub hopping: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        let u = Units::default();
        Self {
            hbar: u.hbar,
            mass: u.mass,
            lattice_dx: u.lattice_dx,
            hopping: u.hopping,
        }
    }
}

impl UnitsConfig {
    pub fn resolve(&self) -> anyhow::Result<Units> {
        Units::new(self.hbar, self.mass, self.lattice_dx, self.hopping).map_err(|e| config_error(format!("[units] {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ParityChoice {
    Even,
    Odd,
    Both,
}

impl ParityChoice {
    pub fn parities(self) -> &'static [Parity] {
        match self {
            ParityChoice::Even => &[Parity::Even],
            ParityChoice::Odd => &[Parity::Odd],
            ParityChoice::Both => &[Parity::Even, Parity::Odd],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeltaWellConfig {
    pub a_over_l: f64,
    /// Half distance `l` between the two deltas.
    pub half_separation: f64,
    pub parity: ParityChoice,
    pub xi_min: f64,
    pub xi_max: f64,
    pub tol: f64,
    pub include_mirror: bool,
    /// Number of `xi` samples for the curves.
    pub xi_points: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
}

impl Default for DeltaWellConfig {
    fn default() -> Self {
        Self {
            a_over_l: 1.0,
            half_separation: 1.0,
            parity: ParityChoice::Both,
            xi_min: 0.0,
            xi_max: 2.0 * PI,
            tol: 1e-13,
            include_mirror: false,
            xi_points: 2000,
            k_min: 1e-3,
            k_max: 2.0 * PI,
            k_points: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluxConfig {
    pub a_over_l: f64,
    pub parity: ParityChoice,
    /// Which root of the chosen parity (0 = lowest `Re K`).
    pub root: usize,
    /// Segment half widths for `flux report`, in units of `l`.
    pub half_widths: Vec<f64>,
    /// Optional sampled wave function (`x, re, im` CSV) to analyse instead.
    pub wavefunction: Option<String>,
    pub t_max: f64,
    pub t_points: usize,
}

impl Default for FluxConfig {
    fn default() -> Self {
        Self {
            a_over_l: 1.0,
            parity: ParityChoice::Even,
            root: 0,
            half_widths: vec![1.5, 2.0, 3.0, 4.0, 6.0],
            wavefunction: None,
            t_max: 50.0,
            t_points: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LatticePreset {
    TwoSite,
    Free,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchChoice {
    Retarded,
    Advanced,
}

impl From<BranchChoice> for BoundaryBranch {
    fn from(b: BranchChoice) -> Self {
        match b {
            BranchChoice::Retarded => BoundaryBranch::Retarded,
            BranchChoice::Advanced => BoundaryBranch::Advanced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdatomConfig {
    pub coupling: f64,
    pub level: f64,
}

/// Chain description for `preset = "custom"`; also the format of `--model`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeModelConfig {
    pub half_width: usize,
    /// Site index (as a string key) to on-site energy.
    pub sites: BTreeMap<String, f64>,
    pub adatom: Option<AdatomConfig>,
}

impl Default for LatticeModelConfig {
    fn default() -> Self {
        Self {
            half_width: 2,
            sites: BTreeMap::new(),
            adatom: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub preset: LatticePreset,
    /// `V0 / t` for the two-site preset.
    pub v0: f64,
    pub model: LatticeModelConfig,
    /// First postulate `[Re, Im]`.
    pub e0: [f64; 2],
    pub tol: f64,
    pub max_iter: usize,
    pub mixing: f64,
    pub branch: BranchChoice,
    pub re_range: [f64; 2],
    pub im_range: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            preset: LatticePreset::TwoSite,
            v0: 1.0,
            model: LatticeModelConfig::default(),
            e0: [-0.3, -0.1],
            tol: 1e-12,
            max_iter: 100,
            mixing: 1.0,
            branch: BranchChoice::Retarded,
            re_range: [-0.5, -0.2],
            im_range: [-0.2, 0.0],
            n_re: 200,
            n_im: 200,
        }
    }
}

impl LatticeConfig {
    pub fn build(&self, units: &Units) -> anyhow::Result<LatticeModel> {
        let bad = |e: resonant_core::Error| config_error(format!("[lattice] {e}"));
        match self.preset {
            LatticePreset::TwoSite => LatticeModel::two_site(self.v0, units.hopping).map_err(bad),
            LatticePreset::Free => LatticeModel::free(self.model.half_width, units.hopping).map_err(bad),
            LatticePreset::Custom => {
                let mut sites = Vec::new();
                for (key, &v) in &self.model.sites {
                    let x: i64 = key
                        .trim()
                        .parse()
                        .map_err(|_| config_error(format!("[lattice.model.sites] key {key:?} is not an integer")))?;
                    sites.push((x, v));
                }
                let m = LatticeModel::new(self.model.half_width, units.hopping, sites).map_err(bad)?;
                match self.model.adatom {
                    Some(a) => m
                        .with_adatom(Adatom {
                            coupling: a.coupling,
                            level: a.level,
                        })
                        .map_err(bad),
                    None => Ok(m),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FriedrichsConfig {
    pub g_tilde: f64,
    pub ed_tilde: f64,
    pub ed_min: f64,
    pub ed_max: f64,
    pub ed_points: usize,
    pub half_width: usize,
}

impl Default for FriedrichsConfig {
    fn default() -> Self {
        Self {
            g_tilde: 0.1,
            ed_tilde: -0.5,
            ed_min: -2.0,
            ed_max: 2.0,
            ed_points: 401,
            half_width: 20,
        }
    }
}

/// Chain-plus-adatom model used by `dynamics run` (also the `--model` file).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsModelConfig {
    pub g_tilde: f64,
    pub ed_tilde: f64,
    pub half_width: usize,
}

impl Default for DynamicsModelConfig {
    fn default() -> Self {
        Self {
            g_tilde: 0.1,
            ed_tilde: -0.5,
            half_width: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsConfig {
    pub model: DynamicsModelConfig,
    /// Root label `a`..`d`.
    pub state: String,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    /// Sites written to each frame: `|x| <= frame_half_width`.
    pub frame_half_width: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            model: DynamicsModelConfig::default(),
            state: "c".into(),
            dt: 0.05,
            t_end: 60.0,
            record_every: 20,
            frame_half_width: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialFamily {
    Free,
    Exponential,
    SquareWell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JostConfig {
    pub potential: PotentialFamily,
    /// `V0` of `V0 e^{-r/a}` (negative is attractive).
    pub strength: f64,
    pub decay_length: f64,
    pub depth: f64,
    pub radius: f64,
    pub l: u32,
    pub l_max: u32,
    pub k_min: f64,
    pub k_max: f64,
    pub k_points: usize,
    /// Wave number of the angular distribution in `jost sigma`.
    pub k: f64,
    pub theta_points: usize,
    pub re_range: [f64; 2],
    pub im_range: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
    /// Optional overrides of the radial grid.
    pub r_max: Option<f64>,
    pub step: Option<f64>,
}

impl Default for JostConfig {
    fn default() -> Self {
        Self {
            potential: PotentialFamily::Exponential,
            strength: -20.0,
            decay_length: 1.0,
            depth: 10.0,
            radius: 1.0,
            l: 1,
            l_max: 6,
            k_min: 0.05,
            k_max: 5.0,
            k_points: 200,
            k: 1.0,
            theta_points: 181,
            re_range: [0.05, 5.0],
            im_range: [-2.0, -0.02],
            n_re: 30,
            n_im: 12,
            r_max: None,
            step: None,
        }
    }
}

impl JostConfig {
    pub fn potential(&self) -> RadialPotential {
        match self.potential {
            PotentialFamily::Free => RadialPotential::Free,
            PotentialFamily::Exponential => RadialPotential::Exponential {
                strength: self.strength,
                decay_length: self.decay_length,
            },
            PotentialFamily::SquareWell => RadialPotential::SquareWell {
                depth: self.depth,
                radius: self.radius,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureConfig {
    /// `fig3`, `fig4`, `fig5`, `fig8`, `fig9`, `fig12`, `fig13` or `all`.
    pub id: String,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self { id: "all".into() }
    }
}

//! TOML configuration files for materials, atoms, atom–plate systems and
//! the difference-force experiment.
//!
//! Units in files: densities in cm⁻³, activation energies in eV, angular
//! frequencies in rad/s, separations in nm, sphere radii in µm,
//! temperatures in K, polarizabilities in m³ or atomic units. Unknown keys
//! are rejected.
//!
//! A material file:
//!
//! ```toml
//! name = "Si"
//! [core]
//! type = "oscillators"          # "constant" | "oscillators" | "ideal_metal"
//! eps_inf = 1.035
//! oscillators = [{ strength = 10.635, frequency = 6.6e15 }]
//! [carriers]                    # optional
//! law = "constant"              # "constant" | "arrhenius" | "tabulated"
//! density_cm3 = 5e14
//! mobility_m2_per_vs = 0.045    # optional; only the dc conductivity uses it
//! ```
//!
//! Materials referenced from other files may be given inline as a table or
//! as a path string relative to the referencing file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::atom_plate::{AtomModel, MatsubaraGrid};
use crate::constants::{BOHR_RADIUS_CUBED, CODATA_2018, ELECTRON_MASS, ELECTRON_VOLT};
use crate::dielectric::{
    CarrierModel, CarrierTable, CoreModel, DielectricModel, DrudeTerm, Mobility, Oscillator,
};
use crate::error::{Error, Result};
use crate::plate_plate::ExperimentConfig;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum CoreSpec {
    Constant {
        eps0: f64,
    },
    Oscillators {
        #[serde(default = "one")]
        eps_inf: f64,
        oscillators: Vec<OscillatorSpec>,
    },
    IdealMetal,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSpec {
    pub strength: f64,
    /// rad/s.
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawSpec {
    Constant,
    Arrhenius,
    Tabulated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierSpec {
    pub law: LawSpec,
    /// Reference density, cm⁻³ (constant and arrhenius laws).
    pub density_cm3: Option<f64>,
    /// Activation energy Δ in `n = n_ref e^{−Δ/(2k_BT)}`, eV.
    pub activation_ev: Option<f64>,
    /// CSV with columns `T [K], n [cm⁻³]`, for the tabulated law.
    pub table: Option<PathBuf>,
    pub mobility_m2_per_vs: Option<f64>,
    #[serde(default)]
    pub mobility_exponent: f64,
    #[serde(default = "room_temperature")]
    pub mobility_t_ref: f64,
}

fn room_temperature() -> f64 {
    300.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeSpec {
    /// rad/s.
    pub plasma_frequency: f64,
    /// rad/s.
    pub damping: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub core: CoreSpec,
    pub carriers: Option<CarrierSpec>,
    /// rad/s.
    #[serde(default)]
    pub plasma_frequencies: Vec<f64>,
    #[serde(default)]
    pub drude: Vec<DrudeSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MaterialRef {
    Path(PathBuf),
    Inline(Box<MaterialSpec>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub alpha0_m3: Option<f64>,
    /// Static polarizability in atomic units (`a₀³` volumes).
    pub alpha0_au: Option<f64>,
    /// Dimensionless `β_A`; mutually exclusive with `omega0_rad_s`.
    pub beta: Option<f64>,
    /// Oscillator frequency `ω₀`, giving `β_A = ω_c/ω₀ = c/(2aω₀)`.
    pub omega0_rad_s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AtomRef {
    Path(PathBuf),
    Inline(AtomSpec),
}

/// Atom above a plate.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub separation_nm: f64,
    pub atom: AtomRef,
    pub plate: MaterialRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BrightModel {
    #[default]
    Plasma,
    Drude,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightSpec {
    /// Excited electron (= hole) densities, cm⁻³; one bright phase each.
    pub densities_cm3: Vec<f64>,
    /// Effective masses in units of the electron mass.
    pub electron_mass: f64,
    pub hole_mass: f64,
    #[serde(default)]
    pub model: BrightModel,
    /// rad/s, Drude model only.
    pub electron_damping: Option<f64>,
    pub hole_damping: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub temperature_k: f64,
    pub sphere_radius_um: f64,
    pub separations_nm: Vec<f64>,
    pub sphere: MaterialRef,
    /// Dark-phase plate; its carriers are the dark density.
    pub plate: MaterialRef,
    pub light: LightSpec,
}

/// Resolved atom: `β_A` may depend on the separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomConfig {
    FixedBeta(AtomModel),
    Oscillator { alpha0: f64, omega0: f64 },
}

impl AtomConfig {
    pub fn at(&self, a: f64) -> Result<AtomModel> {
        match *self {
            AtomConfig::FixedBeta(m) => Ok(m),
            AtomConfig::Oscillator { alpha0, omega0 } => {
                let grid = MatsubaraGrid::new(a, 0.0)?;
                AtomModel::new(alpha0, grid.omega_c / omega0)
            }
        }
    }

    pub fn alpha0(&self) -> f64 {
        match *self {
            AtomConfig::FixedBeta(m) => m.alpha0,
            AtomConfig::Oscillator { alpha0, .. } => alpha0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SystemConfig {
    /// m.
    pub separation: f64,
    pub atom: AtomConfig,
    pub plate: DielectricModel,
}

/// One bright phase of the experiment.
#[derive(Debug, Clone)]
pub struct ExperimentPhase {
    /// Excited density per carrier species, m⁻³.
    pub excited_density: f64,
    pub config: ExperimentConfig,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::config(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, origin: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::config(format!("{}: {e}", origin.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn positive(what: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(format!("{what} must be positive, got {v}")))
    }
}

impl CarrierSpec {
    fn build(&self, base: &Path) -> Result<CarrierModel> {
        let density = || {
            self.density_cm3
                .ok_or_else(|| Error::config("carriers: density_cm3 is required for this law"))
                .map(|n| n * 1e6)
        };
        let mut model = match self.law {
            LawSpec::Constant => CarrierModel::constant(density()?)?,
            LawSpec::Arrhenius => {
                let ev = self.activation_ev.ok_or_else(|| {
                    Error::config("carriers: activation_ev is required for the arrhenius law")
                })?;
                CarrierModel::arrhenius(density()?, ev * ELECTRON_VOLT)?
            }
            LawSpec::Tabulated => {
                let rel = self.table.as_ref().ok_or_else(|| {
                    Error::config("carriers: table is required for the tabulated law")
                })?;
                let path = base.join(rel);
                let file = fs::File::open(&path)
                    .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
                CarrierModel::tabulated(CarrierTable::from_csv(file)?)
            }
        };
        if let Some(mu) = self.mobility_m2_per_vs {
            model = model.with_mobility(Mobility {
                reference: positive("mobility_m2_per_vs", mu)?,
                exponent: self.mobility_exponent,
                t_ref: positive("mobility_t_ref", self.mobility_t_ref)?,
            });
        }
        Ok(model)
    }
}

impl MaterialSpec {
    /// Builds the model; relative table paths resolve against `base`.
    pub fn build(&self, base: &Path) -> Result<DielectricModel> {
        let core = match &self.core {
            CoreSpec::Constant { eps0 } => CoreModel::Constant { eps0: *eps0 },
            CoreSpec::Oscillators {
                eps_inf,
                oscillators,
            } => CoreModel::Oscillators {
                eps_inf: *eps_inf,
                oscillators: oscillators
                    .iter()
                    .map(|o| Oscillator {
                        strength: o.strength,
                        frequency: o.frequency,
                    })
                    .collect(),
            },
            CoreSpec::IdealMetal => CoreModel::IdealMetal,
        };
        let mut model = DielectricModel::new(self.name.clone(), core)?;
        if let Some(c) = &self.carriers {
            model = model.with_carriers(c.build(base)?);
        }
        model = model.with_plasma_terms(self.plasma_frequencies.clone())?;
        model.with_drude_terms(
            self.drude
                .iter()
                .map(|d| DrudeTerm {
                    plasma_frequency: d.plasma_frequency,
                    damping: d.damping,
                })
                .collect(),
        )
    }
}

impl MaterialRef {
    fn resolve(&self, base: &Path) -> Result<DielectricModel> {
        match self {
            MaterialRef::Path(p) => load_material(&base.join(p)),
            MaterialRef::Inline(spec) => spec.build(base),
        }
    }
}

impl AtomSpec {
    pub fn build(&self) -> Result<AtomConfig> {
        let alpha0 = match (self.alpha0_m3, self.alpha0_au) {
            (Some(v), None) => v,
            (None, Some(au)) => au * BOHR_RADIUS_CUBED,
            _ => {
                return Err(Error::config(
                    "atom: give exactly one of alpha0_m3, alpha0_au",
                ))
            }
        };
        positive("alpha0", alpha0)?;
        match (self.beta, self.omega0_rad_s) {
            (Some(beta), None) => Ok(AtomConfig::FixedBeta(AtomModel::new(alpha0, beta)?)),
            (None, Some(w)) => Ok(AtomConfig::Oscillator {
                alpha0,
                omega0: positive("omega0_rad_s", w)?,
            }),
            _ => Err(Error::config(
                "atom: give exactly one of beta, omega0_rad_s",
            )),
        }
    }
}

pub fn load_material(path: &Path) -> Result<DielectricModel> {
    let spec: MaterialSpec = parse(&read(path)?, path)?;
    spec.build(&base_dir(path))
}

pub fn load_atom(path: &Path) -> Result<AtomConfig> {
    parse::<AtomSpec>(&read(path)?, path)?.build()
}

pub fn load_system(path: &Path) -> Result<SystemConfig> {
    let spec: SystemSpec = parse(&read(path)?, path)?;
    let base = base_dir(path);
    let atom = match &spec.atom {
        AtomRef::Path(p) => load_atom(&base.join(p))?,
        AtomRef::Inline(a) => a.build()?,
    };
    Ok(SystemConfig {
        separation: positive("separation_nm", spec.separation_nm)? * 1e-9,
        atom,
        plate: spec.plate.resolve(&base)?,
    })
}

/// Plasma frequency `√(n e² / (ε_vac m* m_e))` of one carrier species.
pub fn plasma_frequency(density: f64, relative_mass: f64) -> f64 {
    let k = CODATA_2018;
    (density * k.e_charge * k.e_charge / (k.eps_vacuum * relative_mass * ELECTRON_MASS)).sqrt()
}

impl ExperimentSpec {
    pub fn build(&self, base: &Path) -> Result<Vec<ExperimentPhase>> {
        let sphere = self.sphere.resolve(base)?;
        let dark = self.plate.resolve(base)?;
        let light = &self.light;
        positive("light.electron_mass", light.electron_mass)?;
        positive("light.hole_mass", light.hole_mass)?;
        if light.densities_cm3.is_empty() {
            return Err(Error::config(
                "light.densities_cm3 must list at least one density",
            ));
        }
        let separations = self
            .separations_nm
            .iter()
            .map(|&a| positive("separations_nm entry", a).map(|a| a * 1e-9))
            .collect::<Result<Vec<_>>>()?;
        let sphere_radius = positive("sphere_radius_um", self.sphere_radius_um)? * 1e-6;
        let temperature = positive("temperature_k", self.temperature_k)?;
        let phase = |n: f64, bright: DielectricModel| {
            let config = ExperimentConfig {
                sphere_radius,
                separations: separations.clone(),
                temperature,
                sphere: sphere.clone(),
                plate_dark: dark.clone(),
                plate_bright: bright,
            };
            config.validate()?;
            Ok(ExperimentPhase {
                excited_density: n,
                config,
            })
        };
        light
            .densities_cm3
            .iter()
            .map(|&n_cm3| {
                if !(n_cm3 >= 0.0 && n_cm3.is_finite()) {
                    return Err(Error::config(format!(
                        "light.densities_cm3 entry must be non-negative, got {n_cm3}"
                    )));
                }
                let n = n_cm3 * 1e6;
                let wp_e = plasma_frequency(n, light.electron_mass);
                let wp_p = plasma_frequency(n, light.hole_mass);
                let mut bright = dark.clone();
                if n == 0.0 {
                    // no excitation: the bright phase is the dark plate itself
                    return phase(n, bright);
                }
                bright.name = format!("{} (excited, {n_cm3:e} cm^-3)", dark.name);
                // electrons and holes both screen: n = 2 n_excited
                bright.dc_term = Some(CarrierModel::constant(2.0 * n)?);
                bright = match light.model {
                    BrightModel::Plasma => bright.with_plasma_terms(vec![wp_e, wp_p])?,
                    BrightModel::Drude => {
                        let (ge, gp) = match (light.electron_damping, light.hole_damping) {
                            (Some(ge), Some(gp)) => (ge, gp),
                            _ => return Err(Error::config(
                                "light: the drude model needs electron_damping and hole_damping",
                            )),
                        };
                        bright.with_drude_terms(vec![
                            DrudeTerm {
                                plasma_frequency: wp_e,
                                damping: ge,
                            },
                            DrudeTerm {
                                plasma_frequency: wp_p,
                                damping: gp,
                            },
                        ])?
                    }
                };
                phase(n, bright)
            })
            .collect()
    }
}

pub fn load_experiment(path: &Path) -> Result<Vec<ExperimentPhase>> {
    let spec: ExperimentSpec = parse(&read(path)?, path)?;
    spec.build(&base_dir(path))
}

//! Thermal Casimir–Polder and Casimir interactions in Lifshitz theory.
//!
//! Free energies, entropies and forces of an atom above a plate and of two
//! parallel plates, for dielectric, metallic and ideal-metal materials, with
//! an explicit choice of how the zero-frequency TM reflection coefficient of
//! a dielectric is prescribed ([`ZeroFrequencyPolicy`]).
//!
//! SI units throughout: metres, kelvin, joules, newtons. Atomic
//! polarizabilities are volumes (m³).

// Negated comparisons are how NaN inputs get rejected; the quadrature
// tables carry more digits than f64 holds.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod atom_plate;
pub mod config;
pub mod constants;
pub mod dielectric;
pub mod error;
pub mod numerics;
pub mod plate_plate;
pub mod reflection;

pub use atom_plate::{
    cd_coefficient, energy_t0, entropy, free_energy, lowt_asymptotics, phi_a, AtomModel,
    CasimirPolder, Classification, LowTemperature, MatsubaraGrid, NernstVerdict,
};
pub use constants::{PhysicalConstants, CODATA_2018};
pub use dielectric::{
    carrier_density, debye_kappa, permittivity_iw, CarrierLaw, CarrierModel, CarrierTable,
    CoreModel, DielectricModel, DrudeTerm, Mobility, Oscillator,
};
pub use error::{Error, NumericsError, Result};
pub use numerics::Tolerance;
pub use plate_plate::{
    au_zero_frequency_check, difference_force, pfa_sphere_plate_force, pp_free_energy_area,
    DifferenceForce, ExperimentConfig, PlatePlate, Surface, ZeroFrequencyCheck,
};
pub use reflection::{
    fresnel, r_tm_screened, r_tm_uniaxial, zero_frequency_tm, ReflectionPair, ZeroFrequencyPolicy,
};

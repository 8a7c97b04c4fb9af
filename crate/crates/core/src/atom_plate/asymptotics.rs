use std::f64::consts::PI;

use crate::constants::CODATA_2018;
use crate::dielectric::DielectricModel;
use crate::error::{Error, Result};
use crate::reflection::ZeroFrequencyPolicy;

use super::{AtomModel, CasimirPolder, MatsubaraGrid};

/// Coefficient of `x³` in the small-`x` expansion of `−Φ_A(x)/α₀` for a
/// constant-permittivity plate.
///
/// The inverse-hyperbolic part is `Artanh(1/√(ε₀+1)) − Arcoth(√(ε₀+1)/√ε₀)`,
/// combined into a single `atanh` of a positive argument so that every term
/// is non-negative and nothing cancels as `ε₀ → 1`.
pub fn cd_coefficient(eps0: f64) -> Result<f64> {
    if !(eps0 >= 1.0 && eps0.is_finite()) {
        return Err(Error::domain(format!("C_D needs eps0 >= 1, got {eps0}")));
    }
    if eps0 == 1.0 {
        return Ok(0.0);
    }
    let e = eps0;
    let s = e.sqrt();
    let sm1 = (e - 1.0) / (s + 1.0);
    let ep1 = e + 1.0;
    let r0 = (e - 1.0) / ep1;
    let first = r0 * (7.0 * e + 1.0) / (3.0 * ep1);
    let second = sm1 * ((3.0 * e * e + 1.0) * (2.0 * s + 1.0) + 2.0 * e * sm1)
        / (3.0 * (s + 1.0) * ep1 * ep1);
    let z = sm1 * ep1.sqrt() / (ep1 - s);
    let third = 2.0 * e * e / ep1.powf(2.5) * z.atanh();
    Ok(first + second + third)
}

/// Leading low-temperature behaviour of a constant-permittivity plate with
/// the dc conductivity disregarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowTemperature {
    /// `E(a) − (ħcπ³/240a⁴) α₀ C_D (T/T_eff)⁴`, J.
    pub free_energy: f64,
    /// `(π³k_B/30a³) α₀ C_D (T/T_eff)³`, J/K.
    pub entropy: f64,
    pub energy_t0: f64,
    pub cd: f64,
}

impl LowTemperature {
    /// `−(ħcπ³/240a⁴) α₀ C_D`: coefficient of `(T/T_eff)⁴` in `F − E`.
    pub fn quartic_coefficient(a: f64, alpha0: f64, cd: f64) -> f64 {
        let k = CODATA_2018;
        -k.hbar * k.c * PI.powi(3) / (240.0 * a.powi(4)) * alpha0 * cd
    }

    /// `(π³k_B/30a³) α₀ C_D`: coefficient of `(T/T_eff)³` in `S`.
    pub fn cubic_coefficient(a: f64, alpha0: f64, cd: f64) -> f64 {
        PI.powi(3) * CODATA_2018.k_b / (30.0 * a.powi(3)) * alpha0 * cd
    }
}

/// Asymptotic free energy and entropy at `T ≪ T_eff`. A warning is logged
/// outside `T/T_eff ≤ 0.1`.
pub fn lowt_asymptotics(a: f64, t: f64, atom: &AtomModel, eps0: f64) -> Result<LowTemperature> {
    let grid = MatsubaraGrid::new(a, t)?;
    let ratio = t / grid.t_eff;
    if ratio > 0.1 {
        log::warn!("T/T_eff = {ratio:.3} is outside the low-temperature window (<= 0.1)");
    }
    let cd = cd_coefficient(eps0)?;
    let plate = DielectricModel::constant(eps0)?;
    let energy = CasimirPolder::new(*atom, &plate, ZeroFrequencyPolicy::NeglectDc).energy_t0(a)?;
    Ok(LowTemperature {
        free_energy: energy
            + LowTemperature::quartic_coefficient(a, atom.alpha0, cd) * ratio.powi(4),
        entropy: LowTemperature::cubic_coefficient(a, atom.alpha0, cd) * ratio.powi(3),
        energy_t0: energy,
        cd,
    })
}

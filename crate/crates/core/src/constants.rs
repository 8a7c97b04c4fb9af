//! Physical constants (CODATA 2018 exact/recommended values, SI).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// Vacuum permittivity, F/m.
    pub eps_vacuum: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    e_charge: 1.602_176_634e-19,
    eps_vacuum: 8.854_187_812_8e-12,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// One-line `key=value` rendering used in output file headers.
    pub fn header_line(&self) -> String {
        format!(
            "hbar={:e} J*s; c={:e} m/s; k_B={:e} J/K; e={:e} C; eps_vacuum={:e} F/m (CODATA 2018)",
            self.hbar, self.c, self.k_b, self.e_charge, self.eps_vacuum
        )
    }
}

/// Electron volt in joules.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// Electron rest mass in kg (CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Atomic unit of polarizability volume, `a₀³` in m³.
pub const BOHR_RADIUS_CUBED: f64 = 1.481_847_114_7e-31;

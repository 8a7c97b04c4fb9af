//! Generic numerical engine: damped semi-infinite quadrature, Matsubara series
//! summation with an integral tail bound, Richardson-extrapolated
//! differentiation, and log–log power-law fitting.
//!
//! Everything here is pure and reentrant.

mod diff;
mod fit;
mod quadrature;
mod series;

pub use diff::{differentiate, try_differentiate, Derivative, DiffOptions};
pub use fit::{fit_power_law, PowerLawFit};
pub use quadrature::{
    integrate, integrate_expweighted, integrate_expweighted_scaled, integrate_semi_infinite,
    Quadrature,
};
pub use series::{sum_matsubara, MatsubaraSum};

use crate::error::NumericsError;

/// Relative and absolute accuracy targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self, NumericsError> {
        if !(rel > 0.0 && rel.is_finite()) {
            return Err(NumericsError::Domain(format!(
                "relative tolerance must be positive, got {rel}"
            )));
        }
        if !(abs >= 0.0 && abs.is_finite()) {
            return Err(NumericsError::Domain(format!(
                "absolute tolerance must be non-negative, got {abs}"
            )));
        }
        Ok(Tolerance { rel, abs })
    }

    /// Same absolute floor, different relative target.
    pub fn with_rel(self, rel: f64) -> Result<Self, NumericsError> {
        Tolerance::new(rel, self.abs)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-10,
            abs: 1e-300,
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

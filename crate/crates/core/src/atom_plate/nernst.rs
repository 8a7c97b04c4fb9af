use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::fit_power_law;

use super::{CasimirPolder, MatsubaraGrid};

/// Lowest and highest admissible `T/T_eff` of a Nernst grid.
pub const GRID_WINDOW: (f64, f64) = (1e-4, 1e-1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Consistent,
    Violating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySample {
    /// K.
    pub temperature: f64,
    /// J/K.
    pub entropy: f64,
    /// J/K.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NernstVerdict {
    /// Extrapolated `S(T → 0)`, J/K.
    pub residual_entropy: f64,
    /// J/K.
    pub extrapolation_error: f64,
    /// J/K.
    pub predicted_residual: f64,
    /// Power-law exponent of `S − residual`, only for consistent verdicts
    /// with enough resolvable points.
    pub exponent: Option<f64>,
    pub classification: Classification,
    pub temperatures_used: Vec<f64>,
    pub samples: Vec<EntropySample>,
}

/// Default grid: 16 geometric points over the whole window.
pub fn default_grid(a: f64) -> Result<Vec<f64>> {
    let t_eff = MatsubaraGrid::effective_temperature(a)?;
    Ok(geometric_grid(
        GRID_WINDOW.0 * t_eff,
        GRID_WINDOW.1 * t_eff,
        16,
    ))
}

pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else {
                lo * (ratio * k as f64).exp()
            }
        })
        .collect()
}

fn validate_grid(grid: &[f64], t_eff: f64) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::config(format!(
            "Nernst grid needs at least 4 temperatures, got {}",
            grid.len()
        )));
    }
    let slack = 1e-9;
    for (i, &t) in grid.iter().enumerate() {
        let r = t / t_eff;
        if !(r >= GRID_WINDOW.0 * (1.0 - slack) && r <= GRID_WINDOW.1 * (1.0 + slack)) {
            return Err(Error::config(format!(
                "grid point {i} (T = {t:e} K, T/T_eff = {r:e}) is outside [{:e}, {:e}]",
                GRID_WINDOW.0, GRID_WINDOW.1
            )));
        }
    }
    let q = grid[1] / grid[0];
    if !(q > 1.0) {
        return Err(Error::config("grid must be strictly increasing"));
    }
    for w in grid.windows(2) {
        if ((w[1] / w[0]) / q - 1.0).abs() > 1e-6 {
            return Err(Error::config("grid must be geometric"));
        }
    }
    if grid[grid.len() - 1] / grid[0] < 100.0 * (1.0 - slack) {
        return Err(Error::config("grid must span at least two decades"));
    }
    Ok(())
}

/// Limit of a sequence sampled on a geometric grid, lowest temperature first.
///
/// On such a grid each power `T^p` is a geometric sequence in the index, so
/// three samples (Aitken) remove one power and five samples (Wynn's ε
/// algorithm) remove two. Samples that are not converging monotonically give
/// the lowest sample back, bounded by the largest difference.
fn extrapolate(s: &[f64]) -> (f64, f64) {
    let d: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    if d.iter().all(|&x| x == 0.0) {
        return (s[0], 0.0);
    }
    let converging = d.windows(2).all(|w| {
        let rho = w[1] / w[0];
        rho.is_finite() && rho > 1.0 + 1e-6
    });
    if !converging {
        let bound = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        return (s[0], bound);
    }
    let aitken = s[0] - d[0] * d[0] / (d[1] - d[0]);
    if s.len() < 5 {
        return (aitken, 0.0);
    }
    match wynn_epsilon(&s[..5]) {
        Some(v) => (v, 0.0),
        None => (aitken, 0.0),
    }
}

fn wynn_epsilon(s: &[f64]) -> Option<f64> {
    let mut prev = vec![0.0; s.len() + 1];
    let mut cur = s.to_vec();
    let mut even = cur.clone();
    for k in 1..s.len() {
        let next: Vec<f64> = (0..cur.len() - 1)
            .map(|i| prev[i + 1] + 1.0 / (cur[i + 1] - cur[i]))
            .collect();
        if k % 2 == 0 {
            if !next.iter().all(|v| v.is_finite()) {
                return Some(even[0]);
            }
            even = next.clone();
        } else if !next.iter().all(|v| v.is_finite()) {
            // the previous even column is already exact
            return Some(even[0]);
        }
        prev = cur;
        cur = next;
    }
    let v = cur[0];
    v.is_finite().then_some(v)
}

fn extrapolate_with_noise(samples: &[EntropySample]) -> (f64, f64) {
    let base: Vec<f64> = samples.iter().map(|s| s.entropy).collect();
    let (r, bound) = extrapolate(&base);
    // Propagate the per-sample errors by perturbing one sample at a time.
    let mut propagated = 0.0;
    for (i, sample) in samples.iter().enumerate() {
        let mut s = base.clone();
        s[i] += sample.error;
        propagated += (extrapolate(&s).0 - r).abs();
    }
    (r, bound + propagated)
}

impl CasimirPolder<'_> {
    /// Entropy on `grid` (computed in parallel), extrapolated to `T = 0`
    /// and compared against the policy's prediction.
    ///
    /// The residual is extrapolated from the lowest five samples (three on
    /// grids shorter than six points); its error is the spread against the
    /// window shifted by one sample plus the propagated sample errors. The
    /// verdict is `violating` when the residual exceeds ten times that error.
    pub fn nernst_test(&self, a: f64, grid: &[f64]) -> Result<NernstVerdict> {
        if self.plate.is_ideal_metal() || self.plate.is_metallic() {
            return Err(Error::config(format!(
                "the Nernst test is defined for dielectric plates; '{}' is metallic",
                self.plate.name
            )));
        }
        let t_eff = MatsubaraGrid::effective_temperature(a)?;
        validate_grid(grid, t_eff)?;
        let samples = grid
            .par_iter()
            .map(|&t| {
                let d = self.entropy_with_error(a, t)?;
                Ok(EntropySample {
                    temperature: t,
                    entropy: d.value,
                    error: d.error,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let order = if samples.len() >= 6 { 5 } else { 3 };
        let (r1, e1) = extrapolate_with_noise(&samples[..order]);
        let (r2, e2) = extrapolate_with_noise(&samples[1..=order]);
        let scale = samples.iter().map(|s| s.entropy.abs()).fold(0.0, f64::max);
        let error = (r1 - r2)
            .abs()
            .max(e1)
            .max(e2)
            .max(64.0 * f64::EPSILON * scale);
        let classification = if r1.abs() > 10.0 * error {
            Classification::Violating
        } else {
            Classification::Consistent
        };
        let residual = if classification == Classification::Violating {
            r1
        } else {
            0.0
        };
        let exponent = if classification == Classification::Consistent {
            let resolvable: Vec<(f64, f64)> = samples
                .iter()
                .filter(|s| (s.entropy - residual).abs() > 10.0 * (s.error + error))
                .map(|s| (s.temperature, (s.entropy - residual).abs()))
                .collect();
            if resolvable.len() >= 3 {
                Some(fit_power_law(&resolvable)?.exponent)
            } else {
                None
            }
        } else {
            None
        };
        Ok(NernstVerdict {
            residual_entropy: r1,
            extrapolation_error: error,
            predicted_residual: self.predicted_residual(a)?,
            exponent,
            classification,
            temperatures_used: grid.to_vec(),
            samples,
        })
    }
}

//! Lifshitz free energy between two parallel semispaces, the proximity-force
//! sphere–plate force, and the light-modulated difference force.
//!
//! `F_pp = (k_B T / 8π a²) Σ'_l ∫_{ζ_l}^∞ y [ln(1 − r_TM⁽¹⁾r_TM⁽²⁾e^{−y}) + ln(1 − r_TE⁽¹⁾r_TE⁽²⁾e^{−y})] dy`
//! in J/m², and `F_sp = 2πR F_pp` in N. Forces are signed, attractive
//! negative.

use rayon::prelude::*;

use crate::atom_plate::MatsubaraGrid;
use crate::constants::CODATA_2018;
use crate::dielectric::DielectricModel;
use crate::error::{Error, Result};
use crate::numerics::{integrate_expweighted_scaled, sum_matsubara, Tolerance};
use crate::reflection::{SurfaceResponse, ZeroFrequencyPolicy};

/// One side of the gap: a material and its zero-frequency prescription.
#[derive(Debug, Clone, Copy)]
pub struct Surface<'a> {
    pub model: &'a DielectricModel,
    pub policy: ZeroFrequencyPolicy,
}

impl<'a> Surface<'a> {
    pub fn new(model: &'a DielectricModel, policy: ZeroFrequencyPolicy) -> Self {
        Surface { model, policy }
    }
}

/// `ln(1 − A w) / w`, finite as `w → 0`.
#[inline]
fn log_term(amp: f64, w: f64) -> f64 {
    let z = amp * w;
    if z.abs() < 1e-8 {
        -amp * (1.0 + z * (0.5 + z / 3.0))
    } else {
        (-z).ln_1p() / w
    }
}

/// Plate–plate configuration evaluated at a fixed accuracy.
#[derive(Debug, Clone, Copy)]
pub struct PlatePlate<'a> {
    pub first: Surface<'a>,
    pub second: Surface<'a>,
    pub tol: Tolerance,
}

impl<'a> PlatePlate<'a> {
    pub fn new(first: Surface<'a>, second: Surface<'a>) -> Self {
        PlatePlate {
            first,
            second,
            tol: Tolerance::default(),
        }
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    /// `∫_x^∞ y [ln(1 − A_TM e^{−y}) + ln(1 − A_TE e^{−y})] dy` at `x = ζ_l`.
    fn term(&self, grid: &MatsubaraGrid, l: f64) -> Result<f64> {
        let x = grid.zeta(l);
        let r1 = SurfaceResponse::new(self.first.model, self.first.policy, x, grid.a, grid.t)?;
        let r2 = SurfaceResponse::new(self.second.model, self.second.policy, x, grid.a, grid.t)?;
        // e^{−y} = e^{−x} e^{−u}; the quadrature supplies e^{−u}.
        let ex = (-x).exp();
        let f = |y: f64| {
            let p1 = r1.pair(y);
            let p2 = r2.pair(y);
            let w = ex * (x - y).exp();
            y * ex * (log_term(p1.tm * p2.tm, w) + log_term(p1.te * p2.te, w))
        };
        integrate_expweighted_scaled(f, x, &self.tol)
            .map(|q| q.value)
            .map_err(|source| Error::Term {
                index: l as u64,
                source,
            })
    }

    /// Free energy per unit area, J/m².
    pub fn free_energy_area(&self, a: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!(
                "temperature must be positive, got {t} K"
            )));
        }
        let grid = MatsubaraGrid::new(a, t)?;
        let sum = sum_matsubara(|l| self.term(&grid, l), &self.tol)?;
        Ok(CODATA_2018.k_b * t / (8.0 * std::f64::consts::PI * a * a) * sum.value)
    }

    /// Proximity-force sphere–plate force `2πR F_pp`, N.
    pub fn pfa_force(&self, radius: f64, a: f64, t: f64) -> Result<f64> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!(
                "sphere radius must be positive, got {radius} m"
            )));
        }
        if a / radius > 0.01 {
            log::warn!(
                "a/R = {:.3} exceeds 0.01; the proximity-force approximation is poor",
                a / radius
            );
        }
        Ok(2.0 * std::f64::consts::PI * radius * self.free_energy_area(a, t)?)
    }
}

/// Free energy per unit area with the default tolerance, J/m².
pub fn pp_free_energy_area(a: f64, t: f64, first: Surface, second: Surface) -> Result<f64> {
    PlatePlate::new(first, second).free_energy_area(a, t)
}

/// Proximity-force sphere–plate force with the default tolerance, N.
pub fn pfa_sphere_plate_force(
    radius: f64,
    a: f64,
    t: f64,
    sphere: Surface,
    plate: Surface,
) -> Result<f64> {
    PlatePlate::new(sphere, plate).pfa_force(radius, a, t)
}

/// Sphere above a plate whose carrier density is switched by light.
///
/// `plate_dark.dc_term` holds the dark-phase carriers and
/// `plate_bright.dc_term` the illuminated-phase carriers entering the
/// screened coefficient; `plate_bright` carries the plasma or Drude terms of
/// the excited carriers.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// m.
    pub sphere_radius: f64,
    /// m.
    pub separations: Vec<f64>,
    /// K.
    pub temperature: f64,
    pub sphere: DielectricModel,
    pub plate_dark: DielectricModel,
    pub plate_bright: DielectricModel,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sphere_radius > 0.0 && self.sphere_radius.is_finite()) {
            return Err(Error::config(format!(
                "sphere_radius must be positive, got {}",
                self.sphere_radius
            )));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::config(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        for (i, &a) in self.separations.iter().enumerate() {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::config(format!(
                    "separation {i} must be positive, got {a}"
                )));
            }
            if a / self.sphere_radius > 0.01 {
                log::warn!(
                    "separation {:.1} nm exceeds 1% of the sphere radius",
                    a * 1e9
                );
            }
        }
        if let (Some(dark), Some(bright)) = (&self.plate_dark.dc_term, &self.plate_bright.dc_term) {
            let t = self.temperature;
            if bright.density(t)?.0 < dark.density(t)?.0 {
                return Err(Error::config(
                    "bright-phase carrier density must not be below the dark-phase density",
                ));
            }
        }
        Ok(())
    }
}

/// One separation of a difference-force run. Forces in N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceForce {
    pub separation: f64,
    pub dark: f64,
    pub bright: f64,
    /// `|F_bright| − |F_dark|`.
    pub delta: f64,
}

/// `ΔF(a) = |F^L(a)| − |F(a)|` over the configured separations.
///
/// The sphere keeps its standard metallic zero-frequency response. Under the
/// screened policy both plate phases use the screened coefficient with their
/// own carrier densities.
pub fn difference_force(
    cfg: &ExperimentConfig,
    dark_policy: ZeroFrequencyPolicy,
    tol: Tolerance,
) -> Result<Vec<DifferenceForce>> {
    if dark_policy == ZeroFrequencyPolicy::IncludeDc {
        return Err(Error::config(
            "the difference force is defined for the neglect-dc and screened policies",
        ));
    }
    cfg.validate()?;
    let sphere = Surface::new(&cfg.sphere, ZeroFrequencyPolicy::NeglectDc);
    let dark =
        PlatePlate::new(sphere, Surface::new(&cfg.plate_dark, dark_policy)).with_tolerance(tol);
    let bright =
        PlatePlate::new(sphere, Surface::new(&cfg.plate_bright, dark_policy)).with_tolerance(tol);
    cfg.separations
        .par_iter()
        .map(|&a| {
            let f_dark = dark.pfa_force(cfg.sphere_radius, a, cfg.temperature)?;
            let f_bright = bright.pfa_force(cfg.sphere_radius, a, cfg.temperature)?;
            Ok(DifferenceForce {
                separation: a,
                dark: f_dark,
                bright: f_bright,
                delta: f_bright.abs() - f_dark.abs(),
            })
        })
        .collect()
}

/// Sphere–plate forces with the sphere's zero-frequency TM coefficient taken
/// as the standard metallic value and as the screened one.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroFrequencyCheck {
    /// `(a, F_standard, F_screened)`, m and N.
    pub rows: Vec<(f64, f64, f64)>,
    pub max_relative_deviation: f64,
}

/// Compares the standard and screened zero-frequency treatments of a
/// metallic sphere above the dark plate.
pub fn au_zero_frequency_check(
    cfg: &ExperimentConfig,
    tol: Tolerance,
) -> Result<ZeroFrequencyCheck> {
    cfg.validate()?;
    if !(cfg.sphere.is_ideal_metal() || cfg.sphere.is_metallic()) {
        return Err(Error::config(format!(
            "sphere material '{}' is not a metal",
            cfg.sphere.name
        )));
    }
    if !cfg.sphere.is_ideal_metal() && cfg.sphere.dc_term.is_none() {
        return Err(Error::config(format!(
            "sphere material '{}' needs a carrier model for the screened coefficient",
            cfg.sphere.name
        )));
    }
    let plate = Surface::new(&cfg.plate_dark, ZeroFrequencyPolicy::NeglectDc);
    let standard = PlatePlate::new(
        Surface::new(&cfg.sphere, ZeroFrequencyPolicy::NeglectDc),
        plate,
    )
    .with_tolerance(tol);
    let screened = PlatePlate::new(
        Surface::new(&cfg.sphere, ZeroFrequencyPolicy::Screened),
        plate,
    )
    .with_tolerance(tol);
    let rows = cfg
        .separations
        .par_iter()
        .map(|&a| {
            Ok((
                a,
                standard.pfa_force(cfg.sphere_radius, a, cfg.temperature)?,
                screened.pfa_force(cfg.sphere_radius, a, cfg.temperature)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative_deviation = rows
        .iter()
        .map(|&(_, s, m)| if s == m { 0.0 } else { ((m - s) / s).abs() })
        .fold(0.0, f64::max);
    Ok(ZeroFrequencyCheck {
        rows,
        max_relative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::{CarrierModel, DrudeTerm};
    use crate::reflection::static_tm;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn tight() -> Tolerance {
        Tolerance::new(1e-13, 0.0).unwrap()
    }

    #[test]
    fn log_term_branches_agree() {
        for amp in [-1.0f64, -0.3, 0.2, 0.9, 1.0] {
            let w = 1.0001e-8 / amp.abs();
            let series = log_term(amp, w * 0.999);
            let direct = (-(amp * w * 0.999)).ln_1p() / (w * 0.999);
            assert!(((series - direct) / direct).abs() < 1e-12);
        }
        assert_eq!(log_term(0.5, 0.0), -0.5);
    }

    #[test]
    fn vacuum_gives_zero() {
        let vac = DielectricModel::constant(1.0).unwrap();
        let s = Surface::new(&vac, ZeroFrequencyPolicy::NeglectDc);
        assert_eq!(pp_free_energy_area(1e-7, 300.0, s, s).unwrap(), 0.0);
        assert_eq!(
            pfa_sphere_plate_force(1e-4, 1e-7, 300.0, s, s).unwrap(),
            0.0
        );
    }

    #[test]
    fn high_temperature_ideal_metals() {
        let m = DielectricModel::ideal_metal();
        let s = Surface::new(&m, ZeroFrequencyPolicy::NeglectDc);
        let a = 5e-6;
        let t = 100.0 * MatsubaraGrid::effective_temperature(a).unwrap();
        let f = PlatePlate::new(s, s)
            .with_tolerance(tight())
            .free_energy_area(a, t)
            .unwrap();
        // l = 0 only, both polarizations reflect perfectly but TE(0) of an
        // ideal metal is −1, so both contribute ζ(3)
        let want = -CODATA_2018.k_b * t * ZETA3 / (8.0 * std::f64::consts::PI * a * a);
        assert!(((f - want) / want).abs() < 1e-10, "{f} vs {want}");
    }

    #[test]
    fn high_temperature_plasma_metals_tm_only() {
        // TM(0)=1, TE(0)=0 for Drude metals: −k_BT ζ(3)/(16π a²)
        let m = DielectricModel::constant(1.0)
            .unwrap()
            .with_drude_terms(vec![DrudeTerm {
                plasma_frequency: 1.37e16,
                damping: 5.32e13,
            }])
            .unwrap();
        let s = Surface::new(&m, ZeroFrequencyPolicy::NeglectDc);
        let a = 5e-6;
        let t = 100.0 * MatsubaraGrid::effective_temperature(a).unwrap();
        let f = PlatePlate::new(s, s)
            .with_tolerance(tight())
            .free_energy_area(a, t)
            .unwrap();
        let want = -CODATA_2018.k_b * t * ZETA3 / (16.0 * std::f64::consts::PI * a * a);
        assert!(((f - want) / want).abs() < 1e-10, "{f} vs {want}");
    }

    #[test]
    fn dielectric_high_temperature_polylog() {
        let m = DielectricModel::constant(3.81).unwrap();
        let s = Surface::new(&m, ZeroFrequencyPolicy::NeglectDc);
        let a = 5e-6;
        let t = 100.0 * MatsubaraGrid::effective_temperature(a).unwrap();
        let f = PlatePlate::new(s, s)
            .with_tolerance(tight())
            .free_energy_area(a, t)
            .unwrap();
        let r2 = static_tm(3.81).powi(2);
        let li3: f64 = (1..200).map(|m| r2.powi(m) / (m as f64).powi(3)).sum();
        let want = -CODATA_2018.k_b * t * li3 / (16.0 * std::f64::consts::PI * a * a);
        assert!(((f - want) / want).abs() < 1e-10, "{f} vs {want}");
    }

    #[test]
    fn attractive_and_decreasing() {
        let si = DielectricModel::constant(11.67).unwrap();
        let s = Surface::new(&si, ZeroFrequencyPolicy::NeglectDc);
        let mut prev = f64::NEG_INFINITY;
        for a in [1e-7, 2e-7, 4e-7, 8e-7] {
            let f = pp_free_energy_area(a, 300.0, s, s).unwrap();
            assert!(f < 0.0 && f > prev);
            prev = f;
        }
    }

    #[test]
    fn pfa_is_linear_in_radius() {
        let si = DielectricModel::constant(11.67).unwrap();
        let s = Surface::new(&si, ZeroFrequencyPolicy::NeglectDc);
        let f1 = pfa_sphere_plate_force(5e-5, 1e-7, 300.0, s, s).unwrap();
        let f2 = pfa_sphere_plate_force(1e-4, 1e-7, 300.0, s, s).unwrap();
        assert_eq!(2.0 * f1, f2);
    }

    fn experiment(n_dark: f64) -> ExperimentConfig {
        let sphere = DielectricModel::constant(1.0)
            .unwrap()
            .with_drude_terms(vec![DrudeTerm {
                plasma_frequency: 1.37e16,
                damping: 5.32e13,
            }])
            .unwrap()
            .with_carriers(CarrierModel::constant(5.9e28).unwrap());
        let dark = DielectricModel::constant(11.67)
            .unwrap()
            .with_carriers(CarrierModel::constant(n_dark).unwrap());
        let bright = DielectricModel::constant(11.67)
            .unwrap()
            .with_carriers(CarrierModel::constant(4.2e25).unwrap())
            .with_plasma_terms(vec![5.7e14, 5.7e14])
            .unwrap();
        ExperimentConfig {
            sphere_radius: 9.8e-5,
            separations: vec![1e-7, 2e-7, 4e-7],
            temperature: 300.0,
            sphere,
            plate_dark: dark,
            plate_bright: bright,
        }
    }

    #[test]
    fn identical_phases_give_no_difference() {
        let mut cfg = experiment(5e20);
        cfg.plate_bright = cfg.plate_dark.clone();
        cfg.plate_bright.dc_term = Some(CarrierModel::constant(6e20).unwrap());
        for p in [ZeroFrequencyPolicy::NeglectDc] {
            for row in difference_force(&cfg, p, Tolerance::default()).unwrap() {
                assert_eq!(row.delta, 0.0);
            }
        }
    }

    #[test]
    fn light_increases_the_force() {
        let cfg = experiment(5e20);
        for p in [
            ZeroFrequencyPolicy::NeglectDc,
            ZeroFrequencyPolicy::Screened,
        ] {
            for row in difference_force(&cfg, p, Tolerance::default()).unwrap() {
                assert!(row.delta > 0.0 && row.dark < 0.0);
            }
        }
        assert!(
            difference_force(&cfg, ZeroFrequencyPolicy::IncludeDc, Tolerance::default()).is_err()
        );
    }

    #[test]
    fn screened_reduces_to_neglect_without_dark_carriers() {
        let cfg = experiment(1e-30);
        let neglect = difference_force(&cfg, ZeroFrequencyPolicy::NeglectDc, tight()).unwrap();
        let screened = difference_force(&cfg, ZeroFrequencyPolicy::Screened, tight()).unwrap();
        for (n, s) in neglect.iter().zip(&screened) {
            assert!(((n.dark - s.dark) / n.dark).abs() < 1e-12);
        }
    }

    #[test]
    fn metallic_sphere_is_insensitive_to_screening() {
        let check = au_zero_frequency_check(&experiment(5e20), Tolerance::default()).unwrap();
        assert!(
            check.max_relative_deviation <= 1e-5,
            "{}",
            check.max_relative_deviation
        );
        let mut ideal = experiment(5e20);
        ideal.sphere = DielectricModel::ideal_metal();
        assert_eq!(
            au_zero_frequency_check(&ideal, Tolerance::default())
                .unwrap()
                .max_relative_deviation,
            0.0
        );
    }
}

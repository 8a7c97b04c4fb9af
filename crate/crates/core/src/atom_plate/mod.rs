//! Casimir–Polder interaction of a ground-state atom with a plate.
//!
//! The free energy is the Matsubara sum
//! `F = (k_B T / 8a³) Σ'_l Φ_A(ζ_l)` with
//! `Φ_A(x) = −α(iω_c x) ∫_x^∞ e^{−y} [2y² r_TM − x²(r_TM + r_TE)] dy`.
//! The polarizability is a volume (m³); with that convention the Gaussian
//! prefactors carry over unchanged and `F` comes out in joules.

mod asymptotics;
mod nernst;

pub use asymptotics::{cd_coefficient, lowt_asymptotics, LowTemperature};
pub use nernst::{
    default_grid, geometric_grid, Classification, EntropySample, NernstVerdict, GRID_WINDOW,
};

use crate::constants::CODATA_2018;
use crate::dielectric::DielectricModel;
use crate::error::{Error, NumericsError, Result};
use crate::numerics::{
    integrate_expweighted, integrate_expweighted_scaled, sum_matsubara, try_differentiate,
    Derivative, DiffOptions, Tolerance,
};
use crate::reflection::{
    screened_derivative, static_tm, StaticTm, SurfaceResponse, ZeroFrequencyPolicy,
};

/// Single-oscillator atom: `α(iω_c ζ) = α₀ / (1 + β_A² ζ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomModel {
    /// Static polarizability as a volume, m³.
    pub alpha0: f64,
    pub beta: f64,
}

impl AtomModel {
    pub fn new(alpha0: f64, beta: f64) -> Result<Self> {
        if !(alpha0 > 0.0 && alpha0.is_finite()) {
            return Err(Error::domain(format!(
                "alpha0 must be positive, got {alpha0}"
            )));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!(
                "beta_A must be non-negative, got {beta}"
            )));
        }
        Ok(AtomModel { alpha0, beta })
    }

    /// Dynamic polarizability at `ξ = ω_c ζ`.
    pub fn alpha(&self, zeta: f64) -> f64 {
        self.alpha0 / (1.0 + self.beta * self.beta * zeta * zeta)
    }
}

/// Characteristic scales of the Matsubara sum at separation `a` and temperature `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraGrid {
    pub a: f64,
    pub t: f64,
    /// `c / 2a`, rad/s.
    pub omega_c: f64,
    /// `ħω_c / k_B`, K.
    pub t_eff: f64,
    /// `2πT / T_eff`.
    pub tau: f64,
}

impl MatsubaraGrid {
    pub fn new(a: f64, t: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain(format!(
                "separation must be positive, got {a} m"
            )));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!(
                "temperature must be non-negative, got {t} K"
            )));
        }
        let k = CODATA_2018;
        let omega_c = k.c / (2.0 * a);
        let t_eff = k.hbar * omega_c / k.k_b;
        Ok(MatsubaraGrid {
            a,
            t,
            omega_c,
            t_eff,
            tau: 2.0 * std::f64::consts::PI * t / t_eff,
        })
    }

    /// `ζ_l = ξ_l / ω_c`.
    pub fn zeta(&self, l: f64) -> f64 {
        self.tau * l
    }

    /// `ξ_l = 2π k_B T l / ħ`, rad/s.
    pub fn xi(&self, l: f64) -> f64 {
        2.0 * std::f64::consts::PI * CODATA_2018.k_b * self.t * l / CODATA_2018.hbar
    }

    /// Effective temperature of separation `a`, K.
    pub fn effective_temperature(a: f64) -> Result<f64> {
        Ok(MatsubaraGrid::new(a, 0.0)?.t_eff)
    }
}

/// Atom, plate and zero-frequency prescription, evaluated at a fixed accuracy.
#[derive(Debug, Clone)]
pub struct CasimirPolder<'a> {
    pub atom: AtomModel,
    pub plate: &'a DielectricModel,
    pub policy: ZeroFrequencyPolicy,
    pub tol: Tolerance,
    /// Relative step used by the numerical entropy.
    pub entropy_step: f64,
}

/// Default relative step of the entropy derivative. Large steps are safe
/// because two Richardson levels make the stencil exact up to degree six in
/// `T`, and they keep the roundoff of `F` from swamping the small `T³` entropy.
pub const DEFAULT_ENTROPY_STEP: f64 = 0.1;

impl<'a> CasimirPolder<'a> {
    pub fn new(atom: AtomModel, plate: &'a DielectricModel, policy: ZeroFrequencyPolicy) -> Self {
        CasimirPolder {
            atom,
            plate,
            policy,
            tol: Tolerance::default(),
            entropy_step: DEFAULT_ENTROPY_STEP,
        }
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_entropy_step(mut self, step: f64) -> Self {
        self.entropy_step = step;
        self
    }

    fn response(&self, grid: &MatsubaraGrid, x: f64) -> Result<SurfaceResponse> {
        SurfaceResponse::new(self.plate, self.policy, x, grid.a, grid.t)
    }

    /// `J(x) = e^{x} Φ_A(x) / (−α(x))`, i.e. the reflection integral with the
    /// `e^{−x}` factor stripped.
    fn reflection_integral(&self, x: f64, resp: &SurfaceResponse) -> Result<f64, NumericsError> {
        match *resp {
            SurfaceResponse::Ideal if x > 0.0 => Ok(2.0 * (x * x + 2.0 * x + 2.0)),
            SurfaceResponse::Ideal => Ok(4.0),
            SurfaceResponse::Static {
                tm: StaticTm::Fixed(r),
                ..
            } if x == 0.0 => Ok(4.0 * r),
            _ => {
                let x2 = x * x;
                let f = |y: f64| {
                    let r = resp.pair(y);
                    2.0 * y * y * r.tm - x2 * (r.tm + r.te)
                };
                Ok(integrate_expweighted_scaled(f, x, &self.tol)?.value)
            }
        }
    }

    /// `Φ_A(x)` in m³ at `x = ξ/ω_c`, with the zero-frequency coefficients
    /// supplied by the policy when `x = 0`.
    pub fn phi(&self, x: f64, a: f64, t: f64) -> Result<f64> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::domain(format!("x must be non-negative, got {x}")));
        }
        let grid = MatsubaraGrid::new(a, t)?;
        let resp = self.response(&grid, x)?;
        self.phi_at(&grid, x, &resp)
    }

    fn phi_at(&self, _grid: &MatsubaraGrid, x: f64, resp: &SurfaceResponse) -> Result<f64> {
        let j = self.reflection_integral(x, resp)?;
        Ok(-self.atom.alpha(x) * (-x).exp() * j)
    }

    fn matsubara_term(&self, grid: &MatsubaraGrid, l: f64) -> Result<f64> {
        let x = grid.zeta(l);
        let resp = self.response(grid, x)?;
        self.phi_at(grid, x, &resp).map_err(|e| match e {
            Error::Numerics(source) => Error::Term {
                index: l as u64,
                source,
            },
            other => other,
        })
    }

    /// `Σ'_l Φ_A(ζ_l)` in m³.
    fn phi_sum(&self, grid: &MatsubaraGrid) -> Result<f64> {
        Ok(sum_matsubara(|l| self.matsubara_term(grid, l), &self.tol)?.value)
    }

    /// Free energy in J. `t = 0` is routed to [`CasimirPolder::energy_t0`].
    pub fn free_energy(&self, a: f64, t: f64) -> Result<f64> {
        let grid = MatsubaraGrid::new(a, t)?;
        if t == 0.0 {
            return self.energy_t0(a);
        }
        let k_b = CODATA_2018.k_b;
        Ok(k_b * t / (8.0 * a.powi(3)) * self.phi_sum(&grid)?)
    }

    /// Zero-temperature energy `E = ħω_c/(16π a³) ∫_0^∞ Φ_A(ζ) dζ`, in J.
    ///
    /// The `ζ → 0` end of the integrand is the static dielectric response; a
    /// dc conductivity has no effect at `T = 0`, so the policy is ignored here
    /// and the dc term never enters.
    pub fn energy_t0(&self, a: f64) -> Result<f64> {
        let grid = MatsubaraGrid::new(a, 0.0)?;
        let failure = std::cell::RefCell::new(None);
        let integrand = |z: f64| {
            if failure.borrow().is_some() {
                return 0.0;
            }
            let value = SurfaceResponse::new(self.plate, ZeroFrequencyPolicy::NeglectDc, z, a, 0.0)
                .and_then(|resp| {
                    self.reflection_integral(z, &resp)
                        .map_err(Error::from)
                        .map(|j| -self.atom.alpha(z) * j)
                });
            match value {
                Ok(v) => v,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        };
        let integral = integrate_expweighted(integrand, 0.0, &self.tol)?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let k = CODATA_2018;
        Ok(k.hbar * grid.omega_c / (16.0 * std::f64::consts::PI * a.powi(3)) * integral)
    }

    /// Policy-predicted entropy at `T = 0`, in J/K.
    pub fn predicted_residual(&self, a: f64) -> Result<f64> {
        let prefactor = CODATA_2018.k_b * self.atom.alpha0 / (4.0 * a.powi(3));
        if self.plate.is_ideal_metal() || self.plate.is_metallic() {
            return Ok(0.0);
        }
        let r0 = static_tm(self.plate.static_permittivity());
        // With the dc term included, a conductivity that survives T → 0 turns
        // the plate into a conductor whose l ≥ 1 coefficients approach the
        // l = 0 value continuously, and no residual entropy remains.
        let survives = match self.policy {
            ZeroFrequencyPolicy::NeglectDc => false,
            ZeroFrequencyPolicy::IncludeDc => !self
                .plate
                .dc_term
                .as_ref()
                .is_some_and(|c| c.conducts_at_zero_temperature()),
            ZeroFrequencyPolicy::Screened => self
                .plate
                .dc_term
                .as_ref()
                .is_some_and(|c| c.survives_zero_temperature()),
        };
        Ok(if survives {
            prefactor * (1.0 - r0)
        } else {
            0.0
        })
    }

    /// Entropy `−∂F/∂T` by Richardson-extrapolated central differences, J/K.
    pub fn entropy_with_error(&self, a: f64, t: f64) -> Result<Derivative> {
        if t == 0.0 {
            return Ok(Derivative {
                value: self.predicted_residual(a)?,
                error: 0.0,
                one_sided: false,
            });
        }
        MatsubaraGrid::new(a, t)?;
        let opts = DiffOptions::new(t)
            .step_factor(self.entropy_step)
            .lower_bound(0.0);
        let d = try_differentiate(|tt| self.free_energy(a, tt), t, &opts)?;
        if d.one_sided {
            log::warn!("entropy at T = {t} K used a one-sided stencil");
        }
        Ok(Derivative {
            value: -d.value,
            ..d
        })
    }

    pub fn entropy(&self, a: f64, t: f64) -> Result<f64> {
        Ok(self.entropy_with_error(a, t)?.value)
    }

    fn screened_static(&self, grid: &MatsubaraGrid) -> Result<(f64, f64, f64)> {
        if self.policy != ZeroFrequencyPolicy::Screened {
            return Err(Error::config("this operation requires the screened policy"));
        }
        match self.response(grid, 0.0)? {
            SurfaceResponse::Static {
                tm:
                    StaticTm::Screened {
                        eps0,
                        two_a_kappa,
                        d_two_a_kappa_dt,
                    },
                ..
            } => Ok((eps0, two_a_kappa, d_two_a_kappa_dt)),
            _ => Err(Error::config(format!(
                "material '{}' is not a dielectric with carriers",
                self.plate.name
            ))),
        }
    }

    /// Screened free energy rebuilt from the dc-neglecting one:
    /// `F_neglect − (k_BTα₀/8a³)∫ r_mod y² e^{−y} dy + k_BTα₀r₀/(4a³)`.
    pub fn screened_free_energy_decomposed(&self, a: f64, t: f64) -> Result<f64> {
        let grid = MatsubaraGrid::new(a, t)?;
        let (eps0, kk, _) = self.screened_static(&grid)?;
        let neglect = CasimirPolder {
            policy: ZeroFrequencyPolicy::NeglectDc,
            ..self.clone()
        };
        let f_neglect = neglect.free_energy(a, t)?;
        let integral = integrate_expweighted(
            |y| crate::reflection::screened_unchecked(y, kk, eps0) * y * y,
            0.0,
            &self.tol,
        )?;
        let c = CODATA_2018.k_b * t * self.atom.alpha0 / a.powi(3);
        Ok(f_neglect - c / 8.0 * integral + c * static_tm(eps0) / 4.0)
    }

    /// Screened entropy with the zero-frequency part differentiated
    /// analytically:
    /// `S_neglect + (k_Bα₀/4a³)[½∫r_mod y²e^{−y} − r₀] + (k_BTα₀/8a³)∫∂_T r_mod y²e^{−y}`.
    pub fn screened_entropy_analytic(&self, a: f64, t: f64) -> Result<Derivative> {
        let parts = self.screened_entropy_parts(a, t)?;
        Ok(Derivative {
            value: parts.neglect + parts.static_part + parts.derivative_part,
            error: parts.neglect_error,
            one_sided: false,
        })
    }

    /// Pieces of [`CasimirPolder::screened_entropy_analytic`].
    pub fn screened_entropy_parts(&self, a: f64, t: f64) -> Result<ScreenedEntropy> {
        if !(t > 0.0) {
            return Err(Error::domain(format!(
                "temperature must be positive, got {t} K"
            )));
        }
        let grid = MatsubaraGrid::new(a, t)?;
        let (eps0, kk, dkk) = self.screened_static(&grid)?;
        let neglect = CasimirPolder {
            policy: ZeroFrequencyPolicy::NeglectDc,
            ..self.clone()
        };
        let s_neglect = neglect.entropy_with_error(a, t)?;
        let integral = integrate_expweighted(
            |y| crate::reflection::screened_unchecked(y, kk, eps0) * y * y,
            0.0,
            &self.tol,
        )?;
        let d_integral = if dkk == 0.0 {
            0.0
        } else {
            dkk * integrate_expweighted(
                |y| screened_derivative(y, kk, eps0) * y * y,
                0.0,
                &self.tol,
            )?
        };
        let c = CODATA_2018.k_b * self.atom.alpha0 / a.powi(3);
        Ok(ScreenedEntropy {
            neglect: s_neglect.value,
            neglect_error: s_neglect.error,
            static_part: c / 4.0 * (0.5 * integral - static_tm(eps0)),
            derivative_part: c * t / 8.0 * d_integral,
        })
    }
}

/// Decomposition of the screened entropy, J/K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenedEntropy {
    pub neglect: f64,
    pub neglect_error: f64,
    /// `(k_Bα₀/4a³)[½∫r_mod y²e^{−y} − r₀]`.
    pub static_part: f64,
    /// `(k_BTα₀/8a³)∫∂_T r_mod y²e^{−y}`; vanishes as `T → 0`.
    pub derivative_part: f64,
}

/// `Φ_A(x)` with the default tolerance.
pub fn phi_a(
    x: f64,
    atom: &AtomModel,
    plate: &DielectricModel,
    policy: ZeroFrequencyPolicy,
    a: f64,
    t: f64,
) -> Result<f64> {
    CasimirPolder::new(*atom, plate, policy).phi(x, a, t)
}

/// Free energy in J with the default tolerance.
pub fn free_energy(
    a: f64,
    t: f64,
    atom: &AtomModel,
    plate: &DielectricModel,
    policy: ZeroFrequencyPolicy,
) -> Result<f64> {
    CasimirPolder::new(*atom, plate, policy).free_energy(a, t)
}

/// Zero-temperature energy in J with the default tolerance.
pub fn energy_t0(a: f64, atom: &AtomModel, plate: &DielectricModel) -> Result<f64> {
    CasimirPolder::new(*atom, plate, ZeroFrequencyPolicy::NeglectDc).energy_t0(a)
}

/// Entropy in J/K with the default tolerance.
pub fn entropy(
    a: f64,
    t: f64,
    atom: &AtomModel,
    plate: &DielectricModel,
    policy: ZeroFrequencyPolicy,
) -> Result<f64> {
    CasimirPolder::new(*atom, plate, policy).entropy(a, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::CarrierModel;

    fn atom() -> AtomModel {
        AtomModel::new(5e-29, 0.0).unwrap()
    }

    fn tight() -> Tolerance {
        Tolerance::new(1e-14, 0.0).unwrap()
    }

    #[test]
    fn grid_identities() {
        let g = MatsubaraGrid::new(2e-7, 300.0).unwrap();
        for l in [1.0, 7.0, 100.0] {
            assert!((g.xi(l) / g.omega_c - g.zeta(l)).abs() <= 1e-14 * g.zeta(l));
        }
        assert!((g.t_eff - 5729.0).abs() < 5.0);
        assert!(MatsubaraGrid::new(0.0, 1.0).is_err());
        assert!(MatsubaraGrid::new(1e-7, -1.0).is_err());
    }

    #[test]
    fn phi_at_zero_frequency() {
        let plate = DielectricModel::constant(3.81).unwrap();
        let a = atom();
        let phi = phi_a(0.0, &a, &plate, ZeroFrequencyPolicy::NeglectDc, 1e-7, 300.0).unwrap();
        assert!((phi + 4.0 * a.alpha0 * static_tm(3.81)).abs() < 1e-15 * a.alpha0);
        let phi = phi_a(0.0, &a, &plate, ZeroFrequencyPolicy::IncludeDc, 1e-7, 300.0).unwrap();
        assert_eq!(phi, -4.0 * a.alpha0);
    }

    #[test]
    fn vacuum_plate_is_inert() {
        let plate = DielectricModel::constant(1.0).unwrap();
        let cp = CasimirPolder::new(atom(), &plate, ZeroFrequencyPolicy::NeglectDc);
        for x in [0.0, 0.01, 1.0, 10.0] {
            assert_eq!(cp.phi(x, 1e-7, 300.0).unwrap(), 0.0);
        }
        assert_eq!(cp.free_energy(1e-7, 300.0).unwrap(), 0.0);
        assert_eq!(cp.energy_t0(1e-7).unwrap(), 0.0);
        assert_eq!(cp.entropy(1e-7, 300.0).unwrap(), 0.0);
    }

    #[test]
    fn phi_small_x_expansion() {
        let eps = 3.81;
        let plate = DielectricModel::constant(eps).unwrap();
        let r0 = static_tm(eps);
        let cp = CasimirPolder::new(atom(), &plate, ZeroFrequencyPolicy::NeglectDc)
            .with_tolerance(tight());
        let series = |x: f64| {
            -atom().alpha0
                * (4.0 * r0
                    + r0 * (-2.0 * eps / (eps + 1.0) - 1.0) * x * x
                    + cd_coefficient(eps).unwrap() * x.powi(3))
        };
        // the remainder is O(x⁴ ln x): shrinking x by 2 cuts it by > 8
        let rem = |x: f64| (cp.phi(x, 1e-7, 300.0).unwrap() - series(x)).abs() / atom().alpha0;
        assert!(rem(0.1) < 0.1f64.powi(3));
        assert!(rem(0.05) < rem(0.1) / 8.0);
        assert!(rem(0.025) < rem(0.05) / 8.0);
    }

    #[test]
    fn high_temperature_limit() {
        let plate = DielectricModel::constant(3.81).unwrap();
        let a = 1e-6;
        let t_eff = MatsubaraGrid::effective_temperature(a).unwrap();
        let f = free_energy(
            a,
            100.0 * t_eff,
            &atom(),
            &plate,
            ZeroFrequencyPolicy::NeglectDc,
        )
        .unwrap();
        let want =
            -CODATA_2018.k_b * 100.0 * t_eff * atom().alpha0 * static_tm(3.81) / (4.0 * a.powi(3));
        assert!(((f - want) / want).abs() < 1e-10);
    }

    #[test]
    fn ideal_metal_energy() {
        let plate = DielectricModel::ideal_metal();
        for a in [5e-8, 1e-7, 5e-7] {
            let e = energy_t0(a, &atom(), &plate).unwrap();
            let want = -3.0 * CODATA_2018.hbar * CODATA_2018.c * atom().alpha0
                / (8.0 * std::f64::consts::PI * a.powi(4));
            assert!(((e - want) / want).abs() < 1e-9, "{e} vs {want}");
        }
    }

    #[test]
    fn silicon_energy_below_ideal_metal() {
        let plate = DielectricModel::constant(11.67).unwrap();
        let e = energy_t0(1e-7, &atom(), &plate).unwrap();
        let ideal = energy_t0(1e-7, &atom(), &DielectricModel::ideal_metal()).unwrap();
        assert!(e < 0.0 && e > ideal);
    }

    #[test]
    fn zero_temperature_routes() {
        let plate = DielectricModel::constant(3.81).unwrap();
        let cp = CasimirPolder::new(atom(), &plate, ZeroFrequencyPolicy::IncludeDc);
        assert_eq!(
            cp.free_energy(1e-7, 0.0).unwrap(),
            cp.energy_t0(1e-7).unwrap()
        );
        let s = cp.entropy(1e-7, 0.0).unwrap();
        let want = CODATA_2018.k_b * atom().alpha0 * (1.0 - static_tm(3.81)) / (4.0 * 1e-21);
        assert!(((s - want) / want).abs() < 1e-14);
    }

    #[test]
    fn policy_ordering_and_epsilon_monotonicity() {
        let carriers = CarrierModel::constant(1e22).unwrap();
        let plate = DielectricModel::constant(3.81)
            .unwrap()
            .with_carriers(carriers);
        let f = |p| free_energy(2e-7, 300.0, &atom(), &plate, p).unwrap();
        let (n, s, i) = (
            f(ZeroFrequencyPolicy::NeglectDc),
            f(ZeroFrequencyPolicy::Screened),
            f(ZeroFrequencyPolicy::IncludeDc),
        );
        assert!(n >= s && s >= i, "{n} {s} {i}");
        let mut prev = 0.0;
        for eps in [1.5, 3.81, 11.67, 16.0] {
            let p = DielectricModel::constant(eps).unwrap();
            let v = free_energy(2e-7, 300.0, &atom(), &p, ZeroFrequencyPolicy::NeglectDc).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn screened_decomposition_matches_direct_sum() {
        let carriers = CarrierModel::constant(5e20).unwrap();
        let plate = DielectricModel::constant(11.67)
            .unwrap()
            .with_carriers(carriers);
        let cp = CasimirPolder::new(atom(), &plate, ZeroFrequencyPolicy::Screened)
            .with_tolerance(tight());
        for (a, t) in [(1e-7, 300.0), (5e-7, 30.0)] {
            let direct = cp.free_energy(a, t).unwrap();
            let split = cp.screened_free_energy_decomposed(a, t).unwrap();
            assert!(
                ((direct - split) / direct).abs() < 1e-12,
                "{direct} vs {split}"
            );
        }
    }

    #[test]
    fn screened_requires_carriers() {
        let plate = DielectricModel::constant(3.81).unwrap();
        let err = free_energy(1e-7, 300.0, &atom(), &plate, ZeroFrequencyPolicy::Screened);
        assert!(matches!(err, Err(Error::Config(_))));
    }
}

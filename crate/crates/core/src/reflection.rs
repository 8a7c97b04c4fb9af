//! Reflection coefficients at imaginary Matsubara frequencies and the three
//! competing prescriptions for the zero-frequency TM coefficient.
//!
//! Arguments use the dimensionless variables of the atom–plate and
//! plate–plate formulas: `x = ξ/ω_c` with `ω_c = c/(2a)`, and `y ≥ x` the
//! scaled normal wave-vector component (`y = 2aq`).
//!
//! The screened coefficient is a purely static object. Transport-based
//! generalizations reduce to it when `ω → 0` at fixed `T`, but to the
//! unscreened Fresnel value when `T → 0` at fixed `ω`; no coefficient
//! interpolating between the two orders of limits is provided here.

use std::fmt;
use std::str::FromStr;

use crate::constants::CODATA_2018;
use crate::dielectric::{debye_kappa, debye_kappa_with_derivative, CarrierModel, DielectricModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub tm: f64,
    pub te: f64,
}

impl ReflectionPair {
    pub const IDEAL: ReflectionPair = ReflectionPair { tm: 1.0, te: -1.0 };
}

/// How the `l = 0` TM coefficient of a dielectric is prescribed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroFrequencyPolicy {
    /// dc conductivity disregarded: `r_TM(0, y) = r₀`.
    NeglectDc,
    /// dc conductivity included: `r_TM(0, y) = 1`.
    IncludeDc,
    /// Debye-screened coefficient with `κ` from the carrier density.
    Screened,
}

impl ZeroFrequencyPolicy {
    pub const ALL: [ZeroFrequencyPolicy; 3] = [
        ZeroFrequencyPolicy::NeglectDc,
        ZeroFrequencyPolicy::IncludeDc,
        ZeroFrequencyPolicy::Screened,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ZeroFrequencyPolicy::NeglectDc => "neglect-dc",
            ZeroFrequencyPolicy::IncludeDc => "include-dc",
            ZeroFrequencyPolicy::Screened => "screened",
        }
    }
}

impl fmt::Display for ZeroFrequencyPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ZeroFrequencyPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "neglect-dc" => Ok(ZeroFrequencyPolicy::NeglectDc),
            "include-dc" => Ok(ZeroFrequencyPolicy::IncludeDc),
            "screened" => Ok(ZeroFrequencyPolicy::Screened),
            other => Err(Error::config(format!(
                "unknown zero-frequency policy '{other}' (expected neglect-dc, include-dc or screened)"
            ))),
        }
    }
}

/// `(ε − 1)/(ε + 1)`.
pub fn static_tm(eps0: f64) -> f64 {
    (eps0 - 1.0) / (eps0 + 1.0)
}

/// Fresnel coefficients without argument checks; requires `y ≥ x ≥ 0`, `ε ≥ 1`.
///
/// Uses `√(y² + x²(ε−1)) − y = x²(ε−1)/(√… + y)` so that nothing cancels
/// when `x²(ε−1) ≪ y²`.
#[inline]
pub(crate) fn fresnel_unchecked(x: f64, y: f64, eps: f64) -> ReflectionPair {
    if y == 0.0 {
        return ReflectionPair {
            tm: static_tm(eps),
            te: 0.0,
        };
    }
    let em1 = eps - 1.0;
    let d = x * x * em1;
    let q = (y * y + d).sqrt();
    let qpy = q + y;
    let te = -d / (qpy * qpy);
    // εy − q = (ε − 1)(y − x²/(q + y))
    let num = em1 * (y - x * x / qpy);
    let tm = num / (eps * y + q);
    ReflectionPair { tm, te }
}

/// Fresnel TM/TE coefficients at `(ix, y)` for permittivity `eps`.
pub fn fresnel(x: f64, y: f64, eps: f64) -> Result<ReflectionPair> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be non-negative, got {x}")));
    }
    if !(y >= x) {
        return Err(Error::domain(format!(
            "y must satisfy y >= x, got y={y}, x={x}"
        )));
    }
    if !(eps >= 1.0) {
        return Err(Error::domain(format!(
            "permittivity must be >= 1, got {eps}"
        )));
    }
    Ok(fresnel_unchecked(x, y, eps))
}

/// Debye-screened zero-frequency TM coefficient
/// `(ε₀√(4a²κ² + y²) − y) / (ε₀√(4a²κ² + y²) + y)`.
pub fn r_tm_screened(y: f64, a: f64, kappa: f64, eps0: f64) -> Result<f64> {
    if !(y > 0.0) || !(a > 0.0) || !(kappa >= 0.0) || !(eps0 >= 1.0) {
        return Err(Error::domain(format!(
            "screened coefficient needs y > 0, a > 0, kappa >= 0, eps0 >= 1 (got y={y}, a={a}, kappa={kappa}, eps0={eps0})"
        )));
    }
    Ok(screened_unchecked(y, 2.0 * a * kappa, eps0))
}

#[inline]
pub(crate) fn screened_unchecked(y: f64, two_a_kappa: f64, eps0: f64) -> f64 {
    if two_a_kappa.is_infinite() {
        return 1.0;
    }
    if two_a_kappa == 0.0 {
        return static_tm(eps0);
    }
    let s = eps0 * two_a_kappa.hypot(y);
    (s - y) / (s + y)
}

/// `∂r/∂(2aκ)` of the screened coefficient.
#[inline]
pub(crate) fn screened_derivative(y: f64, two_a_kappa: f64, eps0: f64) -> f64 {
    let h = two_a_kappa.hypot(y);
    if h == 0.0 {
        return 0.0;
    }
    let s = eps0 * h;
    // dr/ds = 2y/(s+y)², ds/d(2aκ) = ε₀ (2aκ)/h
    2.0 * y / ((s + y) * (s + y)) * eps0 * two_a_kappa / h
}

/// Zero-frequency TM coefficient of a uniaxial medium,
/// `(√(ε_x ε_z) − 1)/(√(ε_x ε_z) + 1)`.
pub fn r_tm_uniaxial(eps0x: f64, eps0z: f64) -> Result<f64> {
    if !(eps0x >= 1.0 && eps0z >= 1.0) {
        return Err(Error::domain(format!(
            "uniaxial permittivities must be >= 1, got ({eps0x}, {eps0z})"
        )));
    }
    let g = (eps0x * eps0z).sqrt();
    Ok((g - 1.0) / (g + 1.0))
}

/// Zero-frequency TM coefficient of a dielectric under `policy`.
///
/// `carriers` is needed only for the screened policy. The TE coefficient at
/// zero frequency of a dielectric is 0 under every policy.
pub fn zero_frequency_tm(
    policy: ZeroFrequencyPolicy,
    eps0: f64,
    a: f64,
    carriers: Option<&CarrierModel>,
    t: f64,
    y: f64,
) -> Result<f64> {
    match policy {
        ZeroFrequencyPolicy::NeglectDc => {
            if !(eps0 >= 1.0) {
                return Err(Error::domain(format!("eps0 must be >= 1, got {eps0}")));
            }
            Ok(static_tm(eps0))
        }
        ZeroFrequencyPolicy::IncludeDc => Ok(1.0),
        ZeroFrequencyPolicy::Screened => {
            let carriers = carriers.ok_or_else(|| {
                Error::config("screened zero-frequency policy requires a carrier model")
            })?;
            let kappa = debye_kappa(carriers, eps0, t)?;
            r_tm_screened(y, a, kappa, eps0)
        }
    }
}

/// Static (`l = 0`) TM prescription resolved for a given surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticTm {
    Fixed(f64),
    Screened {
        eps0: f64,
        two_a_kappa: f64,
        /// `d(2aκ)/dT`, used by the analytic entropy.
        d_two_a_kappa_dt: f64,
    },
}

impl StaticTm {
    #[inline]
    pub fn at(&self, y: f64) -> f64 {
        match *self {
            StaticTm::Fixed(r) => r,
            StaticTm::Screened {
                eps0, two_a_kappa, ..
            } => screened_unchecked(y, two_a_kappa, eps0),
        }
    }
}

/// Reflection response of one surface at one Matsubara frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceResponse {
    Ideal,
    /// Nonzero frequency `x` with permittivity `eps` at `ξ = ω_c x`.
    Fresnel {
        x: f64,
        eps: f64,
    },
    /// Zero frequency. `te_plasma` is `Σω_p²/ω_c²` of dissipationless plasma
    /// terms, which keep the TE coefficient finite at `ξ = 0`.
    Static {
        tm: StaticTm,
        te_plasma: f64,
    },
}

impl SurfaceResponse {
    /// Response of `model` at `x = ξ/ω_c` for separation `a` and temperature `t`.
    ///
    /// The dc term enters the permittivity only under [`ZeroFrequencyPolicy::IncludeDc`];
    /// the other two prescriptions keep the standard dielectric response at
    /// every `l ≥ 1`.
    pub fn new(
        model: &DielectricModel,
        policy: ZeroFrequencyPolicy,
        x: f64,
        a: f64,
        t: f64,
    ) -> Result<Self> {
        if model.is_ideal_metal() {
            return Ok(SurfaceResponse::Ideal);
        }
        let omega_c = CODATA_2018.c / (2.0 * a);
        if x > 0.0 {
            let include_dc = policy == ZeroFrequencyPolicy::IncludeDc;
            let eps = model.permittivity(x * omega_c, t, include_dc)?;
            return Ok(SurfaceResponse::Fresnel { x, eps });
        }
        let te_plasma = model.plasma_frequency_sq() / (omega_c * omega_c);
        let eps0 = model.static_permittivity();
        let tm = match policy {
            ZeroFrequencyPolicy::Screened => {
                let carriers = model.dc_term.as_ref().ok_or_else(|| {
                    Error::config(format!(
                        "material '{}' has no carrier model; the screened policy needs one",
                        model.name
                    ))
                })?;
                let (kappa, dkappa) = debye_kappa_with_derivative(carriers, eps0, t)?;
                StaticTm::Screened {
                    eps0,
                    two_a_kappa: 2.0 * a * kappa,
                    d_two_a_kappa_dt: 2.0 * a * dkappa,
                }
            }
            _ if model.is_metallic() => StaticTm::Fixed(1.0),
            ZeroFrequencyPolicy::IncludeDc => StaticTm::Fixed(1.0),
            ZeroFrequencyPolicy::NeglectDc => StaticTm::Fixed(static_tm(eps0)),
        };
        Ok(SurfaceResponse::Static { tm, te_plasma })
    }

    #[inline]
    pub fn pair(&self, y: f64) -> ReflectionPair {
        match *self {
            SurfaceResponse::Ideal => ReflectionPair::IDEAL,
            SurfaceResponse::Fresnel { x, eps } => fresnel_unchecked(x, y, eps),
            SurfaceResponse::Static { tm, te_plasma } => {
                let te = if te_plasma == 0.0 {
                    0.0
                } else {
                    let q = (y * y + te_plasma).sqrt();
                    -te_plasma / ((q + y) * (q + y))
                };
                ReflectionPair { tm: tm.at(y), te }
            }
        }
    }
}

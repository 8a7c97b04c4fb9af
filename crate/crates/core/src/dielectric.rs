//! Permittivity models along the imaginary frequency axis, charge-carrier
//! density laws and the Debye screening parameter.
//!
//! All quantities are SI. The Gaussian expressions of the dc-conductivity
//! term, `4πσ₀/ξ`, and of the screening parameter, `κ² = 4πe²n/(ε₀k_BT)`,
//! become `σ₀/(ε_vac ξ)` and `κ² = e²n/(ε₀ ε_vac k_B T)` respectively.

use std::io::Read;

use crate::constants::CODATA_2018;
use crate::error::{Error, Result};

/// Temperature dependence of the free-carrier density.
#[derive(Debug, Clone, PartialEq)]
pub enum CarrierLaw {
    /// `n(T) = n_ref`.
    Constant,
    /// `n(T) = n_ref · exp(-activation / (2 k_B T))`, activation in J.
    Arrhenius { activation: f64 },
    /// Monotone-cubic interpolation of tabulated `(T, n)` data.
    Tabulated(CarrierTable),
}

/// Power-law mobility `μ(T) = reference · (T / t_ref)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobility {
    /// m²/(V·s)
    pub reference: f64,
    pub exponent: f64,
    /// K
    pub t_ref: f64,
}

impl Mobility {
    pub fn constant(reference: f64) -> Self {
        Mobility {
            reference,
            exponent: 0.0,
            t_ref: 300.0,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        if self.exponent == 0.0 {
            self.reference
        } else {
            self.reference * (t / self.t_ref).powf(self.exponent)
        }
    }
}

/// Charge-carrier model: density law plus optional mobility.
///
/// Only the density enters the screening parameter; the mobility matters only
/// for the dc conductivity `σ₀ = n|e|μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierModel {
    pub law: CarrierLaw,
    /// carriers/m³
    pub n_ref: f64,
    pub mobility: Option<Mobility>,
}

impl CarrierModel {
    pub fn constant(n: f64) -> Result<Self> {
        Self::validated(CarrierLaw::Constant, n)
    }

    pub fn arrhenius(n_ref: f64, activation: f64) -> Result<Self> {
        if !(activation >= 0.0 && activation.is_finite()) {
            return Err(Error::domain(format!(
                "activation energy must be non-negative, got {activation:e} J"
            )));
        }
        Self::validated(CarrierLaw::Arrhenius { activation }, n_ref)
    }

    pub fn tabulated(table: CarrierTable) -> Self {
        CarrierModel {
            law: CarrierLaw::Tabulated(table),
            n_ref: 0.0,
            mobility: None,
        }
    }

    fn validated(law: CarrierLaw, n_ref: f64) -> Result<Self> {
        if !(n_ref >= 0.0 && n_ref.is_finite()) {
            return Err(Error::domain(format!(
                "carrier density must be non-negative, got {n_ref:e} m^-3"
            )));
        }
        Ok(CarrierModel {
            law,
            n_ref,
            mobility: None,
        })
    }

    pub fn with_mobility(mut self, mobility: Mobility) -> Self {
        self.mobility = Some(mobility);
        self
    }

    /// `(n, dn/dT)` at temperature `t`.
    pub fn density(&self, t: f64) -> Result<(f64, f64)> {
        carrier_density(self, t)
    }

    /// dc conductivity `σ₀ = n|e|μ` in S/m; zero when no mobility is given.
    pub fn conductivity(&self, t: f64) -> Result<f64> {
        match self.mobility {
            None => Ok(0.0),
            Some(mu) => {
                let (n, _) = self.density(t)?;
                Ok(n * CODATA_2018.e_charge * mu.at(t))
            }
        }
    }

    /// Whether the density stays finite as `T → 0` (no freeze-out).
    pub fn survives_zero_temperature(&self) -> bool {
        match &self.law {
            CarrierLaw::Constant => self.n_ref > 0.0,
            CarrierLaw::Arrhenius { activation } => *activation == 0.0 && self.n_ref > 0.0,
            CarrierLaw::Tabulated(table) => table.densities[0] > 0.0,
        }
    }

    /// Whether `σ₀(T)` stays nonzero as `T → 0`, i.e. the material conducts
    /// at zero temperature.
    pub fn conducts_at_zero_temperature(&self) -> bool {
        self.survives_zero_temperature()
            && self
                .mobility
                .is_some_and(|m| m.reference > 0.0 && m.exponent <= 0.0)
    }
}

/// Tabulated carrier densities with a monotone (Fritsch–Carlson) cubic
/// interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierTable {
    temps: Vec<f64>,
    densities: Vec<f64>,
    slopes: Vec<f64>,
}

impl CarrierTable {
    /// Points are `(T in K, n in m⁻³)`, strictly increasing in `T`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::config("carrier table needs at least two rows"));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) {
                return Err(Error::config(format!(
                    "carrier table temperatures must increase strictly (row {})",
                    i + 2
                )));
            }
        }
        if let Some((i, p)) = points
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.0 >= 0.0 && p.1 >= 0.0 && p.1.is_finite()))
        {
            return Err(Error::config(format!(
                "carrier table row {} = ({}, {}) must be non-negative",
                i + 1,
                p.0,
                p.1
            )));
        }
        let temps: Vec<f64> = points.iter().map(|p| p.0).collect();
        let densities: Vec<f64> = points.iter().map(|p| p.1).collect();
        let slopes = pchip_slopes(&temps, &densities);
        Ok(CarrierTable {
            temps,
            densities,
            slopes,
        })
    }

    /// Two-column CSV: `T` in K, `n` in cm⁻³ (converted to m⁻³). A header row
    /// and `#` comment lines are allowed.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut points = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::config(format!("carrier table: {e}")))?;
            if rec.len() != 2 {
                return Err(Error::config(format!(
                    "carrier table line {}: expected 2 columns, found {}",
                    i + 1,
                    rec.len()
                )));
            }
            let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match parsed {
                (Ok(t), Ok(n)) => points.push((t, n * 1e6)),
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::config(format!(
                        "carrier table line {}: cannot parse '{}', '{}'",
                        i + 1,
                        &rec[0],
                        &rec[1]
                    )))
                }
            }
        }
        CarrierTable::new(points)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.temps[0], *self.temps.last().unwrap())
    }

    fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(Error::Extrapolation {
                temperature: t,
                min: lo,
                max: hi,
            });
        }
        let k = match self.temps.partition_point(|&x| x <= t) {
            0 => 0,
            p if p >= self.temps.len() => self.temps.len() - 2,
            p => p - 1,
        };
        let h = self.temps[k + 1] - self.temps[k];
        let s = (t - self.temps[k]) / h;
        let (y0, y1) = (self.densities[k], self.densities[k + 1]);
        let (m0, m1) = (self.slopes[k], self.slopes[k + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s).powi(2);
        let h10 = s * (1.0 - s).powi(2);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let n = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
        let d00 = 6.0 * s * s - 6.0 * s;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * s * s - 2.0 * s;
        let dn = (d00 * y0 + d01 * y1) / h + d10 * m0 + d11 * m1;
        Ok((n.max(0.0), dn))
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
        .collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let h0 = x[k] - x[k - 1];
            let h1 = x[k + 1] - x[k];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    m[0] = end_slope(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
    m[n - 1] = end_slope(
        x[n - 1] - x[n - 2],
        x[n - 2] - x[n - 3],
        delta[n - 2],
        delta[n - 3],
    );
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// `(n(T), dn/dT)` for the carrier law.
pub fn carrier_density(carriers: &CarrierModel, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!(
            "temperature must be non-negative, got {t} K"
        )));
    }
    match &carriers.law {
        CarrierLaw::Constant => Ok((carriers.n_ref, 0.0)),
        CarrierLaw::Arrhenius { activation } => {
            if *activation == 0.0 {
                return Ok((carriers.n_ref, 0.0));
            }
            if t == 0.0 {
                return Ok((0.0, 0.0));
            }
            let kt = CODATA_2018.k_b * t;
            let n = carriers.n_ref * (-activation / (2.0 * kt)).exp();
            let dn = if n == 0.0 {
                0.0
            } else {
                n * activation / (2.0 * kt * t)
            };
            Ok((n, dn))
        }
        CarrierLaw::Tabulated(table) => table.eval(t),
    }
}

/// Inverse Debye radius `κ = sqrt(e² n(T) / (ε₀ ε_vac k_B T))` in 1/m.
pub fn debye_kappa(carriers: &CarrierModel, eps0: f64, t: f64) -> Result<f64> {
    Ok(debye_kappa_with_derivative(carriers, eps0, t)?.0)
}

/// `(κ, dκ/dT)`; `dκ/dT = (κ/2)(n'/n − 1/T)`.
pub fn debye_kappa_with_derivative(
    carriers: &CarrierModel,
    eps0: f64,
    t: f64,
) -> Result<(f64, f64)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!(
            "Debye screening needs T > 0, got {t} K"
        )));
    }
    if !(eps0 >= 1.0) {
        return Err(Error::domain(format!(
            "static permittivity must be at least 1, got {eps0}"
        )));
    }
    let (n, dn) = carrier_density(carriers, t)?;
    if n == 0.0 {
        return Ok((0.0, 0.0));
    }
    let k = CODATA_2018;
    let kappa = (k.e_charge * k.e_charge * n / (eps0 * k.eps_vacuum * k.k_b * t)).sqrt();
    let dkappa = 0.5 * kappa * (dn / n - 1.0 / t);
    Ok((kappa, dkappa))
}

/// One damped Lorentz oscillator `C / (1 + (ξ/ω)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub strength: f64,
    /// rad/s
    pub frequency: f64,
}

/// Drude carrier term `ω_p² / (ξ (ξ + γ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeTerm {
    /// rad/s
    pub plasma_frequency: f64,
    /// rad/s
    pub damping: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoreModel {
    /// Frequency-independent `ε(iξ) = ε₀`.
    Constant { eps0: f64 },
    /// `ε(iξ) = ε_∞ + Σ C_j / (1 + (ξ/ω_j)²)`.
    Oscillators {
        eps_inf: f64,
        oscillators: Vec<Oscillator>,
    },
    /// Perfect reflector; reflection coefficients are fixed to `(1, −1)`.
    IdealMetal,
}

/// A material's dielectric response along the imaginary frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct DielectricModel {
    pub name: String,
    pub core: CoreModel,
    /// Carriers responsible for the dc conductivity and for Debye screening.
    pub dc_term: Option<CarrierModel>,
    /// Plasma frequencies (rad/s) of dissipationless carrier terms.
    pub plasma_terms: Vec<f64>,
    pub drude_terms: Vec<DrudeTerm>,
}

impl DielectricModel {
    pub fn new(name: impl Into<String>, core: CoreModel) -> Result<Self> {
        let model = DielectricModel {
            name: name.into(),
            core,
            dc_term: None,
            plasma_terms: Vec::new(),
            drude_terms: Vec::new(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn constant(eps0: f64) -> Result<Self> {
        Self::new(
            format!("constant eps0={eps0}"),
            CoreModel::Constant { eps0 },
        )
    }

    pub fn ideal_metal() -> Self {
        DielectricModel {
            name: "ideal metal".into(),
            core: CoreModel::IdealMetal,
            dc_term: None,
            plasma_terms: Vec::new(),
            drude_terms: Vec::new(),
        }
    }

    pub fn with_carriers(mut self, carriers: CarrierModel) -> Self {
        self.dc_term = Some(carriers);
        self
    }

    pub fn with_plasma_terms(mut self, plasma: Vec<f64>) -> Result<Self> {
        self.plasma_terms = plasma;
        self.validate()?;
        Ok(self)
    }

    pub fn with_drude_terms(mut self, drude: Vec<DrudeTerm>) -> Result<Self> {
        self.drude_terms = drude;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::config(format!("material '{}': {what}", self.name)));
        match &self.core {
            CoreModel::Constant { eps0 } if !(*eps0 >= 1.0 && eps0.is_finite()) => {
                return bad(format!("constant permittivity must be >= 1, got {eps0}"));
            }
            CoreModel::Oscillators {
                eps_inf,
                oscillators,
            } => {
                if !(*eps_inf >= 1.0) {
                    return bad(format!("eps_inf must be >= 1, got {eps_inf}"));
                }
                for (i, o) in oscillators.iter().enumerate() {
                    if !(o.strength >= 0.0 && o.frequency > 0.0) {
                        return bad(format!(
                            "oscillator {i} needs strength >= 0 and frequency > 0"
                        ));
                    }
                }
            }
            _ => {}
        }
        if self.plasma_terms.iter().any(|w| !(*w > 0.0)) {
            return bad("plasma frequencies must be positive".into());
        }
        if self
            .drude_terms
            .iter()
            .any(|d| !(d.plasma_frequency > 0.0 && d.damping >= 0.0))
        {
            return bad("Drude terms need plasma frequency > 0 and damping >= 0".into());
        }
        Ok(())
    }

    pub fn is_ideal_metal(&self) -> bool {
        matches!(self.core, CoreModel::IdealMetal)
    }

    /// Has free-carrier terms (plasma or Drude) that diverge at zero frequency.
    pub fn is_metallic(&self) -> bool {
        !self.plasma_terms.is_empty() || !self.drude_terms.is_empty()
    }

    /// `ε(0)` of the core model; the Drude/plasma/dc terms are excluded.
    pub fn static_permittivity(&self) -> f64 {
        match &self.core {
            CoreModel::Constant { eps0 } => *eps0,
            CoreModel::Oscillators {
                eps_inf,
                oscillators,
            } => eps_inf + oscillators.iter().map(|o| o.strength).sum::<f64>(),
            CoreModel::IdealMetal => f64::INFINITY,
        }
    }

    /// `Σ ω_p²` over the plasma terms, in rad²/s².
    pub fn plasma_frequency_sq(&self) -> f64 {
        self.plasma_terms.iter().map(|w| w * w).sum()
    }

    pub fn core_permittivity(&self, xi: f64) -> f64 {
        match &self.core {
            CoreModel::Constant { eps0 } => *eps0,
            CoreModel::Oscillators {
                eps_inf,
                oscillators,
            } => {
                eps_inf
                    + oscillators
                        .iter()
                        .map(|o| o.strength / (1.0 + (xi / o.frequency).powi(2)))
                        .sum::<f64>()
            }
            CoreModel::IdealMetal => f64::INFINITY,
        }
    }

    /// `ε(iξ)` with the dc-conductivity term switched on or off.
    pub fn permittivity(&self, xi: f64, t: f64, include_dc: bool) -> Result<f64> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::domain(format!(
                "permittivity is evaluated at xi > 0 only, got {xi}"
            )));
        }
        if self.is_ideal_metal() {
            return Err(Error::domain(
                "ideal metal has no finite permittivity; use its reflection coefficients",
            ));
        }
        let mut eps = self.core_permittivity(xi);
        if include_dc {
            if let Some(carriers) = &self.dc_term {
                eps += carriers.conductivity(t)? / (CODATA_2018.eps_vacuum * xi);
            }
        }
        eps += self.plasma_frequency_sq() / (xi * xi);
        eps += self
            .drude_terms
            .iter()
            .map(|d| d.plasma_frequency * d.plasma_frequency / (xi * (xi + d.damping)))
            .sum::<f64>();
        Ok(eps)
    }
}

/// `ε(iξ)` including every term of the model (core, dc, plasma, Drude).
pub fn permittivity_iw(model: &DielectricModel, xi: f64, t: f64) -> Result<f64> {
    model.permittivity(xi, t, true)
}

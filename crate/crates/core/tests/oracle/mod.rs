//! Independent reference implementation used only by tests.
//!
//! Shares nothing with the library except the material parameters it reads:
//! its own Gauss–Legendre rule on a fixed geometrically graded mesh, direct
//! (uncompensated) Fresnel formulas, and plain summation over Matsubara
//! terms until a term falls below 1e-18 of the partial sum.

#![allow(dead_code)]

use lifshitz_core::{CoreModel, DielectricModel, ZeroFrequencyPolicy};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const KB: f64 = 1.380_649e-23;
pub const E: f64 = 1.602_176_634e-19;
pub const EPS_VAC: f64 = 8.854_187_812_8e-12;

const ORDER: usize = 32;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre() -> Vec<(f64, f64)> {
    let n = ORDER;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        out.push((z, 2.0 / ((1.0 - z * z) * dp * dp)));
    }
    out
}

/// Breakpoints in `u = y − lower`: 2^k for k = −30..6 and a final panel to 96.
fn mesh() -> Vec<f64> {
    let mut m = vec![0.0];
    for k in -30..=6 {
        m.push(2f64.powi(k));
    }
    m.push(96.0);
    m
}

pub struct Rule {
    nodes: Vec<(f64, f64)>,
    mesh: Vec<f64>,
}

impl Rule {
    pub fn new() -> Self {
        Rule {
            nodes: gauss_legendre(),
            mesh: mesh(),
        }
    }

    /// `∫_lower^{lower+96} f(y) dy` for integrands that carry their own decay.
    pub fn integrate(&self, lower: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for w in self.mesh.windows(2) {
            let (a, b) = (lower + w[0], lower + w[1]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            let mut s = 0.0;
            for &(z, wt) in &self.nodes {
                s += wt * f(mid + half * z);
            }
            total += half * s;
        }
        total
    }
}

#[derive(Clone, Copy)]
pub struct Pair {
    pub tm: f64,
    pub te: f64,
}

/// Material as seen by the oracle.
pub struct Side {
    ideal: bool,
    eps_const: Option<f64>,
    eps_inf: f64,
    osc: Vec<(f64, f64)>,
    plasma_sq: f64,
    drude: Vec<(f64, f64)>,
    density: Option<f64>,
    policy: ZeroFrequencyPolicy,
}

impl Side {
    /// Reads parameters only. Carrier densities must be temperature
    /// independent (constant law).
    pub fn new(m: &DielectricModel, policy: ZeroFrequencyPolicy) -> Self {
        let (ideal, eps_const, eps_inf, osc) = match &m.core {
            CoreModel::IdealMetal => (true, None, 1.0, vec![]),
            CoreModel::Constant { eps0 } => (false, Some(*eps0), 1.0, vec![]),
            CoreModel::Oscillators {
                eps_inf,
                oscillators,
            } => (
                false,
                None,
                *eps_inf,
                oscillators
                    .iter()
                    .map(|o| (o.strength, o.frequency))
                    .collect(),
            ),
        };
        Side {
            ideal,
            eps_const,
            eps_inf,
            osc,
            plasma_sq: m.plasma_terms.iter().map(|w| w * w).sum(),
            drude: m
                .drude_terms
                .iter()
                .map(|d| (d.plasma_frequency, d.damping))
                .collect(),
            density: m.dc_term.as_ref().map(|c| c.n_ref),
            policy,
        }
    }

    fn static_eps(&self) -> f64 {
        self.eps_const
            .unwrap_or(self.eps_inf + self.osc.iter().map(|o| o.0).sum::<f64>())
    }

    fn eps(&self, xi: f64) -> f64 {
        let core = match self.eps_const {
            Some(e) => e,
            None => {
                self.eps_inf
                    + self
                        .osc
                        .iter()
                        .map(|&(c, w)| c / (1.0 + (xi / w) * (xi / w)))
                        .sum::<f64>()
            }
        };
        core + self.plasma_sq / (xi * xi)
            + self
                .drude
                .iter()
                .map(|&(wp, g)| wp * wp / (xi * (xi + g)))
                .sum::<f64>()
    }

    fn metallic(&self) -> bool {
        self.plasma_sq > 0.0 || !self.drude.is_empty()
    }

    /// Reflection pair at `(x, y)`; `a` in m and `t` in K.
    pub fn pair(&self, x: f64, y: f64, a: f64, t: f64) -> Pair {
        if self.ideal {
            return Pair { tm: 1.0, te: -1.0 };
        }
        let omega_c = C / (2.0 * a);
        if x > 0.0 {
            let e = self.eps(x * omega_c);
            let q = (y * y + x * x * (e - 1.0)).sqrt();
            return Pair {
                tm: (e * y - q) / (e * y + q),
                te: (y - q) / (y + q),
            };
        }
        let big = self.plasma_sq / (omega_c * omega_c);
        let te = if big > 0.0 {
            let q = (y * y + big).sqrt();
            (y - q) / (y + q)
        } else {
            0.0
        };
        let e0 = self.static_eps();
        let tm = match self.policy {
            ZeroFrequencyPolicy::Screened => {
                let n = self.density.expect("screened side needs carriers");
                let kappa = (E * E * n / (e0 * EPS_VAC * KB * t)).sqrt();
                let s = e0 * ((2.0 * a * kappa).powi(2) + y * y).sqrt();
                (s - y) / (s + y)
            }
            _ if self.metallic() => 1.0,
            ZeroFrequencyPolicy::IncludeDc => 1.0,
            ZeroFrequencyPolicy::NeglectDc => (e0 - 1.0) / (e0 + 1.0),
        };
        Pair { tm, te }
    }
}

fn matsubara(tau: f64, term: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.5 * term(0.0);
    let mut l = 1u64;
    loop {
        let v = term(l as f64 * tau);
        sum += v;
        if v.abs() < 1e-18 * sum.abs() || (v == 0.0 && l > 1) {
            return sum;
        }
        l += 1;
    }
}

/// Atom–plate free energy in J, single-oscillator atom `α₀/(1 + β²ζ²)`.
pub fn atom_plate_free_energy(a: f64, t: f64, alpha0: f64, beta: f64, plate: &Side) -> f64 {
    let rule = Rule::new();
    let t_eff = HBAR * C / (2.0 * a * KB);
    let tau = 2.0 * std::f64::consts::PI * t / t_eff;
    let sum = matsubara(tau, |x| {
        let alpha = alpha0 / (1.0 + beta * beta * x * x);
        let integral = rule.integrate(x, |y| {
            let r = plate.pair(x, y, a, t);
            (-y).exp() * (2.0 * y * y * r.tm - x * x * (r.tm + r.te))
        });
        -alpha * integral
    });
    KB * t / (8.0 * a.powi(3)) * sum
}

/// Plate–plate free energy per unit area, J/m².
pub fn plate_plate_free_energy(a: f64, t: f64, one: &Side, two: &Side) -> f64 {
    let rule = Rule::new();
    let t_eff = HBAR * C / (2.0 * a * KB);
    let tau = 2.0 * std::f64::consts::PI * t / t_eff;
    let sum = matsubara(tau, |x| {
        rule.integrate(x, |y| {
            let p = one.pair(x, y, a, t);
            let q = two.pair(x, y, a, t);
            let w = (-y).exp();
            y * ((-p.tm * q.tm * w).ln_1p() + (-p.te * q.te * w).ln_1p())
        })
    });
    KB * t / (8.0 * std::f64::consts::PI * a * a) * sum
}

/// Proximity-force sphere–plate force, N.
pub fn sphere_plate_force(radius: f64, a: f64, t: f64, sphere: &Side, plate: &Side) -> f64 {
    2.0 * std::f64::consts::PI * radius * plate_plate_free_energy(a, t, sphere, plate)
}

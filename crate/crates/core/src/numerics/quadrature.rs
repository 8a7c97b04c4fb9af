//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite ranges.
//!
//! Every integrand in the Lifshitz formulas carries an `e^{-y}` damping
//! factor, so the semi-infinite driver works on `[lower, lower + L]` and
//! bounds the remainder beyond `L` analytically.

use crate::error::NumericsError;

use super::Tolerance;

// 21-point Kronrod abscissae (positive half, descending) and weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_460,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// 10-point Gauss weights, matching XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

const MAX_PANELS: usize = 4000;

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = fc.abs() * WGK[10];
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += w * (f1 + f2);
        abs_sum += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let abs_value = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    // Roundoff floor: nothing below a few ulps of the panel magnitude is meaningful.
    let floor = 50.0 * f64::EPSILON * abs_value;
    if error < floor {
        error = floor;
    }
    Panel { a, b, value, error }
}

/// Effective relative target; the error estimator cannot resolve below ~50 ulp.
fn effective_rel(tol: &Tolerance) -> f64 {
    tol.rel.max(64.0 * f64::EPSILON)
}

fn total(panels: &[Panel]) -> (f64, f64) {
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for p in panels {
        // Neumaier summation keeps the reduction bit-stable and accurate.
        let t = value + p.value;
        if value.abs() >= p.value.abs() {
            comp += (value - t) + p.value;
        } else {
            comp += (p.value - t) + value;
        }
        value = t;
        error += p.error;
    }
    (value + comp, error)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    panels: &mut Vec<Panel>,
    tol: &Tolerance,
) -> Result<Quadrature, NumericsError> {
    let rel = effective_rel(tol);
    loop {
        let (value, error) = total(panels);
        if !value.is_finite() || !error.is_finite() {
            return Err(NumericsError::Quadrature {
                estimate: value,
                error,
                panels: panels.len(),
            });
        }
        if error <= tol.abs.max(rel * value.abs()) {
            return Ok(Quadrature {
                value,
                error,
                panels: panels.len(),
            });
        }
        // Bisect the panel with the largest error estimate. Ties resolve to the
        // lowest index so the refinement order is deterministic.
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0usize, f64::NEG_INFINITY), |acc, (i, p)| {
                    if p.error > acc.1 {
                        (i, p.error)
                    } else {
                        acc
                    }
                });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= MAX_PANELS || mid <= p.a || mid >= p.b {
            return Err(NumericsError::Quadrature {
                estimate: value,
                error,
                panels: panels.len(),
            });
        }
        panels[worst] = gauss_kronrod(f, p.a, mid);
        panels.push(gauss_kronrod(f, mid, p.b));
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<Quadrature, NumericsError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::Domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    refine(&f, &mut vec![gauss_kronrod(&f, a, b)], tol)
}

// Initial breakpoints for the damped integrand in the shifted variable u = y - lower.
const EXP_BREAKS: [f64; 7] = [0.0, 0.5, 2.0, 5.0, 10.0, 20.0, 40.0];

/// `∫_lower^∞ f(y) e^{-(y - lower)} dy`, i.e. the damped integral with the
/// `e^{-lower}` factor stripped so that large `lower` never underflows.
pub fn integrate_expweighted_scaled<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    tol: &Tolerance,
) -> Result<Quadrature, NumericsError> {
    if !(lower >= 0.0 && lower.is_finite()) {
        return Err(NumericsError::Domain(format!(
            "lower limit must be finite and non-negative, got {lower}"
        )));
    }
    let g = |u: f64| f(lower + u) * (-u).exp();
    let mut panels: Vec<Panel> = EXP_BREAKS
        .windows(2)
        .map(|w| gauss_kronrod(&g, w[0], w[1]))
        .collect();
    let mut cut = *EXP_BREAKS.last().unwrap();
    let mut result = refine(&g, &mut panels, tol)?;
    // Remainder beyond the cut: for integrands of at most polynomial growth,
    // ∫_L^∞ |f| e^{-u} du ≈ |f(L)| e^{-L} (1 + O(deg/L)); take twice that.
    loop {
        let tail = 2.0 * (f(lower + cut) * (-cut).exp()).abs();
        let target = tol.abs.max(0.1 * effective_rel(tol) * result.value.abs());
        if tail <= target {
            result.error += tail;
            return Ok(result);
        }
        if cut > 700.0 || !tail.is_finite() {
            return Err(NumericsError::Quadrature {
                estimate: result.value,
                error: result.error + tail,
                panels: result.panels,
            });
        }
        let next = 2.0 * cut;
        panels.push(gauss_kronrod(&g, cut, next));
        cut = next;
        result = refine(&g, &mut panels, tol)?;
    }
}

/// `∫_lower^∞ f(y) e^{-y} dy` for integrands of at most polynomial growth.
pub fn integrate_expweighted<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    tol: &Tolerance,
) -> Result<f64, NumericsError> {
    let q = integrate_expweighted_scaled(f, lower, tol)?;
    Ok(q.value * (-lower).exp())
}

/// `∫_lower^∞ f(t) dt` for a decaying integrand, via `t = lower + s/(1-s)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    tol: &Tolerance,
) -> Result<Quadrature, NumericsError> {
    let g = |s: f64| {
        let one_minus = 1.0 - s;
        let v = f(lower + s / one_minus);
        if v == 0.0 {
            0.0
        } else {
            v / (one_minus * one_minus)
        }
    };
    let mut panels = [0.0, 0.5, 0.9, 1.0]
        .windows(2)
        .map(|w| gauss_kronrod(&g, w[0], w[1]))
        .collect();
    refine(&g, &mut panels, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> Tolerance {
        Tolerance::new(1e-13, 0.0).unwrap()
    }

    #[test]
    fn gamma_values() {
        let tol = Tolerance::default();
        assert!((integrate_expweighted(|y| y * y, 0.0, &tol).unwrap() - 2.0).abs() < 2e-10);
        assert!((integrate_expweighted(|_| 1.0, 0.0, &tol).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shifted_lower_limit() {
        // ∫_x^∞ 2y² e^{-y} dy = 2 e^{-x} (x² + 2x + 2)
        for &x in &[0.0, 1e-3, 0.7, 5.0, 30.0] {
            let got = integrate_expweighted_scaled(|y| 2.0 * y * y, x, &tight())
                .unwrap()
                .value;
            let want = 2.0 * (x * x + 2.0 * x + 2.0);
            assert!((got - want).abs() <= 1e-13 * want, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn finite_interval_polynomial_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x, -1.0, 2.0, &tight()).unwrap();
        assert!((q.value - (64.0 / 6.0 - 1.0 / 6.0 - 4.5)).abs() < 1e-13);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let q = integrate(|x| x.ln(), 0.0, 1.0, &Tolerance::new(1e-10, 0.0).unwrap()).unwrap();
        assert!((q.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_decay() {
        let q = integrate_semi_infinite(|t| (-0.01 * t).exp(), 3.0, &tight()).unwrap();
        let want = 100.0 * (-0.03f64).exp();
        assert!((q.value - want).abs() < 1e-10 * want);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = integrate(|_| f64::NAN, 0.0, 1.0, &Tolerance::default());
        assert!(matches!(r, Err(NumericsError::Quadrature { .. })));
    }
}

use crate::error::NumericsError;

/// `v ≈ amplitude · t^exponent`, fitted by least squares in log–log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub amplitude: f64,
    pub exponent: f64,
    /// RMS of the residuals in `ln v`.
    pub residual_rms: f64,
}

impl PowerLawFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * t.powf(self.exponent)
    }
}

/// Least-squares line through `(ln t, ln v)`. Needs at least three strictly
/// positive samples with at least two distinct abscissae.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit, NumericsError> {
    if points.len() < 3 {
        return Err(NumericsError::Domain(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for (i, &(t, v)) in points.iter().enumerate() {
        if !(t > 0.0 && v > 0.0 && t.is_finite() && v.is_finite()) {
            return Err(NumericsError::Domain(format!(
                "power-law fit point {i} = ({t:e}, {v:e}) is not strictly positive"
            )));
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(NumericsError::Domain(
            "power-law fit needs at least two distinct abscissae".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(PowerLawFit {
        amplitude: intercept.exp(),
        exponent: slope,
        residual_rms: (ss / n).sqrt(),
    })
}

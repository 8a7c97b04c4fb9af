use std::convert::Infallible;

/// Step-size control for [`try_differentiate`].
///
/// The base step is `h = step_factor × max(|t|, scale)`; it is halved twice
/// and the three difference quotients are combined by Richardson
/// extrapolation. `scale` is the characteristic magnitude of `t` and acts as a
/// floor near `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOptions {
    pub scale: f64,
    pub step_factor: f64,
    /// Smallest admissible abscissa; a stencil reaching below it switches to
    /// one-sided differences.
    pub lower_bound: Option<f64>,
}

impl DiffOptions {
    pub fn new(scale: f64) -> Self {
        DiffOptions {
            scale,
            step_factor: 1e-3,
            lower_bound: None,
        }
    }

    pub fn step_factor(mut self, factor: f64) -> Self {
        self.step_factor = factor;
        self
    }

    pub fn lower_bound(mut self, bound: f64) -> Self {
        self.lower_bound = Some(bound);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    /// Difference between the last two extrapolation levels plus a roundoff term.
    pub error: f64,
    /// Set when the central stencil would have crossed the domain boundary.
    pub one_sided: bool,
}

/// Central difference with two Richardson levels.
pub fn differentiate<F: Fn(f64) -> f64>(f: F, t: f64, scale: f64) -> Derivative {
    let r: Result<_, Infallible> = try_differentiate(|x| Ok(f(x)), t, &DiffOptions::new(scale));
    match r {
        Ok(d) => d,
        Err(never) => match never {},
    }
}

/// Fallible variant of [`differentiate`] with explicit step control.
pub fn try_differentiate<F, E>(f: F, t: f64, opts: &DiffOptions) -> Result<Derivative, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let h = opts.step_factor * t.abs().max(opts.scale.abs());
    let one_sided = opts.lower_bound.is_some_and(|lo| t - h < lo);
    if one_sided {
        // Forward differences: error series in h, h², ...
        let f0 = f(t)?;
        let quotients = [h, h / 2.0, h / 4.0]
            .iter()
            .map(|&s| Ok(((f(t + s)? - f0) / s, f0.abs().max(f(t + s)?.abs()) / s)))
            .collect::<Result<Vec<_>, E>>()?;
        let d: Vec<f64> = quotients.iter().map(|q| q.0).collect();
        let b1 = 2.0 * d[1] - d[0];
        let b2 = 2.0 * d[2] - d[1];
        let c = (4.0 * b2 - b1) / 3.0;
        let roundoff = 8.0 * f64::EPSILON * quotients[2].1;
        return Ok(Derivative {
            value: c,
            error: (c - b2).abs() + roundoff,
            one_sided: true,
        });
    }
    let mut d = [0.0; 3];
    let mut magnitude = 0.0f64;
    for (k, s) in [h, h / 2.0, h / 4.0].into_iter().enumerate() {
        let fp = f(t + s)?;
        let fm = f(t - s)?;
        magnitude = magnitude.max(fp.abs()).max(fm.abs());
        d[k] = (fp - fm) / (2.0 * s);
    }
    let b1 = (4.0 * d[1] - d[0]) / 3.0;
    let b2 = (4.0 * d[2] - d[1]) / 3.0;
    let c = (16.0 * b2 - b1) / 15.0;
    let roundoff = 8.0 * f64::EPSILON * magnitude / (h / 4.0);
    Ok(Derivative {
        value: c,
        error: (c - b2).abs() + roundoff,
        one_sided: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_at_one() {
        let d = differentiate(|t| t * t, 1.0, 1.0);
        assert!((d.value - 2.0).abs() < 1e-10);
        assert!(!d.one_sided);
    }

    #[test]
    fn constant_has_zero_slope() {
        assert_eq!(differentiate(|_| 7.25, 3.0, 1.0).value, 0.0);
    }

    #[test]
    fn quartic_small_argument() {
        let d = differentiate(|t| t.powi(4), 0.1, 0.1);
        assert!((d.value - 0.004).abs() < 1e-12);
    }

    #[test]
    fn polynomials_up_to_degree_five() {
        let coeffs = [0.3, -1.2, 0.7, 2.5, -0.4, 1.1];
        let p = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let dp = |t: f64| {
            coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + k as f64 * c)
        };
        for deg in 0..=5 {
            let q = |t: f64| coeffs[..=deg].iter().rev().fold(0.0, |acc, c| acc * t + c);
            let dq = |t: f64| {
                coeffs[..=deg]
                    .iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(0.0, |acc, (k, c)| acc * t + k as f64 * c)
            };
            for &t in &[0.5, 1.7, -2.3, 12.0] {
                let got = differentiate(q, t, 1.0).value;
                let want = dq(t);
                let scale = want.abs().max(1e-300);
                if deg == 0 {
                    assert_eq!(got, 0.0);
                } else {
                    assert!(
                        (got - want).abs() <= 1e-8 * scale,
                        "deg {deg} t {t}: {got} vs {want}"
                    );
                }
            }
        }
        assert!((differentiate(p, 1.0, 1.0).value - dp(1.0)).abs() < 1e-9);
    }

    #[test]
    fn boundary_switches_to_one_sided() {
        let opts = DiffOptions::new(1.0).step_factor(0.1).lower_bound(0.0);
        let d = try_differentiate::<_, Infallible>(|t| Ok(t * t + t), 0.05, &opts).unwrap();
        assert!(d.one_sided);
        assert!((d.value - 1.1).abs() < 1e-10);
    }
}

use std::cell::RefCell;

use crate::error::NumericsError;

use super::{integrate_semi_infinite, CompensatedSum, Tolerance};

const MAX_TERMS: u64 = 50_000_000;

/// Result of a primed Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSum {
    pub value: f64,
    /// Index of the last term included.
    pub last_index: u64,
    /// Integral bound on the discarded remainder.
    pub tail: f64,
}

/// Primed sum `term(0)/2 + Σ_{l≥1} term(l)`.
///
/// `term` is evaluated at integer `l` for the partial sum and at real `l` for
/// the remainder bound `∫_L^∞ term(l) dl`, which majorizes the discrete tail of
/// any monotonically decaying sequence. Truncation happens only once that
/// bound drops below `tol.rel × |partial sum|` (or `tol.abs`).
pub fn sum_matsubara<F, E>(term: F, tol: &Tolerance) -> Result<MatsubaraSum, E>
where
    F: Fn(f64) -> Result<f64, E>,
    E: From<NumericsError>,
{
    let mut sum = CompensatedSum::new();
    sum.add(0.5 * term(0.0)?);
    let mut next_check = 1u64;
    let mut last_tail: Option<f64> = None;
    let tail_tol = Tolerance::new(1e-6, tol.abs)?;
    let mut l = 1u64;
    loop {
        let t = term(l as f64)?;
        sum.add(t);
        let partial = sum.value();
        let target = tol.abs.max(tol.rel * partial.abs());
        if l >= next_check && t.abs() <= target {
            let failure: RefCell<Option<E>> = RefCell::new(None);
            let tail = integrate_semi_infinite(
                |x| {
                    if failure.borrow().is_some() {
                        return 0.0;
                    }
                    match term(x) {
                        Ok(v) => v,
                        Err(e) => {
                            *failure.borrow_mut() = Some(e);
                            0.0
                        }
                    }
                },
                l as f64,
                &tail_tol,
            )?
            .value
            .abs();
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            if tail <= target {
                return Ok(MatsubaraSum {
                    value: partial,
                    last_index: l,
                    tail,
                });
            }
            if let Some(prev) = last_tail {
                if tail >= prev {
                    return Err(NumericsError::Summation {
                        terms: l as usize,
                        reason: format!("tail estimate not decreasing ({prev:e} -> {tail:e})"),
                    }
                    .into());
                }
            }
            last_tail = Some(tail);
            next_check = l + (l / 4).max(1);
        }
        l += 1;
        if l > MAX_TERMS {
            return Err(NumericsError::Summation {
                terms: l as usize,
                reason: "term budget exhausted".into(),
            }
            .into());
        }
    }
}

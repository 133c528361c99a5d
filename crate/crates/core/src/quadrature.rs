//! Adaptive Gauss–Kronrod quadrature on a finite interval.
//!
//! A 7-point Gauss rule embedded in a 15-point Kronrod rule is applied per
//! subinterval; the subinterval with the largest error estimate is bisected
//! until the summed estimate drops below the requested absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [0, 1] (symmetric about the midpoint).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

// Kronrod weights.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// 7-point Gauss weights (for the odd-indexed Kronrod abscissae).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss–Kronrod 15 evaluation on [a, b].
///
/// Returns (kronrod value, error estimate) with the QUADPACK-style rescaled
/// error that guards against over-optimistic estimates on rough integrands.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv = [[0.0f64; 2]; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = [f1, f2];
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j][0] - mean).abs() + (fv[j][1] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = (kronrod - gauss).abs() * half.abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrate `f` over [a, b] to absolute tolerance `abs_tol`.
///
/// Fails with [`Error::QuadratureNonConvergence`] when the error estimate is
/// still more than an order of magnitude above `abs_tol` after
/// `max_intervals` subdivisions.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidGrid {
            reason: format!("integration bounds [{a}, {b}] must be finite and increasing"),
        });
    }

    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value: v, error: e });
    let mut total_error = e;
    let min_width = (b - a) * f64::EPSILON * 16.0;

    while total_error > abs_tol && heap.len() < max_intervals {
        let worst = match heap.pop() {
            Some(w) => w,
            None => break,
        };
        if worst.b - worst.a <= min_width {
            // cannot usefully refine further; put it back and stop
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total_error += e1 + e2 - worst.error;
        heap.push(Interval { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Interval { a: mid, b: worst.b, value: v2, error: e2 });
    }

    // Recompute the totals from the heap to avoid drift from incremental updates.
    let value: f64 = heap.iter().map(|i| i.value).sum();
    let error: f64 = heap.iter().map(|i| i.error).sum();
    if error > 10.0 * abs_tol {
        return Err(Error::QuadratureNonConvergence {
            error,
            tol: abs_tol,
            intervals: heap.len(),
        });
    }
    Ok(QuadResult { value, abs_error: error, intervals: heap.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        // GK15 integrates degree-22 polynomials exactly; x^7 on [0,2] = 32
        let r = integrate(|x| x.powi(7), 0.0, 2.0, 1e-12, 100).unwrap();
        assert!((r.value - 32.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn oscillatory_integrand() {
        // int_0^{20 pi} sin(x)^2 dx = 10 pi
        let r = integrate(|x| x.sin().powi(2), 0.0, 20.0 * PI, 1e-10, 10_000).unwrap();
        assert!((r.value - 10.0 * PI).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn lorentzian() {
        // int_0^1000 dk / (1 + k^2) = atan(1000)
        let r = integrate(|k| 1.0 / (1.0 + k * k), 0.0, 1000.0, 1e-10, 10_000).unwrap();
        assert!((r.value - 1000.0f64.atan()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-8, 100).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-8, 100).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        // step discontinuity with an absurdly tight tolerance and tiny budget
        let res = integrate(|x| if x < 0.5 { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-16, 4);
        assert!(matches!(res, Err(Error::QuadratureNonConvergence { .. })));
    }
}

//! Central-difference differentiation for complex-valued functions of k.

use num_complex::Complex64;

use crate::error::Result;

/// 5-point 4th-order central difference.
fn central4<F>(f: &F, k: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    Ok((f(k - 2.0 * h)? - 8.0 * f(k - h)? + 8.0 * f(k + h)? - f(k + 2.0 * h)?) / (12.0 * h))
}

/// 4th-order central difference with one Richardson extrapolation (6th order).
pub(crate) fn richardson_derivative<F>(f: &F, k: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let d_h = central4(f, k, h)?;
    let d_h2 = central4(f, k, 0.5 * h)?;
    Ok((16.0 * d_h2 - d_h) / 15.0)
}

/// Differentiation step: max(1e-4, 1e-3 k), capped by `cap` so the stencil
/// stays well inside one oscillation of the amplitudes.
pub(crate) fn derivative_step(k: f64, cap: f64) -> f64 {
    (1e-3 * k).max(1e-4).min(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_complex_exponential() {
        let f = |k: f64| Ok(Complex64::new(0.0, 2.0 * k).exp());
        let d = richardson_derivative(&f, 1.3, 1e-3).unwrap();
        let exact = Complex64::new(0.0, 2.0) * Complex64::new(0.0, 2.6).exp();
        assert!((d - exact).norm() < 1e-12, "{d}");
    }

    #[test]
    fn step_is_clamped() {
        assert_eq!(derivative_step(0.01, 5e-3), 1e-4);
        assert_eq!(derivative_step(1.0, 5e-3), 1e-3);
        assert_eq!(derivative_step(100.0, 5e-3), 5e-3);
    }
}

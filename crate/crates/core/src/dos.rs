//! Density of scattering states.
//!
//! For a finite-range symmetric potential the density of continuum states
//! deviates from the free value L/(2 pi) by a smooth, L-independent part
//! delta_rho(k) plus an exact -1/2 delta(k) weight at zero momentum. The
//! smooth part is computed three ways:
//!
//! * `dos_direct_square_well` — closed form for the square well,
//! * `dos_from_normalization_integral` — interior-norm assembly
//!   (analytic segment integrals plus the reflection phase term),
//! * `dos_shortcut` — `-(i/2pi) (R* dR/dk + T* dT/dk)`, with analytic or
//!   numeric derivatives.
//!
//! The delta(k) weight is never sampled; it is carried as an exact rational
//! side channel consumed by the bound-state integrator and by the
//! thermodynamics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::{amplitudes, piecewise_solution, square_well_amplitudes};
use crate::error::{Error, Result};
use crate::numdiff::{derivative_step, richardson_derivative};
use crate::potentials::{Kind, PotentialSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);
const TWO_PI: f64 = 2.0 * PI;

/// Exact rational weight of the delta(k) term in rho(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaWeight {
    pub numer: i64,
    pub denom: i64,
}

impl DeltaWeight {
    pub fn value(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

/// The zero-momentum weight is -1/2 for every non-threshold spec.
pub const DELTA_WEIGHT_AT_ZERO: DeltaWeight = DeltaWeight { numer: -1, denom: 2 };

/// Which route produced a density sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Interior-norm assembly (square well closed form / piecewise segments).
    Direct,
    /// Amplitude-derivative formula.
    Shortcut,
    /// Closed form (delta potential, or the square-well bracket).
    Closed,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Shortcut => "shortcut",
            Method::Closed => "closed",
        }
    }
}

/// Derivative evaluation for the shortcut formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

/// A k-grid request: `count` samples from `min` to `max`, linear or
/// log-spaced. Wavevectors must be strictly positive.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: GridScale,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize, scale: GridScale) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min <= 0.0 || max <= min {
            return Err(Error::InvalidGrid {
                reason: format!("need 0 < min < max, got [{min}, {max}]"),
            });
        }
        if count < 2 {
            return Err(Error::InvalidGrid { reason: format!("need at least 2 points, got {count}") });
        }
        Ok(GridSpec { min, max, count, scale })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    GridScale::Linear => self.min + (self.max - self.min) * t,
                    GridScale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// Default sampling grid: 400 points per decade over three log decades below
/// the characteristic wavevector, then linear out to 100 times it.
pub fn default_grid(spec: &PotentialSpec) -> Vec<f64> {
    let ck = spec.char_wavevector();
    let mut ks = GridSpec::new(1e-3 * ck, ck, 1201, GridScale::Log).unwrap().points();
    let step = 0.05 * ck;
    let mut k = ck + step;
    while k <= 100.0 * ck + 0.5 * step {
        ks.push(k);
        k += step;
    }
    ks
}

/// Smooth part of delta rho on a k >= 0 grid, with the exact delta(k) weight
/// carried separately. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SpectralDensity {
    pub grid: Vec<f64>,
    pub delta_rho: Vec<f64>,
    pub delta_weight_at_zero: DeltaWeight,
    pub method: Method,
    /// Characteristic wavevector of the generating spec (1/a, or |kappa|).
    pub char_wavevector: f64,
}

/// Closed form for the delta potential: -(1/2pi) kappa / (kappa^2 + k^2).
pub fn dos_delta_closed(k: f64, kappa: f64) -> Result<f64> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidWavevector { k });
    }
    if !kappa.is_finite() {
        return Err(Error::NonFinite { name: "kappa", value: kappa });
    }
    Ok(-kappa / (TWO_PI * (kappa * kappa + k * k)))
}

/// Square-well closed form. The bracket is evaluated in a cancellation-free
/// rearrangement of
///
/// ```text
/// -2a + [8 a k^2 (2k^2+q^2) - 2 q^4 sin(4 a l)/l] /
///       [-q^4 cos(4 a l) + 8k^4 + 8k^2 q^2 + q^4]
/// ```
///
/// namely (N - 2aD)/D with N - 2aD = -8 a k^2 q^2 - 2 q^4 sin(4al)/l
/// - 2 a q^4 (1 - cos(4al)).
pub fn dos_direct_square_well(k: f64, spec: &PotentialSpec) -> Result<f64> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidWavevector { k });
    }
    let (qa, a) = match (spec.qa(), spec.kind()) {
        (Some(qa), Kind::SquareWell) => (qa, spec.half_range()),
        _ => {
            return Err(Error::UnsupportedSpec {
                op: "dos_direct_square_well",
                kind: spec.kind().name(),
            })
        }
    };
    let q = qa / a;
    let q2 = q * q;
    let q4 = q2 * q2;
    let k2 = k * k;
    let ell = (k2 + q2).sqrt();
    let (s, c) = (4.0 * a * ell).sin_cos();
    let den = -q4 * c + 8.0 * k2 * k2 + 8.0 * k2 * q2 + q4;
    let num_cancelled = -8.0 * a * k2 * q2 - 2.0 * q4 * s / ell - 2.0 * a * q4 * (1.0 - c);
    Ok(num_cancelled / den / TWO_PI)
}

/// Integral of |A e^{ilx} + B e^{-ilx}|^2 over [x1, x2] for real or purely
/// imaginary l.
fn segment_norm_integral(a: Complex64, b: Complex64, ell: Complex64, x1: f64, x2: f64) -> f64 {
    let j = |c: Complex64| -> Complex64 {
        if c.norm() == 0.0 {
            Complex64::from(x2 - x1)
        } else {
            ((c * x2).exp() - (c * x1).exp()) / c
        }
    };
    let lc = ell.conj();
    let total = a.norm_sqr() * j(I * (ell - lc))
        + b.norm_sqr() * j(-I * (ell - lc))
        + a * b.conj() * j(I * (ell + lc))
        + a.conj() * b * j(-I * (ell + lc));
    total.re
}

/// Density from the wavefunction normalization: the -2a deficit, the interior
/// norm integral (analytic per segment), and the reflection phase term
/// -(1/2pi k)(Re R sin 2ka + Im R cos 2ka).
pub fn dos_from_normalization_integral(k: f64, spec: &PotentialSpec) -> Result<f64> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidWavevector { k });
    }
    let a = spec.half_range();
    let (r, interior_norm) = match spec.kind() {
        Kind::Delta => {
            return Err(Error::UnsupportedSpec {
                op: "dos_from_normalization_integral",
                kind: "Delta (no interior representation; use the closed form)",
            })
        }
        Kind::SquareWell => {
            let (amp, int) = square_well_amplitudes(k, spec)?;
            let s2l = (2.0 * int.ell * a).sin() / (2.0 * int.ell);
            let norm = int.c.norm_sqr() * (a - s2l) + int.d.norm_sqr() * (a + s2l);
            (amp.r, norm)
        }
        Kind::PiecewiseConstant => {
            let (amp, waves) = piecewise_solution(k, spec)?;
            let norm = waves
                .iter()
                .map(|w| segment_norm_integral(w.a_coeff, w.b_coeff, w.ell, w.left, w.right))
                .sum();
            (amp.r, norm)
        }
    };
    let (s2ka, c2ka) = (2.0 * k * a).sin_cos();
    Ok((-2.0 * a + interior_norm) / TWO_PI - (r.re * s2ka + r.im * c2ka) / (TWO_PI * k))
}

/// R, T and dR/dk, dT/dk for the delta potential, in closed form.
fn delta_rt_derivatives(k: f64, kappa: f64) -> (Complex64, Complex64, Complex64, Complex64) {
    let den = Complex64::new(kappa, k);
    let r = -kappa / den;
    let t = I * k / den;
    let d = I * kappa / (den * den);
    (r, t, d, d)
}

/// R, T and dR/dk, dT/dk for the square well, in closed form.
fn square_well_rt_derivatives(
    k: f64,
    qa: f64,
    a: f64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let q = qa / a;
    let q2 = q * q;
    let k2 = k * k;
    let ell = (k2 + q2).sqrt();
    let ell_p = k / ell;
    let (s, c) = (2.0 * ell * a).sin_cos();
    let s_p = 2.0 * a * ell_p * c;
    let c_p = -2.0 * a * ell_p * s;
    let w = (2.0 * k2 + q2) / (2.0 * k * ell);
    let w_p = -q2 * q2 / (2.0 * k2 * ell * ell * ell);
    let g = Complex64::from(c) - I * w * s;
    let g_p = Complex64::from(c_p) - I * (w_p * s + w * s_p);
    let t = (-2.0 * I * k * a).exp() / g;
    let t_p = t * (-2.0 * I * a - g_p / g);
    let u = q2 / (2.0 * k * ell);
    let u_p = -q2 * (2.0 * k2 + q2) / (2.0 * k2 * ell * ell * ell);
    let r = I * s * u * t;
    let r_p = I * (s_p * u * t + s * u_p * t + s * u * t_p);
    (r, t, r_p, t_p)
}

/// Shortcut density with its imaginary residual diagnostic. The residual is
/// the part of -(i/2pi)(R* dR/dk + T* dT/dk) that unitarity forces to zero.
pub fn dos_shortcut_diagnostic(
    k: f64,
    spec: &PotentialSpec,
    mode: DerivativeMode,
) -> Result<(f64, f64)> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidWavevector { k });
    }
    let (r, t, dr, dt) = match mode {
        DerivativeMode::Analytic => match spec.kind() {
            Kind::Delta => delta_rt_derivatives(k, spec.kappa().unwrap()),
            Kind::SquareWell => square_well_rt_derivatives(k, spec.qa().unwrap(), spec.half_range()),
            Kind::PiecewiseConstant => {
                return Err(Error::UnsupportedSpec {
                    op: "dos_shortcut (analytic mode)",
                    kind: "PiecewiseConstant (use the numeric mode)",
                })
            }
        },
        DerivativeMode::Numeric => {
            let cap = if spec.half_range() > 0.0 { 5e-3 / spec.half_range() } else { f64::INFINITY };
            let h = derivative_step(k, cap);
            if k - 2.0 * h <= 0.0 {
                return Err(Error::StepUnderflow { k, min_k: 2.1e-4 });
            }
            let amp = amplitudes(k, spec)?;
            let dr = richardson_derivative(&|kk| Ok(amplitudes(kk, spec)?.r), k, h)?;
            let dt = richardson_derivative(&|kk| Ok(amplitudes(kk, spec)?.t), k, h)?;
            (amp.r, amp.t, dr, dt)
        }
    };
    let value = -I / TWO_PI * (r.conj() * dr + t.conj() * dt);
    Ok((value.re, value.im.abs()))
}

/// Shortcut density -(i/2pi)(R* dR/dk + T* dT/dk).
pub fn dos_shortcut(k: f64, spec: &PotentialSpec, mode: DerivativeMode) -> Result<f64> {
    dos_shortcut_diagnostic(k, spec, mode).map(|(v, _)| v)
}

/// Shortcut with the natural derivative mode for the spec kind.
pub fn dos_shortcut_auto(k: f64, spec: &PotentialSpec) -> Result<f64> {
    let mode = match spec.kind() {
        Kind::Delta | Kind::SquareWell => DerivativeMode::Analytic,
        Kind::PiecewiseConstant => DerivativeMode::Numeric,
    };
    dos_shortcut(k, spec, mode)
}

/// Best available route for the spec kind.
pub fn preferred_method(spec: &PotentialSpec) -> Method {
    match spec.kind() {
        Kind::Delta => Method::Closed,
        Kind::SquareWell => Method::Direct,
        Kind::PiecewiseConstant => Method::Shortcut,
    }
}

/// Smooth delta rho at one k with an explicit method choice.
pub fn delta_rho_with_method(k: f64, spec: &PotentialSpec, method: Method) -> Result<f64> {
    match (method, spec.kind()) {
        (Method::Closed | Method::Direct, Kind::Delta) => {
            if method == Method::Direct {
                return Err(Error::UnsupportedSpec {
                    op: "delta_rho (direct method)",
                    kind: "Delta (no interior representation; use closed or shortcut)",
                });
            }
            dos_delta_closed(k, spec.kappa().unwrap())
        }
        (Method::Closed | Method::Direct, Kind::SquareWell) => dos_direct_square_well(k, spec),
        (Method::Direct, Kind::PiecewiseConstant) => dos_from_normalization_integral(k, spec),
        (Method::Closed, Kind::PiecewiseConstant) => Err(Error::UnsupportedSpec {
            op: "delta_rho (closed method)",
            kind: "PiecewiseConstant (use direct or shortcut)",
        }),
        (Method::Shortcut, _) => dos_shortcut_auto(k, spec),
    }
}

/// Smooth delta rho at one k via the preferred route.
pub fn delta_rho_smooth(k: f64, spec: &PotentialSpec) -> Result<f64> {
    delta_rho_with_method(k, spec, preferred_method(spec))
}

/// Sample the density on explicit grid points (parallel over points).
pub fn sample_density_on(spec: &PotentialSpec, ks: &[f64], method: Method) -> Result<SpectralDensity> {
    let delta_rho: Vec<f64> = ks
        .par_iter()
        .map(|&k| delta_rho_with_method(k, spec, method))
        .collect::<Result<_>>()?;
    Ok(SpectralDensity {
        grid: ks.to_vec(),
        delta_rho,
        delta_weight_at_zero: DELTA_WEIGHT_AT_ZERO,
        method,
        char_wavevector: spec.char_wavevector(),
    })
}

/// Sample the density on a grid via the preferred method.
pub fn sample_density(spec: &PotentialSpec, grid: &GridSpec) -> Result<SpectralDensity> {
    sample_density_on(spec, &grid.points(), preferred_method(spec))
}

/// Sample the density on a grid with an explicit method.
pub fn sample_density_with_method(
    spec: &PotentialSpec,
    grid: &GridSpec,
    method: Method,
) -> Result<SpectralDensity> {
    sample_density_on(spec, &grid.points(), method)
}

/// Least-squares fit of delta_rho ~ c/k^2 + d/k^4 over samples, returning c.
pub(crate) fn fit_tail_from_samples(ks: &[f64], ys: &[f64]) -> Result<f64> {
    if ks.len() < 8 {
        return Err(Error::TailFitFailure {
            reason: format!("need at least 8 samples in the top decade, got {}", ks.len()),
        });
    }
    let (mut s22, mut s24, mut s44, mut b2, mut b4) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&k, &y) in ks.iter().zip(ys) {
        let u = 1.0 / (k * k);
        s22 += u * u;
        s24 += u * u * u;
        s44 += u * u * u * u;
        b2 += y * u;
        b4 += y * u * u;
    }
    let det = s22 * s44 - s24 * s24;
    if det.abs() < 1e-300 || !det.is_finite() {
        return Err(Error::TailFitFailure { reason: "degenerate normal equations".into() });
    }
    Ok((b2 * s44 - b4 * s24) / det)
}

/// Coefficient c of the asymptotic tail delta_rho -> c/k^2, fitted over the
/// top decade of the stored grid. The grid must reach 50 characteristic
/// wavevectors.
pub fn tail_coefficient(density: &SpectralDensity) -> Result<f64> {
    let k_max = *density.grid.last().ok_or(Error::TailFitFailure {
        reason: "empty grid".into(),
    })?;
    let required = 50.0 * density.char_wavevector;
    if k_max < required {
        return Err(Error::InsufficientGridReach { k_max, required });
    }
    let lo = k_max / 10.0;
    let mut ks = Vec::new();
    let mut ys = Vec::new();
    for (&k, &y) in density.grid.iter().zip(&density.delta_rho) {
        if k >= lo {
            ks.push(k);
            ys.push(y);
        }
    }
    fit_tail_from_samples(&ks, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_delta, make_piecewise, make_square_well, Segment};

    #[test]
    fn delta_closed_examples() {
        // attractive: loss at k = 0+
        let v = dos_delta_closed(1e-9, 1.0).unwrap();
        assert!((v + 1.0 / TWO_PI).abs() < 1e-10);
        // repulsive: the continuum gains states
        let v = dos_delta_closed(1e-9, -1.0).unwrap();
        assert!((v - 1.0 / TWO_PI).abs() < 1e-10);
        // 1/k^2 tail
        let v = dos_delta_closed(100.0, 1.0).unwrap();
        let tail = -1.0 / (TWO_PI * 100.0 * 100.0);
        assert!((v / tail - 1.0).abs() <= 1e-4);
        // sign structure: smooth part carries the sign of -kappa
        for k in [0.1, 1.0, 10.0] {
            assert!(dos_delta_closed(k, 2.0).unwrap() < 0.0);
            assert!(dos_delta_closed(k, -2.0).unwrap() > 0.0);
        }
        assert!(dos_delta_closed(0.0, 1.0).is_err());
    }

    #[test]
    fn direct_square_well_matches_uncancelled_bracket() {
        let spec = make_square_well(3.0, 1.0).unwrap();
        for k in [0.05, 0.7, 2.0, 9.0, 60.0] {
            let v = dos_direct_square_well(k, &spec).unwrap();
            // printed bracket, evaluated literally
            let (q, a) = (3.0, 1.0);
            let ell = (k * k + q * q).sqrt();
            let num = 8.0 * a * k * k * (2.0 * k * k + q * q)
                - 2.0 * q.powi(4) * (4.0 * a * ell).sin() / ell;
            let den = -q.powi(4) * (4.0 * a * ell).cos()
                + 8.0 * k.powi(4)
                + 8.0 * k * k * q * q
                + q.powi(4);
            let literal = (-2.0 * a + num / den) / TWO_PI;
            assert!((v - literal).abs() < 1e-12, "k={k}: {v} vs {literal}");
        }
    }

    #[test]
    fn direct_square_well_tail_and_free_limit() {
        let spec = make_square_well(3.0, 1.0).unwrap();
        let k = 50.0;
        let v = dos_direct_square_well(k, &spec).unwrap();
        let tail = -9.0 / (TWO_PI * k * k);
        assert!((v / tail - 1.0).abs() < 0.01, "{v} vs {tail}");

        // q -> 0 zeroes the bracket
        let shallow = make_square_well(1e-6, 1.0).unwrap();
        for k in [0.1, 1.0, 10.0] {
            assert!(dos_direct_square_well(k, &shallow).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_route_agrees_with_direct() {
        let spec = make_square_well(3.0, 1.0).unwrap();
        for k in [0.5, 1.0, 2.0, 5.0] {
            let direct = dos_direct_square_well(k, &spec).unwrap();
            let norm = dos_from_normalization_integral(k, &spec).unwrap();
            assert!((direct - norm).abs() < 1e-10, "k={k}: {direct} vs {norm}");
        }
    }

    #[test]
    fn normalization_route_piecewise_free_and_reduction() {
        let free = make_piecewise(vec![Segment::new(-1.0, 1.0, 0.0)]).unwrap();
        for k in [0.3, 1.0, 4.0] {
            assert!(dos_from_normalization_integral(k, &free).unwrap().abs() < 1e-13);
        }
        // single-segment well reproduces the square-well value
        let q = 3.0;
        let pw = make_piecewise(vec![Segment::new(-1.0, 1.0, -0.5 * q * q)]).unwrap();
        let sw = make_square_well(3.0, 1.0).unwrap();
        for k in [0.5, 1.7, 6.0] {
            let v1 = dos_from_normalization_integral(k, &pw).unwrap();
            let v2 = dos_direct_square_well(k, &sw).unwrap();
            assert!((v1 - v2).abs() < 1e-11, "k={k}: {v1} vs {v2}");
        }
        let delta = make_delta(1.0).unwrap();
        assert!(matches!(
            dos_from_normalization_integral(1.0, &delta),
            Err(Error::UnsupportedSpec { .. })
        ));
    }

    #[test]
    fn delta_limit_of_normalization_formula() {
        // a -> 0 reduces the assembly to -Im R / (2 pi k), which must equal
        // the closed form
        let kappa = 1.0;
        for k in [0.2, 1.0, 5.0] {
            let amp = crate::amplitudes::delta_amplitudes(k, kappa).unwrap();
            let assembled = -amp.r.im / (TWO_PI * k);
            let closed = dos_delta_closed(k, kappa).unwrap();
            assert!((assembled - closed).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn shortcut_delta_analytic_equals_closed() {
        let spec = make_delta(1.0).unwrap();
        for i in 0..200 {
            let k = 0.01 + 10.0 * i as f64 / 199.0;
            let s = dos_shortcut(k, &spec, DerivativeMode::Analytic).unwrap();
            let c = dos_delta_closed(k, 1.0).unwrap();
            assert!((s - c).abs() < 1e-15, "k={k}: {s} vs {c}");
        }
    }

    #[test]
    fn shortcut_square_well_analytic_vs_numeric_vs_direct() {
        for qa in [1.0, 3.0] {
            let spec = make_square_well(qa, 1.0).unwrap();
            for k in [0.05, 0.5, 1.0, 4.0, 20.0, 90.0] {
                let direct = dos_direct_square_well(k, &spec).unwrap();
                let (ana, res_a) = dos_shortcut_diagnostic(k, &spec, DerivativeMode::Analytic).unwrap();
                let (num, res_n) = dos_shortcut_diagnostic(k, &spec, DerivativeMode::Numeric).unwrap();
                assert!((ana - direct).abs() < 1e-12, "qa={qa} k={k}: {ana} vs {direct}");
                assert!((num - direct).abs() < 1e-10, "qa={qa} k={k}: {num} vs {direct}");
                assert!(res_a < 1e-9 && res_n < 1e-9);
            }
        }
    }

    #[test]
    fn shortcut_numeric_step_underflow() {
        let spec = make_square_well(3.0, 1.0).unwrap();
        assert!(matches!(
            dos_shortcut(1e-5, &spec, DerivativeMode::Numeric),
            Err(Error::StepUnderflow { .. })
        ));
        let spec = make_piecewise(vec![Segment::new(-1.0, 1.0, -4.5)]).unwrap();
        assert!(matches!(
            dos_shortcut(2e-4, &spec, DerivativeMode::Analytic),
            Err(Error::UnsupportedSpec { .. })
        ));
    }

    #[test]
    fn tail_fit_examples() {
        let grid = GridSpec::new(0.5, 100.0, 600, GridScale::Log).unwrap();

        let delta = make_delta(1.0).unwrap();
        let d = sample_density(&delta, &grid).unwrap();
        let c = tail_coefficient(&d).unwrap();
        assert!((c / (-1.0 / TWO_PI) - 1.0).abs() < 0.01, "{c}");

        let sw = make_square_well(3.0, 1.0).unwrap();
        let d = sample_density(&sw, &grid).unwrap();
        let c = tail_coefficient(&d).unwrap();
        assert!((c / (-9.0 / TWO_PI) - 1.0).abs() < 0.01, "{c}");

        let free = make_piecewise(vec![Segment::new(-1.0, 1.0, 0.0)]).unwrap();
        let d = sample_density(&free, &grid).unwrap();
        let c = tail_coefficient(&d).unwrap();
        assert!(c.abs() < 1e-12, "{c}");

        // insufficient reach
        let short = GridSpec::new(0.5, 10.0, 100, GridScale::Log).unwrap();
        let d = sample_density(&delta, &short).unwrap();
        assert!(matches!(tail_coefficient(&d), Err(Error::InsufficientGridReach { .. })));
    }

    #[test]
    fn sampled_delta_density_has_lorentzian_shape() {
        let spec = make_delta(1.0).unwrap();
        let grid = GridSpec::new(0.01, 10.0, 500, GridScale::Linear).unwrap();
        let d = sample_density(&spec, &grid).unwrap();
        assert_eq!(d.method, Method::Closed);
        assert_eq!(d.delta_weight_at_zero.value(), -0.5);
        // monotone negative with the minimum at the k -> 0 end
        for w in d.delta_rho.windows(2) {
            assert!(w[0] < w[1] && w[0] < 0.0);
        }
    }

    #[test]
    fn deep_well_density_has_gain_regions() {
        // the qa = 3 well already gains density at some k; qa = 10 is richer
        for qa in [3.0, 10.0] {
            let spec = make_square_well(qa, 1.0).unwrap();
            let grid = GridSpec::new(0.05, 12.0, 800, GridScale::Linear).unwrap();
            let d = sample_density(&spec, &grid).unwrap();
            let has_gain = d.delta_rho.iter().any(|&y| y > 0.0);
            let has_loss = d.delta_rho.iter().any(|&y| y < 0.0);
            assert!(has_gain && has_loss, "qa={qa}");
        }
        // zero-depth piecewise: identically zero smooth part
        let free = make_piecewise(vec![Segment::new(-1.0, 1.0, 0.0)]).unwrap();
        let grid = GridSpec::new(0.1, 5.0, 50, GridScale::Linear).unwrap();
        let d = sample_density(&free, &grid).unwrap();
        assert!(d.delta_rho.iter().all(|&y| y.abs() < 1e-13));
    }
}

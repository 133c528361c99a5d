//! Two-body thermodynamics of the attractive-delta (Yang-Gaudin) gas.
//!
//! With hbar = m = 1 everything depends on x = beta kappa^2, where kappa is
//! the relative-motion decay constant of the pair bound state (the reduced
//! mass m/2 is absorbed into this parameter; the pair binding energy is
//! -kappa^2 and the relative kinetic energy is k^2). Per unit center-of-mass
//! factor,
//!
//! ```text
//! dQ2 / Q2_com = e^x (1 + [erf(sqrt x) - 1]/2) - 1/2
//! dP = sqrt(pi/beta) (e^x [erf(sqrt x) + 1] - 1) rho^2
//! ```
//!
//! Both are evaluated through the scaled complement e^x erfc(sqrt x), which
//! stays finite long after e^x alone overflows.

use std::f64::consts::PI;

use crate::dos;
use crate::error::{Error, Result};
use crate::quadrature;

/// Representation switch between the power series and the Laplace continued
/// fraction.
const ERF_SERIES_LIMIT: f64 = 3.0;

/// Error function, accurate to about 1e-15 relative.
///
/// |x| <= 3 uses the cancellation-free power series
/// erf(x) = 2/sqrt(pi) x e^{-x^2} sum_n (2x^2)^n / (2n+1)!!; beyond that the
/// complementary function comes from the Laplace continued fraction.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax <= ERF_SERIES_LIMIT {
        erf_series(x)
    } else {
        let v = 1.0 - (-ax * ax).exp() * laplace_cf(ax) / PI.sqrt();
        if x > 0.0 {
            v
        } else {
            -v
        }
    }
}

/// Complementary error function erfc(x) = 1 - erf(x).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > ERF_SERIES_LIMIT {
        (-x * x).exp() * laplace_cf(x) / PI.sqrt()
    } else if x < -ERF_SERIES_LIMIT {
        2.0 - erfc(-x)
    } else {
        1.0 - erf_series(x)
    }
}

/// Scaled complement e^{x^2} erfc(x). Finite for arbitrarily large x >= 0,
/// which is what the overflow guards in the partition-function formulas need.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > ERF_SERIES_LIMIT {
        laplace_cf(x) / PI.sqrt()
    } else if x >= 0.0 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        // erfcx(-x) = 2 e^{x^2} - erfcx(x); overflows for x << -27 as it must
        2.0 * (x * x).exp() - erfcx(-x)
    }
}

fn erf_series(x: f64) -> f64 {
    let t = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0u32;
    while term > 1e-17 * sum && n < 200 {
        n += 1;
        term *= t / (2 * n + 1) as f64;
        sum += term;
    }
    2.0 / PI.sqrt() * x * (-x * x).exp() * sum
}

/// Laplace continued fraction for sqrt(pi) e^{x^2} erfc(x), evaluated
/// bottom-up. Converges to machine precision for x >= 3.
fn laplace_cf(x: f64) -> f64 {
    let mut f = 0.0;
    for n in (1..=120).rev() {
        f = (n as f64 / 2.0) / (x + f);
    }
    1.0 / (x + f)
}

/// Inputs for the dilute-gas corrections: inverse temperature, pair decay
/// constant kappa > 0 (attractive only), and gas number density.
#[derive(Debug, Clone, Copy)]
pub struct ThermoParams {
    pub beta: f64,
    pub kappa: f64,
    pub rho_gas: f64,
}

impl ThermoParams {
    pub fn new(beta: f64, kappa: f64, rho_gas: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("kappa", kappa), ("rho_gas", rho_gas)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
        }
        if beta <= 0.0 {
            return Err(Error::NonPositive { name: "beta", value: beta });
        }
        if kappa <= 0.0 {
            return Err(Error::NonPositive { name: "kappa", value: kappa });
        }
        if rho_gas < 0.0 {
            return Err(Error::NonPositive { name: "rho_gas", value: rho_gas });
        }
        Ok(ThermoParams { beta, kappa, rho_gas })
    }

    /// Convention x = beta (kappa = 1), used by the CLI.
    pub fn from_x(x: f64, rho_gas: f64) -> Result<Self> {
        ThermoParams::new(x, 1.0, rho_gas)
    }

    /// Dimensionless interaction strength x = beta kappa^2.
    pub fn x(&self) -> f64 {
        self.beta * self.kappa * self.kappa
    }
}

/// Computed corrections at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct ThermoResult {
    /// dQ2 / Q2_com.
    pub delta_q2_per_com: f64,
    /// Coefficient of rho^2 in dP.
    pub delta_p_coefficient: f64,
    /// Pressure correction dP.
    pub delta_p: f64,
    pub x_used: f64,
}

/// dQ2 / Q2_com as a function of x = beta kappa^2 alone:
/// e^x - erfcx(sqrt x)/2 - 1/2. Grows like e^x and saturates to infinity
/// beyond x ~ 709.8 where the bound-state weight leaves f64 range.
pub fn delta_q2_from_x(x: f64) -> f64 {
    x.exp() - 0.5 * erfcx(x.sqrt()) - 0.5
}

/// Two-body partition-function correction per center-of-mass factor.
pub fn delta_q2(params: &ThermoParams) -> f64 {
    delta_q2_from_x(params.x())
}

/// The same correction assembled from the spectral density: bound-state
/// Boltzmann weight e^x, plus the quadrature of delta_rho(k) e^{-beta k^2}
/// over both signs of k, plus -1/2 from the delta(k) weight. Used as the
/// end-to-end check that the density of states drives the thermodynamics.
pub fn delta_q2_via_density_quadrature(params: &ThermoParams) -> Result<f64> {
    let beta = params.beta;
    let kappa = params.kappa;
    // e^{-beta k^2} < 3e-20 beyond this cutoff
    let k_cut = (45.0 / beta).sqrt();
    let quad = quadrature::integrate(
        |k| {
            let rho = -kappa / (2.0 * PI * (kappa * kappa + k * k));
            2.0 * rho * (-beta * k * k).exp()
        },
        0.0,
        k_cut,
        1e-12,
        20_000,
    )?;
    Ok(params.x().exp() + quad.value + dos::DELTA_WEIGHT_AT_ZERO.value())
}

/// Pressure correction dP = sqrt(pi/beta) (e^x [erf(sqrt x) + 1] - 1) rho^2,
/// evaluated as sqrt(pi/beta) (2 e^x - erfcx(sqrt x) - 1) rho^2.
pub fn pressure_correction(params: &ThermoParams) -> f64 {
    pressure_coefficient(params) * params.rho_gas * params.rho_gas
}

/// Coefficient of rho^2 in the pressure correction.
pub fn pressure_coefficient(params: &ThermoParams) -> f64 {
    let x = params.x();
    (PI / params.beta).sqrt() * (2.0 * x.exp() - erfcx(x.sqrt()) - 1.0)
}

/// dP through the explicit partition-function chain
/// (dP) L = kT (dQ2) (L/Q1)^2 rho^2 with Q1 = L sqrt(1/(2 pi beta)) and
/// Q2_com = L sqrt(1/(pi beta)). Must agree with the closed form.
pub fn pressure_correction_via_chain(params: &ThermoParams) -> f64 {
    let beta = params.beta;
    let q1_per_l = (1.0 / (2.0 * PI * beta)).sqrt();
    let q2com_per_l = (1.0 / (PI * beta)).sqrt();
    let dq2_per_l = delta_q2(params) * q2com_per_l;
    (1.0 / beta) * dq2_per_l / (q1_per_l * q1_per_l) * params.rho_gas * params.rho_gas
}

/// Bundle of the corrections at one parameter point.
pub fn compute(params: &ThermoParams) -> ThermoResult {
    let coeff = pressure_coefficient(params);
    ThermoResult {
        delta_q2_per_com: delta_q2(params),
        delta_p_coefficient: coeff,
        delta_p: coeff * params.rho_gas * params.rho_gas,
        x_used: params.x(),
    }
}

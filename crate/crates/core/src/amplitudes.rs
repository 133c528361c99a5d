//! Reflection/transmission amplitudes for right-moving waves (k > 0).
//!
//! The scattering solution is normalized so the incident amplitude on the
//! left is exactly 1:
//!
//! ```text
//! psi_k(x) = e^{ikx} + R(k) e^{-ikx}   (x < -a)
//!          = psi_I(x)                  (|x| <= a)
//!          = T(k) e^{ikx}              (x > a)
//! ```
//!
//! Negative k is never computed here; the density layer exploits the
//! N(k) = N(-k) symmetry instead.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potentials::{Kind, PotentialSpec, Segment};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Scattering amplitudes at a single wavevector.
#[derive(Debug, Clone, Copy)]
pub struct Amplitudes {
    pub k: f64,
    pub r: Complex64,
    pub t: Complex64,
}

impl Amplitudes {
    /// | |R|^2 + |T|^2 - 1 |, which must vanish for a real potential.
    pub fn unitarity_defect(&self) -> f64 {
        (self.r.norm_sqr() + self.t.norm_sqr() - 1.0).abs()
    }
}

/// Interior square-well solution psi_I(x) = C sin(l x) + D cos(l x) with
/// l = sqrt(k^2 + q^2).
#[derive(Debug, Clone, Copy)]
pub struct InteriorWave {
    pub c: Complex64,
    pub d: Complex64,
    pub ell: f64,
}

impl InteriorWave {
    pub fn evaluate(&self, x: f64) -> Complex64 {
        self.c * (self.ell * x).sin() + self.d * (self.ell * x).cos()
    }
}

fn check_wavevector(k: f64) -> Result<()> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidWavevector { k });
    }
    Ok(())
}

/// R(k) = -1 / (i k / kappa + 1) for V(x) = -g delta(x), kappa = m g / hbar^2.
/// T(k) = 1 + R(k) is forced by continuity of psi at x = 0.
pub fn delta_amplitudes(k: f64, kappa: f64) -> Result<Amplitudes> {
    check_wavevector(k)?;
    if !kappa.is_finite() {
        return Err(Error::NonFinite { name: "kappa", value: kappa });
    }
    if kappa == 0.0 {
        return Err(Error::ZeroKappa);
    }
    let r = -1.0 / (I * (k / kappa) + 1.0);
    Ok(Amplitudes { k, r, t: 1.0 + r })
}

/// Square-well amplitudes and interior coefficients:
///
/// ```text
/// T(k) = e^{-2ika} / (cos(2la) - i (k^2 + l^2)/(2kl) sin(2la))
/// R(k) = i sin(2la) (l^2 - k^2)/(2kl) T(k)
/// C    = [sin(la) + i (k/l) cos(la)] e^{ika} T(k)
/// D    = [cos(la) - i (k/l) sin(la)] e^{ika} T(k)
/// ```
pub fn square_well_amplitudes(k: f64, spec: &PotentialSpec) -> Result<(Amplitudes, InteriorWave)> {
    check_wavevector(k)?;
    let (qa, a) = match (spec.qa(), spec.kind()) {
        (Some(qa), Kind::SquareWell) => (qa, spec.half_range()),
        _ => {
            return Err(Error::UnsupportedSpec {
                op: "square_well_amplitudes",
                kind: spec.kind().name(),
            })
        }
    };
    let q = qa / a;
    let ell = (k * k + q * q).sqrt();
    let (s2, c2) = (2.0 * ell * a).sin_cos();
    // the denominator never vanishes for real k > 0
    let t = (-2.0 * I * k * a).exp() / (c2 - I * ((k * k + ell * ell) / (2.0 * k * ell)) * s2);
    let r = I * s2 * ((ell * ell - k * k) / (2.0 * k * ell)) * t;
    let phase = (I * k * a).exp();
    let (sa, ca) = (ell * a).sin_cos();
    let c = (Complex64::from(sa) + I * (k / ell) * ca) * phase * t;
    let d = (Complex64::from(ca) - I * (k / ell) * sa) * phase * t;
    Ok((Amplitudes { k, r, t }, InteriorWave { c, d, ell }))
}

/// Wavevector inside a constant segment of depth `v`: sqrt(k^2 - 2v), taken
/// on the evanescent branch i*sqrt(2v - k^2) under the barrier.
pub(crate) fn segment_wavevector(k: f64, depth: f64) -> Complex64 {
    let e2 = k * k - 2.0 * depth;
    if e2 >= 0.0 {
        Complex64::new(e2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-e2).sqrt())
    }
}

/// Per-segment plane-wave coefficients psi(x) = A e^{ilx} + B e^{-ilx}
/// produced by the transfer-matrix pass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SegmentWave {
    pub left: f64,
    pub right: f64,
    pub ell: Complex64,
    pub a_coeff: Complex64,
    pub b_coeff: Complex64,
}

/// 2x2 interface matrix taking (A, B) on the `l1` side to the `l2` side at
/// position `x`, from continuity of psi and psi'.
fn interface(l1: Complex64, l2: Complex64, x: f64) -> [[Complex64; 2]; 2] {
    let ratio = l1 / l2;
    let e1p = (I * l1 * x).exp();
    let e1m = (-I * l1 * x).exp();
    let e2p = (I * l2 * x).exp();
    let e2m = (-I * l2 * x).exp();
    [
        [0.5 * (1.0 + ratio) * e1p / e2p, 0.5 * (1.0 - ratio) * e1m / e2p],
        [0.5 * (1.0 - ratio) * e1p / e2m, 0.5 * (1.0 + ratio) * e1m / e2m],
    ]
}

fn mat_vec(m: &[[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn mat_mul(m: &[[Complex64; 2]; 2], n: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[i][0] * n[0][j] + m[i][1] * n[1][j];
        }
    }
    out
}

fn overflow_guard(k: f64, segments: &[Segment], a: f64) -> Result<()> {
    let mut exponent = 0.0;
    let mut mu_max = 0.0f64;
    for s in segments {
        let ell = segment_wavevector(k, s.depth);
        if ell.im > 0.0 {
            exponent += ell.im * s.width();
            mu_max = mu_max.max(ell.im);
        }
    }
    let total = exponent + mu_max * a;
    if total > 600.0 {
        return Err(Error::EvanescentOverflow { exponent: total });
    }
    Ok(())
}

/// Transfer-matrix solve for a piecewise spec. Returns the amplitudes and the
/// per-segment interior coefficients (used by the normalization-integral
/// density route).
pub(crate) fn piecewise_solution(
    k: f64,
    spec: &PotentialSpec,
) -> Result<(Amplitudes, Vec<SegmentWave>)> {
    check_wavevector(k)?;
    let segments = match spec.kind() {
        Kind::PiecewiseConstant | Kind::SquareWell => spec.segments().unwrap(),
        Kind::Delta => {
            return Err(Error::UnsupportedSpec { op: "piecewise_amplitudes", kind: "Delta" })
        }
    };
    let a = spec.half_range();
    overflow_guard(k, &segments, a)?;

    let kk = Complex64::new(k, 0.0);
    let mut ells = Vec::with_capacity(segments.len() + 2);
    ells.push(kk);
    for s in &segments {
        ells.push(segment_wavevector(k, s.depth));
    }
    ells.push(kk);

    // interfaces at each segment boundary, leftmost first
    let mut xs = Vec::with_capacity(segments.len() + 1);
    xs.push(segments[0].left);
    for s in &segments {
        xs.push(s.right);
    }

    let mut total = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                     [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
    let mut partials = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        total = mat_mul(&interface(ells[i], ells[i + 1], x), &total);
        partials.push(total);
    }

    // (T, 0) = M (1, R)
    let m = &total;
    let r = -m[1][0] / m[1][1];
    let t = m[0][0] + m[0][1] * r;

    let incoming = [Complex64::new(1.0, 0.0), r];
    let mut waves = Vec::with_capacity(segments.len());
    for (i, s) in segments.iter().enumerate() {
        let v = mat_vec(&partials[i], incoming);
        waves.push(SegmentWave {
            left: s.left,
            right: s.right,
            ell: ells[i + 1],
            a_coeff: v[0],
            b_coeff: v[1],
        });
    }
    Ok((Amplitudes { k, r, t }, waves))
}

/// R, T for a piecewise-constant spec via transfer-matrix composition.
pub fn piecewise_amplitudes(k: f64, spec: &PotentialSpec) -> Result<Amplitudes> {
    if spec.kind() != Kind::PiecewiseConstant {
        return Err(Error::UnsupportedSpec { op: "piecewise_amplitudes", kind: spec.kind().name() });
    }
    Ok(piecewise_solution(k, spec)?.0)
}

/// Amplitudes for any supported spec kind.
pub fn amplitudes(k: f64, spec: &PotentialSpec) -> Result<Amplitudes> {
    match spec.kind() {
        Kind::Delta => delta_amplitudes(k, spec.kappa().unwrap()),
        Kind::SquareWell => Ok(square_well_amplitudes(k, spec)?.0),
        Kind::PiecewiseConstant => piecewise_amplitudes(k, spec),
    }
}

/// The three equivalent asymptotic forms evaluated at one point |x| > a.
#[derive(Debug, Clone, Copy)]
pub struct ParityCheck {
    /// Piecewise asymptotic form (incident + reflected on the left,
    /// transmitted on the right).
    pub asymptotic: Complex64,
    /// Even/odd regrouped form with the sgn(x) split.
    pub parity_form: Complex64,
    /// Even channel of the partial-wave decomposition.
    pub even_channel: Complex64,
    /// Odd channel of the partial-wave decomposition.
    pub odd_channel: Complex64,
}

impl ParityCheck {
    pub fn channel_sum(&self) -> Complex64 {
        self.even_channel + self.odd_channel
    }

    /// Largest pairwise disagreement between the three forms.
    pub fn max_disagreement(&self) -> f64 {
        let s = self.channel_sum();
        (self.asymptotic - self.parity_form)
            .norm()
            .max((self.parity_form - s).norm())
            .max((self.asymptotic - s).norm())
    }
}

/// Evaluate the asymptotic wavefunction at `x` (|x| > half_range) three ways:
/// the piecewise form, the sgn(x) parity form, and the sum of the even/odd
/// partial-wave channels. All three are algebraically identical.
pub fn parity_decomposition_check(
    x: f64,
    amps: &Amplitudes,
    half_range: f64,
) -> Result<ParityCheck> {
    check_wavevector(amps.k)?;
    if x.abs() <= half_range {
        return Err(Error::InsideInteractionRegion { x, a: half_range });
    }
    let k = amps.k;
    let (r, t) = (amps.r, amps.t);
    let eikx = (I * k * x).exp();
    let emikx = (-I * k * x).exp();

    let asymptotic = if x > 0.0 { t * eikx } else { eikx + r * emikx };

    let sgn = if x > 0.0 { 1.0 } else { -1.0 };
    let outgoing = (I * k * x.abs()).exp();
    let even_coeff = 0.5 * (r + t - 1.0);
    let odd_coeff = 0.5 * sgn * (-r + t - 1.0);
    let parity_form = eikx + (even_coeff + odd_coeff) * outgoing;

    let even_channel = 0.5 * (eikx + emikx) + even_coeff * outgoing;
    let odd_channel = 0.5 * (eikx - emikx) + odd_coeff * outgoing;

    Ok(ParityCheck { asymptotic, parity_form, even_channel, odd_channel })
}

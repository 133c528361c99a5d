//! Finite-range symmetric 1D potentials.
//!
//! Units are fixed at construction: hbar = 1, m = 1. Wavevectors are then
//! reported in units of 1/a for finite-range wells, and in units of kappa for
//! the delta potential. The delta potential V(x) = -g delta(x) is described
//! directly by kappa = m g / hbar^2 (kappa > 0 attractive, kappa < 0
//! repulsive). Piecewise specs use depth < 0 for attraction.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Rejection window around the square-well bound-state thresholds qa = n pi/2.
pub const THRESHOLD_TOL: f64 = 1e-9;

/// One constant-potential segment of a piecewise spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub left: f64,
    pub right: f64,
    pub depth: f64,
}

impl Segment {
    pub fn new(left: f64, right: f64, depth: f64) -> Self {
        Segment { left, right, depth }
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

/// Which family a spec belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Delta,
    SquareWell,
    PiecewiseConstant,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Delta => "Delta",
            Kind::SquareWell => "SquareWell",
            Kind::PiecewiseConstant => "PiecewiseConstant",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Delta { kappa: f64 },
    SquareWell { qa: f64, a: f64 },
    Piecewise { segments: Vec<Segment>, a: f64 },
}

/// A validated symmetric finite-range potential. Immutable after
/// construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    repr: Repr,
}

/// Delta potential with strength kappa (attractive for kappa > 0).
pub fn make_delta(kappa: f64) -> Result<PotentialSpec> {
    if !kappa.is_finite() {
        return Err(Error::NonFinite { name: "kappa", value: kappa });
    }
    if kappa == 0.0 {
        return Err(Error::ZeroKappa);
    }
    Ok(PotentialSpec { repr: Repr::Delta { kappa } })
}

/// Square well of half-width `a` and dimensionless strength `qa`, rejecting
/// values within [`THRESHOLD_TOL`] of a bound-state threshold n pi/2.
pub fn make_square_well(qa: f64, a: f64) -> Result<PotentialSpec> {
    if !qa.is_finite() {
        return Err(Error::NonFinite { name: "qa", value: qa });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { name: "a", value: a });
    }
    if qa <= 0.0 {
        return Err(Error::NonPositive { name: "qa", value: qa });
    }
    if a <= 0.0 {
        return Err(Error::NonPositive { name: "a", value: a });
    }
    let n = (qa / FRAC_PI_2).round();
    if n >= 1.0 {
        let threshold = n * FRAC_PI_2;
        if (qa - threshold).abs() < THRESHOLD_TOL {
            return Err(Error::ThresholdAnomaly { qa, threshold, tol: THRESHOLD_TOL });
        }
    }
    Ok(PotentialSpec { repr: Repr::SquareWell { qa, a } })
}

/// Piecewise-constant symmetric potential. The segments must tile [-a, a]
/// contiguously (a taken from the outermost edges) and mirror about x = 0.
pub fn make_piecewise(segments: Vec<Segment>) -> Result<PotentialSpec> {
    if segments.is_empty() {
        return Err(Error::SegmentTiling { reason: "no segments given".into() });
    }
    for s in &segments {
        for (name, v) in [
            ("segment left", s.left),
            ("segment right", s.right),
            ("segment depth", s.depth),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
        }
        if s.width() <= 0.0 {
            return Err(Error::SegmentTiling {
                reason: format!("segment [{}, {}] has non-positive width", s.left, s.right),
            });
        }
    }
    let mut segs = segments;
    segs.sort_by(|p, q| p.left.total_cmp(&q.left));

    let a = segs.last().unwrap().right;
    if a <= 0.0 {
        return Err(Error::SegmentTiling { reason: format!("outer edge {a} must be positive"), });
    }
    let tol = 1e-12 * a.max(1.0);
    if (segs[0].left + a).abs() > tol {
        return Err(Error::SegmentTiling {
            reason: format!("support starts at {} but ends at {}; expected [-a, a]", segs[0].left, a),
        });
    }
    for w in segs.windows(2) {
        let gap = w[1].left - w[0].right;
        if gap.abs() > tol {
            return Err(Error::SegmentTiling {
                reason: format!(
                    "{} between x = {} and x = {}",
                    if gap > 0.0 { "gap" } else { "overlap" },
                    w[0].right,
                    w[1].left
                ),
            });
        }
    }
    // mirror symmetry: the reversed, negated segment list must match
    for (s, m) in segs.iter().zip(segs.iter().rev()) {
        if (s.left + m.right).abs() > tol || (s.right + m.left).abs() > tol {
            return Err(Error::SegmentAsymmetry {
                reason: format!("segment [{}, {}] has no mirror partner", s.left, s.right),
            });
        }
        if (s.depth - m.depth).abs() > tol.max(1e-12 * s.depth.abs()) {
            return Err(Error::SegmentAsymmetry {
                reason: format!(
                    "depth {} at [{}, {}] differs from mirrored depth {}",
                    s.depth, s.left, s.right, m.depth
                ),
            });
        }
    }
    Ok(PotentialSpec { repr: Repr::Piecewise { segments: segs, a } })
}

impl PotentialSpec {
    pub fn kind(&self) -> Kind {
        match self.repr {
            Repr::Delta { .. } => Kind::Delta,
            Repr::SquareWell { .. } => Kind::SquareWell,
            Repr::Piecewise { .. } => Kind::PiecewiseConstant,
        }
    }

    /// Half-width of the support |x| <= a. Zero for the delta potential.
    pub fn half_range(&self) -> f64 {
        match &self.repr {
            Repr::Delta { .. } => 0.0,
            Repr::SquareWell { a, .. } => *a,
            Repr::Piecewise { a, .. } => *a,
        }
    }

    pub fn kappa(&self) -> Option<f64> {
        match self.repr {
            Repr::Delta { kappa } => Some(kappa),
            _ => None,
        }
    }

    pub fn qa(&self) -> Option<f64> {
        match self.repr {
            Repr::SquareWell { qa, .. } => Some(qa),
            _ => None,
        }
    }

    /// Interior wavevector scale q = qa / a of a square well.
    pub fn q(&self) -> Option<f64> {
        match self.repr {
            Repr::SquareWell { qa, a } => Some(qa / a),
            _ => None,
        }
    }

    /// Segment list, normalized to square-well-equivalent segments for the
    /// square well itself (depth -q^2/2 over [-a, a]).
    pub fn segments(&self) -> Option<Vec<Segment>> {
        match &self.repr {
            Repr::Delta { .. } => None,
            Repr::SquareWell { qa, a } => {
                let q = qa / a;
                Some(vec![Segment::new(-a, *a, -0.5 * q * q)])
            }
            Repr::Piecewise { segments, .. } => Some(segments.clone()),
        }
    }

    /// Regular part of V(x). The delta potential's distributional spike is
    /// not representable pointwise, so it evaluates to zero everywhere.
    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Delta { .. } => 0.0,
            Repr::SquareWell { qa, a } => {
                let q = qa / a;
                if x.abs() <= *a {
                    -0.5 * q * q
                } else {
                    0.0
                }
            }
            Repr::Piecewise { segments, a } => {
                if x.abs() > *a {
                    return 0.0;
                }
                for s in segments {
                    if x >= s.left && x <= s.right {
                        return s.depth;
                    }
                }
                0.0
            }
        }
    }

    /// Characteristic wavevector: 1/a for finite-range wells, |kappa| for the
    /// delta. Used to scale default grids and integration cutoffs.
    pub fn char_wavevector(&self) -> f64 {
        match &self.repr {
            Repr::Delta { kappa } => kappa.abs(),
            Repr::SquareWell { a, .. } => 1.0 / a,
            Repr::Piecewise { a, .. } => 1.0 / a,
        }
    }

    /// True when every segment has zero depth (no interaction).
    pub fn is_free(&self) -> bool {
        match &self.repr {
            Repr::Piecewise { segments, .. } => segments.iter().all(|s| s.depth == 0.0),
            _ => false,
        }
    }
}

impl Serialize for PotentialSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", self.kind().name())?;
        match &self.repr {
            Repr::Delta { kappa } => {
                map.serialize_entry("kappa", kappa)?;
                map.serialize_entry("a", &0.0)?;
            }
            Repr::SquareWell { qa, a } => {
                map.serialize_entry("qa", qa)?;
                map.serialize_entry("a", a)?;
            }
            Repr::Piecewise { segments, a } => {
                let raw: Vec<(f64, f64, f64)> =
                    segments.iter().map(|s| (s.left, s.right, s.depth)).collect();
                map.serialize_entry("segments", &raw)?;
                map.serialize_entry("a", a)?;
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
struct RawSpec {
    kind: String,
    #[serde(default)]
    kappa: Option<f64>,
    #[serde(default)]
    qa: Option<f64>,
    #[serde(default)]
    segments: Option<Vec<(f64, f64, f64)>>,
    #[serde(default)]
    a: Option<f64>,
}

impl<'de> Deserialize<'de> for PotentialSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSpec::deserialize(deserializer)?;
        let spec = match raw.kind.as_str() {
            "Delta" => {
                let kappa = raw.kappa.ok_or_else(|| D::Error::custom("Delta spec needs `kappa`"))?;
                make_delta(kappa)
            }
            "SquareWell" => {
                let qa = raw.qa.ok_or_else(|| D::Error::custom("SquareWell spec needs `qa`"))?;
                let a = raw.a.ok_or_else(|| D::Error::custom("SquareWell spec needs `a`"))?;
                make_square_well(qa, a)
            }
            "PiecewiseConstant" => {
                let raw_segs = raw
                    .segments
                    .ok_or_else(|| D::Error::custom("PiecewiseConstant spec needs `segments`"))?;
                let segs = raw_segs
                    .into_iter()
                    .map(|(l, r, d)| Segment::new(l, r, d))
                    .collect();
                make_piecewise(segs)
            }
            other => return Err(D::Error::custom(format!("unknown potential kind `{other}`"))),
        };
        spec.map_err(|e| D::Error::custom(e.to_string()))
    }
}

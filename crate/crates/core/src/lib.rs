//! 1D scattering amplitudes, the density of scattering states, bound-state
//! counting, and dilute-gas thermodynamic corrections for finite-range
//! symmetric potentials.
//!
//! Units are hbar = m = 1 throughout. The workflow:
//!
//! 1. describe a potential ([`potentials`]): delta, square well, or a
//!    symmetric piecewise-constant profile;
//! 2. compute reflection/transmission amplitudes ([`amplitudes`]);
//! 3. turn them into the smooth density deviation delta_rho(k) plus the
//!    exact -1/2 delta(k) weight ([`dos`]);
//! 4. integrate the loss spectrum to count bound states ([`levinson`]),
//!    cross-checked against a discretized finite box ([`box_oracle`]);
//! 5. feed the delta-potential density into the two-body partition function
//!    and the dilute-gas pressure correction ([`thermo`]).

pub mod amplitudes;
pub mod box_oracle;
pub mod dos;
pub mod error;
pub mod levinson;
pub mod potentials;
pub mod quadrature;
pub mod thermo;

mod numdiff;

pub use amplitudes::{Amplitudes, InteriorWave, ParityCheck};
pub use box_oracle::{Boundary, BoxSpectrum};
pub use dos::{
    DeltaWeight, DerivativeMode, GridScale, GridSpec, Method, SpectralDensity,
    DELTA_WEIGHT_AT_ZERO,
};
pub use error::{Error, Result};
pub use levinson::BoundStateReport;
pub use potentials::{Kind, PotentialSpec, Segment};
pub use thermo::{ThermoParams, ThermoResult};

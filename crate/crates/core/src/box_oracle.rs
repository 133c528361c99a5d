//! Brute-force validation in a hard-walled box.
//!
//! The Hamiltonian is discretized by second-order finite differences on a
//! uniform grid with Dirichlet walls at x = +-L/2, giving a symmetric
//! tridiagonal matrix. All eigenvalues below a cutoff are located by
//! Sturm-sequence bisection. Comparing the eigenvalue staircase of an
//! interacting box against the free box counts, state by state, how the
//! interaction redistributes the spectrum -- an independent check on the
//! integrated density of states.
//!
//! The potential is sampled as cell averages, which keeps the edge placement
//! of piecewise wells accurate to O(dx^2) and represents the delta spike as
//! a single cell of depth -kappa/dx. Eigenvalues E >= 0 are reported as
//! wavevectors k = sqrt(2E) with the continuum dispersion; dispersion error
//! cancels between interacting and free spectra in the staircase difference.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potentials::{Kind, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
}

/// Eigenvalue inventory of one finite box.
#[derive(Debug, Clone)]
pub struct BoxSpectrum {
    pub box_length: f64,
    /// Interior grid points actually used. One more than requested when a
    /// delta spec needs a lattice site exactly at x = 0.
    pub grid_points: usize,
    pub boundary: Boundary,
    /// Wavevectors sqrt(2E) of the E >= 0 eigenvalues, ascending.
    pub eigen_k: Vec<f64>,
    /// E < 0 eigenvalues, ascending.
    pub bound_energies: Vec<f64>,
}

impl BoxSpectrum {
    /// Number of scattering states with wavevector <= k.
    pub fn count_below(&self, k: f64) -> usize {
        self.eigen_k.partition_point(|&ek| ek <= k)
    }
}

/// Number of eigenvalues of the tridiagonal matrix (diag, off-diag e) that
/// lie strictly below `lambda`, by the Sturm sequence of the LDL^T pivots.
fn sturm_count(diag: &[f64], e2: f64, pivmin: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for &d in &diag[1..] {
        if q.abs() < pivmin {
            q = -pivmin;
        }
        q = d - lambda - e2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Cell-averaged potential samples on the interior grid.
fn sample_potential(spec: &PotentialSpec, l: f64, n: usize, dx: f64) -> Vec<f64> {
    let mut v = vec![0.0f64; n];
    match spec.kind() {
        Kind::Delta => {
            // integral of -g delta(x) over the center cell, spread across dx
            let kappa = spec.kappa().unwrap();
            let center = (n - 1) / 2;
            v[center] = -kappa / dx;
        }
        Kind::SquareWell | Kind::PiecewiseConstant => {
            let segments = spec.segments().unwrap();
            for (i, vi) in v.iter_mut().enumerate() {
                let x = -0.5 * l + (i + 1) as f64 * dx;
                let (lo, hi) = (x - 0.5 * dx, x + 0.5 * dx);
                let mut acc = 0.0;
                for s in &segments {
                    let overlap = (hi.min(s.right) - lo.max(s.left)).max(0.0);
                    acc += s.depth * overlap;
                }
                *vi = acc / dx;
            }
        }
    }
    v
}

fn solve(spec: Option<&PotentialSpec>, l: f64, n_request: usize, k_max: f64) -> Result<BoxSpectrum> {
    if !l.is_finite() || l <= 0.0 {
        return Err(Error::NonPositive { name: "box length", value: l });
    }
    if !k_max.is_finite() || k_max <= 0.0 {
        return Err(Error::NonPositive { name: "k_max", value: k_max });
    }
    if let Some(spec) = spec {
        let required = 50.0 / spec.char_wavevector();
        if l < required {
            return Err(Error::BoxTooSmall { l, required });
        }
    }
    // a delta spike needs a lattice site exactly at x = 0, hence odd n
    let mut n = n_request;
    if matches!(spec.map(|s| s.kind()), Some(Kind::Delta)) && n % 2 == 0 {
        n += 1;
    }
    // hard floor: ~5 points per half-wave at k_max. Staircase comparisons at
    // +-1 accuracy want the stronger n >= 20 k L / pi at the compared k.
    let required = (5.0 * k_max * l / std::f64::consts::PI).ceil() as usize;
    if n < required {
        return Err(Error::GridTooCoarse { n, k_max, l, required });
    }

    let dx = l / (n + 1) as f64;
    let kinetic = 1.0 / (dx * dx);
    let mut diag = match spec {
        Some(spec) => sample_potential(spec, l, n, dx),
        None => vec![0.0; n],
    };
    for d in diag.iter_mut() {
        *d += kinetic;
    }
    let e = -0.5 * kinetic;
    let e2 = e * e;
    let pivmin = f64::MIN_POSITIVE * e2.max(1.0);

    let e_cut = 0.5 * k_max * k_max;
    let lower = diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - 2.0 * e.abs() - 1.0;
    let m = sturm_count(&diag, e2, pivmin, e_cut);

    let eigenvalues: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut lo = lower;
            let mut hi = e_cut;
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(&diag, e2, pivmin, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();

    let mut bound_energies = Vec::new();
    let mut eigen_k = Vec::new();
    for lambda in eigenvalues {
        if lambda < 0.0 {
            bound_energies.push(lambda);
        } else {
            eigen_k.push((2.0 * lambda).sqrt());
        }
    }
    Ok(BoxSpectrum {
        box_length: l,
        grid_points: n,
        boundary: Boundary::Dirichlet,
        eigen_k,
        bound_energies,
    })
}

/// Discretize `spec` in a box of length `l` with `n` interior points and
/// locate every eigenvalue with E <= k_max^2 / 2.
pub fn discretize_and_solve(
    spec: &PotentialSpec,
    l: f64,
    n: usize,
    k_max: f64,
) -> Result<BoxSpectrum> {
    solve(Some(spec), l, n, k_max)
}

/// Free-box spectrum on the same discretization (pass the interacting
/// spectrum's `grid_points` so the counts compare state for state).
pub fn solve_free_box(l: f64, n: usize, k_max: f64) -> Result<BoxSpectrum> {
    solve(None, l, n, k_max)
}

/// Staircase difference dN(k): scattering states up to k in the interacting
/// box minus the free box. Tracks 2 int_0^k delta_rho dk' - 1/2 within the
/// +-1 discreteness of a finite box.
pub fn staircase_difference(
    interacting: &BoxSpectrum,
    free: &BoxSpectrum,
    k: f64,
) -> Result<f64> {
    if interacting.box_length != free.box_length || interacting.grid_points != free.grid_points {
        return Err(Error::MismatchedDiscretization);
    }
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidWavevector { k });
    }
    Ok(interacting.count_below(k) as f64 - free.count_below(k) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_delta, make_square_well};

    #[test]
    fn free_box_modes_match_dispersion() {
        let (l, n) = (100.0, 8000);
        let spectrum = solve_free_box(l, n, 3.3).unwrap();
        let dx = l / (n + 1) as f64;
        assert!(spectrum.bound_energies.is_empty());
        assert!(spectrum.eigen_k.len() > 100);
        for (i, &k) in spectrum.eigen_k.iter().take(100).enumerate() {
            let m = (i + 1) as f64;
            // exact discrete eigenvalue of the Dirichlet Laplacian
            let theta = m * std::f64::consts::PI / (n + 1) as f64;
            let exact_disc = (1.0 - theta.cos()) / (dx * dx);
            let e = 0.5 * k * k;
            assert!((e - exact_disc).abs() < 1e-9 * exact_disc.max(1e-6), "mode {m}");
            // continuum value within 0.1% for the lowest 100 modes
            let cont = 0.5 * (m * std::f64::consts::PI / l).powi(2);
            assert!((e / cont - 1.0).abs() < 1e-3, "mode {m}: {e} vs {cont}");
        }
    }

    #[test]
    fn delta_bound_state_energy() {
        let spec = make_delta(1.0).unwrap();
        let spectrum = discretize_and_solve(&spec, 100.0, 4000, 2.0).unwrap();
        assert_eq!(spectrum.grid_points, 4001, "even n bumped to keep a site at x = 0");
        assert_eq!(spectrum.bound_energies.len(), 1);
        let e = spectrum.bound_energies[0];
        assert!((e + 0.5).abs() < 5e-3, "E = {e}, expect -kappa^2/2 = -0.5");
    }

    #[test]
    fn square_well_bound_energies_match_transcendental() {
        let spec = make_square_well(3.0, 1.0).unwrap();
        let (l, n) = (100.0, 4001);
        let spectrum = discretize_and_solve(&spec, l, n, 2.0).unwrap();
        let exact = square_well_levels(3.0, 1.0);
        assert_eq!(spectrum.bound_energies.len(), exact.len());
        let dx = l / (n + 1) as f64;
        for (&got, &want) in spectrum.bound_energies.iter().zip(&exact) {
            assert!(
                (got - want).abs() < 2.0 * dx * dx,
                "E = {got}, transcendental {want}, dx^2 = {}",
                dx * dx
            );
        }
    }

    #[test]
    fn free_minus_free_vanishes() {
        let a = solve_free_box(60.0, 3000, 4.0).unwrap();
        let b = solve_free_box(60.0, 3000, 4.0).unwrap();
        for k in [0.5, 1.0, 2.0, 3.5] {
            assert_eq!(staircase_difference(&a, &b, k).unwrap(), 0.0);
        }
        let c = solve_free_box(60.0, 2999, 4.0).unwrap();
        assert!(matches!(
            staircase_difference(&a, &c, 1.0),
            Err(Error::MismatchedDiscretization)
        ));
    }

    #[test]
    fn rejects_undersized_problems() {
        let spec = make_delta(1.0).unwrap();
        assert!(matches!(
            discretize_and_solve(&spec, 10.0, 4000, 2.0),
            Err(Error::BoxTooSmall { .. })
        ));
        assert!(matches!(
            discretize_and_solve(&spec, 100.0, 200, 50.0),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn delta_staircase_tracks_integrated_density() {
        let spec = make_delta(1.0).unwrap();
        let (l, n) = (100.0, 4000);
        let interacting = discretize_and_solve(&spec, l, n, 12.0).unwrap();
        let free = solve_free_box(l, interacting.grid_points, 12.0).unwrap();

        for i in 1..=8 {
            let k = 0.25 * i as f64;
            let dn = staircase_difference(&interacting, &free, k).unwrap();
            let integral = crate::quadrature::integrate(
                |kk| 2.0 * crate::dos::dos_delta_closed(kk.max(1e-300), 1.0).unwrap(),
                1e-9,
                k,
                1e-10,
                2000,
            )
            .unwrap()
            .value;
            let model = integral - 0.5;
            assert!((dn - model).abs() <= 1.0, "k={k}: dN={dn}, model={model}");
        }

        // one full state is lost to the bound state at large k
        let dn = staircase_difference(&interacting, &free, 10.0).unwrap();
        assert_eq!(dn, -1.0);
    }

    /// Transcendental square-well levels: alpha tan(alpha a) = gamma (even),
    /// -alpha cot(alpha a) = gamma (odd), alpha^2 + gamma^2 = q^2, E = -gamma^2/2.
    fn square_well_levels(qa: f64, a: f64) -> Vec<f64> {
        let q = qa / a;
        let gamma_of = |alpha: f64| (q * q - alpha * alpha).max(0.0).sqrt();
        let feven = |alpha: f64| alpha * (alpha * a).tan() - gamma_of(alpha);
        let fodd = |alpha: f64| -alpha / (alpha * a).tan() - gamma_of(alpha);
        let mut levels = Vec::new();
        for f in [&feven as &dyn Fn(f64) -> f64, &fodd] {
            let steps = 40_000;
            let mut prev_alpha = 1e-9;
            let mut prev = f(prev_alpha);
            for i in 1..=steps {
                let alpha = 1e-9 + (q - 2e-9) * i as f64 / steps as f64;
                let val = f(alpha);
                if prev.is_finite() && val.is_finite() && prev * val < 0.0 && prev.abs() < 1e3 && val.abs() < 1e3 {
                    let (mut lo, mut hi) = (prev_alpha, alpha);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if f(lo) * f(mid) <= 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    let alpha_root = 0.5 * (lo + hi);
                    levels.push(-0.5 * gamma_of(alpha_root).powi(2));
                }
                prev_alpha = alpha;
                prev = val;
            }
        }
        levels.sort_by(f64::total_cmp);
        levels
    }

    #[test]
    fn transcendental_oracle_sanity() {
        // qa = 3 has two levels; the floor formula agrees
        let levels = square_well_levels(3.0, 1.0);
        assert_eq!(levels.len(), 2);
        assert!(levels[0] < levels[1] && levels[1] < 0.0);
        assert!(levels[0] > -4.5, "levels sit above the well bottom");
    }
}

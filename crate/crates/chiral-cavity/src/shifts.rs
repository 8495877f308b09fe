//! Perturbative spectral shifts: the angular-momentum-dependent piece, the
//! cavity-Lamb piece, their closed hydrogen and 2D-oscillator forms, and the
//! Bethe-regularized continuum Lamb integral.

use std::fmt;

use thiserror::Error;

use crate::model::{CavityParams, CentralPotential, Chirality};
use crate::radial::{
    self, expectation_inv_r_dv, expectation_laplacian, expectation_laplacian_transverse,
    RadialError, RadialState,
};
use crate::real::Real;
use crate::units::FINE_STRUCTURE;

/// Which evaluation route produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Analytic,
    Numeric,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Analytic => write!(f, "analytic"),
            Path::Numeric => write!(f, "numeric"),
        }
    }
}

/// Human-readable state designation carried along with results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateLabel {
    Hydrogen { n: u32, l: u32, l_z: i64 },
    Oscillator2d { n_right: u32, n_left: u32 },
    Custom(String),
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Hydrogen { n, l, l_z } => write!(f, "(n={n}, l={l}, l_z={l_z})"),
            StateLabel::Oscillator2d { n_right, n_left } => {
                write!(f, "(n_R={n_right}, n_L={n_left})")
            }
            StateLabel::Custom(s) => write!(f, "{s}"),
        }
    }
}

/// A computed shift pair with its inputs echoed back.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResult<R: Real> {
    pub am_shift: R,
    pub cl_shift: R,
    /// Always exactly am_shift + cl_shift.
    pub total: R,
    pub path: Path,
    pub g: R,
    pub omega_c: R,
    pub chirality: Chirality,
    pub state: StateLabel,
}

impl<R: Real> ShiftResult<R> {
    fn assemble(
        am_shift: R,
        cl_shift: R,
        path: Path,
        params: &CavityParams<R>,
        state: StateLabel,
    ) -> Self {
        ShiftResult {
            am_shift,
            cl_shift,
            total: am_shift + cl_shift,
            path,
            g: params.g(),
            omega_c: params.omega_c(),
            chirality: params.chirality(),
            state,
        }
    }
}

/// Errors from shift evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error("invalid quantum numbers: {message}")]
    InvalidQuantumNumbers { message: String },
    #[error("continuum Lamb cutoffs are defined for the Coulomb potential only")]
    NonHydrogenicCutoffs,
}

/// Hydrogenic length scale after mass renormalization, 1/(m_eff k) in atomic
/// units.
pub fn effective_bohr_radius<R: Real>(params: &CavityParams<R>, k: R) -> R {
    R::one() / (params.effective_mass() * k)
}

/// Closed-form hydrogen expectation of 1/r^3, 1/(a^3 n^3 l (l+1/2) (l+1)).
pub fn hydrogen_expectation_inv_r_cubed<R: Real>(n: u32, l: u32, a: R) -> Result<R, ShiftError> {
    if l == 0 || l >= n {
        return Err(ShiftError::InvalidQuantumNumbers {
            message: format!("<1/r^3> needs 1 <= l < n, got n = {n}, l = {l}"),
        });
    }
    let nn = R::of_int(n as i64);
    let ll = R::of_int(l as i64);
    let denom = nn * nn * nn * ll * (ll + R::of(0.5)) * (ll + R::one());
    Ok(R::one() / (a * a * a * denom))
}

/// Closed-form hydrogen origin density |psi_{n00}(0)|^2 = 1/(pi n^3 a^3).
pub fn hydrogen_origin_density<R: Real>(n: u32, a: R) -> R {
    let nn = R::of_int(n as i64);
    R::one() / (R::PI() * nn * nn * nn * a * a * a)
}

/// Angular-momentum shift from a solved state:
/// chirality * (xi^2 / 2) * l_z * <(1/r) dV/dr>. States with l_z = 0 return
/// zero without touching the (possibly divergent) integral.
pub fn am_shift_generic<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
    params: &CavityParams<R>,
) -> Result<R, ShiftError> {
    if state.l_z() == 0 {
        return Ok(R::zero());
    }
    let xi = params.xi();
    let sign: R = params.chirality().sign();
    let lz = R::of_int(state.l_z());
    let integral = expectation_inv_r_dv(state, potential)?;
    Ok(sign * xi * xi * R::of(0.5) * lz * integral)
}

/// Cavity-Lamb shift from a solved state: (xi^2 / 4) * <laplacian V>,
/// origin delta included.
pub fn cl_shift_generic<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
    params: &CavityParams<R>,
) -> Result<R, ShiftError> {
    let xi = params.xi();
    let integral = expectation_laplacian(state, potential)?;
    Ok(xi * xi * R::of(0.25) * integral)
}

/// Diagnostic variant of [`cl_shift_generic`] using only the in-plane (x, y)
/// part of the Laplacian, the plane the chiral mode lives in.
pub fn cl_shift_transverse<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
    params: &CavityParams<R>,
) -> Result<R, ShiftError> {
    let xi = params.xi();
    let integral = expectation_laplacian_transverse(state, potential)?;
    Ok(xi * xi * R::of(0.25) * integral)
}

/// Both shifts for a solved state, numeric path.
pub fn shift_generic<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
    params: &CavityParams<R>,
) -> Result<ShiftResult<R>, ShiftError> {
    let am = am_shift_generic(state, potential, params)?;
    let cl = cl_shift_generic(state, potential, params)?;
    let label = match potential {
        CentralPotential::Coulomb { .. } => {
            StateLabel::Hydrogen { n: state.n(), l: state.l(), l_z: state.l_z() }
        }
        CentralPotential::Harmonic2d { .. } => {
            let lz = state.l_z();
            StateLabel::Oscillator2d {
                n_right: state.n() + lz.max(0) as u32,
                n_left: state.n() + (-lz).max(0) as u32,
            }
        }
        CentralPotential::PowerLaw { .. } => {
            StateLabel::Custom(format!("(n={}, l={}, l_z={})", state.n(), state.l(), state.l_z()))
        }
    };
    Ok(ShiftResult::assemble(am, cl, Path::Numeric, params, label))
}

/// Closed-form hydrogen shifts:
/// AM = chirality * l_z * xi^2 k / (2 a_eff^3 n^3 l (l+1/2) (l+1)) for l >= 1,
/// CL = xi^2 k / (n^3 a_eff^3) for l = 0, zero otherwise.
pub fn hydrogen_shift_closed_form<R: Real>(
    n: u32,
    l: u32,
    l_z: i64,
    params: &CavityParams<R>,
    k: R,
) -> Result<ShiftResult<R>, ShiftError> {
    if n < 1 || l >= n || l_z.unsigned_abs() > u64::from(l) {
        return Err(ShiftError::InvalidQuantumNumbers {
            message: format!("need n >= 1, l < n, |l_z| <= l; got n = {n}, l = {l}, l_z = {l_z}"),
        });
    }
    let a = effective_bohr_radius(params, k);
    let xi = params.xi();
    let sign: R = params.chirality().sign();
    let nn = R::of_int(n as i64);
    let am = if l == 0 {
        R::zero()
    } else {
        let inv_r3 = hydrogen_expectation_inv_r_cubed(n, l, a)?;
        sign * R::of_int(l_z) * xi * xi * R::of(0.5) * k * inv_r3
    };
    let cl = if l == 0 {
        // (xi^2/4) * 4 pi k |psi(0)|^2 with |psi(0)|^2 = 1/(pi n^3 a^3);
        // the pi factors cancel.
        xi * xi * k / (nn * nn * nn * a * a * a)
    } else {
        R::zero()
    };
    Ok(ShiftResult::assemble(am, cl, Path::Analytic, params, StateLabel::Hydrogen { n, l, l_z }))
}

/// Closed-form 2D oscillator shifts for the level |n_R, n_L>:
/// AM = chirality * (xi^2 / 2) m omega^2 (n_R - n_L), CL = xi^2 m omega^2 / 2
/// (the computed 2D Laplacian of the well is 2 m omega^2).
pub fn ho2d_shift_closed_form<R: Real>(
    n_right: u32,
    n_left: u32,
    params: &CavityParams<R>,
    mass: R,
    omega: R,
) -> ShiftResult<R> {
    assert!(mass > R::zero() && omega > R::zero(), "oscillator needs mass, omega > 0");
    let xi = params.xi();
    let sign: R = params.chirality().sign();
    let spring = mass * omega * omega;
    let half_xi2 = xi * xi * R::of(0.5);
    let am = sign * half_xi2 * spring * R::of_int(n_right as i64 - n_left as i64);
    let cl = half_xi2 * spring;
    ShiftResult::assemble(
        am,
        cl,
        Path::Analytic,
        params,
        StateLabel::Oscillator2d { n_right, n_left },
    )
}

/// Continuum Lamb-shift record. `shift` carries the free-space mode-density
/// factor c^3; `shift_literal` drops it, evaluating the compact printed form
/// verbatim for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct LambResult<R: Real> {
    pub shift: R,
    pub shift_literal: R,
    pub log_factor: R,
    pub omega_min: R,
    pub omega_max: R,
    pub laplacian_expectation: R,
}

fn lamb_from_laplacian<R: Real>(mass: R, charge: R, k: R, laplacian: R) -> LambResult<R> {
    let alpha = R::of(FINE_STRUCTURE);
    // Bethe cutoffs in atomic units: hbar omega_min = hbar c pi / a with
    // a = 1/(m k), hbar omega_max = m c^2, c = 1/alpha.
    let a = R::one() / (mass * k);
    let omega_min = R::PI() / (alpha * a);
    let omega_max = mass / (alpha * alpha);
    let log_factor = (omega_max / omega_min).ln();
    let two_pi = R::of(2.0) * R::PI();
    let base = charge * charge / (two_pi * mass * mass) * log_factor * laplacian;
    LambResult {
        shift: base * alpha * alpha * alpha,
        shift_literal: base,
        log_factor,
        omega_min,
        omega_max,
        laplacian_expectation: laplacian,
    }
}

/// Bethe-regularized Lamb shift of a solved hydrogenic state, summing the
/// transverse vacuum continuum between the inverse-Bohr-radius and rest-mass
/// cutoffs. The potential must be Coulomb; nothing else defines the cutoffs.
pub fn lamb_shift_continuum<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
    mass: R,
    charge: R,
) -> Result<LambResult<R>, ShiftError> {
    let k = match potential {
        CentralPotential::Coulomb { k } => *k,
        _ => return Err(ShiftError::NonHydrogenicCutoffs),
    };
    let laplacian = expectation_laplacian(state, potential)?;
    Ok(lamb_from_laplacian(mass, charge, k, laplacian))
}

/// Closed-form continuum Lamb shift for hydrogen (n, l), using
/// |psi(0)|^2 = 1/(pi n^3 a^3), so <laplacian V> = 4 k / (n^3 a^3) for l = 0
/// and exactly zero for l >= 1.
pub fn lamb_shift_hydrogen_closed_form<R: Real>(
    n: u32,
    l: u32,
    mass: R,
    charge: R,
    k: R,
) -> Result<LambResult<R>, ShiftError> {
    if n < 1 || l >= n {
        return Err(ShiftError::InvalidQuantumNumbers {
            message: format!("need n >= 1 and l < n, got n = {n}, l = {l}"),
        });
    }
    let laplacian = if l == 0 {
        let a = R::one() / (mass * k);
        let nn = R::of_int(n as i64);
        R::of(4.0) * k / (nn * nn * nn * a * a * a)
    } else {
        R::zero()
    };
    Ok(lamb_from_laplacian(mass, charge, k, laplacian))
}

/// Convenience: numeric shifts for a freshly solved hydrogen state on the
/// default grid.
pub fn hydrogen_shift_numeric<R: Real>(
    n: u32,
    l: u32,
    l_z: i64,
    params: &CavityParams<R>,
    k: R,
) -> Result<ShiftResult<R>, ShiftError> {
    let potential = CentralPotential::Coulomb { k };
    let m_eff = params.effective_mass();
    let grid = radial::coulomb_default_grid(m_eff, k, n)?;
    let state = radial::solve_bound_state(&potential, m_eff, n, l, &grid)?.with_l_z(l_z)?;
    shift_generic(&state, &potential, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Chirality;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(g: f64) -> CavityParams<f64> {
        CavityParams::new(g, 5.0, Chirality::Plus, 1.0, 1.0).unwrap()
    }

    #[test]
    fn hydrogen_2p_plus_matches_direct_substitution() {
        let p = params(0.01);
        let r = hydrogen_shift_closed_form(2, 1, 1, &p, 1.0).unwrap();
        let a = effective_bohr_radius(&p, 1.0);
        let xi = p.xi();
        // denominator 2 * 8 * 1 * (3/2) * 2 = 48
        assert_relative_eq!(r.am_shift, xi * xi / (48.0 * a * a * a), max_relative = 1e-14);
        assert_eq!(r.cl_shift, 0.0);
        assert_eq!(r.total, r.am_shift);
    }

    #[test]
    fn hydrogen_3d_minus2_is_minus_one_over_405() {
        let p = params(0.02);
        let r = hydrogen_shift_closed_form(3, 2, -2, &p, 1.0).unwrap();
        let a = effective_bohr_radius(&p, 1.0);
        let xi = p.xi();
        assert_relative_eq!(r.am_shift, -xi * xi / (405.0 * a * a * a), max_relative = 1e-13);
    }

    #[test]
    fn oscillator_gap_is_m_omega2_xi2() {
        let p = params(0.02);
        let up = ho2d_shift_closed_form(1, 0, &p, 1.0, 1.0);
        let dn = ho2d_shift_closed_form(0, 1, &p, 1.0, 1.0);
        let xi = p.xi();
        assert_relative_eq!(up.total - dn.total, xi * xi, max_relative = 1e-14);
        assert_eq!(up.cl_shift, dn.cl_shift);
    }

    #[test]
    fn chirality_flip_negates_am_only() {
        let p = params(0.05);
        let a = hydrogen_shift_closed_form(3, 1, 1, &p, 1.0).unwrap();
        let b = hydrogen_shift_closed_form(3, 1, 1, &p.with_flipped_chirality(), 1.0).unwrap();
        assert_eq!(a.am_shift, -b.am_shift);
        assert_eq!(a.cl_shift, b.cl_shift);
    }

    #[test]
    fn lamb_log_factor_is_ln_inverse_pi_alpha() {
        let r = lamb_shift_hydrogen_closed_form(2, 0, 1.0, -1.0, 1.0).unwrap();
        let expected = -(std::f64::consts::PI * FINE_STRUCTURE).ln();
        assert_relative_eq!(r.log_factor, expected, max_relative = 1e-14);
        assert_relative_eq!(r.shift, 1.16748e-7, max_relative = 1e-4);
    }

    #[test]
    fn lamb_vanishes_for_p_states() {
        let r = lamb_shift_hydrogen_closed_form(2, 1, 1.0, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(r.shift, 0.0);
        assert_abs_diff_eq!(r.shift_literal, 0.0);
    }
}

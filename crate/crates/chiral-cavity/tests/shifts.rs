//! Shift-formula checks: closed forms against the quadrature engine,
//! chirality symmetries, the trace sum rule, coupling-strength extrema, and
//! the continuum Lamb-shift structure.

use approx::assert_relative_eq;
use chiral_cavity::model::{coulomb_potential, harmonic2d_potential, CavityParams, Chirality};
use chiral_cavity::radial::{harmonic2d_default_grid, solve_bound_state};
use chiral_cavity::shifts::{
    cl_shift_generic, cl_shift_transverse, effective_bohr_radius, ho2d_shift_closed_form,
    hydrogen_shift_closed_form, hydrogen_shift_numeric, lamb_shift_continuum,
    lamb_shift_hydrogen_closed_form, ShiftError,
};
use chiral_cavity::units::{energy_from_hartree, EnergyUnit, UnitSystem};

fn cavity(g: f64, omega_c: f64, chirality: Chirality) -> CavityParams<f64> {
    CavityParams::new(g, omega_c, chirality, 1.0, -1.0).unwrap()
}

#[test]
fn numeric_engine_matches_closed_forms_for_low_hydrogen() {
    let params = cavity(0.1, 0.5, Chirality::Plus);
    let k = 1.0;
    for n in 1..=3u32 {
        for l in 0..n {
            for l_z in -(i64::from(l))..=i64::from(l) {
                let analytic = hydrogen_shift_closed_form(n, l, l_z, &params, k).unwrap();
                let numeric = hydrogen_shift_numeric(n, l, l_z, &params, k).unwrap();
                if analytic.am_shift == 0.0 {
                    assert!(numeric.am_shift.abs() < 1e-12 * analytic.cl_shift.abs().max(1e-30));
                } else {
                    assert_relative_eq!(numeric.am_shift, analytic.am_shift, max_relative = 1e-6);
                }
                if analytic.cl_shift == 0.0 {
                    assert!(numeric.cl_shift.abs() < 1e-10);
                } else {
                    assert_relative_eq!(numeric.cl_shift, analytic.cl_shift, max_relative = 1e-6);
                }
            }
        }
    }
}

#[test]
fn electron_2p_shift_lands_near_a_quarter_mev() {
    // g = 0.01 and a 1e16 rad/s cavity put the n=2, l=1, l_z=+1 level shift
    // at 0.23 meV.
    let omega_c = UnitSystem::Si.angular_frequency_to_atomic(1.0e16);
    let params = cavity(0.01, omega_c, Chirality::Plus);
    let result = hydrogen_shift_closed_form(2, 1, 1, &params, 1.0).unwrap();
    let mev = energy_from_hartree(result.total, EnergyUnit::MilliElectronVolt);
    assert!((0.225..0.24).contains(&mev), "got {mev} meV");
    // The l_z = -1 partner sits symmetrically below.
    let partner = hydrogen_shift_closed_form(2, 1, -1, &params, 1.0).unwrap();
    assert_eq!(partner.am_shift, -result.am_shift);
}

#[test]
fn chirality_flip_negates_am_and_preserves_cl() {
    let k = 1.0;
    for (g, omega_c) in [(0.05, 0.3), (0.3, 1.0), (1.0, 2.0)] {
        let plus = cavity(g, omega_c, Chirality::Plus);
        let minus = plus.with_flipped_chirality();
        for (n, l, l_z) in [(2u32, 1u32, 1i64), (3, 1, -1), (3, 2, 2), (4, 3, -3)] {
            let up = hydrogen_shift_closed_form(n, l, l_z, &plus, k).unwrap();
            let down = hydrogen_shift_closed_form(n, l, l_z, &minus, k).unwrap();
            assert_eq!(up.am_shift, -down.am_shift);
            assert_eq!(up.cl_shift, down.cl_shift);
        }
        for (nr, nl) in [(1u32, 0u32), (3, 1), (5, 2)] {
            let up = ho2d_shift_closed_form(nr, nl, &plus, 1.0, 1.0);
            let down = ho2d_shift_closed_form(nr, nl, &minus, 1.0, 1.0);
            assert_eq!(up.am_shift, -down.am_shift);
            assert_eq!(up.cl_shift, down.cl_shift);
        }
    }
}

#[test]
fn am_shifts_trace_to_zero_over_each_shell() {
    let params = cavity(0.2, 0.8, Chirality::Plus);
    for (n, l) in [(2u32, 1u32), (3, 1), (3, 2), (4, 2), (4, 3)] {
        let mut sum = 0.0f64;
        let mut largest = 0.0f64;
        for l_z in -(i64::from(l))..=i64::from(l) {
            let am = hydrogen_shift_closed_form(n, l, l_z, &params, 1.0).unwrap().am_shift;
            sum += am;
            largest = largest.max(am.abs());
        }
        assert!(sum.abs() <= 1e-12 * largest, "shell ({n}, {l}): sum {sum}");
    }
}

#[test]
fn coupling_extremum_sits_at_unit_g() {
    // xi^2, the only g dependence of the oscillator gap, peaks at g = 1 with
    // value 1/(4 omega_c) and falls off in both limits.
    let omega_c = 2.0;
    let gap = |g: f64| {
        let p = cavity(g, omega_c, Chirality::Plus);
        let up = ho2d_shift_closed_form(1, 0, &p, 1.0, 1.0).total;
        let down = ho2d_shift_closed_form(0, 1, &p, 1.0, 1.0).total;
        up - down
    };
    let peak = gap(1.0);
    assert_relative_eq!(peak, 1.0 / (4.0 * omega_c), max_relative = 1e-14);
    for g in [0.01, 0.1, 10.0, 100.0] {
        assert!(gap(g) < peak);
    }
    assert!(gap(0.01) < 1e-3 * peak && gap(100.0) < 1e-3 * peak);
    // xi is symmetric under g -> 1/g.
    for g in [0.02, 0.3, 7.0] {
        assert_relative_eq!(gap(g), gap(1.0 / g), max_relative = 1e-12);
    }
}

#[test]
fn printed_rydberg_form_agrees_with_the_internal_one() {
    // The 2p shift can be quoted as (xi/a)^2 Ry_eff / 24 with
    // Ry_eff = k / (2 a); both spellings must coincide.
    let params = cavity(0.15, 0.9, Chirality::Plus);
    let k = 1.0;
    let a = effective_bohr_radius(&params, k);
    let xi = params.xi();
    let quoted = (xi / a).powi(2) * (k / (2.0 * a)) / 24.0;
    let result = hydrogen_shift_closed_form(2, 1, 1, &params, k).unwrap();
    assert_relative_eq!(result.am_shift, quoted, max_relative = 1e-14);
}

#[test]
fn lamb_shift_ratio_and_selection() {
    let one_s = lamb_shift_hydrogen_closed_form(1, 0, 1.0, -1.0, 1.0).unwrap();
    let two_s = lamb_shift_hydrogen_closed_form(2, 0, 1.0, -1.0, 1.0).unwrap();
    assert_relative_eq!(one_s.shift / two_s.shift, 8.0, max_relative = 1e-12);
    let two_p = lamb_shift_hydrogen_closed_form(2, 1, 1.0, -1.0, 1.0).unwrap();
    assert_eq!(two_p.shift, 0.0);
    assert_eq!(two_p.shift_literal, 0.0);
}

#[test]
fn lamb_shift_requires_hydrogenic_cutoffs() {
    let (mass, omega) = (1.0, 1.0);
    let potential = harmonic2d_potential(mass, omega).unwrap();
    let grid = harmonic2d_default_grid(mass, omega, 0, 0).unwrap();
    let state = solve_bound_state(&potential, mass, 0, 0, &grid).unwrap();
    assert!(matches!(
        lamb_shift_continuum(&state, &potential, mass, -1.0),
        Err(ShiftError::NonHydrogenicCutoffs)
    ));
}

#[test]
fn transverse_diagnostic_equals_full_laplacian_in_two_dimensions() {
    let (mass, omega) = (1.0, 1.0);
    let params = cavity(0.1, 5.0, Chirality::Plus);
    let potential = harmonic2d_potential(mass, omega).unwrap();
    let grid = harmonic2d_default_grid(mass, omega, 0, 1).unwrap();
    let state = solve_bound_state(&potential, mass, 0, 1, &grid).unwrap();
    let full = cl_shift_generic(&state, &potential, &params).unwrap();
    let transverse = cl_shift_transverse(&state, &potential, &params).unwrap();
    assert_relative_eq!(transverse, full, max_relative = 1e-12);
}

#[test]
fn totals_are_exactly_component_sums() {
    let params = cavity(0.4, 1.5, Chirality::Minus);
    let hydrogenic = hydrogen_shift_closed_form(3, 2, -1, &params, 2.0).unwrap();
    assert_eq!(hydrogenic.total, hydrogenic.am_shift + hydrogenic.cl_shift);
    let planar = ho2d_shift_closed_form(4, 1, &params, 1.2, 0.8);
    assert_eq!(planar.total, planar.am_shift + planar.cl_shift);
    let coulomb = coulomb_potential(2.0).unwrap();
    assert_eq!(coulomb.origin_delta_strength(), 8.0 * std::f64::consts::PI);
}

//! Randomized invariant checks: symmetries of the coupling length and the
//! shifts, selection rules, assembly exactness, kernel positivity, and unit
//! round trips.

use num_complex::Complex;
use proptest::prelude::*;

use chiral_cavity::fock::build_hamiltonian;
use chiral_cavity::model::{CavityParams, Chirality};
use chiral_cavity::rabi::{
    gamma12_am_oscillator, rabi_probability_direct, rabi_probability_first_order,
    rabi_probability_full_angle, TwoLevelConfig,
};
use chiral_cavity::shifts::{ho2d_shift_closed_form, hydrogen_shift_closed_form, StateLabel};
use chiral_cavity::units::{energy_from_hartree, energy_to_hartree, EnergyUnit, UnitSystem};

fn chirality() -> impl Strategy<Value = Chirality> {
    prop_oneof![Just(Chirality::Plus), Just(Chirality::Minus)]
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The coupling length is invariant under g -> 1/g and peaks at g = 1.
    #[test]
    fn coupling_length_is_symmetric_and_peaks_at_unit_g(
        g in log_uniform(1.0e-3, 1.0e3),
        omega_c in log_uniform(1.0e-2, 1.0e2),
        mass in log_uniform(0.1, 10.0),
        chi in chirality(),
    ) {
        let params = CavityParams::new(g, omega_c, chi, mass, -1.0).unwrap();
        let mirrored = params.with_g(1.0 / g).unwrap();
        let xi = params.xi();
        prop_assert!((xi - mirrored.xi()).abs() <= 1.0e-12 * xi);
        let peak = params.with_g(1.0).unwrap().xi();
        prop_assert!(xi <= peak * (1.0 + 1.0e-15));
        prop_assert!((peak - 0.5 * (1.0 / (mass * omega_c)).sqrt()).abs() <= 1.0e-15 * peak);
    }

    /// Flipping the cavity handedness negates every angular-momentum shift
    /// bit for bit and leaves the Lamb-type shift untouched.
    #[test]
    fn chirality_flip_negates_am_and_fixes_cl(
        g in log_uniform(1.0e-3, 1.0),
        omega_c in log_uniform(0.1, 20.0),
        k in log_uniform(0.2, 5.0),
        chi in chirality(),
    ) {
        let params = CavityParams::new(g, omega_c, chi, 1.0, -1.0).unwrap();
        let flipped = params.with_flipped_chirality();
        for &(n, l) in &[(1u32, 0u32), (2, 1), (3, 1), (3, 2), (4, 3)] {
            for l_z in -(l as i64)..=(l as i64) {
                let a = hydrogen_shift_closed_form(n, l, l_z, &params, k).unwrap();
                let b = hydrogen_shift_closed_form(n, l, l_z, &flipped, k).unwrap();
                prop_assert_eq!(b.am_shift, -a.am_shift);
                prop_assert_eq!(b.cl_shift, a.cl_shift);
            }
        }
        let a = ho2d_shift_closed_form(3, 1, &params, 1.4, 0.8);
        let b = ho2d_shift_closed_form(3, 1, &flipped, 1.4, 0.8);
        prop_assert_eq!(b.am_shift, -a.am_shift);
        prop_assert_eq!(b.cl_shift, a.cl_shift);
    }

    /// Within one (n, l) shell the angular-momentum shifts sum to zero.
    #[test]
    fn am_shifts_trace_to_zero_within_a_shell(
        g in log_uniform(1.0e-3, 1.0),
        omega_c in log_uniform(0.1, 20.0),
        k in log_uniform(0.2, 5.0),
        chi in chirality(),
    ) {
        let params = CavityParams::new(g, omega_c, chi, 1.0, -1.0).unwrap();
        for &(n, l) in &[(2u32, 1u32), (3, 1), (3, 2), (4, 2), (4, 3)] {
            let mut trace = 0.0;
            let mut largest: f64 = 0.0;
            for l_z in -(l as i64)..=(l as i64) {
                let shift = hydrogen_shift_closed_form(n, l, l_z, &params, k).unwrap();
                trace += shift.am_shift;
                largest = largest.max(shift.am_shift.abs());
            }
            prop_assert!(trace.abs() <= 1.0e-12 * largest);
        }
    }

    /// The trap coupling connects a level only to its two chiral ladder
    /// partners; everything else vanishes identically.
    #[test]
    fn oscillator_coupling_obeys_the_selection_table(
        g in log_uniform(1.0e-3, 0.5),
        omega_c in log_uniform(0.1, 10.0),
        mass in log_uniform(0.3, 3.0),
        omega in log_uniform(0.3, 3.0),
        chi in chirality(),
        n_right in 0u32..4,
        n_left in 0u32..4,
    ) {
        let params = CavityParams::new(g, omega_c, chi, mass, -1.0).unwrap();
        let ground = (n_right, n_left);
        for c in 0..=n_right + 2 {
            for d in 0..=n_left + 2 {
                let gamma = gamma12_am_oscillator((c, d), ground, &params, mass, omega);
                let allowed = match chi {
                    Chirality::Plus => {
                        (c, d) == (n_right + 1, n_left)
                            || (n_left > 0 && (c, d) == (n_right, n_left - 1))
                    }
                    Chirality::Minus => {
                        (c, d) == (n_right, n_left + 1)
                            || (n_right > 0 && (c, d) == (n_right - 1, n_left))
                    }
                };
                if allowed {
                    prop_assert!(gamma.norm_sqr() > 0.0);
                } else {
                    prop_assert_eq!(gamma, Complex::new(0.0, 0.0));
                }
            }
        }
    }

    /// Energy unit conversions invert each other at machine precision.
    #[test]
    fn energy_units_round_trip(
        value in log_uniform(1.0e-8, 1.0e8),
        negate in any::<bool>(),
    ) {
        let v = if negate { -value } else { value };
        for unit in [
            EnergyUnit::Hartree,
            EnergyUnit::MilliElectronVolt,
            EnergyUnit::Gigahertz,
            EnergyUnit::InverseCentimeter,
        ] {
            let back: f64 = energy_to_hartree(energy_from_hartree(v, unit), unit);
            prop_assert!((back - v).abs() <= 1.0e-12 * v.abs());
        }
        for system in [UnitSystem::Atomic, UnitSystem::Si] {
            let e: f64 = system.energy_to_hartree(system.energy_from_hartree(v));
            prop_assert!((e - v).abs() <= 1.0e-12 * v.abs());
            let r: f64 = system.length_to_bohr(system.length_from_bohr(v));
            prop_assert!((r - v).abs() <= 1.0e-12 * v.abs());
            let w: f64 = system.angular_frequency_from_atomic(system.angular_frequency_to_atomic(v));
            prop_assert!((w - v).abs() <= 1.0e-12 * v.abs());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Assembly is exactly Hermitian and exactly block diagonal in the
    /// conserved angular momentum for any admissible parameters.
    #[test]
    fn assembled_hamiltonian_is_exactly_hermitian_and_block_pure(
        g in log_uniform(1.0e-3, 0.5),
        omega_c in log_uniform(0.2, 10.0),
        mass in log_uniform(0.5, 3.0),
        omega in log_uniform(0.3, 3.0),
        chi in chirality(),
    ) {
        let params = CavityParams::new(g, omega_c, chi, mass, -1.0).unwrap();
        let h = build_hamiltonian(&params, mass, omega, 4, 3).unwrap();
        prop_assert_eq!(h.hermiticity_defect(), 0.0);
        prop_assert_eq!(h.max_off_block(), 0.0);
    }

    /// Both closed-form kernels are non-negative and the integrated
    /// probability stays inside [0, 1].
    #[test]
    fn probabilities_stay_physical(
        gamma_mag in log_uniform(1.0e-4, 0.5),
        phase in 0.0..std::f64::consts::TAU,
        omega_tilde in -5.0..5.0f64,
        diag in -0.2..0.2f64,
        t in 0.0..20.0f64,
    ) {
        let gamma12 = Complex::from_polar(gamma_mag, phase);
        prop_assert!(rabi_probability_full_angle(gamma12, omega_tilde, t) >= 0.0);
        prop_assert!(rabi_probability_first_order(gamma12, omega_tilde, t) >= 0.0);
        let config = TwoLevelConfig::from_elements(
            StateLabel::Oscillator2d { n_right: 1, n_left: 0 },
            StateLabel::Oscillator2d { n_right: 0, n_left: 0 },
            omega_tilde,
            diag,
            gamma12,
            -diag,
        );
        let p = rabi_probability_direct(&config, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    /// Below the resolution of the detuning phase every description of the
    /// transfer collapses onto |gamma|^2 t^2.
    #[test]
    fn kernels_are_universal_at_small_phase(
        omega_tilde in log_uniform(0.1, 10.0),
        phase in 0.0..std::f64::consts::TAU,
        fraction in 0.1..0.9f64,
    ) {
        let t = 0.009 * fraction / omega_tilde;
        let gamma12 = Complex::from_polar(0.3 * omega_tilde, phase);
        let config = TwoLevelConfig::from_elements(
            StateLabel::Oscillator2d { n_right: 1, n_left: 0 },
            StateLabel::Oscillator2d { n_right: 0, n_left: 0 },
            omega_tilde,
            0.0,
            gamma12,
            0.0,
        );
        let p_full = rabi_probability_full_angle(gamma12, omega_tilde, t);
        let p_first = rabi_probability_first_order(gamma12, omega_tilde, t);
        let p_direct = rabi_probability_direct(&config, t).unwrap();
        let scale = p_full.max(p_first).max(p_direct);
        prop_assert!(scale > 0.0);
        prop_assert!((p_full - p_first).abs() <= 1.0e-4 * scale);
        prop_assert!((p_full - p_direct).abs() <= 1.0e-4 * scale);
    }
}

//! Radial solver checks against hydrogen and 2D-oscillator closed forms:
//! energies, node counts, normalization, orthogonality, virial balance,
//! expectation values, and grid-refinement convergence.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use chiral_cavity::model::{coulomb_potential, harmonic2d_potential};
use chiral_cavity::radial::{
    coulomb_default_grid, expectation_inv_r_dv, expectation_laplacian,
    expectation_laplacian_transverse, expectation_value, harmonic2d_default_grid, overlap,
    solve_bound_state, RadialGrid, RadialState,
};

fn hydrogen(n: u32, l: u32) -> RadialState<f64> {
    let potential = coulomb_potential(1.0).unwrap();
    let grid = coulomb_default_grid(1.0, 1.0, n).unwrap();
    solve_bound_state(&potential, 1.0, n, l, &grid).unwrap()
}

fn count_nodes(state: &RadialState<f64>) -> usize {
    let u = state.u_samples();
    let peak = u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let band = 1e-9 * peak;
    let mut nodes = 0;
    let mut last = 0.0f64;
    for &x in u {
        if x.abs() <= band {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            nodes += 1;
        }
        last = x;
    }
    nodes
}

#[test]
fn hydrogen_energies_nodes_and_norms() {
    for n in 1..=4u32 {
        for l in 0..n {
            let state = hydrogen(n, l);
            let expected = -0.5 / f64::from(n * n);
            assert!(state.energy() < 0.0);
            assert_relative_eq!(state.energy(), expected, max_relative = 1e-10);
            assert_eq!(count_nodes(&state), (n - l - 1) as usize);
            assert_relative_eq!(overlap(&state, &state).unwrap(), 1.0, max_relative = 1e-8);
        }
    }
}

#[test]
fn energy_scales_linearly_with_mass() {
    let potential = coulomb_potential(1.0).unwrap();
    let grid = coulomb_default_grid(2.0, 1.0, 1).unwrap();
    let state = solve_bound_state(&potential, 2.0, 1, 0, &grid).unwrap();
    assert_relative_eq!(state.energy(), -1.0, max_relative = 1e-10);
}

#[test]
fn virial_balance_on_coulomb_states() {
    let potential = coulomb_potential(1.0).unwrap();
    for (n, l) in [(1u32, 0u32), (2, 0), (2, 1), (3, 1), (3, 2)] {
        let state = hydrogen(n, l);
        let v_mean = expectation_value(&state, |r| potential.v(r));
        // 2<T> = -<V> for the Coulomb potential, so <V> = 2 E.
        assert_relative_eq!(v_mean, 2.0 * state.energy(), max_relative = 1e-6);
    }
}

#[test]
fn states_with_equal_l_are_orthogonal() {
    let potential = coulomb_potential(1.0).unwrap();
    let grid = coulomb_default_grid(1.0, 1.0, 3).unwrap();
    for (na, nb, l) in [(1u32, 2u32, 0u32), (2, 3, 0), (2, 3, 1)] {
        let a = solve_bound_state(&potential, 1.0, na, l, &grid).unwrap();
        let b = solve_bound_state(&potential, 1.0, nb, l, &grid).unwrap();
        let cross: f64 = overlap(&a, &b).unwrap();
        assert!(cross.abs() < 1e-8);
    }
}

#[test]
fn halving_the_spacing_leaves_energies_fixed() {
    let potential = coulomb_potential(1.0).unwrap();
    for n in 1..=3u32 {
        let coarse = coulomb_default_grid(1.0, 1.0, n).unwrap();
        let fine = RadialGrid::logarithmic(
            coarse.r()[0],
            *coarse.r().last().unwrap(),
            2 * (coarse.len() - 1) + 1,
        )
        .unwrap();
        for l in 0..n {
            let e_coarse: f64 = solve_bound_state(&potential, 1.0, n, l, &coarse).unwrap().energy();
            let e_fine: f64 = solve_bound_state(&potential, 1.0, n, l, &fine).unwrap().energy();
            assert!((e_coarse - e_fine).abs() < 1e-8, "n={n} l={l}: {e_coarse} vs {e_fine}");
        }
    }
}

#[test]
fn inv_r_dv_matches_hydrogen_closed_forms() {
    let potential = coulomb_potential(1.0).unwrap();
    // <(1/r) dV/dr> = k <1/r^3> = k / (n^3 l (l + 1/2) (l + 1)) in units of a.
    for n in 2..=4u32 {
        for l in 1..n {
            let state = hydrogen(n, l);
            let got = expectation_inv_r_dv(&state, &potential).unwrap();
            let nf = f64::from(n);
            let lf = f64::from(l);
            let expected = 1.0 / (nf.powi(3) * lf * (lf + 0.5) * (lf + 1.0));
            assert_relative_eq!(got, expected, max_relative = 1e-6);
        }
    }
}

#[test]
fn oscillator_inv_r_dv_is_the_spring_constant() {
    let (mass, omega) = (1.3, 0.7);
    let potential = harmonic2d_potential(mass, omega).unwrap();
    let grid = harmonic2d_default_grid(mass, omega, 1, 2).unwrap();
    let state = solve_bound_state(&potential, mass, 1, 2, &grid).unwrap();
    let got = expectation_inv_r_dv(&state, &potential).unwrap();
    assert_relative_eq!(got, mass * omega * omega, max_relative = 1e-10);
}

#[test]
fn laplacian_expectation_handles_the_origin_delta() {
    let potential = coulomb_potential(1.0).unwrap();
    // 4 pi k |psi(0)|^2 = 4 k / n^3 for s states (a = 1 here); zero for l > 0.
    for n in 1..=3u32 {
        let state = hydrogen(n, 0);
        let got = expectation_laplacian(&state, &potential).unwrap();
        assert_relative_eq!(got, 4.0 / f64::from(n).powi(3), max_relative = 1e-6);
    }
    let p_state = hydrogen(2, 1);
    assert_abs_diff_eq!(expectation_laplacian(&p_state, &potential).unwrap(), 0.0, epsilon = 1e-12);
}

#[test]
fn oscillator_laplacian_is_twice_the_spring_constant() {
    let (mass, omega) = (1.0, 1.0);
    let potential = harmonic2d_potential(mass, omega).unwrap();
    let grid = harmonic2d_default_grid(mass, omega, 0, 0).unwrap();
    let state = solve_bound_state(&potential, mass, 0, 0, &grid).unwrap();
    let got = expectation_laplacian(&state, &potential).unwrap();
    assert_relative_eq!(got, 2.0 * mass * omega * omega, max_relative = 1e-8);
    // In 2D the in-plane Laplacian is the full one.
    let transverse = expectation_laplacian_transverse(&state, &potential).unwrap();
    assert_relative_eq!(transverse, got, max_relative = 1e-12);
}

#[test]
fn transverse_laplacian_weights_in_three_dimensions() {
    let potential = coulomb_potential(1.0).unwrap();
    // s states keep 2/3 of the origin delta and no smooth part.
    let ground = hydrogen(1, 0);
    let got = expectation_laplacian_transverse(&ground, &potential).unwrap();
    assert_relative_eq!(got, 2.0 / 3.0 * 4.0, max_relative = 1e-6);
    // For 2p the full Laplacian vanishes but the in-plane part does not; its
    // trace over l_z still cancels.
    let p = hydrogen(2, 1);
    let mut trace = 0.0;
    for lz in [-1i64, 0, 1] {
        let s = p.clone().with_l_z(lz).unwrap();
        let val = expectation_laplacian_transverse(&s, &potential).unwrap();
        let expected = match lz {
            0 => 1.0 / 30.0,
            _ => -1.0 / 60.0,
        };
        assert_relative_eq!(val, expected, max_relative = 1e-6);
        trace += val;
    }
    assert_abs_diff_eq!(trace, 0.0, epsilon = 1e-12);
}

//! Numerov bound states of central potentials and the radial quadratures
//! built on them.
//!
//! Everything works on the reduced radial function, u(r) = r R(r) in three
//! dimensions and u(r) = sqrt(r) R(r) in two, normalized as integral u^2 dr = 1.
//! On logarithmic grids the solver substitutes w = u / sqrt(r), turning the
//! radial equation into w'' = F w with a uniform step in x = ln r.

use thiserror::Error;

use crate::model::{CentralPotential, Dimensionality};
use crate::real::Real;

/// Grid spacing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Uniform,
    Logarithmic,
}

/// Strictly increasing radial grid with a uniform step in r or in ln r.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid<R: Real> {
    r: Vec<R>,
    spacing: Spacing,
    step: R,
}

/// Errors from the radial solver and quadratures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("invalid grid: {message}")]
    InvalidGrid { message: String },
    #[error("invalid quantum numbers: {message}")]
    InvalidQuantumNumbers { message: String },
    #[error("eigenvalue search failed: {message}")]
    NoConvergence { message: String },
    #[error("grid cannot hold the requested state: {message}")]
    GridTooSmall { message: String },
    #[error("integrand not integrable at the origin: {message}")]
    SingularIntegrand { message: String },
    #[error("origin-density extrapolation unreliable: {message}")]
    ExtrapolationUnstable { message: String },
    #[error("states live on different grids")]
    GridMismatch,
}

impl<R: Real> RadialGrid<R> {
    /// Grid with uniform step in ln r.
    pub fn logarithmic(r_min: R, r_max: R, n_points: usize) -> Result<Self, RadialError> {
        Self::validate(r_min, r_max, n_points)?;
        let step = (r_max / r_min).ln() / R::of_int(n_points as i64 - 1);
        let r = (0..n_points).map(|i| r_min * (step * R::of_int(i as i64)).exp()).collect();
        Ok(RadialGrid { r, spacing: Spacing::Logarithmic, step })
    }

    /// Grid with uniform step in r. The first point stays strictly positive so
    /// centrifugal terms remain finite.
    pub fn uniform(r_min: R, r_max: R, n_points: usize) -> Result<Self, RadialError> {
        Self::validate(r_min, r_max, n_points)?;
        let step = (r_max - r_min) / R::of_int(n_points as i64 - 1);
        let r = (0..n_points).map(|i| r_min + step * R::of_int(i as i64)).collect();
        Ok(RadialGrid { r, spacing: Spacing::Uniform, step })
    }

    fn validate(r_min: R, r_max: R, n_points: usize) -> Result<(), RadialError> {
        if !(r_min > R::zero()) || !r_min.is_finite() {
            return Err(RadialError::InvalidGrid {
                message: "r_min must be finite and > 0".into(),
            });
        }
        if !(r_max > r_min) || !r_max.is_finite() {
            return Err(RadialError::InvalidGrid {
                message: "r_max must be finite and > r_min".into(),
            });
        }
        if n_points < 16 {
            return Err(RadialError::InvalidGrid {
                message: format!("need at least 16 points, got {n_points}"),
            });
        }
        Ok(())
    }

    pub fn r(&self) -> &[R] {
        &self.r
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn step(&self) -> R {
        self.step
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// True when two grids are interchangeable for joint quadrature.
    pub fn compatible(&self, other: &Self) -> bool {
        self.spacing == other.spacing
            && self.r.len() == other.r.len()
            && self.r[0] == other.r[0]
            && self.r[self.r.len() - 1] == other.r[other.r.len() - 1]
    }

    /// Integral over r of a sampled integrand, composite Simpson with a
    /// trapezoid patch on the last interval when the point count is even.
    /// Handles the ln r measure internally.
    pub fn integrate_samples(&self, vals: &[R]) -> R {
        assert_eq!(vals.len(), self.r.len(), "sample count must match the grid");
        match self.spacing {
            Spacing::Logarithmic => simpson_indexed(vals.len(), self.step, |i| vals[i] * self.r[i]),
            Spacing::Uniform => simpson_indexed(vals.len(), self.step, |i| vals[i]),
        }
    }
}

fn simpson_indexed<R: Real>(n: usize, h: R, at: impl Fn(usize) -> R) -> R {
    assert!(n >= 2);
    let half = R::of(0.5);
    if n == 2 {
        return (at(0) + at(1)) * h * half;
    }
    // Simpson needs an odd point count; an even count gets a trapezoid tail.
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut acc = at(0) + at(m - 1);
    for i in 1..m - 1 {
        let c = if i % 2 == 1 { R::of(4.0) } else { R::of(2.0) };
        acc += c * at(i);
    }
    let mut total = acc * h / R::of(3.0);
    if n.is_multiple_of(2) {
        total += (at(n - 2) + at(n - 1)) * h * half;
    }
    total
}

/// Default hydrogenic grid: logarithmic, spanning deep below the effective
/// Bohr radius out past the n-th shell's exponential tail.
pub fn coulomb_default_grid<R: Real>(mass: R, k: R, n: u32) -> Result<RadialGrid<R>, RadialError> {
    if !(mass > R::zero()) || !(k > R::zero()) {
        return Err(RadialError::InvalidGrid { message: "mass and k must be > 0".into() });
    }
    if n < 1 {
        return Err(RadialError::InvalidQuantumNumbers { message: "n must be >= 1".into() });
    }
    let a = R::one() / (mass * k);
    RadialGrid::logarithmic(
        a * R::of(1.0e-7),
        a * R::of(50.0) * R::of_int((n as i64) * (n as i64)),
        20001,
    )
}

/// Default 2D oscillator grid: logarithmic, out to ten classical turning radii
/// of the requested level.
pub fn harmonic2d_default_grid<R: Real>(
    mass: R,
    omega: R,
    n_radial: u32,
    l_z: i64,
) -> Result<RadialGrid<R>, RadialError> {
    if !(mass > R::zero()) || !(omega > R::zero()) {
        return Err(RadialError::InvalidGrid { message: "mass and omega must be > 0".into() });
    }
    let e_est = omega * R::of_int(2 * n_radial as i64 + l_z.abs() + 1);
    let spring = mass * omega * omega;
    let r_turn = (R::of(2.0) * e_est / spring).sqrt();
    let len_scale = (R::one() / (mass * omega)).sqrt();
    RadialGrid::logarithmic(len_scale * R::of(1.0e-6), r_turn * R::of(10.0), 20001)
}

/// Normalized bound state on a radial grid.
///
/// In three dimensions (n, l) are the usual principal and azimuthal numbers
/// and l_z defaults to 0; in two dimensions n is the radial node count, l is
/// |l_z|, and l_z defaults to +l. Use [`RadialState::with_l_z`] to select a
/// magnetic substate.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState<R: Real> {
    n: u32,
    l: u32,
    l_z: i64,
    energy: R,
    grid: RadialGrid<R>,
    u: Vec<R>,
    mass: R,
    dimensionality: Dimensionality,
}

impl<R: Real> RadialState<R> {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn l_z(&self) -> i64 {
        self.l_z
    }

    pub fn energy(&self) -> R {
        self.energy
    }

    pub fn grid(&self) -> &RadialGrid<R> {
        &self.grid
    }

    pub fn u_samples(&self) -> &[R] {
        &self.u
    }

    pub fn mass(&self) -> R {
        self.mass
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.dimensionality
    }

    /// Sets the magnetic quantum number: |l_z| <= l in 3D, |l_z| = l in 2D
    /// (the 2D centrifugal term already fixed |l_z|).
    pub fn with_l_z(mut self, l_z: i64) -> Result<Self, RadialError> {
        let ok = match self.dimensionality {
            Dimensionality::Three => l_z.unsigned_abs() <= u64::from(self.l),
            Dimensionality::Two => l_z.unsigned_abs() == u64::from(self.l),
        };
        if !ok {
            return Err(RadialError::InvalidQuantumNumbers {
                message: format!("l_z = {} incompatible with l = {}", l_z, self.l),
            });
        }
        self.l_z = l_z;
        Ok(self)
    }

    /// (r, u(r)) pairs, for dumping or plotting.
    pub fn samples(&self) -> impl Iterator<Item = (R, R)> + '_ {
        self.grid.r().iter().copied().zip(self.u.iter().copied())
    }
}

/// F(E) = a - E b per grid point, so the bisection re-evaluates no potentials.
struct FCoeffs<R> {
    a: Vec<R>,
    b: Vec<R>,
}

fn f_coefficients<R: Real>(
    potential: &CentralPotential<R>,
    mass: R,
    l_abs: u32,
    grid: &RadialGrid<R>,
) -> FCoeffs<R> {
    let two_m = R::of(2.0) * mass;
    let l = R::of_int(l_abs as i64);
    let n = grid.len();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    match grid.spacing() {
        Spacing::Logarithmic => {
            // w'' = [c + 2m (V - E) r^2] w with c = (l + 1/2)^2 in 3D, l_z^2 in 2D.
            let cent = match potential.dimensionality() {
                Dimensionality::Three => (l + R::of(0.5)) * (l + R::of(0.5)),
                Dimensionality::Two => l * l,
            };
            for &r in grid.r() {
                let r2 = r * r;
                a.push(cent + two_m * potential.v(r) * r2);
                b.push(two_m * r2);
            }
        }
        Spacing::Uniform => {
            // u'' = [2m (V - E) + c / r^2] u with c = l(l+1) in 3D, l_z^2 - 1/4 in 2D.
            let cent = match potential.dimensionality() {
                Dimensionality::Three => l * (l + R::one()),
                Dimensionality::Two => l * l - R::of(0.25),
            };
            for &r in grid.r() {
                a.push(two_m * potential.v(r) + cent / (r * r));
                b.push(two_m);
            }
        }
    }
    FCoeffs { a, b }
}

fn outward_seeds<R: Real>(
    grid: &RadialGrid<R>,
    dimensionality: Dimensionality,
    l_abs: u32,
) -> (R, R) {
    let l = R::of_int(l_abs as i64);
    match grid.spacing() {
        Spacing::Logarithmic => {
            // w ~ r^(l + 1/2) in 3D, r^|l_z| in 2D near the origin.
            let pow = match dimensionality {
                Dimensionality::Three => l + R::of(0.5),
                Dimensionality::Two => l,
            };
            (R::one(), (pow * grid.step()).exp())
        }
        Spacing::Uniform => {
            // u ~ r^(l+1) in 3D, r^(|l_z| + 1/2) in 2D.
            let pow = match dimensionality {
                Dimensionality::Three => l + R::one(),
                Dimensionality::Two => l + R::of(0.5),
            };
            ((grid.r()[0] / grid.r()[1]).powf(pow), R::one())
        }
    }
}

/// Numerov sweep counting sign changes of the outward solution. Sturm theory
/// makes this count monotone in E, which drives the bisection.
fn count_nodes_outward<R: Real>(coeffs: &FCoeffs<R>, h: R, energy: R, seeds: (R, R)) -> usize {
    let n = coeffs.a.len();
    let twelfth = h * h / R::of(12.0);
    let q = |i: usize| (coeffs.a[i] - energy * coeffs.b[i]) * twelfth;
    let renorm = R::max_value().powf(R::of(0.8));
    let two = R::of(2.0);
    let ten = R::of(10.0);
    let one = R::one();
    let zero = R::zero();
    let (mut wm, mut wc) = seeds;
    let mut qm = q(0);
    let mut qc = q(1);
    let mut count = 0;
    for i in 1..n - 1 {
        let qn = q(i + 1);
        let wn = ((two + ten * qc) * wc - (one - qm) * wm) / (one - qn);
        if (wn > zero) != (wc > zero) {
            count += 1;
        }
        if wn.abs() > renorm {
            let s = wn.abs();
            wm = wc / s;
            wc = wn / s;
        } else {
            wm = wc;
            wc = wn;
        }
        qm = qc;
        qc = qn;
    }
    count
}

enum Growth<R> {
    Fixed,
    Geometric,
    Additive { step: R },
}

fn initial_bracket<R: Real>(
    potential: &CentralPotential<R>,
    mass: R,
    n: u32,
    l_abs: u32,
    grid: &RadialGrid<R>,
) -> (R, R, Growth<R>) {
    let r_max = grid.r()[grid.len() - 1];
    match potential {
        CentralPotential::Coulomb { k } => {
            // Four times the target level; deeper lows make h^2 F / 12 large
            // at the far edge and destabilize the recurrence.
            let nn = R::of_int(n as i64);
            let lo = -(R::of(2.0) * mass * *k * *k) / (nn * nn);
            (lo, potential.v(r_max), Growth::Fixed)
        }
        CentralPotential::Harmonic2d { spring } => {
            let omega = (*spring / mass).sqrt();
            let hi = omega * R::of_int(2 * n as i64 + l_abs as i64 + 2);
            (R::zero(), hi, Growth::Geometric)
        }
        CentralPotential::PowerLaw { .. } => {
            let lo = grid.r().iter().map(|&r| potential.v(r)).fold(R::max_value(), |m, v| {
                if v < m {
                    v
                } else {
                    m
                }
            });
            let hi = potential.v(r_max);
            if potential.dv_dr(r_max) > R::zero() {
                let step = hi.abs() + lo.abs() + R::one();
                (lo, hi, Growth::Additive { step })
            } else {
                (lo, hi, Growth::Fixed)
            }
        }
    }
}

/// Solves for the bound state of the given potential and mass.
///
/// In 3D, n >= 1 is the principal quantum number and l < n the azimuthal one;
/// the state carries n - l - 1 radial nodes. In 2D, n >= 0 is the radial node
/// count and l = |l_z|. The eigenvalue comes from node-count bisection pushed
/// to the floating-point limit, the eigenfunction from matched outward and
/// inward Numerov sweeps glued at the outer turning point.
pub fn solve_bound_state<R: Real>(
    potential: &CentralPotential<R>,
    mass: R,
    n: u32,
    l: u32,
    grid: &RadialGrid<R>,
) -> Result<RadialState<R>, RadialError> {
    if !(mass > R::zero()) || !mass.is_finite() {
        return Err(RadialError::InvalidQuantumNumbers {
            message: "mass must be finite and > 0".into(),
        });
    }
    let dimensionality = potential.dimensionality();
    let target: usize = match dimensionality {
        Dimensionality::Three => {
            if n < 1 || l >= n {
                return Err(RadialError::InvalidQuantumNumbers {
                    message: format!("3D states need n >= 1 and l < n, got n = {n}, l = {l}"),
                });
            }
            (n - 1 - l) as usize
        }
        Dimensionality::Two => n as usize,
    };

    let coeffs = f_coefficients(potential, mass, l, grid);
    let h = grid.step();
    let seeds = outward_seeds(grid, dimensionality, l);
    let count = |e: R| count_nodes_outward(&coeffs, h, e, seeds);

    let (lo0, hi0, growth) = initial_bracket(potential, mass, n, l, grid);
    if count(lo0) > target {
        return Err(RadialError::GridTooSmall {
            message: "spurious nodes at the lower bracket; refine the grid".into(),
        });
    }
    let mut hi = hi0;
    let mut tries = 0;
    while count(hi) <= target {
        match growth {
            Growth::Fixed => {
                return Err(RadialError::GridTooSmall {
                    message: format!("state (n = {n}, l = {l}) not contained below the grid edge"),
                });
            }
            Growth::Geometric => hi *= R::of(2.0),
            Growth::Additive { step } => hi = hi0 + step * R::of(2.0).powi(tries),
        }
        tries += 1;
        if tries > 64 {
            return Err(RadialError::NoConvergence {
                message: "upper bracket expansion exhausted".into(),
            });
        }
    }

    let mut lo = lo0;
    for _ in 0..200 {
        let mid = (lo + hi) * R::of(0.5);
        if mid == lo || mid == hi {
            break;
        }
        if count(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let energy = hi;

    let u = build_eigenfunction(&coeffs, grid, dimensionality, energy, seeds, target)?;
    let l_z_default = match dimensionality {
        Dimensionality::Three => 0,
        Dimensionality::Two => l as i64,
    };
    Ok(RadialState { n, l, l_z: l_z_default, energy, grid: grid.clone(), u, mass, dimensionality })
}

fn build_eigenfunction<R: Real>(
    coeffs: &FCoeffs<R>,
    grid: &RadialGrid<R>,
    dimensionality: Dimensionality,
    energy: R,
    seeds: (R, R),
    target: usize,
) -> Result<Vec<R>, RadialError> {
    let n = grid.len();
    let h = grid.step();
    let twelfth = h * h / R::of(12.0);
    let f = |i: usize| coeffs.a[i] - energy * coeffs.b[i];
    let q: Vec<R> = (0..n).map(|i| f(i) * twelfth).collect();
    let renorm = R::max_value().powf(R::of(0.8));
    let two = R::of(2.0);
    let ten = R::of(10.0);
    let one = R::one();
    let zero = R::zero();

    let im = match (0..n).rev().find(|&i| f(i) < zero) {
        Some(i) => i,
        None => {
            return Err(RadialError::GridTooSmall {
                message: "no classically allowed region on the grid".into(),
            })
        }
    };
    if im < 3 || im > n - 3 {
        return Err(RadialError::GridTooSmall {
            message: "outer turning point sits at the grid edge".into(),
        });
    }

    let mut wo = vec![zero; im + 1];
    wo[0] = seeds.0;
    wo[1] = seeds.1;
    for i in 1..im {
        let wn = ((two + ten * q[i]) * wo[i] - (one - q[i - 1]) * wo[i - 1]) / (one - q[i + 1]);
        wo[i + 1] = wn;
        if wn.abs() > renorm {
            let s = wn.abs();
            for v in wo[..=i + 1].iter_mut() {
                *v /= s;
            }
        }
    }

    // Tiny seed at the far edge; its scale cancels once the branches are glued.
    let mut wi = vec![zero; n - im];
    let seed_tail = R::min_positive_value().powf(R::of(0.9));
    let cap = renorm.ln() * R::of(0.5);
    let kappa = f(n - 2).max(zero).sqrt();
    wi[n - im - 1] = seed_tail;
    wi[n - im - 2] = seed_tail * (kappa * h).min(cap).exp();
    for i in (im..=n - 3).rev() {
        let j = i - im;
        let wn = ((two + ten * q[i + 1]) * wi[j + 1] - (one - q[i + 2]) * wi[j + 2]) / (one - q[i]);
        wi[j] = wn;
        if wn.abs() > renorm {
            let s = wn.abs();
            for v in wi[j..].iter_mut() {
                *v /= s;
            }
        }
    }

    if wi[0] == zero || !wi[0].is_finite() {
        return Err(RadialError::NoConvergence {
            message: "inward sweep degenerate at the glue point".into(),
        });
    }
    let scale = wo[im] / wi[0];
    if !scale.is_finite() {
        return Err(RadialError::NoConvergence { message: "branch matching overflowed".into() });
    }

    let mut u: Vec<R> = Vec::with_capacity(n);
    for i in 0..n {
        let w = if i < im { wo[i] } else { wi[i - im] * scale };
        let val = match grid.spacing() {
            Spacing::Logarithmic => w * grid.r()[i].sqrt(),
            Spacing::Uniform => w,
        };
        u.push(val);
    }
    let _ = dimensionality;

    let max_u = u.iter().fold(zero, |m, &v| if v.abs() > m { v.abs() } else { m });
    if !(max_u > zero) || !max_u.is_finite() {
        return Err(RadialError::NoConvergence { message: "degenerate eigenfunction".into() });
    }

    // Node check on the glued function, with a deadband so tail noise is inert.
    let dead = max_u * R::of(1.0e-12);
    let mut nodes = 0usize;
    let mut last_sign = 0i8;
    for &v in &u {
        let s = if v > dead {
            1i8
        } else if v < -dead {
            -1i8
        } else {
            0i8
        };
        if s != 0 {
            if last_sign != 0 && s != last_sign {
                nodes += 1;
            }
            last_sign = s;
        }
    }
    if nodes != target {
        return Err(RadialError::NoConvergence {
            message: format!("converged state has {nodes} nodes, wanted {target}"),
        });
    }

    if u[n - 1].abs() > max_u * R::of(1.0e-6) {
        return Err(RadialError::GridTooSmall {
            message: "wavefunction amplitude at r_max above the tail threshold".into(),
        });
    }

    // Sign convention: u > 0 near the origin.
    let lead = u.iter().find(|v| v.abs() > max_u * R::of(1.0e-8));
    if let Some(&v) = lead {
        if v < zero {
            for x in u.iter_mut() {
                *x = -*x;
            }
        }
    }

    let sq: Vec<R> = u.iter().map(|&v| v * v).collect();
    let norm = grid.integrate_samples(&sq).sqrt();
    if !(norm > zero) || !norm.is_finite() {
        return Err(RadialError::NoConvergence {
            message: "normalization integral degenerate".into(),
        });
    }
    for x in u.iter_mut() {
        *x /= norm;
    }
    Ok(u)
}

/// Expectation value of a radial function: integral of u^2 f(r) dr.
pub fn expectation_value<R: Real>(state: &RadialState<R>, f: impl Fn(R) -> R) -> R {
    let vals: Vec<R> = state.grid.r().iter().zip(&state.u).map(|(&r, &u)| u * u * f(r)).collect();
    state.grid.integrate_samples(&vals)
}

/// Overlap integral of two states on the same grid.
pub fn overlap<R: Real>(a: &RadialState<R>, b: &RadialState<R>) -> Result<R, RadialError> {
    if !a.grid.compatible(&b.grid) {
        return Err(RadialError::GridMismatch);
    }
    let vals: Vec<R> = a.u.iter().zip(&b.u).map(|(&x, &y)| x * y).collect();
    Ok(a.grid.integrate_samples(&vals))
}

/// Matrix element integral of u_a f(r) u_b dr, guarded against origin
/// divergence.
pub fn matrix_element<R: Real>(
    a: &RadialState<R>,
    b: &RadialState<R>,
    f: impl Fn(R) -> R,
) -> Result<R, RadialError> {
    if !a.grid.compatible(&b.grid) {
        return Err(RadialError::GridMismatch);
    }
    let vals: Vec<R> =
        a.grid.r().iter().zip(a.u.iter().zip(&b.u)).map(|(&r, (&x, &y))| x * y * f(r)).collect();
    guard_integrand(&a.grid, &vals, "matrix element")?;
    Ok(a.grid.integrate_samples(&vals))
}

/// Quadrature of (1/r) dV/dr against |u|^2. The caller multiplies by the L_z
/// eigenvalue; states with l_z = 0 never need this integral.
pub fn expectation_inv_r_dv<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
) -> Result<R, RadialError> {
    check_dimension(state, potential)?;
    let vals: Vec<R> = state
        .grid
        .r()
        .iter()
        .zip(&state.u)
        .map(|(&r, &u)| u * u * potential.dv_dr(r) / r)
        .collect();
    guard_integrand(&state.grid, &vals, "(1/r) dV/dr")?;
    Ok(state.grid.integrate_samples(&vals))
}

/// Quadrature of the full Laplacian of V against |psi|^2, including the
/// symbolic origin delta picked up through the extrapolated origin density.
pub fn expectation_laplacian<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
) -> Result<R, RadialError> {
    check_dimension(state, potential)?;
    let vals: Vec<R> = state
        .grid
        .r()
        .iter()
        .zip(&state.u)
        .map(|(&r, &u)| u * u * potential.laplacian(r))
        .collect();
    guard_integrand(&state.grid, &vals, "laplacian of V")?;
    let mut total = state.grid.integrate_samples(&vals);
    let delta = potential.origin_delta_strength();
    if delta != R::zero() && state.l == 0 {
        total += delta * origin_density_3d(state)?;
    }
    Ok(total)
}

/// Diagnostic variant of [`expectation_laplacian`] keeping only the in-plane
/// (x, y) second derivatives. Identical to the full Laplacian in 2D; in 3D the
/// angular average over an L_z eigenstate gives
/// sin^2 weight 2(l(l+1) + l_z^2 - 1)/((2l-1)(2l+3)) on V'' and the
/// complementary weight on V'/r, with 2/3 of the origin delta surviving.
pub fn expectation_laplacian_transverse<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
) -> Result<R, RadialError> {
    check_dimension(state, potential)?;
    if state.dimensionality == Dimensionality::Two {
        return expectation_laplacian(state, potential);
    }
    let l = state.l as i64;
    let lz = state.l_z;
    // Integer numerators keep exactly-zero coefficients exactly zero, so no
    // spurious singular piece is ever integrated.
    let den = (2 * l - 1) * (2 * l + 3);
    let num_sin2 = 2 * (l * (l + 1) + lz * lz - 1);
    let num_tangent = 2 * (l * l + l - 3 * lz * lz);
    let mut total = R::zero();
    if num_sin2 != 0 {
        let weight = R::of_int(num_sin2) / R::of_int(den);
        let vals: Vec<R> = state
            .grid
            .r()
            .iter()
            .zip(&state.u)
            .map(|(&r, &u)| u * u * potential.laplacian(r))
            .collect();
        guard_integrand(&state.grid, &vals, "laplacian of V")?;
        total += weight * state.grid.integrate_samples(&vals);
    }
    if num_tangent != 0 {
        let weight = R::of_int(num_tangent) / R::of_int(den);
        let vals: Vec<R> = state
            .grid
            .r()
            .iter()
            .zip(&state.u)
            .map(|(&r, &u)| u * u * potential.dv_dr(r) / r)
            .collect();
        guard_integrand(&state.grid, &vals, "(1/r) dV/dr")?;
        total += weight * state.grid.integrate_samples(&vals);
    }
    let delta = potential.origin_delta_strength();
    if delta != R::zero() && state.l == 0 {
        total += R::of(2.0) / R::of(3.0) * delta * origin_density_3d(state)?;
    }
    Ok(total)
}

/// |psi(0)|^2 of a 3D state, from a linear fit of u/r = c + d r over the first
/// decade of the grid; for l = 0, |psi(0)|^2 = c^2 / (4 pi). Zero for l > 0.
pub fn origin_density_3d<R: Real>(state: &RadialState<R>) -> Result<R, RadialError> {
    if state.dimensionality != Dimensionality::Three {
        return Err(RadialError::InvalidQuantumNumbers {
            message: "origin density is a 3D quantity".into(),
        });
    }
    if state.l > 0 {
        return Ok(R::zero());
    }
    let r = state.grid.r();
    let r_hi = r[0] * R::of(10.0);
    let m = r.iter().take_while(|&&ri| ri <= r_hi).count();
    if m < 4 {
        return Err(RadialError::ExtrapolationUnstable {
            message: "fewer than 4 grid points in the first decade".into(),
        });
    }
    let count = R::of_int(m as i64);
    let mut sx = R::zero();
    let mut sy = R::zero();
    for (&ri, &ui) in r.iter().zip(&state.u).take(m) {
        sx += ri;
        sy += ui / ri;
    }
    let xbar = sx / count;
    let ybar = sy / count;
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for (&ri, &ui) in r.iter().zip(&state.u).take(m) {
        let dx = ri - xbar;
        sxx += dx * dx;
        sxy += dx * (ui / ri - ybar);
    }
    if sxx == R::zero() {
        return Err(RadialError::ExtrapolationUnstable { message: "degenerate abscissas".into() });
    }
    let d = sxy / sxx;
    let c = ybar - d * xbar;
    if c == R::zero() {
        return Err(RadialError::ExtrapolationUnstable {
            message: "vanishing origin amplitude".into(),
        });
    }
    let mut resid = R::zero();
    for (&ri, &ui) in r.iter().zip(&state.u).take(m) {
        let e = ui / ri - (c + d * ri);
        resid += e * e;
    }
    let rms = (resid / count).sqrt();
    if rms > c.abs() * R::of(1.0e-4) {
        return Err(RadialError::ExtrapolationUnstable {
            message: format!("fit residual {:.3} exceeds 1e-4 of the amplitude", rms / c.abs()),
        });
    }
    Ok(c * c / (R::of(4.0) * R::PI()))
}

fn check_dimension<R: Real>(
    state: &RadialState<R>,
    potential: &CentralPotential<R>,
) -> Result<(), RadialError> {
    if state.dimensionality != potential.dimensionality() {
        return Err(RadialError::InvalidQuantumNumbers {
            message: "state and potential dimensionality differ".into(),
        });
    }
    Ok(())
}

/// Rejects integrands whose small-r power law is non-integrable. Fits the
/// log-log slope over the first three decades; slopes at or below -0.9 fail
/// (the integral needs slope > -1, with margin for fit noise).
fn guard_integrand<R: Real>(
    grid: &RadialGrid<R>,
    vals: &[R],
    label: &str,
) -> Result<(), RadialError> {
    let r = grid.r();
    let r_hi = r[0] * R::of(1.0e3);
    let m = r.iter().take_while(|&&ri| ri <= r_hi).count();
    if m < 6 {
        // Too few near-origin samples to assess; coarse grids cannot resolve
        // an origin divergence anyway.
        return Ok(());
    }
    let mut xs: Vec<R> = Vec::new();
    let mut ys: Vec<R> = Vec::new();
    for i in 0..m {
        let v = vals[i].abs();
        if v > R::zero() && v.is_finite() {
            xs.push(r[i].ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < 6 {
        return Ok(());
    }
    let count = R::of_int(xs.len() as i64);
    let xbar = xs.iter().copied().sum::<R>() / count;
    let ybar = ys.iter().copied().sum::<R>() / count;
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for (x, y) in xs.iter().zip(&ys) {
        let dx = *x - xbar;
        sxx += dx * dx;
        sxy += dx * (*y - ybar);
    }
    if sxx == R::zero() {
        return Ok(());
    }
    let slope = sxy / sxx;
    if slope <= R::of(-0.9) {
        return Err(RadialError::SingularIntegrand {
            message: format!("{label}: integrand scales like r^{slope:.2} near the origin"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{coulomb_potential, harmonic2d_potential};
    use approx::assert_relative_eq;

    #[test]
    fn hydrogen_ground_state_energy_and_norm() {
        let v = coulomb_potential(1.0).unwrap();
        let grid = coulomb_default_grid(1.0, 1.0, 1).unwrap();
        let state = solve_bound_state(&v, 1.0, 1, 0, &grid).unwrap();
        assert_relative_eq!(state.energy(), -0.5, max_relative = 1e-11);
        let norm = expectation_value(&state, |_| 1.0);
        assert_relative_eq!(norm, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn hydrogen_2p_energy() {
        let v = coulomb_potential(1.0).unwrap();
        let grid = coulomb_default_grid(1.0, 1.0, 2).unwrap();
        let state = solve_bound_state(&v, 1.0, 2, 1, &grid).unwrap();
        assert_relative_eq!(state.energy(), -0.125, max_relative = 1e-11);
    }

    #[test]
    fn oscillator_2d_spectrum() {
        let v = harmonic2d_potential(1.0, 1.0).unwrap();
        let grid = harmonic2d_default_grid(1.0, 1.0, 0, 0).unwrap();
        // 2D s-states lack a centrifugal barrier, so the inner boundary
        // admits a weak logarithmic admixture; accuracy saturates near 1e-9.
        let ground = solve_bound_state(&v, 1.0, 0, 0, &grid).unwrap();
        assert_relative_eq!(ground.energy(), 1.0, max_relative = 1e-8);
        let grid1 = harmonic2d_default_grid(1.0, 1.0, 0, 1).unwrap();
        let first = solve_bound_state(&v, 1.0, 0, 1, &grid1).unwrap();
        assert_relative_eq!(first.energy(), 2.0, max_relative = 1e-8);
    }

    #[test]
    fn coulomb_inv_r3_rejected_for_s_states() {
        let v = coulomb_potential(1.0).unwrap();
        let grid = coulomb_default_grid(1.0, 1.0, 1).unwrap();
        let state = solve_bound_state(&v, 1.0, 1, 0, &grid).unwrap();
        let err = expectation_inv_r_dv(&state, &v).unwrap_err();
        assert!(matches!(err, RadialError::SingularIntegrand { .. }));
    }

    #[test]
    fn grid_too_small_for_high_state() {
        let v = coulomb_potential(1.0).unwrap();
        let grid = RadialGrid::logarithmic(1.0e-7, 8.0, 4001).unwrap();
        let err = solve_bound_state(&v, 1.0, 3, 0, &grid).unwrap_err();
        assert!(matches!(err, RadialError::GridTooSmall { .. }));
    }
}

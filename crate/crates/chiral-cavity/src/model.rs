//! Cavity parameters, derived transformation quantities, and central potentials.

use thiserror::Error;

use crate::real::Real;

/// Error raised when a physical parameter set fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field}: {message}")]
pub struct ModelError {
    /// Dotted path of the offending field.
    pub field: &'static str,
    /// Constraint that was violated.
    pub message: String,
}

impl ModelError {
    fn new(field: &'static str, message: impl Into<String>) -> Self {
        ModelError { field, message: message.into() }
    }
}

/// Handedness of the circularly polarized cavity mode.
///
/// `Plus` selects the polarization `(e_x + i e_y)/sqrt(2)`, `Minus` its
/// conjugate. Flipping the handedness negates every angular-momentum-dependent
/// shift while leaving the isotropic pieces untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    /// The sign `s` carried into formulas, `+1` or `-1`.
    pub fn sign<R: Real>(self) -> R {
        match self {
            Chirality::Plus => R::one(),
            Chirality::Minus => -R::one(),
        }
    }

    /// Integer sign, convenient for exact index arithmetic.
    pub fn sign_i64(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }

    /// The opposite handedness.
    pub fn flipped(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }

    /// Parses `+1`/`-1`.
    pub fn from_sign(sign: i64) -> Result<Self, ModelError> {
        match sign {
            1 => Ok(Chirality::Plus),
            -1 => Ok(Chirality::Minus),
            other => Err(ModelError::new("chirality", format!("must be +1 or -1, got {other}"))),
        }
    }
}

/// Light-matter coupling parameters of a single chiral cavity mode, together
/// with the particle it couples to. All quantities are in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams<R: Real> {
    g: R,
    omega_c: R,
    chirality: Chirality,
    mass: R,
    charge: R,
}

impl<R: Real> CavityParams<R> {
    /// Validates and stores the parameter set.
    ///
    /// Requires `g >= 0`, `omega_c > 0`, `mass > 0`, and a finite nonzero
    /// charge.
    pub fn new(
        g: R,
        omega_c: R,
        chirality: Chirality,
        mass: R,
        charge: R,
    ) -> Result<Self, ModelError> {
        if !(g >= R::zero()) || !g.is_finite() {
            return Err(ModelError::new("cavity.g", "coupling must be finite and >= 0"));
        }
        if !(omega_c > R::zero()) || !omega_c.is_finite() {
            return Err(ModelError::new("cavity.omega_c", "mode frequency must be finite and > 0"));
        }
        if !(mass > R::zero()) || !mass.is_finite() {
            return Err(ModelError::new("cavity.mass", "particle mass must be finite and > 0"));
        }
        if !charge.is_finite() || charge == R::zero() {
            return Err(ModelError::new(
                "cavity.charge",
                "particle charge must be finite and nonzero",
            ));
        }
        Ok(CavityParams { g, omega_c, chirality, mass, charge })
    }

    pub fn g(&self) -> R {
        self.g
    }

    pub fn omega_c(&self) -> R {
        self.omega_c
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn mass(&self) -> R {
        self.mass
    }

    pub fn charge(&self) -> R {
        self.charge
    }

    /// Same parameters with the mode handedness reversed.
    pub fn with_flipped_chirality(mut self) -> Self {
        self.chirality = self.chirality.flipped();
        self
    }

    /// Same parameters at a different coupling strength.
    pub fn with_g(mut self, g: R) -> Result<Self, ModelError> {
        if !(g >= R::zero()) || !g.is_finite() {
            return Err(ModelError::new("cavity.g", "coupling must be finite and >= 0"));
        }
        self.g = g;
        Ok(self)
    }

    /// Displacement length `xi = g/(1+g^2) * sqrt(hbar/(m omega_c))`.
    ///
    /// Invariant under `g -> 1/g` and maximal at `g = 1`, where it equals
    /// `sqrt(hbar/(m omega_c))/2`.
    pub fn xi(&self) -> R {
        derive_xi(self)
    }

    /// Dressed mass `m (1 + g^2)`.
    pub fn effective_mass(&self) -> R {
        self.mass * (R::one() + self.g * self.g)
    }

    /// Dressed mode frequency `omega_c (1 + g^2)`.
    pub fn effective_frequency(&self) -> R {
        self.omega_c * (R::one() + self.g * self.g)
    }
}

/// Displacement length `xi` of the decoupling transformation, atomic units.
pub fn derive_xi<R: Real>(params: &CavityParams<R>) -> R {
    let g = params.g();
    let ratio = g / (R::one() + g * g);
    ratio * (R::one() / (params.mass() * params.omega_c())).sqrt()
}

/// Dressed `(mass, frequency)` pair `(m (1+g^2), omega_c (1+g^2))`.
pub fn derive_effective<R: Real>(params: &CavityParams<R>) -> (R, R) {
    (params.effective_mass(), params.effective_frequency())
}

/// Spatial dimensionality of a central-potential problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimensionality {
    Two,
    Three,
}

impl Dimensionality {
    /// Number of spatial dimensions as a scalar.
    pub fn count<R: Real>(self) -> R {
        match self {
            Dimensionality::Two => R::of(2.0),
            Dimensionality::Three => R::of(3.0),
        }
    }
}

/// One term `coefficient * r^exponent` of a user-declared potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm<R> {
    pub coefficient: R,
    pub exponent: R,
}

/// A central potential with the derivative data the shift formulas need.
///
/// Beyond `v` and `dv/dr`, each variant supplies the radial-symmetric
/// Laplacian away from the origin and, where one exists, the coefficient of a
/// point contribution `delta^3(r)` at the origin (carried symbolically because
/// no grid resolves it).
#[derive(Debug, Clone, PartialEq)]
pub enum CentralPotential<R: Real> {
    /// Attractive Coulomb potential `-k/r` (three-dimensional).
    Coulomb { k: R },
    /// Isotropic two-dimensional harmonic well `(1/2) K r^2` with stiffness
    /// `K = m omega^2`.
    Harmonic2d { spring: R },
    /// User-declared smooth superposition `sum_i c_i r^{p_i}`. Carries no
    /// point term at the origin by declaration.
    PowerLaw { terms: Vec<PowerTerm<R>>, dimensionality: Dimensionality },
}

/// Builds the Coulomb potential `-k/r`, `k > 0`.
pub fn coulomb_potential<R: Real>(k: R) -> Result<CentralPotential<R>, ModelError> {
    if !(k > R::zero()) || !k.is_finite() {
        return Err(ModelError::new("system.k", "Coulomb strength must be finite and > 0"));
    }
    Ok(CentralPotential::Coulomb { k })
}

/// Builds the two-dimensional harmonic well `(1/2) m omega^2 r^2`.
pub fn harmonic2d_potential<R: Real>(mass: R, omega: R) -> Result<CentralPotential<R>, ModelError> {
    if !(mass > R::zero()) || !mass.is_finite() {
        return Err(ModelError::new("system.mass", "oscillator mass must be finite and > 0"));
    }
    if !(omega > R::zero()) || !omega.is_finite() {
        return Err(ModelError::new("system.omega", "oscillator frequency must be finite and > 0"));
    }
    Ok(CentralPotential::Harmonic2d { spring: mass * omega * omega })
}

/// Builds a power-law potential `sum_i c_i r^{p_i}`.
///
/// Exponents must be `> -2` so the radial problem stays well posed, and the
/// Coulomb-like exponent `-1` in three dimensions is rejected here: that case
/// carries an origin delta in its Laplacian and is served by
/// [`coulomb_potential`].
pub fn power_law_potential<R: Real>(
    terms: Vec<PowerTerm<R>>,
    dimensionality: Dimensionality,
) -> Result<CentralPotential<R>, ModelError> {
    if terms.is_empty() {
        return Err(ModelError::new("system.terms", "potential needs at least one term"));
    }
    for (i, term) in terms.iter().enumerate() {
        if !term.coefficient.is_finite() || !term.exponent.is_finite() {
            return Err(ModelError::new(
                "system.terms",
                format!("term {i}: values must be finite"),
            ));
        }
        if term.exponent <= R::of(-2.0) {
            return Err(ModelError::new(
                "system.terms",
                format!("term {i}: exponent must be > -2 for a well-posed radial problem"),
            ));
        }
        if dimensionality == Dimensionality::Three && term.exponent == R::of(-1.0) {
            return Err(ModelError::new(
                "system.terms",
                format!("term {i}: exponent -1 in 3D has an origin delta; use the Coulomb type"),
            ));
        }
    }
    Ok(CentralPotential::PowerLaw { terms, dimensionality })
}

impl<R: Real> CentralPotential<R> {
    /// Potential value at radius `r`.
    ///
    /// Panics if `r` is outside the variant's domain (`r <= 0` where the
    /// potential is singular at the origin, negative `r` otherwise).
    pub fn v(&self, r: R) -> R {
        match self {
            CentralPotential::Coulomb { k } => {
                assert!(r > R::zero(), "Coulomb potential evaluated at r <= 0");
                -*k / r
            }
            CentralPotential::Harmonic2d { spring } => {
                assert!(r >= R::zero(), "harmonic potential evaluated at r < 0");
                *spring * r * r * R::of(0.5)
            }
            CentralPotential::PowerLaw { terms, .. } => {
                assert!(r > R::zero(), "power-law potential evaluated at r <= 0");
                terms.iter().map(|t| t.coefficient * r.powf(t.exponent)).sum()
            }
        }
    }

    /// Radial derivative `dV/dr` at `r`.
    pub fn dv_dr(&self, r: R) -> R {
        match self {
            CentralPotential::Coulomb { k } => {
                assert!(r > R::zero(), "Coulomb potential evaluated at r <= 0");
                *k / (r * r)
            }
            CentralPotential::Harmonic2d { spring } => {
                assert!(r >= R::zero(), "harmonic potential evaluated at r < 0");
                *spring * r
            }
            CentralPotential::PowerLaw { terms, .. } => {
                assert!(r > R::zero(), "power-law potential evaluated at r <= 0");
                terms
                    .iter()
                    .map(|t| t.coefficient * t.exponent * r.powf(t.exponent - R::one()))
                    .sum()
            }
        }
    }

    /// Laplacian of the potential away from the origin,
    /// `d2V/dr2 + (D-1)/r dV/dr`. Point contributions at the origin are
    /// reported separately by [`Self::origin_delta_strength`].
    pub fn laplacian(&self, r: R) -> R {
        match self {
            CentralPotential::Coulomb { k } => {
                assert!(r > R::zero(), "Coulomb potential evaluated at r <= 0");
                let _ = k;
                R::zero()
            }
            CentralPotential::Harmonic2d { spring } => {
                assert!(r >= R::zero(), "harmonic potential evaluated at r < 0");
                *spring * R::of(2.0)
            }
            CentralPotential::PowerLaw { terms, dimensionality } => {
                assert!(r > R::zero(), "power-law potential evaluated at r <= 0");
                // Laplacian of r^p in D dimensions: p (p + D - 2) r^{p-2}.
                let d = dimensionality.count::<R>();
                terms
                    .iter()
                    .map(|t| {
                        t.coefficient
                            * t.exponent
                            * (t.exponent + d - R::of(2.0))
                            * r.powf(t.exponent - R::of(2.0))
                    })
                    .sum()
            }
        }
    }

    /// Coefficient of the `delta^3(r)` piece of the Laplacian, zero if none.
    /// For the Coulomb potential `-k/r` this is `4 pi k`.
    pub fn origin_delta_strength(&self) -> R {
        match self {
            CentralPotential::Coulomb { k } => R::of(4.0) * R::PI() * *k,
            CentralPotential::Harmonic2d { .. } | CentralPotential::PowerLaw { .. } => R::zero(),
        }
    }

    /// Spatial dimensionality the potential lives in.
    pub fn dimensionality(&self) -> Dimensionality {
        match self {
            CentralPotential::Coulomb { .. } => Dimensionality::Three,
            CentralPotential::Harmonic2d { .. } => Dimensionality::Two,
            CentralPotential::PowerLaw { dimensionality, .. } => *dimensionality,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: f64) -> CavityParams<f64> {
        CavityParams::new(g, 5.0, Chirality::Plus, 1.0, 1.0).unwrap()
    }

    #[test]
    fn xi_vanishes_at_zero_coupling() {
        assert_eq!(params(0.0).xi(), 0.0);
    }

    #[test]
    fn xi_vanishes_in_the_strong_coupling_limit() {
        assert!(params(1.0e8).xi() < 1.0e-7);
    }

    #[test]
    fn effective_quantities_at_unit_coupling_double() {
        let p = params(1.0);
        let (m_eff, w_eff) = derive_effective(&p);
        assert_eq!(m_eff, 2.0);
        assert_eq!(w_eff, 10.0);
    }

    #[test]
    fn coulomb_values() {
        let v = coulomb_potential(1.0).unwrap();
        assert_eq!(v.v(1.0), -1.0);
        assert_eq!(v.dv_dr(2.0), 0.25);
        assert_eq!(v.laplacian(3.0), 0.0);
        assert!((v.origin_delta_strength() - 4.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn harmonic_values() {
        let v = harmonic2d_potential(2.0, 3.0).unwrap();
        // spring = m omega^2 = 18
        assert_eq!(v.v(0.0), 0.0);
        assert_eq!(v.dv_dr(2.0) / 2.0, 18.0);
        assert_eq!(v.laplacian(0.7), 36.0);
        assert_eq!(v.origin_delta_strength(), 0.0);
    }

    #[test]
    fn power_law_rejects_coulomb_exponent_in_3d() {
        let err = power_law_potential(
            vec![PowerTerm { coefficient: -1.0, exponent: -1.0 }],
            Dimensionality::Three,
        )
        .unwrap_err();
        assert_eq!(err.field, "system.terms");
    }

    #[test]
    fn invalid_params_are_rejected_with_field_paths() {
        let err = CavityParams::new(-0.1, 1.0, Chirality::Plus, 1.0, 1.0).unwrap_err();
        assert_eq!(err.field, "cavity.g");
        let err = CavityParams::new(0.1, 0.0, Chirality::Plus, 1.0, 1.0).unwrap_err();
        assert_eq!(err.field, "cavity.omega_c");
    }
}

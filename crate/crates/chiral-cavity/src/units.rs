//! Physical constants (CODATA 2018) and unit conversion at the I/O boundary.
//!
//! Every computation in this crate runs in Hartree atomic units
//! (`hbar = m_e = e = 1/(4 pi eps0) = 1`); SI values appear only when
//! converting inputs and outputs. Keeping the interior dimensionless avoids
//! overflow/underflow and makes the hydrogen closed forms exact rationals
//! times the Rydberg energy.

use crate::real::Real;

/// Reduced Planck constant, J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Electron mass, kg.
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE_SI: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY_SI: f64 = 8.854_187_812_8e-12;
/// Speed of light, m/s (exact).
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;
/// Bohr radius, m.
pub const BOHR_RADIUS_SI: f64 = 5.291_772_109_03e-11;
/// Fine-structure constant (dimensionless).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
/// Hartree energy, J.
pub const HARTREE_SI: f64 = 4.359_744_722_207_1e-18;
/// Hartree energy, eV.
pub const HARTREE_EV: f64 = 27.211_386_245_988;
/// Atomic unit of time, s.
pub const ATOMIC_TIME_SI: f64 = 2.418_884_326_585_7e-17;
/// Hartree energy divided by the Planck constant, GHz.
pub const HARTREE_GHZ: f64 = 6.579_683_920_502e6;
/// Hartree energy in spectroscopic wavenumbers, cm^-1.
pub const HARTREE_INV_CM: f64 = 219_474.631_363_20;
/// Rydberg energy in Hartree.
pub const RYDBERG_HARTREE: f64 = 0.5;

/// Energy units selectable at the output boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    Hartree,
    MilliElectronVolt,
    Gigahertz,
    InverseCentimeter,
}

impl EnergyUnit {
    /// Multiplicative factor taking a Hartree value into this unit.
    pub fn per_hartree(self) -> f64 {
        match self {
            EnergyUnit::Hartree => 1.0,
            EnergyUnit::MilliElectronVolt => HARTREE_EV * 1.0e3,
            EnergyUnit::Gigahertz => HARTREE_GHZ,
            EnergyUnit::InverseCentimeter => HARTREE_INV_CM,
        }
    }

    /// Short lowercase label used in column headers.
    pub fn label(self) -> &'static str {
        match self {
            EnergyUnit::Hartree => "hartree",
            EnergyUnit::MilliElectronVolt => "mev",
            EnergyUnit::Gigahertz => "ghz",
            EnergyUnit::InverseCentimeter => "invcm",
        }
    }
}

/// Converts an energy in Hartree to `unit`.
pub fn energy_from_hartree<R: Real>(energy_hartree: R, unit: EnergyUnit) -> R {
    energy_hartree * R::of(unit.per_hartree())
}

/// Converts an energy in `unit` back to Hartree.
pub fn energy_to_hartree<R: Real>(energy: R, unit: EnergyUnit) -> R {
    energy / R::of(unit.per_hartree())
}

/// The two unit systems the crate speaks at its boundary.
///
/// `Atomic` is the identity; `Si` converts to/from SI base units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    #[default]
    Atomic,
    Si,
}

impl UnitSystem {
    /// Energy in this system's unit (J for SI) from Hartree.
    pub fn energy_from_hartree<R: Real>(self, e: R) -> R {
        match self {
            UnitSystem::Atomic => e,
            UnitSystem::Si => e * R::of(HARTREE_SI),
        }
    }

    /// Energy in Hartree from this system's unit (J for SI).
    pub fn energy_to_hartree<R: Real>(self, e: R) -> R {
        match self {
            UnitSystem::Atomic => e,
            UnitSystem::Si => e / R::of(HARTREE_SI),
        }
    }

    /// Length in this system's unit (m for SI) from Bohr radii.
    pub fn length_from_bohr<R: Real>(self, l: R) -> R {
        match self {
            UnitSystem::Atomic => l,
            UnitSystem::Si => l * R::of(BOHR_RADIUS_SI),
        }
    }

    /// Length in Bohr radii from this system's unit (m for SI).
    pub fn length_to_bohr<R: Real>(self, l: R) -> R {
        match self {
            UnitSystem::Atomic => l,
            UnitSystem::Si => l / R::of(BOHR_RADIUS_SI),
        }
    }

    /// Angular frequency in atomic units from this system's unit (rad/s for SI).
    pub fn angular_frequency_to_atomic<R: Real>(self, omega: R) -> R {
        match self {
            UnitSystem::Atomic => omega,
            UnitSystem::Si => omega * R::of(ATOMIC_TIME_SI),
        }
    }

    /// Angular frequency in this system's unit (rad/s for SI) from atomic units.
    pub fn angular_frequency_from_atomic<R: Real>(self, omega: R) -> R {
        match self {
            UnitSystem::Atomic => omega,
            UnitSystem::Si => omega / R::of(ATOMIC_TIME_SI),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_round_trips_are_identity() {
        for unit in [
            EnergyUnit::Hartree,
            EnergyUnit::MilliElectronVolt,
            EnergyUnit::Gigahertz,
            EnergyUnit::InverseCentimeter,
        ] {
            let e = 0.734_521_9_f64;
            let back = energy_to_hartree(energy_from_hartree(e, unit), unit);
            assert!((back - e).abs() <= 1e-12 * e.abs());
        }
    }

    #[test]
    fn si_round_trips_are_identity() {
        let sys = UnitSystem::Si;
        let e = -0.125_f64;
        assert!((sys.energy_to_hartree(sys.energy_from_hartree(e)) - e).abs() <= 1e-12 * e.abs());
        let l = 3.75_f64;
        assert!((sys.length_to_bohr(sys.length_from_bohr(l)) - l).abs() <= 1e-12 * l);
        let w = 1.0e16_f64;
        let w2 = sys.angular_frequency_from_atomic(sys.angular_frequency_to_atomic(w));
        assert!((w2 - w).abs() <= 1e-12 * w);
    }

    #[test]
    fn constants_are_mutually_consistent() {
        // a0 = hbar / (m_e c alpha), consistent to the published digits
        let a0 = HBAR_SI / (ELECTRON_MASS_SI * SPEED_OF_LIGHT_SI * FINE_STRUCTURE);
        assert!((a0 - BOHR_RADIUS_SI).abs() < 1e-9 * BOHR_RADIUS_SI);
        // E_h = m_e c^2 alpha^2
        let eh = ELECTRON_MASS_SI
            * SPEED_OF_LIGHT_SI
            * SPEED_OF_LIGHT_SI
            * FINE_STRUCTURE
            * FINE_STRUCTURE;
        assert!((eh - HARTREE_SI).abs() < 1e-9 * HARTREE_SI);
        // E_h in eV
        assert!((HARTREE_SI / ELEMENTARY_CHARGE_SI - HARTREE_EV).abs() < 1e-9 * HARTREE_EV);
        // atomic time = hbar / E_h (hbar itself is a rounded CODATA figure)
        assert!((HBAR_SI / HARTREE_SI - ATOMIC_TIME_SI).abs() < 1e-8 * ATOMIC_TIME_SI);
    }
}

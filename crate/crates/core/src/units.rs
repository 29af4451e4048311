//! Physical constants (CODATA 2018, SI) and the unit conversions applied at
//! the configuration boundary. Everything inside the crate is strict SI.

use std::f64::consts::PI;

/// Speed of light in vacuum [m/s] (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge [C] (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity [F/m].
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// One angstrom in metres.
pub const ANGSTROM: f64 = 1e-10;
/// One electronvolt in joules.
pub const ELECTRON_VOLT: f64 = ELEMENTARY_CHARGE;
/// One e·Å (dipole moment) in C·m.
pub const E_ANGSTROM: f64 = ELEMENTARY_CHARGE * ANGSTROM;

/// Angle between a dipole and the chain axis at which the axial
/// dipole-dipole coupling vanishes, `arccos(1/sqrt(3))`.
pub fn magic_angle() -> f64 {
    (1.0 / 3f64.sqrt()).acos()
}

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * ELECTRON_VOLT
}

pub fn joule_to_ev(j: f64) -> f64 {
    j / ELECTRON_VOLT
}

pub fn angstrom_to_metre(a: f64) -> f64 {
    a * ANGSTROM
}

pub fn e_angstrom_to_coulomb_metre(d: f64) -> f64 {
    d * E_ANGSTROM
}

pub fn degrees_to_radians(deg: f64) -> f64 {
    deg * PI / 180.0
}

/// Transition wavelength `2 pi hbar c / E` [m] for a transition energy [J].
pub fn transition_wavelength(energy: f64) -> f64 {
    2.0 * PI * HBAR * SPEED_OF_LIGHT / energy
}

/// Energy [J] to angular frequency [rad/s].
pub fn angular_frequency(energy: f64) -> f64 {
    energy / HBAR
}

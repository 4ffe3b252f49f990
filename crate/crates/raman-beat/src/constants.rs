//! Physical constants (CODATA 2018) in SI units.

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Shorthand for the `N·ħ/(ε₀·c)` prefactor that converts a polarizability
/// coefficient into a propagation coefficient, given a number density in m⁻³.
pub fn density_prefactor(number_density: f64) -> f64 {
    number_density * HBAR / (EPSILON_0 * SPEED_OF_LIGHT)
}

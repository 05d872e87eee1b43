#pragma once

#include <numbers>

// Fundamental constants, CODATA 2018, SI units.  Every physical number used
// anywhere in the library comes from here; no module re-declares its own.

namespace casimir::constants {

/// Planck constant [J s] (exact since the 2019 SI redefinition).
inline constexpr double h_planck = 6.62607015e-34;

/// Reduced Planck constant [J s].
inline constexpr double hbar = h_planck / (2.0 * std::numbers::pi);

/// Speed of light in vacuum [m/s] (exact).
inline constexpr double c = 299792458.0;

/// Boltzmann constant [J/K] (exact).
inline constexpr double k_B = 1.380649e-23;

/// Vacuum magnetic permeability [N/A^2].
inline constexpr double mu0 = 1.25663706212e-6;

/// Fine-structure constant (dimensionless).
inline constexpr double alpha_fs = 7.2973525693e-3;

/// Apery's constant zeta(3), used by the classical-limit formulas.
inline constexpr double zeta3 = 1.2020569031595942854;

static_assert(h_planck > 0.0 && c > 0.0 && k_B > 0.0 && mu0 > 0.0 &&
              alpha_fs > 0.0);

} // namespace casimir::constants

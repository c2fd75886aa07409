#pragma once

// Natural units: hbar = c = m = 1. Everything inside the library is expressed
// in these units; the conversions below are used only when reading or writing
// user-facing quantities.

namespace pairprod::units {

inline constexpr double hbar = 1.0;
inline constexpr double c = 1.0;
inline constexpr double electron_mass = 1.0;
inline constexpr double mc2 = electron_mass * c * c;

/// Reduced Compton wavelength hbar/(mc) in picometres.
inline constexpr double length_unit_pm = 0.386159;
/// hbar/(mc^2) in zeptoseconds.
inline constexpr double time_unit_zs = 1.2880885;

inline constexpr double pm_to_lu(double pm) { return pm / length_unit_pm; }
inline constexpr double lu_to_pm(double lu) { return lu * length_unit_pm; }

}  // namespace pairprod::units

#pragma once

#include <numbers>

namespace circuitforge {

// CODATA 2018 exact values (SI).
struct PhysicalConstants {
  static constexpr double e = 1.602176634e-19;   // elementary charge [C]
  static constexpr double h = 6.62607015e-34;    // Planck constant [J s]
  static constexpr double phi0 = h / (2.0 * e);  // magnetic flux quantum [Wb]
};

// Charging energy of a 1 F capacitor, expressed as a cyclic frequency:
// E_C/h = e^2 / (2 C h).  Multiply by 1/C to get hertz.
inline constexpr double charge_energy_unit() {
  return PhysicalConstants::e * PhysicalConstants::e /
         (2.0 * PhysicalConstants::h);
}

// Inductive energy of a 1 H inductor as a cyclic frequency:
// E_L/h = Phi0^2 / ((2 pi)^2 L h).  Multiply by 1/L to get hertz.
inline constexpr double inductive_energy_unit() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return PhysicalConstants::phi0 * PhysicalConstants::phi0 /
         (two_pi * two_pi * PhysicalConstants::h);
}

// Capacitive coupling energy E_Cc = e^2 / C_c as a cyclic frequency.
inline constexpr double coupling_energy_unit() {
  return 2.0 * charge_energy_unit();
}

inline constexpr double kGHz = 1e9;
inline constexpr double kFemtoFarad = 1e-15;
inline constexpr double kPicoFarad = 1e-12;
inline constexpr double kNanoHenry = 1e-9;

}  // namespace circuitforge

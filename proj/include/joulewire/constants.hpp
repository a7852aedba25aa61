#ifndef JOULEWIRE_CONSTANTS_HPP
#define JOULEWIRE_CONSTANTS_HPP

#include <numbers>

namespace joulewire {

// Unit conventions used throughout the library:
//   energies and chemical potentials in eV, temperatures in K.
// Currents carry natural units with the 1/h prefactor dropped; a particle
// current of x means x/h in SI, and resistances are reported in h/e^2.
inline constexpr double k_boltzmann = 8.617333262e-5;  // eV / K

inline constexpr double pi = std::numbers::pi;

// pi^2 k_B^2 / 3: entropy quantum per temperature, (eV/K)^2 scale.
inline constexpr double pi2k2_over_3 =
    pi * pi * k_boltzmann * k_boltzmann / 3.0;
inline constexpr double pi2k2_over_6 = pi2k2_over_3 / 2.0;

}  // namespace joulewire

#endif

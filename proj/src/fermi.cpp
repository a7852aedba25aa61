#include "joulewire/fermi.hpp"

#include <cmath>

#include "joulewire/constants.hpp"

namespace joulewire {

double fermi_occupation(const FermiState& state, double energy) {
  const double x = (energy - state.mu) / (k_boltzmann * state.temperature);
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double binary_entropy(double f) {
  if (f <= 0.0 || f >= 1.0) return 0.0;
  return -(f * std::log(f) + (1.0 - f) * std::log(1.0 - f));
}

double fermi_entropy_density(const FermiState& state, double energy) {
  // evaluated directly in x = (e - mu)/kT to avoid cancellation in the tails:
  // s/k_B = ln(1 + e^-|x|) + |x| e^-|x| / (1 + e^-|x|)
  const double x =
      std::abs(energy - state.mu) / (k_boltzmann * state.temperature);
  const double e = std::exp(-x);
  return k_boltzmann * (std::log1p(e) + x * e / (1.0 + e));
}

}  // namespace joulewire

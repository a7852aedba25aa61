#ifndef JOULEWIRE_FERMI_HPP
#define JOULEWIRE_FERMI_HPP

namespace joulewire {

// One reservoir occupation: Fermi-Dirac with chemical potential mu (eV) and
// temperature in K.
struct FermiState {
  double mu = 0.0;
  double temperature = 0.0;
};

// f(energy) in [0,1]; overflow-safe for large |energy - mu| / kT.
double fermi_occupation(const FermiState& state, double energy);

// Binary (single-mode) entropy -[f ln f + (1-f) ln(1-f)], dimensionless,
// with 0 log 0 := 0.
double binary_entropy(double f);

// Single-particle entropy density s(energy) = k_B * binary_entropy(f), in
// eV/K. Integrates to (pi^2/3) k_B^2 T over all energies.
double fermi_entropy_density(const FermiState& state, double energy);

}  // namespace joulewire

#endif

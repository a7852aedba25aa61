#ifndef JOULEWIRE_ENTROPY_HPP
#define JOULEWIRE_ENTROPY_HPP

#include <Eigen/Dense>
#include <vector>

#include "joulewire/fermi.hpp"
#include "joulewire/negf.hpp"
#include "joulewire/probes.hpp"
#include "joulewire/quadrature.hpp"

namespace joulewire {

enum class CurrentMode { Exact, Sommerfeld };

// Dissipative current into terminal alpha (positive = into the reservoir):
// nu = 0 particle, nu = 1 heat. Natural units (1/h dropped): eV for nu=0,
// eV^2 for nu=1.
double bsi_current(int nu, int alpha, const WireModel& model,
                   const std::vector<Terminal>& terminals,
                   const QuadratureSettings& settings = {});

// Fast path: constant transmissions at mu0, Sommerfeld-expanded integrals.
double bsi_current_sommerfeld(int nu, int alpha, const TransmissionMatrix& tm,
                              const std::vector<Terminal>& terminals);

// Conserved entropy current into terminal alpha, in eV^2/K. The Sommerfeld
// form uses (pi^2 k^2/3)(T_b - T_a) with constant transmissions; the exact
// form integrates the entropy densities. Sums to zero over terminals.
double unitary_entropy_current(int alpha, const WireModel& model,
                               const std::vector<Terminal>& terminals,
                               CurrentMode mode,
                               const QuadratureSettings& settings = {});
double unitary_entropy_current_sommerfeld(int alpha,
                                          const TransmissionMatrix& tm,
                                          const std::vector<Terminal>& terminals);

struct TerminalCurrents {
  double particle = 0.0;  // I^(0), eV
  double heat = 0.0;      // I^(1), eV^2
  double energy = 0.0;    // I^E = I^(1) + mu I^(0), eV^2
  double entropy = 0.0;   // I^S, eV^2/K
};

struct EntropyReport {
  std::vector<TerminalCurrents> per_terminal;  // indexed like terminals
  double probe_total_entropy = 0.0;  // sum over probes of -I^S_{P_n} >= 0
  double power = 0.0;                // I^(0)_source (mu_drain - mu_source)
  double ratio = 0.0;                // T0 * S_dot / power
  bool ratio_defined = false;        // false at zero power (zero bias)
  double lead_temperature = 0.0;
  // signed conservation sums over all terminals
  double sum_particle = 0.0;
  double sum_energy = 0.0;
  double sum_entropy = 0.0;
  double joule_identity = 0.0;  // sum I^(1) + sum mu I^(0)

  double conservation_max_abs() const;
};

// Entropy injected into the wire by one probe (0-based index), to leading
// order in the bias: the locally dissipated electrochemical power over the
// lead temperature. Non-negative by construction of the solved heat balance.
double probe_entropy_injection(const FloatingProblem& problem,
                               const ProbeSolution& solution, int probe_index);

// Assembles all per-terminal currents from a solved floating configuration
// using the Sommerfeld forms at the problem's transmissions.
EntropyReport joule_report(const FloatingProblem& problem,
                           const ProbeSolution& solution);

// Same bookkeeping with exact energy integration; terminals must already
// carry the solved probe states.
EntropyReport joule_report_exact(const WireModel& model,
                                 const std::vector<Terminal>& terminals,
                                 const QuadratureSettings& settings = {});

// Closed forms for the single-site, single-probe chain at on-site energy 0,
// transmissions evaluated at mu0.
struct SingleProbeAnalytic {
  double mu_probe = 0.0;
  double temp_probe = 0.0;
  double entropy_rate = 0.0;  // injected into the wire, eV^2/K
  double power = 0.0;         // eV^2
  double ratio = 0.0;
  double t_12 = 0.0;
  double t_1p = 0.0;
};

SingleProbeAnalytic single_probe_analytic(double hopping, double gamma_p,
                                          double mu1, double mu2,
                                          double lead_temperature);

// Uniform energy grid for spectral integrals and distribution tables:
// [mu0 - W, mu0 + W], W = max(10 kB Tmax, 5 |mu1 - mu2|), clipped to the band.
struct EnergyGrid {
  double lo = 0.0;
  double hi = 0.0;
  int points = 2001;
  std::vector<double> values() const;
};

EnergyGrid default_distribution_grid(const WireModel& model,
                                     const std::vector<Terminal>& terminals,
                                     int points = 2001);

// Distance from local equilibrium on one site: spectral-weighted entropies of
// the probe's equilibrium distribution vs the local non-equilibrium one.
struct DeficitResult {
  double s_probe = 0.0;  // S_{P_n}, eV (dimensionless entropy density * eV)
  double s_local = 0.0;  // S_n
  double deficit = 0.0;  // S_{P_n} - S_n
};

DeficitResult entropy_deficit(const WireModel& model,
                              const std::vector<Terminal>& terminals,
                              int site_1based, const EnergyGrid& grid);

// All sites at once; shares the Green's function sweep across sites.
std::vector<DeficitResult> entropy_deficit_all(
    const WireModel& model, const std::vector<Terminal>& terminals,
    const EnergyGrid& grid);

}  // namespace joulewire

#endif

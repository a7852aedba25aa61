#ifndef JOULEWIRE_EXPERIMENTS_HPP
#define JOULEWIRE_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "joulewire/entropy.hpp"
#include "joulewire/model.hpp"
#include "joulewire/probes.hpp"

namespace joulewire {

// Sweep definition shared by the ratio and deficit-fit experiments.
struct SweepSpec {
  std::vector<int> n_values;
  std::vector<double> gamma_over_t;
  double t = 2.7;        // eV
  double temp0 = 232.0;  // K
  double delta_mu = 0.2; // eV, mu1 = mu0 + dmu/2, mu2 = mu0 - dmu/2
  double mu0 = 0.0;
  double onsite = 0.0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws std::invalid_argument
};

struct RatioRow {
  int n = 0;
  double gamma_over_t = 0.0;
  double n_gamma_over_t = 0.0;
  double ratio = 0.0;
  double power = 0.0;
  double s_dot = 0.0;
  double conservation_max_abs = 0.0;
  bool ok = false;
  bool ratio_defined = false;
  std::string error;
};

// One row per (N, gamma) pair, in spec order regardless of scheduling.
// Row-level solver failures are recorded, not thrown.
std::vector<RatioRow> sweep_ratio(const SweepSpec& spec);

// Least-squares fit of ratio against 1/N over the large-N tail, one fit per
// coupling value.
struct DeficitFit {
  double gamma_over_t = 0.0;
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

std::vector<DeficitFit> deficit_fit(const SweepSpec& spec, int min_n = 20,
                                    std::vector<RatioRow>* rows_out = nullptr);

// Probe chemical-potential / temperature profile with shape checks.
struct ProfileTable {
  std::vector<int> site;  // 1-based
  Eigen::VectorXd mu;
  Eigen::VectorXd temp;
  bool mu_monotone = false;      // strictly monotone along the bias
  int interior_maxima = 0;       // plateau-tolerant count for the T profile
  bool oscillation_flag = false; // set when monotonicity fails (2k_F regime)
};

ProfileTable profiles(const WireModel& model, double mu1, double mu2,
                      double lead_temperature);

// Local vs probe-equilibrium occupation curves for selected sites.
struct DistributionCurve {
  int site = 0;  // 1-based
  std::vector<double> energy;
  std::vector<double> f_local;
  std::vector<double> f_probe;
};

std::vector<DistributionCurve> distribution_snapshots(
    const WireModel& model, const std::vector<Terminal>& terminals,
    const std::vector<int>& sites_1based, const EnergyGrid& grid);

// Entropy injected per probe, normalized by the total.
struct ShareRow {
  int site = 0;
  double injection = 0.0;  // -I^S_{P_n}, eV^2/K
  double share = 0.0;
};

struct ShareTable {
  std::vector<ShareRow> rows;
  double total = 0.0;
  bool defined = false;  // false when the total vanishes (zero bias)
};

ShareTable probe_entropy_shares(const FloatingProblem& problem,
                                const ProbeSolution& solution);

// Two-terminal resistance of the solved floating-probe chain, in h/e^2.
enum class CouplingRegime { Weak, Strong };

struct ResistanceRow {
  double gamma_over_t = 0.0;
  double resistance = 0.0;
  bool ok = false;
  std::string error;
};

struct ResistanceFitResult {
  CouplingRegime regime = CouplingRegime::Weak;
  double intercept = 0.0;
  double coeff = 0.0;  // slope (weak) or quadratic coefficient (strong)
  double r_squared = 0.0;
  int points = 0;
};

double floating_chain_resistance(const WireModel& model, double mu1,
                                 double mu2, double lead_temperature);

ResistanceFitResult resistance_scan(int n_sites, double t, double temp0,
                                    double delta_mu,
                                    const std::vector<double>& gammas_over_t,
                                    CouplingRegime regime,
                                    std::vector<ResistanceRow>* rows_out = nullptr);

// Ordinary least squares y = intercept + slope x with coefficient of
// determination; the building block of the fits above.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic worker pool: fn(i) for i in [0, count), any schedule.
void parallel_for_indexed(size_t count, int threads,
                          const std::function<void(size_t)>& fn);
int resolve_thread_count(int requested);

}  // namespace joulewire

#endif

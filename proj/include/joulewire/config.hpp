#ifndef JOULEWIRE_CONFIG_HPP
#define JOULEWIRE_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "joulewire/experiments.hpp"

namespace joulewire {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat key/value configuration with one [section] level. Unknown sections,
// unknown keys and duplicate keys are rejected at parse time.
struct RunConfig {
  // [model]
  double t = 2.7;
  int n_sites = 0;
  double gamma_p = -1.0;           // eV; < 0 means unset
  std::vector<double> gamma_list;  // per-site alternative to gamma_p
  double onsite = 0.0;

  // [thermo]
  double temp0 = 0.0;
  double delta_mu = -1.0;  // eV; < 0 means unset
  double mu0 = 0.0;

  // [solver]
  enum class Mode { Sommerfeld, Exact };
  Mode mode = Mode::Sommerfeld;
  double residual_tol = 1e-10;
  double quadrature_tol = 1e-12;

  // [experiment]
  std::string kind;
  std::vector<int> n_values;
  std::vector<double> gamma_over_t_values;
  std::vector<int> sites;
  bool regime_set = false;
  CouplingRegime regime = CouplingRegime::Weak;
  int min_fit_n = 20;
  int grid_points = 2001;

  // [output]
  std::string output_dir = "out";
  int threads = 0;

  // Per-site couplings for single-configuration experiments.
  std::vector<double> resolved_gamma_list() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

struct ValidationReport {
  bool ok = false;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  size_t sweep_points = 0;
  double estimated_seconds = 0.0;
};

// Range/consistency checks plus a cheap size/runtime estimate; performs no
// heavy computation. `run` refuses any config this rejects.
ValidationReport validate_config(const RunConfig& config);

// Normalized key = value echo of the parsed config, for the manifest.
std::string config_echo(const RunConfig& config);

}  // namespace joulewire

#endif

#ifndef JOULEWIRE_MODEL_HPP
#define JOULEWIRE_MODEL_HPP

#include <vector>

namespace joulewire {

// N-site nearest-neighbor chain with a semi-infinite lead on each end and a
// broadband probe reservoir on every site. The lead band spans
// band_center +/- 2*hopping; all on-site energies must lie strictly inside it.
struct WireModel {
  int n_sites = 0;
  double hopping = 0.0;                // t > 0, also the lead hopping
  double band_center = 0.0;
  std::vector<double> onsite;          // per site, eV
  std::vector<double> probe_coupling;  // per site gamma_p >= 0, eV

  static WireModel uniform(int n_sites, double hopping, double gamma_p,
                           double onsite = 0.0, double band_center = 0.0);

  // Throws std::invalid_argument on any violated constraint.
  void validate() const;

  int terminal_count() const { return n_sites + 2; }
};

enum class TerminalKind { Source, Drain, Probe };

// One reservoir. Terminals are indexed 0 = source (site 0),
// 1 = drain (site n_sites-1), 2+k = probe on site k.
struct Terminal {
  int id = 0;
  TerminalKind kind = TerminalKind::Probe;
  int site = 0;             // 0-based attachment site
  double mu = 0.0;          // eV
  double temperature = 0.0; // K
};

std::vector<Terminal> make_terminals(const WireModel& model, double mu_source,
                                     double mu_drain, double lead_temperature);

// Checks the one-source/one-drain/N-probe layout against the model.
void validate_terminals(const WireModel& model,
                        const std::vector<Terminal>& terminals);

}  // namespace joulewire

#endif

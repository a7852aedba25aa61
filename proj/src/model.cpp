#include "joulewire/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace joulewire {

WireModel WireModel::uniform(int n_sites, double hopping, double gamma_p,
                             double onsite, double band_center) {
  WireModel m;
  m.n_sites = n_sites;
  m.hopping = hopping;
  m.band_center = band_center;
  m.onsite.assign(static_cast<size_t>(n_sites > 0 ? n_sites : 0), onsite);
  m.probe_coupling.assign(static_cast<size_t>(n_sites > 0 ? n_sites : 0),
                          gamma_p);
  m.validate();
  return m;
}

void WireModel::validate() const {
  if (n_sites < 1) throw std::invalid_argument("WireModel: n_sites must be >= 1");
  if (!(hopping > 0.0)) throw std::invalid_argument("WireModel: hopping must be > 0");
  if (static_cast<int>(onsite.size()) != n_sites)
    throw std::invalid_argument("WireModel: onsite list length != n_sites");
  if (static_cast<int>(probe_coupling.size()) != n_sites)
    throw std::invalid_argument("WireModel: probe_coupling list length != n_sites");
  for (int i = 0; i < n_sites; ++i) {
    if (!(probe_coupling[static_cast<size_t>(i)] >= 0.0))
      throw std::invalid_argument("WireModel: probe_coupling must be >= 0 (site " +
                                  std::to_string(i + 1) + ")");
    // lead self-energies are only evaluated in-band
    if (!(std::abs(onsite[static_cast<size_t>(i)] - band_center) < 2.0 * hopping))
      throw std::invalid_argument("WireModel: onsite energy outside the lead band (site " +
                                  std::to_string(i + 1) + ")");
  }
}

std::vector<Terminal> make_terminals(const WireModel& model, double mu_source,
                                     double mu_drain, double lead_temperature) {
  model.validate();
  if (!(lead_temperature > 0.0))
    throw std::invalid_argument("make_terminals: lead temperature must be > 0");
  std::vector<Terminal> out;
  out.reserve(static_cast<size_t>(model.terminal_count()));
  out.push_back({0, TerminalKind::Source, 0, mu_source, lead_temperature});
  out.push_back({1, TerminalKind::Drain, model.n_sites - 1, mu_drain,
                 lead_temperature});
  const double mu0 = 0.5 * (mu_source + mu_drain);
  for (int k = 0; k < model.n_sites; ++k) {
    // probes start at the equilibrium point; solvers overwrite mu/T
    out.push_back({2 + k, TerminalKind::Probe, k, mu0, lead_temperature});
  }
  return out;
}

void validate_terminals(const WireModel& model,
                        const std::vector<Terminal>& terminals) {
  if (static_cast<int>(terminals.size()) != model.terminal_count())
    throw std::invalid_argument("terminals: expected n_sites + 2 entries");
  int sources = 0, drains = 0;
  for (const auto& t : terminals) {
    if (!(t.temperature > 0.0))
      throw std::invalid_argument("terminals: temperature must be > 0");
    switch (t.kind) {
      case TerminalKind::Source:
        ++sources;
        if (t.site != 0)
          throw std::invalid_argument("terminals: source must attach to site 1");
        break;
      case TerminalKind::Drain:
        ++drains;
        if (t.site != model.n_sites - 1)
          throw std::invalid_argument("terminals: drain must attach to site N");
        break;
      case TerminalKind::Probe:
        if (t.site < 0 || t.site >= model.n_sites)
          throw std::invalid_argument("terminals: probe site out of range");
        break;
    }
  }
  if (sources != 1 || drains != 1)
    throw std::invalid_argument("terminals: exactly one source and one drain required");
}

}  // namespace joulewire

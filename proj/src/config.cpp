#include "joulewire/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "joulewire/constants.hpp"

namespace joulewire {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': cannot parse '" + value +
                           "' as a number");
  }
}

int parse_int(const std::string& origin, int line, const std::string& key,
              const std::string& value) {
  try {
    size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': cannot parse '" + value +
                           "' as an integer");
  }
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

// Integer lists accept "a,b,c", "a..b" and "a..b:step" forms, mixed freely.
std::vector<int> parse_int_list(const std::string& origin, int line,
                                const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  for (const auto& part : split_commas(value)) {
    const size_t dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(origin, line, key, part));
      continue;
    }
    const int lo = parse_int(origin, line, key, part.substr(0, dots));
    std::string rest = part.substr(dots + 2);
    int step = 1;
    const size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      step = parse_int(origin, line, key, rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const int hi = parse_int(origin, line, key, rest);
    if (step < 1) fail(origin, line, "key '" + key + "': range step must be >= 1");
    if (hi < lo) fail(origin, line, "key '" + key + "': empty range " + part);
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) fail(origin, line, "key '" + key + "': empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& origin, int line,
                                      const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  for (const auto& part : split_commas(value))
    out.push_back(parse_double(origin, line, key, part));
  if (out.empty()) fail(origin, line, "key '" + key + "': empty list");
  return out;
}

const std::set<std::string> kKinds = {
    "solve",         "profiles", "sweep-ratio", "deficit-fit",
    "distributions", "entropy-shares", "resistance"};

}  // namespace

std::vector<double> RunConfig::resolved_gamma_list() const {
  if (!gamma_list.empty()) return gamma_list;
  return std::vector<double>(static_cast<size_t>(n_sites),
                             gamma_p < 0.0 ? 0.0 : gamma_p);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> kSections = {
          "model", "thermo", "solver", "experiment", "output"};
      if (!kSections.count(section))
        fail(origin, line, "unknown section '" + section + "'");
      continue;
    }

    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (value.empty()) fail(origin, line, "key '" + key + "': empty value");
    if (section.empty())
      fail(origin, line, "key '" + key + "' outside any [section]");
    const std::string qualified = section + "." + key;
    if (!seen.insert(qualified).second)
      fail(origin, line, "duplicate key '" + key + "' in [" + section + "]");

    if (qualified == "model.t") {
      cfg.t = parse_double(origin, line, key, value);
    } else if (qualified == "model.n_sites") {
      cfg.n_sites = parse_int(origin, line, key, value);
    } else if (qualified == "model.gamma_p") {
      cfg.gamma_p = parse_double(origin, line, key, value);
    } else if (qualified == "model.gamma_list") {
      cfg.gamma_list = parse_double_list(origin, line, key, value);
    } else if (qualified == "model.onsite") {
      cfg.onsite = parse_double(origin, line, key, value);
    } else if (qualified == "thermo.T0") {
      cfg.temp0 = parse_double(origin, line, key, value);
    } else if (qualified == "thermo.delta_mu") {
      cfg.delta_mu = parse_double(origin, line, key, value);
    } else if (qualified == "thermo.mu0") {
      cfg.mu0 = parse_double(origin, line, key, value);
    } else if (qualified == "solver.mode") {
      if (value == "sommerfeld") {
        cfg.mode = RunConfig::Mode::Sommerfeld;
      } else if (value == "exact") {
        cfg.mode = RunConfig::Mode::Exact;
      } else {
        fail(origin, line, "key 'mode': expected sommerfeld|exact, got '" +
                               value + "'");
      }
    } else if (qualified == "solver.residual_tol") {
      cfg.residual_tol = parse_double(origin, line, key, value);
    } else if (qualified == "solver.quadrature_tol") {
      cfg.quadrature_tol = parse_double(origin, line, key, value);
    } else if (qualified == "experiment.kind") {
      if (!kKinds.count(value))
        fail(origin, line, "key 'kind': unknown experiment '" + value + "'");
      cfg.kind = value;
    } else if (qualified == "experiment.n_values") {
      cfg.n_values = parse_int_list(origin, line, key, value);
    } else if (qualified == "experiment.gamma_over_t_values") {
      cfg.gamma_over_t_values = parse_double_list(origin, line, key, value);
    } else if (qualified == "experiment.sites") {
      cfg.sites = parse_int_list(origin, line, key, value);
    } else if (qualified == "experiment.regime") {
      if (value == "weak") {
        cfg.regime = CouplingRegime::Weak;
      } else if (value == "strong") {
        cfg.regime = CouplingRegime::Strong;
      } else {
        fail(origin, line, "key 'regime': expected weak|strong, got '" + value + "'");
      }
      cfg.regime_set = true;
    } else if (qualified == "experiment.min_fit_n") {
      cfg.min_fit_n = parse_int(origin, line, key, value);
    } else if (qualified == "experiment.grid_points") {
      cfg.grid_points = parse_int(origin, line, key, value);
    } else if (qualified == "output.directory") {
      cfg.output_dir = value;
    } else if (qualified == "output.threads") {
      cfg.threads = parse_int(origin, line, key, value);
    } else {
      fail(origin, line, "unknown key '" + key + "' in [" + section + "]");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

namespace {

bool needs_single_model(const std::string& kind) {
  return kind == "solve" || kind == "profiles" || kind == "distributions" ||
         kind == "entropy-shares";
}

// Crude per-row cost model for the runtime estimate (dense solve dominates).
double estimated_row_seconds(int n, bool exact) {
  const double dense = 4e-9 * static_cast<double>(n) * n * n + 2e-4;
  return exact ? 400.0 * dense : dense;
}

}  // namespace

ValidationReport validate_config(const RunConfig& cfg) {
  ValidationReport rep;
  auto err = [&](const std::string& m) { rep.errors.push_back(m); };
  auto warn = [&](const std::string& m) { rep.warnings.push_back(m); };

  if (cfg.kind.empty()) err("experiment.kind is required");
  if (!(cfg.t > 0.0)) err("model.t must be > 0");
  if (!(cfg.temp0 > 0.0)) err("thermo.T0 must be > 0");
  if (cfg.delta_mu < 0.0) err("thermo.delta_mu is required (>= 0)");
  if (std::abs(cfg.mu0) >= 2.0 * cfg.t)
    err("thermo.mu0 lies outside the lead band (|mu0| < 2t required)");
  if (cfg.grid_points < 3) err("experiment.grid_points must be >= 3");

  const bool single = needs_single_model(cfg.kind);
  if (single || cfg.kind == "resistance") {
    if (cfg.n_sites < 1) err("model.n_sites must be >= 1 for this experiment");
  }
  if (single) {
    if (cfg.gamma_p < 0.0 && cfg.gamma_list.empty())
      err("one of model.gamma_p / model.gamma_list is required");
    if (cfg.gamma_p >= 0.0 && !cfg.gamma_list.empty())
      err("model.gamma_p and model.gamma_list are mutually exclusive");
    if (!cfg.gamma_list.empty() && cfg.n_sites >= 1 &&
        static_cast<int>(cfg.gamma_list.size()) != cfg.n_sites)
      err("model.gamma_list length must equal n_sites");
    for (double g : cfg.gamma_list)
      if (g < 0.0) err("model.gamma_list entries must be >= 0");
  }
  if (cfg.n_sites >= 1 && std::abs(cfg.onsite) >= 2.0 * cfg.t)
    err("model.onsite lies outside the lead band");

  if (cfg.kind == "sweep-ratio" || cfg.kind == "deficit-fit") {
    if (cfg.n_values.empty()) err("experiment.n_values is required");
    if (cfg.gamma_over_t_values.empty())
      err("experiment.gamma_over_t_values is required");
    if (!(cfg.delta_mu > 0.0))
      err("thermo.delta_mu must be > 0 for ratio sweeps");
  }
  if (cfg.kind == "deficit-fit") {
    if (!cfg.n_values.empty()) {
      const auto [lo, hi] =
          std::minmax_element(cfg.n_values.begin(), cfg.n_values.end());
      if (*hi < 10 * *lo)
        err("experiment.n_values must span at least a decade for deficit-fit");
      int tail = 0;
      for (int n : cfg.n_values)
        if (n >= cfg.min_fit_n) ++tail;
      if (tail < 5) err("deficit-fit needs >= 5 points with N >= min_fit_n");
    }
  }
  if (cfg.kind == "resistance") {
    if (cfg.gamma_over_t_values.size() < 5)
      err("resistance needs >= 5 experiment.gamma_over_t_values");
    if (!cfg.regime_set) err("experiment.regime (weak|strong) is required");
    if (!(cfg.delta_mu > 0.0)) err("thermo.delta_mu must be > 0 for resistance");
  }
  if (cfg.kind == "distributions" && !cfg.sites.empty()) {
    for (int s : cfg.sites)
      if (s < 1 || (cfg.n_sites >= 1 && s > cfg.n_sites))
        err("experiment.sites entries must lie in [1, n_sites]");
  }
  if (cfg.mode == RunConfig::Mode::Exact) {
    if (!(cfg.kind == "solve" || cfg.kind == "profiles"))
      err("solver.mode = exact is only supported for solve/profiles");
    else if (cfg.n_sites > 4)
      warn("exact solver with n_sites > 4 may be very slow");
  }
  if (!(cfg.residual_tol > 0.0)) err("solver.residual_tol must be > 0");
  if (!(cfg.quadrature_tol > 0.0)) err("solver.quadrature_tol must be > 0");

  if (cfg.delta_mu > 2.0 * cfg.t)
    warn("Sommerfeld validity doubtful: delta_mu exceeds the band half-width");
  else if (cfg.temp0 > 0.0 && cfg.delta_mu > 40.0 * k_boltzmann * cfg.temp0)
    warn("Sommerfeld validity doubtful: delta_mu >> k_B T0 window");

  // size / runtime estimate
  bool exact = cfg.mode == RunConfig::Mode::Exact;
  if (cfg.kind == "sweep-ratio" || cfg.kind == "deficit-fit") {
    rep.sweep_points = cfg.n_values.size() * cfg.gamma_over_t_values.size();
    for (double g : cfg.gamma_over_t_values) {
      (void)g;
      for (int n : cfg.n_values)
        rep.estimated_seconds += estimated_row_seconds(n, false);
    }
  } else if (cfg.kind == "resistance") {
    rep.sweep_points = cfg.gamma_over_t_values.size();
    rep.estimated_seconds =
        rep.sweep_points * estimated_row_seconds(cfg.n_sites, false);
  } else {
    rep.sweep_points = 1;
    rep.estimated_seconds = estimated_row_seconds(cfg.n_sites, exact);
    if (cfg.kind == "distributions" || cfg.kind == "solve")
      rep.estimated_seconds +=
          cfg.grid_points * estimated_row_seconds(cfg.n_sites, false) * 0.2;
  }

  rep.ok = rep.errors.empty();
  return rep;
}

std::string config_echo(const RunConfig& cfg) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[model]\n";
  out << "t = " << num(cfg.t) << "\n";
  if (cfg.n_sites >= 1) out << "n_sites = " << cfg.n_sites << "\n";
  if (!cfg.gamma_list.empty()) {
    out << "gamma_list = ";
    for (size_t i = 0; i < cfg.gamma_list.size(); ++i)
      out << (i ? "," : "") << num(cfg.gamma_list[i]);
    out << "\n";
  } else if (cfg.gamma_p >= 0.0) {
    out << "gamma_p = " << num(cfg.gamma_p) << "\n";
  }
  out << "onsite = " << num(cfg.onsite) << "\n";
  out << "[thermo]\n";
  out << "T0 = " << num(cfg.temp0) << "\n";
  out << "delta_mu = " << num(cfg.delta_mu) << "\n";
  out << "mu0 = " << num(cfg.mu0) << "\n";
  out << "[solver]\n";
  out << "mode = "
      << (cfg.mode == RunConfig::Mode::Exact ? "exact" : "sommerfeld") << "\n";
  out << "residual_tol = " << num(cfg.residual_tol) << "\n";
  out << "quadrature_tol = " << num(cfg.quadrature_tol) << "\n";
  out << "[experiment]\n";
  out << "kind = " << cfg.kind << "\n";
  if (!cfg.n_values.empty()) {
    out << "n_values = ";
    for (size_t i = 0; i < cfg.n_values.size(); ++i)
      out << (i ? "," : "") << cfg.n_values[i];
    out << "\n";
  }
  if (!cfg.gamma_over_t_values.empty()) {
    out << "gamma_over_t_values = ";
    for (size_t i = 0; i < cfg.gamma_over_t_values.size(); ++i)
      out << (i ? "," : "") << num(cfg.gamma_over_t_values[i]);
    out << "\n";
  }
  if (!cfg.sites.empty()) {
    out << "sites = ";
    for (size_t i = 0; i < cfg.sites.size(); ++i)
      out << (i ? "," : "") << cfg.sites[i];
    out << "\n";
  }
  if (cfg.regime_set)
    out << "regime = "
        << (cfg.regime == CouplingRegime::Weak ? "weak" : "strong") << "\n";
  out << "min_fit_n = " << cfg.min_fit_n << "\n";
  out << "grid_points = " << cfg.grid_points << "\n";
  out << "[output]\n";
  out << "directory = " << cfg.output_dir << "\n";
  out << "threads = " << cfg.threads << "\n";
  return out.str();
}

}  // namespace joulewire

#include "joulewire/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "joulewire/constants.hpp"
#include "joulewire/entropy.hpp"
#include "joulewire/experiments.hpp"

namespace joulewire {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : path_(path) {
    out_.open(path);
    if (!out_) throw std::ios_base::failure("cannot open " + path.string());
    out_ << header << "\n";
  }
  void line(const std::string& s) {
    out_ << s << "\n";
    ++rows_;
  }
  size_t rows() const { return rows_; }
  void close() {
    out_.flush();
    if (!out_) throw std::ios_base::failure("write failed: " + path_.string());
    out_.close();
  }

 private:
  fs::path path_;
  std::ofstream out_;
  size_t rows_ = 0;
};

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct RunState {
  const RunConfig* cfg = nullptr;
  fs::path out_dir;
  std::vector<std::pair<std::string, size_t>> artifacts;
  std::vector<Check> checks;
  std::vector<std::string> notes;   // row-level errors and flags
  std::vector<std::pair<std::string, double>> timings;
  int threads = 0;

  void check_le(const std::string& name, double value, double limit) {
    checks.push_back({name, value, limit, value <= limit});
  }
  bool all_checks_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

class StageTimer {
 public:
  StageTimer(RunState& state, std::string name)
      : state_(state), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto dt = std::chrono::steady_clock::now() - start_;
    state_.timings.emplace_back(
        name_, std::chrono::duration<double>(dt).count());
  }

 private:
  RunState& state_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

WireModel model_from_config(const RunConfig& cfg) {
  WireModel m;
  m.n_sites = cfg.n_sites;
  m.hopping = cfg.t;
  m.band_center = 0.0;
  m.onsite.assign(static_cast<size_t>(cfg.n_sites), cfg.onsite);
  m.probe_coupling = cfg.resolved_gamma_list();
  m.validate();
  return m;
}

void report_checks(const EntropyReport& rep, RunState& state,
                   const std::string& prefix, double conservation_limit) {
  state.check_le(prefix + "conservation_particle", std::abs(rep.sum_particle),
                 conservation_limit);
  state.check_le(prefix + "conservation_energy", std::abs(rep.sum_energy),
                 conservation_limit);
  state.check_le(prefix + "conservation_entropy", std::abs(rep.sum_entropy),
                 conservation_limit);
  state.check_le(prefix + "joule_identity", std::abs(rep.joule_identity),
                 conservation_limit);
  if (rep.ratio_defined) {
    state.check_le(prefix + "ratio_upper", rep.ratio, 1.0 + 1e-9);
    state.check_le(prefix + "ratio_lower", -rep.ratio, 1e-9);
  } else {
    state.notes.push_back(prefix + "ratio undefined (zero power)");
  }
}

void write_profiles_csv(const Eigen::VectorXd& mus, const Eigen::VectorXd& temps,
                        RunState& state) {
  CsvWriter csv(state.out_dir / "profiles.csv", "site,mu_P,T_P");
  for (int i = 0; i < mus.size(); ++i)
    csv.line(std::to_string(i + 1) + "," + fmt(mus(i)) + "," + fmt(temps(i)));
  csv.close();
  state.artifacts.emplace_back("profiles.csv", csv.rows());
}

void run_solve_or_profiles(const RunConfig& cfg, RunState& state) {
  const WireModel model = model_from_config(cfg);
  const double mu1 = cfg.mu0 + 0.5 * cfg.delta_mu;
  const double mu2 = cfg.mu0 - 0.5 * cfg.delta_mu;

  StageTimer timer(state, "solve");
  if (cfg.mode == RunConfig::Mode::Exact) {
    ExactSolveSettings settings;
    settings.residual_tol = cfg.residual_tol;
    settings.quadrature.abs_tol = cfg.quadrature_tol;
    const ProbeSolution sol =
        solve_floating_exact(model, mu1, mu2, cfg.temp0, settings);
    std::vector<Terminal> terminals =
        make_terminals(model, mu1, mu2, cfg.temp0);
    apply_probe_solution(terminals, sol);
    const EntropyReport rep =
        joule_report_exact(model, terminals, {cfg.quadrature_tol, 4000});
    write_profiles_csv(sol.mus, sol.temps, state);
    report_checks(rep, state, "", 1e3 * cfg.quadrature_tol);
    state.check_le("probe_residual_particle",
                   sol.residual_particle.cwiseAbs().maxCoeff(),
                   cfg.residual_tol);
    state.check_le("probe_residual_heat",
                   sol.residual_heat.cwiseAbs().maxCoeff(), cfg.residual_tol);
    state.notes.push_back("power = " + fmt(rep.power));
    state.notes.push_back("S_dot_probes = " + fmt(rep.probe_total_entropy));
    state.notes.push_back("ratio = " + fmt(rep.ratio));
    return;
  }

  const FloatingProblem problem =
      make_floating_problem(model, mu1, mu2, cfg.temp0);
  const ProbeSolution sol = solve_floating_sommerfeld(problem);
  const EntropyReport rep = joule_report(problem, sol);
  write_profiles_csv(sol.mus, sol.temps, state);
  report_checks(rep, state, "", 1e-10);
  state.check_le("probe_residual_particle",
                 sol.residual_particle.cwiseAbs().maxCoeff(), 1e-12);
  state.check_le("probe_residual_heat",
                 sol.residual_heat.cwiseAbs().maxCoeff(), 1e-12);
  state.notes.push_back("power = " + fmt(rep.power));
  state.notes.push_back("S_dot_probes = " + fmt(rep.probe_total_entropy));
  state.notes.push_back("ratio = " + fmt(rep.ratio));

  if (cfg.kind == "profiles") {
    const ProfileTable table = profiles(model, mu1, mu2, cfg.temp0);
    if (cfg.delta_mu > 0.0 && !table.mu_monotone)
      state.notes.push_back(
          "mu profile not monotone (2k_F oscillation regime?)");
    state.notes.push_back("interior_T_maxima = " +
                          std::to_string(table.interior_maxima));
  }
}

void run_sweep_ratio(const RunConfig& cfg, RunState& state) {
  SweepSpec spec;
  spec.n_values = cfg.n_values;
  spec.gamma_over_t = cfg.gamma_over_t_values;
  spec.t = cfg.t;
  spec.temp0 = cfg.temp0;
  spec.delta_mu = cfg.delta_mu;
  spec.mu0 = cfg.mu0;
  spec.onsite = cfg.onsite;
  spec.threads = state.threads;

  std::vector<RatioRow> rows;
  {
    StageTimer timer(state, "sweep");
    rows = sweep_ratio(spec);
  }

  StageTimer timer(state, "write");
  CsvWriter csv(state.out_dir / "ratio_sweep.csv",
                "N,gamma_over_t,N_gamma_over_t,ratio,power,S_dot_probes,"
                "conservation_max_abs");
  double worst_conservation = 0.0;
  size_t failures = 0;
  for (const auto& row : rows) {
    if (!row.ok) {
      ++failures;
      state.notes.push_back("row N=" + std::to_string(row.n) + " gamma/t=" +
                            fmt(row.gamma_over_t) + " failed: " + row.error);
      continue;
    }
    worst_conservation = std::max(worst_conservation, row.conservation_max_abs);
    csv.line(std::to_string(row.n) + "," + fmt(row.gamma_over_t) + "," +
             fmt(row.n_gamma_over_t) + "," + fmt(row.ratio) + "," +
             fmt(row.power) + "," + fmt(row.s_dot) + "," +
             fmt(row.conservation_max_abs));
  }
  csv.close();
  state.artifacts.emplace_back("ratio_sweep.csv", csv.rows());
  state.check_le("conservation_max_abs", worst_conservation, 1e-10);
  state.check_le("row_errors", static_cast<double>(failures), 0.0);
}

void run_deficit_fit(const RunConfig& cfg, RunState& state) {
  SweepSpec spec;
  spec.n_values = cfg.n_values;
  spec.gamma_over_t = cfg.gamma_over_t_values;
  spec.t = cfg.t;
  spec.temp0 = cfg.temp0;
  spec.delta_mu = cfg.delta_mu;
  spec.mu0 = cfg.mu0;
  spec.onsite = cfg.onsite;
  spec.threads = state.threads;

  std::vector<RatioRow> rows;
  std::vector<DeficitFit> fits;
  {
    StageTimer timer(state, "sweep");
    fits = deficit_fit(spec, cfg.min_fit_n, &rows);
  }

  StageTimer timer(state, "write");
  CsvWriter sweep_csv(state.out_dir / "ratio_sweep.csv",
                      "N,gamma_over_t,N_gamma_over_t,ratio,power,S_dot_probes,"
                      "conservation_max_abs");
  size_t failures = 0;
  double worst_conservation = 0.0;
  for (const auto& row : rows) {
    if (!row.ok) {
      ++failures;
      state.notes.push_back("row N=" + std::to_string(row.n) + " gamma/t=" +
                            fmt(row.gamma_over_t) + " failed: " + row.error);
      continue;
    }
    worst_conservation = std::max(worst_conservation, row.conservation_max_abs);
    sweep_csv.line(std::to_string(row.n) + "," + fmt(row.gamma_over_t) + "," +
                   fmt(row.n_gamma_over_t) + "," + fmt(row.ratio) + "," +
                   fmt(row.power) + "," + fmt(row.s_dot) + "," +
                   fmt(row.conservation_max_abs));
  }
  sweep_csv.close();
  state.artifacts.emplace_back("ratio_sweep.csv", sweep_csv.rows());

  CsvWriter fit_csv(state.out_dir / "deficit_fit.csv",
                    "gamma_over_t,intercept,slope,r_squared,points");
  for (const auto& f : fits)
    fit_csv.line(fmt(f.gamma_over_t) + "," + fmt(f.intercept) + "," +
                 fmt(f.slope) + "," + fmt(f.r_squared) + "," +
                 std::to_string(f.points));
  fit_csv.close();
  state.artifacts.emplace_back("deficit_fit.csv", fit_csv.rows());

  state.check_le("conservation_max_abs", worst_conservation, 1e-10);
  state.check_le("row_errors", static_cast<double>(failures), 0.0);
}

void run_distributions(const RunConfig& cfg, RunState& state) {
  const WireModel model = model_from_config(cfg);
  const double mu1 = cfg.mu0 + 0.5 * cfg.delta_mu;
  const double mu2 = cfg.mu0 - 0.5 * cfg.delta_mu;

  StageTimer timer(state, "distributions");
  const FloatingProblem problem =
      make_floating_problem(model, mu1, mu2, cfg.temp0);
  const ProbeSolution sol = solve_floating_sommerfeld(problem);
  std::vector<Terminal> terminals = make_terminals(model, mu1, mu2, cfg.temp0);
  apply_probe_solution(terminals, sol);

  std::vector<int> sites = cfg.sites;
  if (sites.empty())
    sites = {1, (model.n_sites + 1) / 2, model.n_sites};

  const EnergyGrid grid =
      default_distribution_grid(model, terminals, cfg.grid_points);
  const auto curves = distribution_snapshots(model, terminals, sites, grid);
  for (const auto& c : curves) {
    const std::string name = "distributions_site" + std::to_string(c.site) + ".csv";
    CsvWriter csv(state.out_dir / name, "energy,f_local,f_probe");
    for (size_t i = 0; i < c.energy.size(); ++i)
      csv.line(fmt(c.energy[i]) + "," + fmt(c.f_local[i]) + "," +
               fmt(c.f_probe[i]));
    csv.close();
    state.artifacts.emplace_back(name, csv.rows());
  }
}

void run_entropy_shares(const RunConfig& cfg, RunState& state) {
  const WireModel model = model_from_config(cfg);
  const double mu1 = cfg.mu0 + 0.5 * cfg.delta_mu;
  const double mu2 = cfg.mu0 - 0.5 * cfg.delta_mu;

  StageTimer timer(state, "shares");
  const FloatingProblem problem =
      make_floating_problem(model, mu1, mu2, cfg.temp0);
  const ProbeSolution sol = solve_floating_sommerfeld(problem);
  const ShareTable table = probe_entropy_shares(problem, sol);

  CsvWriter csv(state.out_dir / "entropy_shares.csv", "site,injection,share");
  double share_sum = 0.0;
  for (const auto& row : table.rows) {
    csv.line(std::to_string(row.site) + "," + fmt(row.injection) + "," +
             fmt(row.share));
    if (table.defined) share_sum += row.share;
  }
  csv.close();
  state.artifacts.emplace_back("entropy_shares.csv", csv.rows());
  if (table.defined) {
    state.check_le("share_sum_deviation", std::abs(share_sum - 1.0), 1e-12);
  } else {
    state.notes.push_back("total injected entropy is zero; shares undefined");
  }
}

void run_resistance(const RunConfig& cfg, RunState& state) {
  StageTimer timer(state, "resistance");
  std::vector<ResistanceRow> rows;
  const ResistanceFitResult fit =
      resistance_scan(cfg.n_sites, cfg.t, cfg.temp0, cfg.delta_mu,
                      cfg.gamma_over_t_values, cfg.regime, &rows);

  CsvWriter csv(state.out_dir / "resistance.csv", "gamma_over_t,resistance_h_e2");
  size_t failures = 0;
  for (const auto& row : rows) {
    if (!row.ok) {
      ++failures;
      state.notes.push_back("row gamma/t=" + fmt(row.gamma_over_t) +
                            " failed: " + row.error);
      continue;
    }
    csv.line(fmt(row.gamma_over_t) + "," + fmt(row.resistance));
  }
  csv.close();
  state.artifacts.emplace_back("resistance.csv", csv.rows());

  state.notes.push_back(
      std::string("fit regime = ") +
      (fit.regime == CouplingRegime::Weak ? "weak" : "strong"));
  state.notes.push_back("fit intercept = " + fmt(fit.intercept));
  state.notes.push_back(
      (fit.regime == CouplingRegime::Weak ? "fit slope = " : "fit quad coeff = ") +
      fmt(fit.coeff));
  state.notes.push_back("fit r_squared = " + fmt(fit.r_squared));
  state.check_le("row_errors", static_cast<double>(failures), 0.0);
  if (fit.r_squared < 0.99)
    state.notes.push_back("poor fit (r_squared < 0.99): regime mismatch?");
}

void write_manifest(const RunState& state, const std::string& config_path,
                    int exit_code, double total_seconds) {
  std::ostringstream out;
  out << "# joulewire run manifest\n";
  out << "version = 0.1.0\n";
  out << "config_path = " << config_path << "\n";
  out << "threads = " << state.threads << "\n";
  out << "exit_status = " << exit_code << "\n";
  out << "\n[config]\n" << config_echo(*state.cfg);
  out << "\n[artifacts]\n";
  for (const auto& [name, rows] : state.artifacts)
    out << name << " = " << rows << " rows\n";
  out << "\n[timings]\n";
  for (const auto& [name, seconds] : state.timings)
    out << name << "_s = " << fmt(seconds) << "\n";
  out << "total_s = " << fmt(total_seconds) << "\n";
  out << "\n[checks]\n";
  for (const auto& c : state.checks)
    out << c.name << " = " << fmt(c.value) << " (limit " << fmt(c.limit)
        << ") " << (c.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& n : state.notes) out << "note: " << n << "\n";
  out << "status = " << (exit_code == kExitOk ? "ok" : "failed") << "\n";

  const fs::path final_path = state.out_dir / "manifest.txt";
  const fs::path tmp_path = state.out_dir / "manifest.txt.tmp";
  {
    std::ofstream f(tmp_path);
    if (!f) throw std::ios_base::failure("cannot open " + tmp_path.string());
    f << out.str();
    f.flush();
    if (!f) throw std::ios_base::failure("write failed: " + tmp_path.string());
  }
  fs::rename(tmp_path, final_path);
}

}  // namespace

int run_experiment(const RunConfig& cfg, const std::string& config_path,
                   const RunOptions& options, std::ostream& log) {
  const ValidationReport validation = validate_config(cfg);
  for (const auto& w : validation.warnings) log << "warning: " << w << "\n";
  if (!validation.ok) {
    for (const auto& e : validation.errors) log << "error: " << e << "\n";
    return kExitConfigError;
  }

  RunState state;
  state.cfg = &cfg;
  state.out_dir = options.output_dir_override.empty()
                      ? fs::path(cfg.output_dir)
                      : fs::path(options.output_dir_override);
  state.threads =
      options.threads_override >= 0 ? options.threads_override : cfg.threads;

  const auto start = std::chrono::steady_clock::now();
  int exit_code = kExitOk;
  try {
    std::error_code ec;
    fs::create_directories(state.out_dir, ec);
    if (ec)
      throw std::ios_base::failure("cannot create output directory " +
                                   state.out_dir.string());

    if (cfg.kind == "solve" || cfg.kind == "profiles") {
      run_solve_or_profiles(cfg, state);
    } else if (cfg.kind == "sweep-ratio") {
      run_sweep_ratio(cfg, state);
    } else if (cfg.kind == "deficit-fit") {
      run_deficit_fit(cfg, state);
    } else if (cfg.kind == "distributions") {
      run_distributions(cfg, state);
    } else if (cfg.kind == "entropy-shares") {
      run_entropy_shares(cfg, state);
    } else if (cfg.kind == "resistance") {
      run_resistance(cfg, state);
    } else {
      log << "error: unknown experiment kind '" << cfg.kind << "'\n";
      return kExitConfigError;
    }
  } catch (const std::ios_base::failure& e) {
    log << "i/o error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    state.notes.push_back(std::string("fatal: ") + e.what());
    exit_code = kExitComputeFailed;
  }

  if (exit_code == kExitOk && !state.all_checks_pass())
    exit_code = kExitComputeFailed;

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  try {
    write_manifest(state, config_path, exit_code, total);
  } catch (const std::exception& e) {
    log << "i/o error: " << e.what() << "\n";
    return kExitIoError;
  }

  if (!options.quiet) {
    for (const auto& c : state.checks)
      log << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value
          << " (limit " << c.limit << ")\n";
    for (const auto& [name, rows] : state.artifacts)
      log << "wrote " << (state.out_dir / name).string() << " (" << rows
          << " rows)\n";
    log << "status: " << (exit_code == kExitOk ? "ok" : "failed") << "\n";
  }
  return exit_code;
}

}  // namespace joulewire

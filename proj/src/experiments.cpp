#include "joulewire/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "joulewire/constants.hpp"

namespace joulewire {

void SweepSpec::validate() const {
  if (n_values.empty() || gamma_over_t.empty())
    throw std::invalid_argument("SweepSpec: n_values and gamma_over_t must be non-empty");
  if (!(t > 0.0)) throw std::invalid_argument("SweepSpec: t must be > 0");
  if (!(temp0 > 0.0)) throw std::invalid_argument("SweepSpec: temp0 must be > 0");
  if (!(delta_mu > 0.0)) throw std::invalid_argument("SweepSpec: delta_mu must be > 0");
  for (int n : n_values)
    if (n < 1) throw std::invalid_argument("SweepSpec: probe counts must be >= 1");
  for (double g : gamma_over_t)
    if (g < 0.0) throw std::invalid_argument("SweepSpec: gamma_over_t must be >= 0");
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_indexed(size_t count, int threads,
                          const std::function<void(size_t)>& fn) {
  const int workers =
      std::max(1, std::min<int>(resolve_thread_count(threads),
                                static_cast<int>(count)));
  if (workers == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

RatioRow ratio_point(const SweepSpec& spec, int n, double gamma_over_t) {
  RatioRow row;
  row.n = n;
  row.gamma_over_t = gamma_over_t;
  row.n_gamma_over_t = n * gamma_over_t;
  const double mu1 = spec.mu0 + 0.5 * spec.delta_mu;
  const double mu2 = spec.mu0 - 0.5 * spec.delta_mu;
  try {
    const WireModel model = WireModel::uniform(n, spec.t, gamma_over_t * spec.t,
                                               spec.onsite);
    if (gamma_over_t == 0.0) {
      // decoupled probes: two-terminal Landauer, no entropy injected
      const TransmissionMatrix tm = transmission_at(model, spec.mu0);
      row.power = tm.t(0, 1) * spec.delta_mu * spec.delta_mu;
      row.s_dot = 0.0;
      row.ratio = 0.0;
      row.ratio_defined = row.power != 0.0;
      row.conservation_max_abs = 0.0;
      row.ok = true;
      return row;
    }
    const FloatingProblem problem =
        make_floating_problem(model, mu1, mu2, spec.temp0);
    const ProbeSolution solution = solve_floating_sommerfeld(problem);
    const EntropyReport rep = joule_report(problem, solution);
    row.ratio = rep.ratio;
    row.ratio_defined = rep.ratio_defined;
    row.power = rep.power;
    row.s_dot = rep.probe_total_entropy;
    row.conservation_max_abs = rep.conservation_max_abs();
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<RatioRow> sweep_ratio(const SweepSpec& spec) {
  spec.validate();
  struct Point {
    int n;
    double g;
  };
  std::vector<Point> points;
  points.reserve(spec.n_values.size() * spec.gamma_over_t.size());
  for (double g : spec.gamma_over_t)
    for (int n : spec.n_values) points.push_back({n, g});

  std::vector<RatioRow> rows(points.size());
  parallel_for_indexed(points.size(), spec.threads, [&](size_t i) {
    rows[i] = ratio_point(spec, points[i].n, points[i].g);
  });
  return rows;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::vector<DeficitFit> deficit_fit(const SweepSpec& spec, int min_n,
                                    std::vector<RatioRow>* rows_out) {
  spec.validate();
  const auto [lo_it, hi_it] =
      std::minmax_element(spec.n_values.begin(), spec.n_values.end());
  if (*hi_it < 10 * *lo_it)
    throw std::invalid_argument("deficit_fit: n_values must span at least a decade");

  const std::vector<RatioRow> rows = sweep_ratio(spec);
  if (rows_out) *rows_out = rows;

  std::vector<DeficitFit> fits;
  fits.reserve(spec.gamma_over_t.size());
  for (double g : spec.gamma_over_t) {
    std::vector<double> inv_n, ratio;
    for (const auto& row : rows) {
      if (row.gamma_over_t != g || !row.ok || !row.ratio_defined) continue;
      if (row.n < min_n) continue;
      inv_n.push_back(1.0 / row.n);
      ratio.push_back(row.ratio);
    }
    if (inv_n.size() < 5)
      throw std::runtime_error("deficit_fit: insufficient points in the N >= " +
                               std::to_string(min_n) + " tail");
    const LineFit fit = fit_line(inv_n, ratio);
    fits.push_back({g, fit.intercept, fit.slope, fit.r_squared,
                    static_cast<int>(inv_n.size())});
  }
  return fits;
}

ProfileTable profiles(const WireModel& model, double mu1, double mu2,
                      double lead_temperature) {
  const FloatingProblem problem =
      make_floating_problem(model, mu1, mu2, lead_temperature);
  const ProbeSolution solution = solve_floating_sommerfeld(problem);

  ProfileTable table;
  const int n = model.n_sites;
  table.site.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) table.site[static_cast<size_t>(i)] = i + 1;
  table.mu = solution.mus;
  table.temp = solution.temps;

  // strict monotonicity along the bias direction
  const double direction = mu1 > mu2 ? -1.0 : 1.0;
  table.mu_monotone = true;
  for (int i = 0; i + 1 < n; ++i)
    if (!(direction * (table.mu(i + 1) - table.mu(i)) > 0.0)) {
      table.mu_monotone = false;
      break;
    }
  table.oscillation_flag = !table.mu_monotone;

  // plateau-tolerant count of rising->falling transitions in T
  const double tol = 1e-12 * std::max(1.0, table.temp.cwiseAbs().maxCoeff());
  int transitions = 0;
  int last_sign = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = table.temp(i + 1) - table.temp(i);
    if (std::abs(d) <= tol) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (last_sign == 1 && sign == -1) ++transitions;
    last_sign = sign;
  }
  table.interior_maxima = transitions;
  return table;
}

std::vector<DistributionCurve> distribution_snapshots(
    const WireModel& model, const std::vector<Terminal>& terminals,
    const std::vector<int>& sites_1based, const EnergyGrid& grid) {
  validate_terminals(model, terminals);
  std::vector<FermiState> probe_state(static_cast<size_t>(model.n_sites));
  for (const auto& t : terminals)
    if (t.kind == TerminalKind::Probe)
      probe_state[static_cast<size_t>(t.site)] = {t.mu, t.temperature};

  std::vector<DistributionCurve> curves;
  curves.reserve(sites_1based.size());
  for (int s : sites_1based) {
    if (s < 1 || s > model.n_sites)
      throw std::invalid_argument("distribution_snapshots: site out of range");
    DistributionCurve c;
    c.site = s;
    curves.push_back(std::move(c));
  }

  for (double energy : grid.values()) {
    const GreensBundle bundle = greens_at(model, terminals, energy);
    for (auto& c : curves) {
      c.energy.push_back(energy);
      c.f_local.push_back(local_distribution(bundle, c.site));
      c.f_probe.push_back(fermi_occupation(
          probe_state[static_cast<size_t>(c.site - 1)], energy));
    }
  }
  return curves;
}

ShareTable probe_entropy_shares(const FloatingProblem& problem,
                                const ProbeSolution& solution) {
  // Shares use the per-probe unitary entropy currents at the solved probe
  // temperatures (the quantity the per-site breakdown is defined by), not
  // the leading-order Joule form that enters the total rate.
  const int n = problem.n_probes();
  std::vector<Terminal> terminals(static_cast<size_t>(n) + 2);
  terminals[0] = {0, TerminalKind::Source, 0, problem.mu1, problem.temp1};
  terminals[1] = {1, TerminalKind::Drain, n - 1, problem.mu2, problem.temp2};
  for (int i = 0; i < n; ++i)
    terminals[static_cast<size_t>(2 + i)] = {2 + i, TerminalKind::Probe, i,
                                             solution.mus(i), solution.temps(i)};

  ShareTable table;
  table.rows.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = table.rows[static_cast<size_t>(i)];
    row.site = i + 1;
    row.injection =
        -unitary_entropy_current_sommerfeld(2 + i, problem.tm, terminals);
    table.total += row.injection;
  }
  table.defined = problem.mu1 != problem.mu2 && table.total > 0.0;
  for (auto& row : table.rows)
    row.share = table.defined
                    ? row.injection / table.total
                    : std::numeric_limits<double>::quiet_NaN();
  return table;
}

double floating_chain_resistance(const WireModel& model, double mu1,
                                 double mu2, double lead_temperature) {
  const FloatingProblem problem =
      make_floating_problem(model, mu1, mu2, lead_temperature);
  double current_into_drain;
  bool decoupled = true;
  for (double g : model.probe_coupling)
    if (g > 0.0) decoupled = false;
  if (decoupled) {
    current_into_drain = problem.tm.t(1, 0) * (mu1 - mu2);
  } else {
    const ProbeSolution solution = solve_floating_sommerfeld(problem);
    const EntropyReport rep = joule_report(problem, solution);
    current_into_drain = rep.per_terminal[1].particle;
  }
  if (!(std::abs(current_into_drain) > 0.0))
    throw std::runtime_error("floating_chain_resistance: zero current");
  return (mu1 - mu2) / current_into_drain;
}

ResistanceFitResult resistance_scan(int n_sites, double t, double temp0,
                                    double delta_mu,
                                    const std::vector<double>& gammas_over_t,
                                    CouplingRegime regime,
                                    std::vector<ResistanceRow>* rows_out) {
  if (gammas_over_t.size() < 5)
    throw std::invalid_argument("resistance_scan: need >= 5 coupling values");

  std::vector<ResistanceRow> rows(gammas_over_t.size());
  for (size_t i = 0; i < gammas_over_t.size(); ++i) {
    auto& row = rows[i];
    row.gamma_over_t = gammas_over_t[i];
    try {
      const WireModel model =
          WireModel::uniform(n_sites, t, gammas_over_t[i] * t);
      row.resistance = floating_chain_resistance(model, 0.5 * delta_mu,
                                                 -0.5 * delta_mu, temp0);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  }
  if (rows_out) *rows_out = rows;

  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    x.push_back(row.gamma_over_t);
    y.push_back(row.resistance);
  }
  if (x.size() < 5)
    throw std::runtime_error("resistance_scan: fewer than 5 usable points");

  ResistanceFitResult result;
  result.regime = regime;
  result.points = static_cast<int>(x.size());
  if (regime == CouplingRegime::Weak) {
    const LineFit fit = fit_line(x, y);
    result.intercept = fit.intercept;
    result.coeff = fit.slope;
    result.r_squared = fit.r_squared;
    return result;
  }

  // strong coupling: R = c0 + c1 x + c2 x^2, normal equations via Eigen
  Eigen::MatrixXd a(static_cast<int>(x.size()), 3);
  Eigen::VectorXd b(static_cast<int>(x.size()));
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[static_cast<size_t>(i)];
    a(i, 2) = x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    b(i) = y[static_cast<size_t>(i)];
  }
  const Eigen::VectorXd coeffs =
      a.colPivHouseholderQr().solve(b);
  result.intercept = coeffs(0);
  result.coeff = coeffs(2);
  const double ss_res = (a * coeffs - b).squaredNorm();
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  result.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return result;
}

}  // namespace joulewire

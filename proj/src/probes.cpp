#include "joulewire/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "joulewire/constants.hpp"
#include "joulewire/fermi.hpp"

namespace joulewire {

FloatingProblem make_floating_problem(const WireModel& model, double mu1,
                                      double mu2, double lead_temperature) {
  FloatingProblem p;
  p.mu1 = mu1;
  p.mu2 = mu2;
  p.temp1 = lead_temperature;
  p.temp2 = lead_temperature;
  p.tm = transmission_at(model, 0.5 * (mu1 + mu2));
  return p;
}

namespace {

// Shared system matrix of the potential and squared-temperature systems.
Eigen::MatrixXd probe_system_matrix(const FloatingProblem& problem) {
  const int n = problem.n_probes();
  const auto& t = problem.tm.t;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int pi = 2 + i;
    double row_sum = 0.0;
    for (int a = 0; a < t.cols(); ++a) {
      if (a == pi) continue;
      row_sum += t(pi, a);
    }
    m(i, i) = row_sum;
    for (int j = 0; j < n; ++j)
      if (j != i) m(i, j) = -t(pi, 2 + j);
    if (!(row_sum > 1e-300))
      throw std::runtime_error("solve_potentials: probe " +
                               std::to_string(i + 1) +
                               " is disconnected (zero total transmission)");
  }
  return m;
}

}  // namespace

Eigen::VectorXd solve_potentials(const FloatingProblem& problem) {
  const int n = problem.n_probes();
  const auto& t = problem.tm.t;
  const Eigen::MatrixXd m = probe_system_matrix(problem);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i)
    b(i) = t(2 + i, 0) * problem.mu1 + t(2 + i, 1) * problem.mu2;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::VectorXd mus = lu.solve(b);
  if (!mus.allFinite())
    throw std::runtime_error("solve_potentials: singular probe system");
  return mus;
}

Eigen::VectorXd solve_temperatures(const FloatingProblem& problem,
                                   const Eigen::VectorXd& mus) {
  const int n = problem.n_probes();
  const auto& t = problem.tm.t;
  const Eigen::MatrixXd m = probe_system_matrix(problem);

  // Heat balance in x = T_P^2:
  //   sum_a T_{P_n a} [ (mu_a - mu_{P_n})^2/2 + (pi^2 k^2/6)(T_a^2 - x_n) ] = 0
  Eigen::VectorXd b(n);
  const double c = 3.0 / (pi * pi * k_boltzmann * k_boltzmann);
  for (int i = 0; i < n; ++i) {
    const int pi_ = 2 + i;
    double quad = t(pi_, 0) * (problem.mu1 - mus(i)) * (problem.mu1 - mus(i)) +
                  t(pi_, 1) * (problem.mu2 - mus(i)) * (problem.mu2 - mus(i));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = mus(j) - mus(i);
      quad += t(pi_, 2 + j) * d * d;
    }
    b(i) = t(pi_, 0) * problem.temp1 * problem.temp1 +
           t(pi_, 1) * problem.temp2 * problem.temp2 + c * quad;
  }
  const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(m).solve(b);
  Eigen::VectorXd temps(n);
  for (int i = 0; i < n; ++i) {
    if (!(x(i) > 0.0))
      throw std::runtime_error(
          "solve_temperatures: non-positive squared temperature on probe " +
          std::to_string(i + 1) + " (Sommerfeld regime violated)");
    temps(i) = std::sqrt(x(i));
  }
  return temps;
}

namespace {

// Residuals of the linearized conditions, for reporting.
void sommerfeld_residuals(const FloatingProblem& problem,
                          const Eigen::VectorXd& mus,
                          const Eigen::VectorXd& temps,
                          Eigen::VectorXd& r_particle,
                          Eigen::VectorXd& r_heat) {
  const int n = problem.n_probes();
  const auto& t = problem.tm.t;
  r_particle.resize(n);
  r_heat.resize(n);
  auto pair_terms = [&](int i, double mu_a, double temp_a, int a, double& r0,
                        double& r1) {
    const double tv = t(2 + i, a);
    const double dmu = mu_a - mus(i);
    r0 += tv * dmu;
    r1 += tv * (0.5 * dmu * dmu +
                pi2k2_over_6 * (temp_a * temp_a - temps(i) * temps(i)));
  };
  for (int i = 0; i < n; ++i) {
    double r0 = 0.0, r1 = 0.0;
    pair_terms(i, problem.mu1, problem.temp1, 0, r0, r1);
    pair_terms(i, problem.mu2, problem.temp2, 1, r0, r1);
    for (int j = 0; j < n; ++j)
      if (j != i) pair_terms(i, mus(j), temps(j), 2 + j, r0, r1);
    r_particle(i) = r0;
    r_heat(i) = r1;
  }
}

}  // namespace

ProbeSolution solve_floating_sommerfeld(const FloatingProblem& problem) {
  ProbeSolution s;
  s.method = ProbeMethod::SommerfeldLinear;
  s.mus = solve_potentials(problem);
  s.temps = solve_temperatures(problem, s.mus);
  sommerfeld_residuals(problem, s.mus, s.temps, s.residual_particle,
                       s.residual_heat);
  return s;
}

void apply_probe_solution(std::vector<Terminal>& terminals,
                          const ProbeSolution& solution) {
  int k = 0;
  for (auto& t : terminals) {
    if (t.kind != TerminalKind::Probe) continue;
    t.mu = solution.mus(k);
    t.temperature = solution.temps(k);
    ++k;
  }
  if (k != solution.mus.size())
    throw std::invalid_argument("apply_probe_solution: probe count mismatch");
}

namespace {

struct ExactResidualContext {
  const WireModel* model;
  double mu1, mu2, temp0;
  QuadratureSettings quadrature;
};

// I^(0) and I^(1) into every probe, by one shared adaptive quadrature over
// the exact energy-dependent transmissions.
Eigen::VectorXd exact_residuals(const ExactResidualContext& ctx,
                                const Eigen::VectorXd& mus,
                                const Eigen::VectorXd& temps) {
  const WireModel& model = *ctx.model;
  const int n = model.n_sites;
  const int m = model.terminal_count();

  std::vector<FermiState> states(static_cast<size_t>(m));
  states[0] = {ctx.mu1, ctx.temp0};
  states[1] = {ctx.mu2, ctx.temp0};
  double t_max = ctx.temp0;
  for (int i = 0; i < n; ++i) {
    states[static_cast<size_t>(2 + i)] = {mus(i), temps(i)};
    t_max = std::max(t_max, temps(i));
  }

  const double mu0 = 0.5 * (ctx.mu1 + ctx.mu2);
  const double dmu = std::abs(ctx.mu1 - ctx.mu2);
  const double window = std::max(30.0 * k_boltzmann * t_max, 6.0 * dmu);
  const double band = 2.0 * model.hopping * (1.0 - 1e-9);
  const double lo = std::max(mu0 - window, model.band_center - band);
  const double hi = std::min(mu0 + window, model.band_center + band);

  auto integrand = [&](double energy) {
    const TransmissionMatrix tm = transmission_at(model, energy);
    Eigen::VectorXd f(m);
    for (int a = 0; a < m; ++a)
      f(a) = fermi_occupation(states[static_cast<size_t>(a)], energy);
    Eigen::VectorXd out(2 * n);
    for (int i = 0; i < n; ++i) {
      const int pi_ = 2 + i;
      double flux = 0.0;
      for (int a = 0; a < m; ++a) {
        if (a == pi_) continue;
        flux += tm.t(pi_, a) * (f(a) - f(pi_));
      }
      out(i) = flux;
      out(n + i) = (energy - mus(i)) * flux;
    }
    return out;
  };
  return integrate_adaptive(integrand, lo, hi, 2 * n, ctx.quadrature);
}

}  // namespace

ProbeSolution solve_floating_exact(const WireModel& model, double mu1,
                                   double mu2, double lead_temperature,
                                   const ExactSolveSettings& settings) {
  model.validate();
  const int n = model.n_sites;
  ExactResidualContext ctx{&model, mu1, mu2, lead_temperature,
                           settings.quadrature};

  ProbeSolution out;
  out.method = ProbeMethod::ExactNonlinear;

  if (mu1 == mu2) {
    // equilibrium is an exact fixed point
    out.mus = Eigen::VectorXd::Constant(n, mu1);
    out.temps = Eigen::VectorXd::Constant(n, lead_temperature);
    out.residual_particle = Eigen::VectorXd::Zero(n);
    out.residual_heat = Eigen::VectorXd::Zero(n);
    return out;
  }

  const FloatingProblem lin = make_floating_problem(model, mu1, mu2,
                                                    lead_temperature);
  Eigen::VectorXd mus = solve_potentials(lin);
  Eigen::VectorXd temps = solve_temperatures(lin, mus);

  Eigen::VectorXd r = exact_residuals(ctx, mus, temps);
  double r_norm = r.cwiseAbs().maxCoeff();

  const double mu_scale = std::max(std::abs(mu1 - mu2),
                                   k_boltzmann * lead_temperature);
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    if (r_norm <= settings.residual_tol) break;

    // forward-difference Jacobian in (mu_P, T_P)
    Eigen::MatrixXd jac(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) {
      Eigen::VectorXd mus_j = mus;
      Eigen::VectorXd temps_j = temps;
      double h;
      if (j < n) {
        h = 1e-6 * mu_scale;
        mus_j(j) += h;
      } else {
        h = 1e-6 * std::max(temps(j - n), lead_temperature);
        temps_j(j - n) += h;
      }
      jac.col(j) = (exact_residuals(ctx, mus_j, temps_j) - r) / h;
    }

    Eigen::VectorXd step =
        Eigen::PartialPivLU<Eigen::MatrixXd>(jac).solve(-r);
    if (!step.allFinite())
      throw std::runtime_error("solve_floating_exact: singular Jacobian");

    // damped update: halve until the residual norm decreases
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= settings.max_step_halvings; ++halving) {
      Eigen::VectorXd mus_try = mus + scale * step.head(n);
      Eigen::VectorXd temps_try = temps + scale * step.tail(n);
      if ((temps_try.array() > 0.0).all()) {
        Eigen::VectorXd r_try = exact_residuals(ctx, mus_try, temps_try);
        const double norm_try = r_try.cwiseAbs().maxCoeff();
        if (norm_try < r_norm || norm_try <= settings.residual_tol) {
          mus = std::move(mus_try);
          temps = std::move(temps_try);
          r = std::move(r_try);
          r_norm = norm_try;
          accepted = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error(
          "solve_floating_exact: step damping failed at residual norm " +
          std::to_string(r_norm));
  }
  if (r_norm > settings.residual_tol)
    throw std::runtime_error(
        "solve_floating_exact: no convergence, residual norm " +
        std::to_string(r_norm));

  out.mus = mus;
  out.temps = temps;
  out.residual_particle = r.head(n);
  out.residual_heat = r.tail(n);
  return out;
}

}  // namespace joulewire

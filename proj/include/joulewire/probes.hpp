#ifndef JOULEWIRE_PROBES_HPP
#define JOULEWIRE_PROBES_HPP

#include <Eigen/Dense>
#include <vector>

#include "joulewire/negf.hpp"
#include "joulewire/quadrature.hpp"

namespace joulewire {

// Inputs of the floating-probe solve: transmissions at the mean lead
// potential plus the lead states. Lead temperatures are kept separate even
// though the usual setup has them equal.
struct FloatingProblem {
  TransmissionMatrix tm;  // evaluated at mu0 = (mu1 + mu2)/2
  double mu1 = 0.0;
  double mu2 = 0.0;
  double temp1 = 0.0;
  double temp2 = 0.0;

  int n_probes() const { return static_cast<int>(tm.gamma.size()) - 2; }
  double mu0() const { return 0.5 * (mu1 + mu2); }
};

FloatingProblem make_floating_problem(const WireModel& model, double mu1,
                                      double mu2, double lead_temperature);

enum class ProbeMethod { SommerfeldLinear, ExactNonlinear };

struct ProbeSolution {
  Eigen::VectorXd mus;    // eV
  Eigen::VectorXd temps;  // K
  Eigen::VectorXd residual_particle;
  Eigen::VectorXd residual_heat;
  ProbeMethod method = ProbeMethod::SommerfeldLinear;
};

// Zero particle current into every probe, linearized at mu0: solves
// M mu_P = b with M_nn = sum_{a != P_n} T_{P_n a}, M_nm = -T_{P_n P_m}.
// Throws when a probe row is (numerically) disconnected.
Eigen::VectorXd solve_potentials(const FloatingProblem& problem);

// Zero heat current into every probe given solved potentials; linear in
// T_{P_n}^2. Throws if any squared temperature comes out non-positive.
Eigen::VectorXd solve_temperatures(const FloatingProblem& problem,
                                   const Eigen::VectorXd& mus);

ProbeSolution solve_floating_sommerfeld(const FloatingProblem& problem);

// Writes the solved probe states back onto the probe terminals.
void apply_probe_solution(std::vector<Terminal>& terminals,
                          const ProbeSolution& solution);

struct ExactSolveSettings {
  QuadratureSettings quadrature{};
  double residual_tol = 1e-10;  // on max |I^(0)|, |I^(1)| in natural units
  int max_iterations = 60;
  int max_step_halvings = 20;
};

// Exact floating conditions: damped Newton on the 2N residuals
// (I^(0)_{P_n}, I^(1)_{P_n}) with full energy dependence of T_ab(e) under
// adaptive quadrature. Intended for small N; cost grows quickly.
ProbeSolution solve_floating_exact(const WireModel& model, double mu1,
                                   double mu2, double lead_temperature,
                                   const ExactSolveSettings& settings = {});

}  // namespace joulewire

#endif

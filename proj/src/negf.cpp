#include "joulewire/negf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "joulewire/constants.hpp"
#include "joulewire/fermi.hpp"

namespace joulewire {

using std::complex;

std::complex<double> surface_green(double energy, double hopping,
                                   double band_center) {
  const double x = energy - band_center;
  const double half_width = 2.0 * hopping;
  if (!(std::abs(x) < half_width))
    throw std::domain_error("surface_green: energy outside the lead band");
  // in-band closed form; retarded root has Im g_s < 0
  const double root = std::sqrt(half_width * half_width - x * x);
  return complex<double>(x, -root) / (2.0 * hopping * hopping);
}

double lead_broadening(double energy, double hopping, double band_center) {
  const double x = energy - band_center;
  const double half_width = 2.0 * hopping;
  if (!(std::abs(x) < half_width))
    throw std::domain_error("lead_broadening: energy outside the lead band");
  return std::sqrt(half_width * half_width - x * x);
}

SelfEnergy build_self_energy(const WireModel& model, double energy) {
  const int n = model.n_sites;
  SelfEnergy se;
  se.energy = energy;
  se.sigma_retarded = Eigen::MatrixXcd::Zero(n, n);
  se.gamma.resize(static_cast<size_t>(n) + 2);
  se.site.resize(static_cast<size_t>(n) + 2);

  const complex<double> sigma_lead =
      model.hopping * model.hopping *
      surface_green(energy, model.hopping, model.band_center);
  se.sigma_retarded(0, 0) += sigma_lead;
  se.sigma_retarded(n - 1, n - 1) += sigma_lead;

  const double gamma_lead = -2.0 * sigma_lead.imag();
  se.gamma[0] = gamma_lead;
  se.site[0] = 0;
  se.gamma[1] = gamma_lead;
  se.site[1] = n - 1;

  for (int k = 0; k < n; ++k) {
    const double gp = model.probe_coupling[static_cast<size_t>(k)];
    se.sigma_retarded(k, k) += complex<double>(0.0, -0.5 * gp);
    se.gamma[static_cast<size_t>(2 + k)] = gp;
    se.site[static_cast<size_t>(2 + k)] = k;
  }
  return se;
}

namespace {

Eigen::MatrixXcd chain_hamiltonian(const WireModel& model) {
  const int n = model.n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = model.onsite[static_cast<size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = model.hopping;
    h(i + 1, i) = model.hopping;
  }
  return h;
}

Eigen::MatrixXcd retarded_green(const WireModel& model, const SelfEnergy& se) {
  const int n = model.n_sites;
  Eigen::MatrixXcd a = -chain_hamiltonian(model) - se.sigma_retarded;
  for (int i = 0; i < n; ++i) a(i, i) += se.energy;
  Eigen::MatrixXcd g =
      Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(Eigen::MatrixXcd::Identity(n, n));
  if (!g.allFinite())
    throw std::runtime_error("greens_at: singular Dyson matrix at energy " +
                             std::to_string(se.energy));
  return g;
}

}  // namespace

GreensBundle greens_at(const WireModel& model,
                       const std::vector<Terminal>& terminals, double energy) {
  validate_terminals(model, terminals);
  const int n = model.n_sites;
  const SelfEnergy se = build_self_energy(model, energy);

  GreensBundle b;
  b.energy = energy;
  b.g_retarded = retarded_green(model, se);
  b.g_advanced = b.g_retarded.adjoint();
  b.spectral = (complex<double>(0.0, 1.0) / (2.0 * pi)) *
               (b.g_retarded - b.g_advanced);

  // Sigma^< = i sum_a Gamma^a f_a; every Gamma^a is diagonal rank-one here.
  Eigen::VectorXcd sigma_lesser = Eigen::VectorXcd::Zero(n);
  for (const auto& t : terminals) {
    const double f = fermi_occupation({t.mu, t.temperature}, energy);
    sigma_lesser(t.site) +=
        complex<double>(0.0, se.gamma[static_cast<size_t>(t.id)] * f);
  }
  b.g_lesser = b.g_retarded * sigma_lesser.asDiagonal() * b.g_advanced;
  return b;
}

TransmissionMatrix transmission(const Eigen::MatrixXcd& g_retarded,
                                const SelfEnergy& se) {
  const int m = static_cast<int>(se.gamma.size());
  TransmissionMatrix tm;
  tm.energy = se.energy;
  tm.gamma = se.gamma;
  tm.site = se.site;
  tm.t = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const complex<double> g =
          g_retarded(se.site[static_cast<size_t>(a)], se.site[static_cast<size_t>(b)]);
      const double val = tm.gamma[static_cast<size_t>(a)] *
                         tm.gamma[static_cast<size_t>(b)] * std::norm(g);
      tm.t(a, b) = val;
      tm.t(b, a) = val;  // reciprocity is exact for a real Hamiltonian
    }
  }
  return tm;
}

TransmissionMatrix transmission_at(const WireModel& model, double energy) {
  const SelfEnergy se = build_self_energy(model, energy);
  return transmission(retarded_green(model, se), se);
}

double local_distribution(const GreensBundle& bundle, int site_1based) {
  const int n = static_cast<int>(bundle.spectral.rows());
  if (site_1based < 1 || site_1based > n)
    throw std::invalid_argument("local_distribution: site out of range");
  const int i = site_1based - 1;
  const double g_n = bundle.spectral(i, i).real();
  const double scale = bundle.spectral.cwiseAbs().maxCoeff();
  if (!(g_n > 1e-14 * std::max(scale, 1e-300)))
    throw std::runtime_error(
        "local_distribution: vanishing local spectral weight on site " +
        std::to_string(site_1based));
  const double f = bundle.g_lesser(i, i).imag() / (2.0 * pi * g_n);
  // clamp rounding spill outside [0,1] in the far tails
  return std::min(1.0, std::max(0.0, f));
}

}  // namespace joulewire

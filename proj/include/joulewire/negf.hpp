#ifndef JOULEWIRE_NEGF_HPP
#define JOULEWIRE_NEGF_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "joulewire/model.hpp"

namespace joulewire {

// Retarded surface Green's function of a semi-infinite nearest-neighbor chain,
// evaluated in-band (|energy - band_center| < 2*hopping). Retarded branch,
// Im g_s < 0. Throws std::domain_error out of band.
std::complex<double> surface_green(double energy, double hopping,
                                   double band_center = 0.0);

// Lead broadening Gamma(energy) = -2 Im(t^2 g_s) = sqrt(4 t^2 - x^2).
double lead_broadening(double energy, double hopping, double band_center = 0.0);

// Retarded self-energy of leads + probes, plus the per-terminal broadening
// scalars. All terminal Gammas are rank-one on the attachment site.
struct SelfEnergy {
  double energy = 0.0;
  Eigen::MatrixXcd sigma_retarded;  // N x N, diagonal
  std::vector<double> gamma;        // per terminal, index as Terminal::id
  std::vector<int> site;            // per terminal attachment site (0-based)
};

SelfEnergy build_self_energy(const WireModel& model, double energy);

// Retarded/advanced/lesser Green's functions and spectral function at a
// single energy.
struct GreensBundle {
  double energy = 0.0;
  Eigen::MatrixXcd g_retarded;
  Eigen::MatrixXcd g_advanced;
  Eigen::MatrixXcd g_lesser;
  Eigen::MatrixXcd spectral;
};

GreensBundle greens_at(const WireModel& model,
                       const std::vector<Terminal>& terminals, double energy);

// T_ab = Tr[Gamma^a G^R Gamma^b G^A] over all M = N+2 terminals. Diagonal
// entries are stored as 0; they never enter current sums.
struct TransmissionMatrix {
  double energy = 0.0;
  Eigen::MatrixXd t;          // M x M, symmetric, t(a,a) = 0
  std::vector<double> gamma;  // per-terminal broadening at this energy
  std::vector<int> site;
};

TransmissionMatrix transmission(const Eigen::MatrixXcd& g_retarded,
                                const SelfEnergy& se);

// Convenience: G^R + transmissions at one energy without occupations.
TransmissionMatrix transmission_at(const WireModel& model, double energy);

// Local non-equilibrium distribution f_n sampled on one site (1-based):
// f_n = Im G^<_nn / (2 pi A_nn). Throws on vanishing local spectral weight.
double local_distribution(const GreensBundle& bundle, int site_1based);

}  // namespace joulewire

#endif

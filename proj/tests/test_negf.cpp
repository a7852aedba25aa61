#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "joulewire/constants.hpp"
#include "joulewire/fermi.hpp"
#include "joulewire/negf.hpp"

using namespace joulewire;
using std::complex;

namespace {

// Scalar Dyson oracle for the single-site chain: everything is closed form.
complex<double> single_site_green(double energy, double t, double gamma_p,
                                  double onsite) {
  const complex<double> sigma =
      2.0 * t * t * surface_green(energy, t) +
      complex<double>(0.0, -0.5 * gamma_p);
  return 1.0 / (energy - onsite - sigma);
}

}  // namespace

TEST_CASE("surface Green's function closed form") {
  const double t = 2.7;
  const complex<double> g0 = surface_green(0.0, t);
  CHECK(std::abs(g0 - complex<double>(0.0, -1.0 / t)) < 1e-14);

  // retarded branch and self-consistency g = 1/(e - t^2 g) across the band
  for (int i = 1; i < 101; ++i) {
    const double e = -2.0 * t + 4.0 * t * i / 101.0;
    const complex<double> g = surface_green(e, t);
    CHECK(g.imag() < 0.0);
    const complex<double> residual = g - 1.0 / (e - t * t * g);
    CHECK(std::abs(residual) <= 1e-12 * std::max(1.0, std::abs(g)));
  }
}

TEST_CASE("lead broadening") {
  const double t = 2.7;
  CHECK(lead_broadening(0.0, t) == doctest::Approx(2.0 * t).epsilon(1e-14));
  // vanishes toward the band edge
  const double near_edge = 2.0 * t * (1.0 - 1e-6);
  CHECK(lead_broadening(near_edge, t) > 0.0);
  CHECK(lead_broadening(near_edge, t) < 0.01 * t);
  CHECK_THROWS_AS((void)surface_green(2.0 * t, t), std::domain_error);
  CHECK_THROWS_AS((void)surface_green(-2.1 * t, t), std::domain_error);
}

TEST_CASE("self-energy assembly") {
  const double t = 2.7, gamma_p = 0.9;

  SUBCASE("single site collects both leads and the probe") {
    const WireModel m = WireModel::uniform(1, t, gamma_p);
    const SelfEnergy se = build_self_energy(m, 0.0);
    double gamma_bar = 0.0;
    for (double g : se.gamma) gamma_bar += 0.5 * g;
    CHECK(gamma_bar == doctest::Approx(2.0 * t + 0.5 * gamma_p).epsilon(1e-14));
    CHECK(se.sigma_retarded(0, 0).imag() ==
          doctest::Approx(-(2.0 * t + 0.5 * gamma_p)).epsilon(1e-14));
  }

  SUBCASE("decoupled probes have zero broadening") {
    const WireModel m = WireModel::uniform(4, t, 0.0);
    const SelfEnergy se = build_self_energy(m, 0.3);
    for (int k = 0; k < 4; ++k) CHECK(se.gamma[static_cast<size_t>(2 + k)] == 0.0);
  }

  SUBCASE("N=3 at the band center") {
    const WireModel m = WireModel::uniform(3, t, gamma_p);
    const SelfEnergy se = build_self_energy(m, 0.0);
    CHECK(se.sigma_retarded(0, 0) ==
          complex<double>(0.0, -t - 0.5 * gamma_p));
    CHECK(se.sigma_retarded(1, 1) == complex<double>(0.0, -0.5 * gamma_p));
    CHECK(se.sigma_retarded(2, 2) ==
          complex<double>(0.0, -t - 0.5 * gamma_p));
    CHECK(se.sigma_retarded(0, 1) == complex<double>(0.0, 0.0));
  }
}

TEST_CASE("Green's function bundle") {
  const double t = 2.7;

  SUBCASE("single-site magnitude 1/Gamma_bar") {
    const double gamma_p = 1.3;
    const WireModel m = WireModel::uniform(1, t, gamma_p);
    const auto terminals = make_terminals(m, 0.0, 0.0, 300.0);
    const GreensBundle b = greens_at(m, terminals, 0.0);
    const double gamma_bar = 2.0 * t + 0.5 * gamma_p;
    CHECK(std::abs(b.g_retarded(0, 0)) ==
          doctest::Approx(1.0 / gamma_bar).epsilon(1e-13));
  }

  SUBCASE("advanced is the adjoint, lesser is anti-Hermitian") {
    const WireModel m = WireModel::uniform(5, t, 0.8, 0.2);
    const auto terminals = make_terminals(m, 0.05, -0.05, 150.0);
    const GreensBundle b = greens_at(m, terminals, 0.4);
    CHECK((b.g_advanced - b.g_retarded.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((b.g_lesser + b.g_lesser.adjoint()).cwiseAbs().maxCoeff() <=
          1e-14 * b.g_lesser.cwiseAbs().maxCoeff());
    // occupation-like diagonal: 0 <= Im G^< / 2pi <= A_nn
    for (int i = 0; i < 5; ++i) {
      const double occ = b.g_lesser(i, i).imag() / (2.0 * pi);
      CHECK(occ >= -1e-14);
      CHECK(occ <= b.spectral(i, i).real() * (1.0 + 1e-12));
    }
  }

  SUBCASE("equilibrium fluctuation-dissipation on a grid") {
    const WireModel m = WireModel::uniform(5, t, 0.7, -0.1);
    const double mu_eq = 0.12, temp_eq = 120.0;
    const auto terminals = make_terminals(m, mu_eq, mu_eq, temp_eq);
    for (int i = 1; i < 101; ++i) {
      const double e = -2.0 * t + 4.0 * t * i / 101.0;
      const GreensBundle b = greens_at(m, terminals, e);
      const double f = fermi_occupation({mu_eq, temp_eq}, e);
      const Eigen::MatrixXcd expected =
          complex<double>(0.0, 2.0 * pi) * b.spectral * f;
      const double scale = b.g_lesser.cwiseAbs().maxCoeff();
      if (scale == 0.0) continue;  // deep in a tail
      CHECK((b.g_lesser - expected).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }

  SUBCASE("spectral positivity over random models") {
    std::mt19937 rng(7251);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::uniform_real_distribution<double> g_dist(-3.0, 1.0);  // log10 gamma/t
    std::uniform_real_distribution<double> e_dist(-1.9, 1.9);
    for (int trial = 0; trial < 25; ++trial) {
      const int n = n_dist(rng);
      const double gamma_p = t * std::pow(10.0, g_dist(rng));
      const WireModel m = WireModel::uniform(n, t, gamma_p, 0.1);
      const auto terminals = make_terminals(m, 0.1, -0.1, 200.0);
      const GreensBundle b = greens_at(m, terminals, t * e_dist(rng));
      const Eigen::MatrixXcd a_sym =
          0.5 * (b.spectral + b.spectral.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a_sym);
      CHECK(es.eigenvalues().minCoeff() >=
            -1e-12 * b.spectral.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("transmission matrix") {
  const double t = 2.7;

  SUBCASE("Lorentzian closed forms for the single site") {
    for (double ratio : {0.1, 1.0, 10.0}) {
      const double gamma_p = ratio * t;
      const WireModel m = WireModel::uniform(1, t, gamma_p);
      const TransmissionMatrix tm = transmission_at(m, 0.0);
      const double gamma_bar = 2.0 * t + 0.5 * gamma_p;
      CHECK(tm.t(0, 1) ==
            doctest::Approx(4.0 * t * t / (gamma_bar * gamma_bar))
                .epsilon(1e-12));
      CHECK(tm.t(0, 2) ==
            doctest::Approx(2.0 * t * gamma_p / (gamma_bar * gamma_bar))
                .epsilon(1e-12));

      // off-center energies against the scalar Dyson oracle
      for (double e : {-1.5, 0.7, 2.9}) {
        const TransmissionMatrix tme = transmission_at(m, e);
        const double g2 = std::norm(single_site_green(e, t, gamma_p, 0.0));
        const double gl = lead_broadening(e, t);
        CHECK(tme.t(0, 1) == doctest::Approx(gl * gl * g2).epsilon(1e-12));
        CHECK(tme.t(0, 2) == doctest::Approx(gl * gamma_p * g2).epsilon(1e-12));
      }
    }
  }

  SUBCASE("clean chain transmits perfectly in-band") {
    for (int n : {1, 7}) {
      const WireModel m = WireModel::uniform(n, t, 0.0);
      for (double e : {0.0, -1.2, 2.0}) {
        const TransmissionMatrix tm = transmission_at(m, e);
        CHECK(tm.t(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("reciprocity, sum rule, positivity over random models") {
    std::mt19937 rng(90210);
    std::uniform_int_distribution<int> n_dist(1, 14);
    std::uniform_real_distribution<double> g_dist(-2.0, 1.0);
    std::uniform_real_distribution<double> e_dist(-1.9, 1.9);
    for (int trial = 0; trial < 25; ++trial) {
      const int n = n_dist(rng);
      const WireModel m =
          WireModel::uniform(n, t, t * std::pow(10.0, g_dist(rng)), -0.2);
      const TransmissionMatrix tm = transmission_at(m, t * e_dist(rng));
      const int mm = n + 2;
      for (int a = 0; a < mm; ++a) {
        CHECK(tm.t(a, a) == 0.0);
        double row = 0.0, col = 0.0;
        for (int b = 0; b < mm; ++b) {
          CHECK(tm.t(a, b) >= 0.0);
          CHECK(std::abs(tm.t(a, b) - tm.t(b, a)) <=
                1e-10 * std::max(1.0, tm.t(a, b)));
          row += tm.t(a, b);
          col += tm.t(b, a);
        }
        CHECK(std::abs(row - col) <= 1e-10 * std::max(1.0, row));
      }
    }
  }
}

TEST_CASE("local distribution") {
  const double t = 2.7;
  const WireModel m = WireModel::uniform(5, t, 0.9);

  SUBCASE("equilibrium recovers the reservoir Fermi function") {
    const double mu_eq = 0.07, temp_eq = 180.0;
    const auto terminals = make_terminals(m, mu_eq, mu_eq, temp_eq);
    const GreensBundle at_mu = greens_at(m, terminals, mu_eq);
    for (int site = 1; site <= 5; ++site)
      CHECK(local_distribution(at_mu, site) ==
            doctest::Approx(0.5).epsilon(1e-12));
    for (double e : {-0.4, 0.3, 1.1}) {
      const GreensBundle b = greens_at(m, terminals, e);
      const double f_eq = fermi_occupation({mu_eq, temp_eq}, e);
      for (int site = 1; site <= 5; ++site)
        CHECK(local_distribution(b, site) ==
              doctest::Approx(f_eq).epsilon(1e-11));
    }
  }

  SUBCASE("biased values stay in [0,1]") {
    auto terminals = make_terminals(m, 0.2, -0.2, 100.0);
    for (double e : {-0.5, -0.1, 0.0, 0.1, 0.5}) {
      const GreensBundle b = greens_at(m, terminals, e);
      for (int site = 1; site <= 5; ++site) {
        const double f = local_distribution(b, site);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
      }
    }
  }

  SUBCASE("site range is checked") {
    const auto terminals = make_terminals(m, 0.0, 0.0, 100.0);
    const GreensBundle b = greens_at(m, terminals, 0.0);
    CHECK_THROWS_AS((void)local_distribution(b, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)local_distribution(b, 6), std::invalid_argument);
  }
}

TEST_CASE("model and terminal validation") {
  CHECK_THROWS_AS(WireModel::uniform(0, 2.7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WireModel::uniform(3, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WireModel::uniform(3, 2.7, -0.5), std::invalid_argument);
  // on-site level outside the band
  CHECK_THROWS_AS(WireModel::uniform(3, 2.7, 1.0, 6.0), std::invalid_argument);

  const WireModel m = WireModel::uniform(3, 2.7, 1.0);
  auto terminals = make_terminals(m, 0.1, -0.1, 300.0);
  terminals[0].site = 1;  // source moved off site 1
  CHECK_THROWS_AS(validate_terminals(m, terminals), std::invalid_argument);
}

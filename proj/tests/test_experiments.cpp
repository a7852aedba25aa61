#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "joulewire/constants.hpp"
#include "joulewire/experiments.hpp"

using namespace joulewire;

TEST_CASE("line fit recovers exact synthetic data") {
  // ratio = 1 - c/N sampled without noise
  const double c = 3.7;
  std::vector<double> x, y;
  for (int n = 20; n <= 100; n += 5) {
    x.push_back(1.0 / n);
    y.push_back(1.0 - c / n);
  }
  const LineFit fit = fit_line(x, y);
  CHECK(std::abs(fit.intercept - 1.0) <= 1e-10);
  CHECK(std::abs(fit.slope + c) <= 1e-10);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)fit_line({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("ratio sweep") {
  SweepSpec spec;
  spec.t = 2.7;
  spec.temp0 = 232.0;
  spec.delta_mu = 0.2;
  spec.n_values = {1, 2, 4, 8, 16, 32};
  spec.gamma_over_t = {0.0, 0.5, 2.0};
  spec.threads = 2;
  const auto rows = sweep_ratio(spec);
  REQUIRE(rows.size() == 18);

  std::map<double, std::vector<double>> by_gamma;
  for (const auto& row : rows) {
    REQUIRE(row.ok);
    CHECK(row.conservation_max_abs <= 1e-10);
    CHECK(row.n_gamma_over_t ==
          doctest::Approx(row.n * row.gamma_over_t).epsilon(1e-14));
    if (row.gamma_over_t == 0.0) {
      // decoupled probes: current flows, nothing is injected
      CHECK(row.ratio == 0.0);
      CHECK(row.power > 0.0);
      CHECK(row.s_dot == 0.0);
    } else {
      CHECK(row.power > 0.0);
      if (row.n == 1) CHECK(row.ratio <= 0.5);
      by_gamma[row.gamma_over_t].push_back(row.ratio);
    }
  }
  // monotone non-decreasing in N at fixed coupling
  for (const auto& [gamma, ratios] : by_gamma) {
    (void)gamma;
    for (size_t i = 0; i + 1 < ratios.size(); ++i)
      CHECK(ratios[i + 1] >= ratios[i] - 1e-12);
  }

  SUBCASE("deterministic across worker counts") {
    SweepSpec serial = spec;
    serial.threads = 1;
    const auto rows1 = sweep_ratio(serial);
    REQUIRE(rows1.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].ratio == rows1[i].ratio);
      CHECK(rows[i].power == rows1[i].power);
      CHECK(rows[i].s_dot == rows1[i].s_dot);
    }
  }

  SUBCASE("joint scaling collapse at equal N gamma/t") {
    SweepSpec pair = spec;
    pair.n_values = {4, 16};
    pair.gamma_over_t = {0.5, 2.0};
    const auto prows = sweep_ratio(pair);
    double r_16_05 = 0.0, r_4_2 = 0.0;
    for (const auto& row : prows) {
      if (row.n == 16 && row.gamma_over_t == 0.5) r_16_05 = row.ratio;
      if (row.n == 4 && row.gamma_over_t == 2.0) r_4_2 = row.ratio;
    }
    CHECK(std::abs(r_16_05 - r_4_2) <= 0.05);
  }
}

TEST_CASE("deficit fit demands a decade of probe counts") {
  SweepSpec spec;
  spec.n_values = {20, 30, 40};
  spec.gamma_over_t = {1.0};
  spec.temp0 = 100.0;
  spec.delta_mu = 0.1;
  CHECK_THROWS_AS((void)deficit_fit(spec), std::invalid_argument);
}

TEST_CASE("deficit fit approaches intercept one") {
  SweepSpec spec;
  spec.t = 2.7;
  spec.temp0 = 100.0;
  spec.delta_mu = 0.1;
  spec.gamma_over_t = {1.0, 5.0};
  for (int n = 10; n <= 100; n += 5) spec.n_values.push_back(n);
  std::vector<RatioRow> rows;
  const auto fits = deficit_fit(spec, 20, &rows);
  REQUIRE(fits.size() == 2);
  for (const auto& fit : fits) {
    CHECK(fit.points == 17);
    CHECK(std::abs(fit.intercept - 1.0) <= 0.01);
    CHECK(fit.r_squared >= 0.99);
    CHECK(fit.slope < 0.0);
  }
  // slope magnitude shrinks with stronger coupling
  CHECK(std::abs(fits[1].slope) < std::abs(fits[0].slope));
  CHECK(rows.size() == spec.n_values.size() * 2);
}

TEST_CASE("profiles") {
  const double t = 2.7;

  SUBCASE("biased chain: monotone drop with one interior maximum") {
    const WireModel m = WireModel::uniform(30, t, t);
    const ProfileTable table = profiles(m, 0.05, -0.05, 100.0);
    CHECK(table.mu_monotone);
    CHECK(table.interior_maxima == 1);
    CHECK_FALSE(table.oscillation_flag);
    CHECK(table.mu(0) > table.mu(29));
  }

  SUBCASE("zero bias is flat") {
    const WireModel m = WireModel::uniform(12, t, 0.7);
    const ProfileTable table = profiles(m, 0.0, 0.0, 150.0);
    for (int i = 0; i < 12; ++i) {
      CHECK(std::abs(table.mu(i)) <= 1e-15);
      CHECK(table.temp(i) == doctest::Approx(150.0).epsilon(1e-13));
    }
  }

  SUBCASE("swapping the bias mirrors the profiles") {
    const WireModel m = WireModel::uniform(9, t, 1.4);
    const ProfileTable fwd = profiles(m, 0.04, -0.04, 90.0);
    const ProfileTable rev = profiles(m, -0.04, 0.04, 90.0);
    for (int i = 0; i < 9; ++i) {
      CHECK(fwd.mu(i) == doctest::Approx(rev.mu(8 - i)).epsilon(1e-10));
      CHECK(fwd.temp(i) == doctest::Approx(rev.temp(8 - i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("distribution snapshots") {
  const double t = 2.7, T0 = 115.0, dmu = 0.1;

  auto sup_distance = [&](double g_over_t, int site) {
    const WireModel m = WireModel::uniform(11, t, g_over_t * t);
    const FloatingProblem problem =
        make_floating_problem(m, 0.5 * dmu, -0.5 * dmu, T0);
    const ProbeSolution sol = solve_floating_sommerfeld(problem);
    auto terminals = make_terminals(m, 0.5 * dmu, -0.5 * dmu, T0);
    apply_probe_solution(terminals, sol);
    const EnergyGrid grid = default_distribution_grid(m, terminals, 601);
    const auto curves =
        distribution_snapshots(m, terminals, {site}, grid);
    double sup = 0.0;
    for (size_t i = 0; i < curves[0].energy.size(); ++i)
      sup = std::max(sup,
                     std::abs(curves[0].f_local[i] - curves[0].f_probe[i]));
    return sup;
  };

  SUBCASE("center sits closer to its probe than the edge") {
    CHECK(sup_distance(1.0, 6) < sup_distance(1.0, 1));
  }

  SUBCASE("stronger coupling thermalizes every sampled site harder") {
    for (int site : {1, 6, 11})
      CHECK(sup_distance(1.0, site) < sup_distance(0.25, site));
  }

  SUBCASE("equilibrium curves coincide") {
    const WireModel m = WireModel::uniform(5, t, t);
    const auto terminals = make_terminals(m, 0.02, 0.02, 150.0);
    const EnergyGrid grid = default_distribution_grid(m, terminals, 401);
    for (const auto& curve :
         distribution_snapshots(m, terminals, {1, 3, 5}, grid)) {
      for (size_t i = 0; i < curve.energy.size(); ++i)
        CHECK(std::abs(curve.f_local[i] - curve.f_probe[i]) <= 1e-10);
    }
  }
}

TEST_CASE("probe entropy shares") {
  const double t = 2.7, T0 = 115.0, dmu = 0.1;
  const WireModel m = WireModel::uniform(30, t, t);
  const FloatingProblem problem =
      make_floating_problem(m, 0.5 * dmu, -0.5 * dmu, T0);
  const ProbeSolution sol = solve_floating_sommerfeld(problem);
  const ShareTable table = probe_entropy_shares(problem, sol);

  REQUIRE(table.defined);
  double sum = 0.0;
  for (const auto& row : table.rows) {
    sum += row.share;
    CHECK(row.injection >= 0.0);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  // symmetric setup shares, end-region dominance
  CHECK(table.rows.front().share ==
        doctest::Approx(table.rows.back().share).epsilon(1e-9));
  const double center = table.rows[14].share;
  CHECK(table.rows.front().share > center);
  // the maximum sits on the outermost pair of sites
  double best = 0.0;
  for (const auto& row : table.rows) best = std::max(best, row.share);
  CHECK(best == doctest::Approx(std::max(table.rows[0].share,
                                         table.rows[1].share))
                    .epsilon(1e-12));

  SUBCASE("strong coupling peaks on the end site itself") {
    const WireModel strong = WireModel::uniform(30, t, 5.0 * t);
    const FloatingProblem problem_s =
        make_floating_problem(strong, 0.5 * dmu, -0.5 * dmu, T0);
    const ShareTable table_s =
        probe_entropy_shares(problem_s, solve_floating_sommerfeld(problem_s));
    double best_s = 0.0;
    for (const auto& row : table_s.rows) best_s = std::max(best_s, row.share);
    CHECK(best_s == doctest::Approx(table_s.rows.front().share).epsilon(1e-12));
  }

  SUBCASE("zero bias is flagged") {
    const FloatingProblem flat = make_floating_problem(m, 0.0, 0.0, T0);
    const ShareTable empty =
        probe_entropy_shares(flat, solve_floating_sommerfeld(flat));
    CHECK_FALSE(empty.defined);
  }
}

TEST_CASE("resistance scan") {
  const double t = 2.7, T0 = 100.0, dmu = 0.01;

  SUBCASE("ballistic limit") {
    const WireModel m = WireModel::uniform(7, t, 1e-9 * t);
    CHECK(std::abs(floating_chain_resistance(m, 0.5 * dmu, -0.5 * dmu, T0) -
                   1.0) <= 1e-6);
    const WireModel clean = WireModel::uniform(7, t, 0.0);
    CHECK(std::abs(floating_chain_resistance(clean, 0.5 * dmu, -0.5 * dmu, T0) -
                   1.0) <= 1e-12);
  }

  SUBCASE("weak coupling slope") {
    const std::vector<double> gammas = {1e-3, 2e-3, 4e-3, 6e-3, 8e-3, 1e-2};
    std::vector<ResistanceRow> rows;
    const ResistanceFitResult fit =
        resistance_scan(10, t, T0, dmu, gammas, CouplingRegime::Weak, &rows);
    CHECK(rows.size() == gammas.size());
    CHECK(std::abs(fit.coeff / 10.0 - 0.25) <= 0.05 * 0.25);
    CHECK(std::abs(fit.intercept - 1.0) <= 0.01);
    CHECK(fit.r_squared >= 0.99);
  }

  SUBCASE("strong coupling quadratic coefficient") {
    const std::vector<double> gammas = {50, 80, 110, 140, 170, 200};
    const ResistanceFitResult fit =
        resistance_scan(5, t, T0, dmu, gammas, CouplingRegime::Strong);
    CHECK(std::abs(fit.coeff / 4.0 - 1.0 / 16.0) <= 0.05 / 16.0);
    CHECK(fit.r_squared >= 0.99);
  }

  SUBCASE("needs enough points") {
    CHECK_THROWS_AS((void)resistance_scan(5, t, T0, dmu, {1.0, 2.0},
                                          CouplingRegime::Weak),
                    std::invalid_argument);
  }
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec;
  CHECK_THROWS_AS((void)sweep_ratio(spec), std::invalid_argument);
  spec.n_values = {1};
  spec.gamma_over_t = {1.0};
  spec.delta_mu = -1.0;
  CHECK_THROWS_AS((void)sweep_ratio(spec), std::invalid_argument);
}

#include "joulewire/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace joulewire {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr int kKronrodPoints = 15;
constexpr double kNodes[8] = {
    0.0,
    0.2077849550078984676006894,
    0.4058451513773971669066064,
    0.5860872354676911302941448,
    0.7415311855993944398638648,
    0.8648644233597690727897128,
    0.9491079123427585245261897,
    0.9914553711208126392068547,
};
constexpr double kKronrodWeights[8] = {
    0.2094821410847278280129992,
    0.2044329400752988924141620,
    0.1903505780647854099132564,
    0.1690047266392679028265834,
    0.1406532597155259187451896,
    0.1047900103222501838398763,
    0.0630920926299785532907007,
    0.0229353220105292249637320,
};
// Gauss weights for the kNodes entries at even index (0, 2, 4, 6).
constexpr double kGaussWeights[4] = {
    0.4179591836734693877551020,
    0.3818300505051189449503698,
    0.2797053914892766679014678,
    0.1294849661688696932706114,
};

struct Interval {
  double lo, hi;
  double err;
  Eigen::VectorXd kronrod;
  Eigen::VectorXd err_vec;
  bool operator<(const Interval& other) const { return err < other.err; }
};

Interval evaluate(const std::function<Eigen::VectorXd(double)>& f, double lo,
                  double hi, int n) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  Eigen::VectorXd kronrod = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd gauss = Eigen::VectorXd::Zero(n);

  for (int i = 0; i < 8; ++i) {
    Eigen::VectorXd sum;
    if (i == 0) {
      sum = f(mid);
    } else {
      sum = f(mid - half * kNodes[i]) + f(mid + half * kNodes[i]);
    }
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * sum;
  }

  Interval out;
  out.lo = lo;
  out.hi = hi;
  out.kronrod = half * kronrod;
  out.err_vec = (half * (kronrod - gauss)).cwiseAbs();
  out.err = out.err_vec.maxCoeff();
  return out;
}

}  // namespace

Eigen::VectorXd integrate_adaptive(
    const std::function<Eigen::VectorXd(double)>& f, double lo, double hi,
    int n_components, const QuadratureSettings& settings) {
  if (!(hi > lo)) return Eigen::VectorXd::Zero(n_components);

  std::priority_queue<Interval> queue;
  queue.push(evaluate(f, lo, hi, n_components));
  int used = 1;

  // conservative global error: sum of per-interval max-norm estimates,
  // maintained incrementally
  double total_err = queue.top().err;
  while (total_err > settings.abs_tol) {
    if (used >= settings.max_intervals)
      throw std::runtime_error(
          "integrate_adaptive: interval budget exhausted before reaching "
          "tolerance");
    Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi))
      throw std::runtime_error(
          "integrate_adaptive: interval underflow before reaching tolerance");
    Interval left = evaluate(f, worst.lo, mid, n_components);
    Interval right = evaluate(f, mid, worst.hi, n_components);
    total_err += left.err + right.err - worst.err;
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++used;
  }

  Eigen::VectorXd result = Eigen::VectorXd::Zero(n_components);
  while (!queue.empty()) {
    result += queue.top().kronrod;
    queue.pop();
  }
  return result;
}

double simpson_uniform(const std::function<double(double)>& f, double lo,
                       double hi, int points) {
  if (points < 3) points = 3;
  if (points % 2 == 0) ++points;
  const int n = points - 1;  // even number of panels
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace joulewire

#include "cbi/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cbi;

namespace {

double apply(const std::vector<NodeWeight>& rule, double h, auto&& f) {
  double s = 0.0;
  for (const auto& nw : rule) s += nw.weight * f(nw.node * h);
  return s;
}

}  // namespace

TEST(GridRule, ExactForCubicsAtEveryNode) {
  const double h = 0.1;
  auto f = [](double s) { return 1.0 - 2.0 * s + 3.0 * s * s - 0.7 * s * s * s; };
  auto F = [](double t) { return t - t * t + t * t * t - 0.175 * t * t * t * t; };
  for (int m = 0; m <= 12; ++m) EXPECT_NEAR(apply(grid_rule(m, h, 12), h, f), F(m * h), 1e-13) << m;
  // m = 1 with only two intervals available falls back to the quadratic rule
  auto q = [](double s) { return 2.0 + s * s; };
  EXPECT_NEAR(apply(grid_rule(1, h, 2), h, q), 2 * h + h * h * h / 3, 1e-15);
}

TEST(GridRule, FourthOrderConvergence) {
  auto f = [](double s) { return std::exp(std::sin(3 * s)); };
  // int_0^1 via very fine Simpson
  double ref = 0.0;
  {
    const int n = 20000;
    const double h = 1.0 / n;
    for (const auto& nw : grid_rule(n, h, n)) ref += nw.weight * f(nw.node * h);
  }
  for (int M : {31, 32}) {  // odd and even node counts
    const double e1 = std::abs(apply(grid_rule(M, 1.0 / M, M), 1.0 / M, f) - ref);
    const double e2 = std::abs(apply(grid_rule(2 * M, 0.5 / M, 2 * M), 0.5 / M, f) - ref);
    EXPECT_GT(e1 / e2, 10.0);
  }
}

TEST(AdaptiveSimpson, ScalarAndMatrix) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 2.0, 1e-12), std::exp(2.0) - 1, 1e-11);
  const auto M = adaptive_simpson(
      [](double x) {
        Matrix m(1, 2);
        m << std::cos(x), x * x;
        return m;
      },
      0.0, 1.0, 1e-12);
  EXPECT_NEAR(M(0, 0), std::sin(1.0), 1e-11);
  EXPECT_NEAR(M(0, 1), 1.0 / 3, 1e-11);
}

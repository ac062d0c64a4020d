#include "cbi/error.hpp"
#include "cbi/estimate.hpp"
#include "cbi/simulator.hpp"
#include "instances.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cbi;

namespace {

double central_plugin(const Matrix& X, const std::vector<int>& idx) {
  const Vector m = X.colwise().mean().transpose();
  double s = 0.0;
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    double prod = 1.0;
    for (int i : idx) prod *= X(r, i) - m[i];
    s += prod;
  }
  return s / static_cast<double>(X.rows());
}

Matrix drop_row(const Matrix& X, Eigen::Index r) {
  Matrix out(X.rows() - 1, X.cols());
  out.topRows(r) = X.topRows(r);
  out.bottomRows(X.rows() - 1 - r) = X.bottomRows(X.rows() - 1 - r);
  return out;
}

}  // namespace

TEST(Estimate, ConstantPaths) {
  Matrix X(150, 2);
  X.col(0).setConstant(2.0);
  X.col(1).setConstant(3.0);
  const auto e = estimate_moments(X, 3);
  const std::vector<int> idx = {0, 1, 1};
  EXPECT_DOUBLE_EQ(e.raw[3](idx), 18.0);
  EXPECT_EQ(e.raw_se[3](idx), 0.0);
  EXPECT_NEAR(e.central[2]({0, 1}), 0.0, 1e-14);
  EXPECT_NEAR(e.central_se[3](idx), 0.0, 1e-14);
}

TEST(Estimate, JackknifeMatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(2.0, 1.0);
  Matrix X(40, 2);
  for (Eigen::Index r = 0; r < X.rows(); ++r) X.row(r) << g(rng), g(rng);
  const auto e = estimate_moments(X, 3);
  for (const std::vector<int>& idx : {std::vector<int>{0, 1}, std::vector<int>{1, 1, 1}, std::vector<int>{0, 0, 1}}) {
    const int k = static_cast<int>(idx.size());
    EXPECT_NEAR(e.central[static_cast<std::size_t>(k)](idx), central_plugin(X, idx), 1e-12);
    std::vector<double> loo;
    for (Eigen::Index r = 0; r < X.rows(); ++r) loo.push_back(central_plugin(drop_row(X, r), idx));
    double mean = 0;
    for (double v : loo) mean += v;
    mean /= static_cast<double>(loo.size());
    double ss = 0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    const double se = std::sqrt((X.rows() - 1.0) / X.rows() * ss);
    EXPECT_NEAR(e.central_se[static_cast<std::size_t>(k)](idx), se, 1e-10 * (1 + se));
  }
  // raw jackknife of a mean is sd / sqrt(n)
  const double m = X.col(0).mean();
  const double sd = std::sqrt((X.col(0).array() - m).square().sum() / (X.rows() - 1.0));
  EXPECT_NEAR(e.raw_se[1]({0}), sd / std::sqrt(40.0), 1e-14);
  EXPECT_THROW(estimate_moments(Matrix::Zero(1, 2), 2), Error);
}

TEST(Estimate, PoissonMomentsWithinFourSe) {
  const auto p = cbi::testing::poisson_params(2.0);
  SimConfig cfg;
  cfg.T = 1.0;
  cfg.h = 0.05;
  cfg.n_paths = 100000;
  cfg.seed = 99;
  cfg.x0 = Vector::Constant(1, 1.0);
  cfg.record_times = {1.0};
  cfg.threads = 4;
  const auto e = estimate_moments(simulate_ensemble(p, cfg).samples[0][0], 3);
  const double ref[] = {0.0, 3.0, 11.0, 47.0};
  for (int k = 1; k <= 3; ++k)
    EXPECT_LE(std::abs(e.raw[static_cast<std::size_t>(k)].at(0) - ref[k]), 4 * e.raw_se[static_cast<std::size_t>(k)].at(0)) << k;
}

TEST(Estimate, ExchangeableTypesGiveSymmetricTensors) {
  ParamsCandidate c = cbi::testing::zero_candidate(2);
  c.c = {0.2, 0.2};
  c.beta = {0.3, 0.3};
  c.B = {{-0.4, 0.1}, {0.1, -0.4}};
  c.nu = {{{1.0, 0.5}, 0.2}, {{0.5, 1.0}, 0.2}};
  c.mu[0] = {{{1.5, 0.3}, 0.2}};
  c.mu[1] = {{{0.3, 1.5}, 0.2}};
  SimConfig cfg;
  cfg.T = 1.0;
  cfg.h = 1e-2;
  cfg.n_paths = 20000;
  cfg.seed = 5;
  cfg.x0 = Vector::Constant(2, 1.0);
  cfg.record_times = {1.0};
  cfg.threads = 4;
  const auto e = estimate_moments(simulate_ensemble(make_params(c), cfg).samples[0][0], 3);
  auto check = [&](const MomentTensor& v, const MomentTensor& se, std::vector<int> a, std::vector<int> b) {
    EXPECT_LE(std::abs(v(a) - v(b)), 4 * std::hypot(se(a), se(b)));
  };
  check(e.raw[1], e.raw_se[1], {0}, {1});
  check(e.raw[2], e.raw_se[2], {0, 0}, {1, 1});
  check(e.raw[3], e.raw_se[3], {0, 0, 1}, {0, 1, 1});
  check(e.central[2], e.central_se[2], {0, 0}, {1, 1});
  check(e.central[3], e.central_se[3], {0, 0, 0}, {1, 1, 1});
}

#include "cbi/error.hpp"
#include "cbi/estimate.hpp"
#include "cbi/moments.hpp"
#include "cbi/simulator.hpp"
#include "instances.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cbi;
using cbi::testing::zero_candidate;

namespace {

SimConfig config(double T, double h, std::int64_t n, Vector x0) {
  SimConfig cfg;
  cfg.T = T;
  cfg.h = h;
  cfg.n_paths = n;
  cfg.seed = 20240611;
  cfg.x0 = std::move(x0);
  return cfg;
}

AdmissibleParams coupled_instance() {
  ParamsCandidate c = zero_candidate(2);
  c.c = {0.3, 0.1};
  c.beta = {0.2, 0.2};
  c.B = {{-0.5, 0.2}, {0.1, -0.4}};
  c.nu = {{{1.0, 0.0}, 0.5}, {{0.0, 4.0}, 0.1}};
  c.mu[0] = {{{2.0, 0.0}, 0.4}, {{0.0, 1.0}, 0.2}};
  c.mu[1] = {{{4.0, 0.0}, 0.1}, {{0.0, 2.0}, 0.3}};
  return make_params(c);
}

}  // namespace

TEST(Simulator, DeterministicFlowIsEuler) {
  ParamsCandidate c = zero_candidate(2);
  c.B = {{-0.5, 0.2}, {0.1, -0.3}};
  c.beta = {0.4, 0.0};
  const auto p = make_params(c);
  Vector x0(2);
  x0 << 1.0, 2.0;
  auto cfg = config(1.0, 1e-3, 1, x0);
  const auto path = simulate_path(p, cfg, 0);
  const Vector exact = expm(p.B(), 1.0) * x0 + expm_integral(p.B(), 1.0, p.beta());
  EXPECT_LE((path.states[0].back() - exact).cwiseAbs().maxCoeff(), 5e-3);
  EXPECT_EQ(path.times.size(), 1001u);
}

TEST(Simulator, PoissonImmigrationMean) {
  const auto p = cbi::testing::poisson_params(2.0);
  auto cfg = config(1.0, 1e-2, 100000, Vector::Constant(1, 1.0));
  cfg.record_times = {1.0};
  cfg.threads = 4;
  const auto ens = simulate_ensemble(p, cfg);
  const Matrix& X = ens.samples[0][0];
  const double mean = X.mean();
  const double se = std::sqrt((X.array() - mean).square().sum() / (X.rows() - 1.0) / X.rows());
  EXPECT_LE(std::abs(mean - 3.0), 4 * se);
  // every sample is 1 + an integer
  for (Eigen::Index r = 0; r < X.rows(); ++r) EXPECT_EQ(X(r, 0), std::round(X(r, 0)));
}

TEST(Simulator, CriticalBranchingKeepsTheMean) {
  // mu_1 = atom z = 1 (counted as a big jump), b = 0: b~ = 0, so E X_T = x0
  ParamsCandidate c = zero_candidate(1);
  c.mu[0] = {{{1.0}, 0.8}};
  const auto p = make_params(c);
  ASSERT_EQ(derive(p).tbB(0, 0), 0.0);
  auto cfg = config(1.0, 1e-3, 40000, Vector::Constant(1, 2.0));
  cfg.record_times = {1.0};
  cfg.threads = 4;
  const auto ens = simulate_ensemble(p, cfg);
  const auto est = estimate_moments(ens.samples[0][0], 1, 1.0);
  EXPECT_LE(std::abs(est.raw[1].at(0) - 2.0), 4 * est.raw_se[1].at(0));
}

TEST(Simulator, SupercriticalBranchingMean) {
  ParamsCandidate c = zero_candidate(1);
  c.B = {{0.1}};
  c.mu[0] = {{{2.5}, 0.4}, {{0.5}, 0.6}};
  const auto p = make_params(c);
  auto cfg = config(1.0, 1e-3, 40000, Vector::Constant(1, 1.0));
  cfg.record_times = {0.5, 1.0};
  cfg.threads = 4;
  const auto ens = simulate_ensemble(p, cfg);
  for (std::size_t r = 0; r < 2; ++r) {
    const auto est = estimate_moments(ens.samples[0][r], 1, ens.times[r]);
    const double ref = first_moment(derive(p), InitialLaw::deterministic(cfg.x0), ens.times[r])[0];
    EXPECT_LE(std::abs(est.raw[1].at(0) - ref), std::max(4 * est.raw_se[1].at(0), 2e-3 * ref));
  }
}

TEST(Simulator, ReproducibleAndThreadIndependent) {
  const auto p = coupled_instance();
  Vector x0(2);
  x0 << 1.0, 0.5;
  auto cfg = config(0.5, 1e-3, 64, x0);
  cfg.record_times = {0.25, 0.5};
  const auto a = simulate_path(p, cfg, 17);
  const auto b = simulate_path(p, cfg, 17);
  EXPECT_EQ(a.states[0][1], b.states[0][1]);
  cfg.threads = 1;
  const auto e1 = simulate_ensemble(p, cfg);
  cfg.threads = 5;
  const auto e5 = simulate_ensemble(p, cfg);
  EXPECT_EQ(e1.samples[0][1], e5.samples[0][1]);
  EXPECT_EQ(e1.samples[0][1].row(17).transpose(), a.states[0][1]);
}

TEST(Simulator, NonnegativeForBothSchemes) {
  const auto p = coupled_instance();
  Vector x0(2);
  x0 << 0.05, 0.0;
  for (auto scheme : {DiffusionScheme::SquareRoot, DiffusionScheme::EulerClamp}) {
    auto cfg = config(1.0, 1e-2, 1, x0);
    cfg.scheme = scheme;
    for (std::uint64_t path = 0; path < 200; ++path) {
      const auto sp = simulate_path(p, cfg, path);
      for (const Vector& x : sp.states[0]) ASSERT_GE(x.minCoeff(), 0.0);
    }
  }
}

TEST(SimulateCoupled, OrderedAcrossLevelsOnEveryPath) {
  const auto p = coupled_instance();
  Vector x0(2);
  x0 << 1.0, 0.5;
  auto cfg = config(1.0, 1e-2, 1, x0);
  cfg.K_levels = {1.5, 3.0, kInfiniteLevel};
  for (std::uint64_t path = 0; path < 300; ++path) {
    const auto sp = simulate_coupled(p, cfg, path);
    for (std::size_t r = 0; r < sp.times.size(); ++r)
      for (std::size_t l = 0; l + 1 < sp.levels.size(); ++l)
        ASSERT_TRUE((sp.states[l][r].array() <= sp.states[l + 1][r].array()).all()) << path << " " << r;
  }
}

TEST(SimulateCoupled, LevelAboveAllAtomsEqualsUntruncated) {
  const auto p = coupled_instance();
  Vector x0(2);
  x0 << 1.0, 0.5;
  auto cfg = config(1.0, 1e-2, 1, x0);
  cfg.K_levels = {4.5, kInfiniteLevel};
  for (std::uint64_t path = 0; path < 50; ++path) {
    const auto sp = simulate_coupled(p, cfg, path);
    EXPECT_EQ(sp.states[0], sp.states[1]);
    EXPECT_EQ(sp.states[1].back(), simulate_path(p, cfg, path).states[0].back());
  }
}

TEST(SimulateCoupled, JumpLogRespectsTruncation) {
  const auto p = coupled_instance();
  Vector x0(2);
  x0 << 1.0, 0.5;
  auto cfg = config(1.0, 1e-2, 1, x0);
  cfg.K_levels = {1.5, kInfiniteLevel};
  cfg.log_jumps = true;
  std::size_t seen = 0;
  for (std::uint64_t path = 0; path < 30; ++path) {
    const auto sp = simulate_coupled(p, cfg, path);
    for (const auto& j : sp.jumps) {
      EXPECT_GT(j.time, 0.0);
      EXPECT_LE(j.time, 1.0);
      if (j.level == 0) EXPECT_LT(j.z.norm(), 1.5);
      if (j.source == JumpSource::Branching) EXPECT_GE(j.type, 0);
      ++seen;
    }
  }
  EXPECT_GT(seen, 0u);
}

TEST(Simulator, ConfigErrors) {
  const auto p = cbi::testing::poisson_params(1.0);
  auto cfg = config(1.0, 0.3, 1, Vector::Constant(1, 1.0));
  EXPECT_THROW(simulate_path(p, cfg, 0), Error);
  cfg.h = 0.1;
  cfg.K_levels = {3.0, 2.0};
  EXPECT_THROW(simulate_coupled(p, cfg, 0), Error);
  cfg.K_levels = {1.0};
  EXPECT_THROW(simulate_coupled(p, cfg, 0), Error);
  cfg.K_levels = {};
  EXPECT_THROW(simulate_coupled(p, cfg, 0), Error);
  cfg.record_times = {0.05};
  EXPECT_THROW(simulate_path(p, cfg, 0), Error);

  ParamsCandidate c = zero_candidate(1);
  c.B = {{-50.0}};
  auto steep = config(1.0, 0.1, 1, Vector::Constant(1, 1.0));
  try {
    simulate_path(make_params(c), steep, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnstableStep);
  }
}

TEST(Simulator, PoissonMeanDoesNotDependOnStep) {
  const auto p = cbi::testing::poisson_params(2.0);
  auto cfg = config(1.0, 0.1, 50000, Vector::Constant(1, 1.0));
  cfg.record_times = {1.0};
  cfg.threads = 4;
  const auto a = estimate_moments(simulate_ensemble(p, cfg).samples[0][0], 1);
  cfg.h = 0.05;
  const auto b = estimate_moments(simulate_ensemble(p, cfg).samples[0][0], 1);
  // same jump stream: the event times do not depend on h
  EXPECT_EQ(a.raw[1].at(0), b.raw[1].at(0));
}

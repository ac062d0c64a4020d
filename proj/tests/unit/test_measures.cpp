#include "cbi/error.hpp"
#include "cbi/measures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cbi;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

AtomicMeasure random_measure(std::mt19937_64& rng, int d, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<Atom> atoms;
  for (int a = 0; a < n; ++a) {
    Vector z(d);
    for (int i = 0; i < d; ++i) z[i] = u(rng);
    z[0] += 0.1;
    atoms.push_back({z, 0.1 + u(rng)});
  }
  return AtomicMeasure(d, atoms);
}

}  // namespace

TEST(Measures, PolyIntegralExamples) {
  const AtomicMeasure empty(2);
  EXPECT_EQ(empty.poly_integral(vec({1, 1}), 3), 0.0);
  const AtomicMeasure m(2, {{vec({1, 0}), 2.0}, {vec({0, 3}), 1.0}});
  EXPECT_DOUBLE_EQ(m.poly_integral(vec({1, 1}), 2), 11.0);
  EXPECT_DOUBLE_EQ(m.poly_integral(vec({0.3, -7}), 0), 3.0);
}

TEST(Measures, OuterIntegralExamples) {
  EXPECT_EQ(AtomicMeasure(3).outer_integral(), Matrix::Zero(3, 3));
  const AtomicMeasure m(2, {{vec({1, 2}), 3.0}});
  Matrix expected(2, 2);
  expected << 3, 6, 6, 12;
  EXPECT_EQ(m.outer_integral(), expected);
}

TEST(Measures, MassAndJumpMeans) {
  const AtomicMeasure empty(1);
  EXPECT_EQ(empty.total_mass(), 0.0);
  EXPECT_EQ(empty.tail_mass(2.0), 0.0);
  EXPECT_EQ(empty.big_jump_mean(), Vector::Zero(1));
  const AtomicMeasure one(1, {{vec({2}), 0.5}});
  EXPECT_EQ(one.tail_mass(3.0), 0.0);
  EXPECT_EQ(one.tail_mass(2.0), 0.5);
  const AtomicMeasure two(1, {{vec({2}), 0.5}, {vec({0.5}), 4.0}});
  EXPECT_DOUBLE_EQ(two.big_jump_mean()[0], 1.0);
  EXPECT_DOUBLE_EQ(two.small_jump_mean()[0], 2.0);
  // norm exactly 1 counts as big
  const AtomicMeasure unit(2, {{vec({0.6, 0.8}), 1.0}});
  EXPECT_EQ(unit.big_jump_mean(), vec({0.6, 0.8}));
}

TEST(Measures, RejectsBadAtoms) {
  EXPECT_THROW(AtomicMeasure(1, {{vec({0}), 1.0}}), Error);
  EXPECT_THROW(AtomicMeasure(1, {{vec({-1}), 1.0}}), Error);
  EXPECT_THROW(AtomicMeasure(1, {{vec({1}), 0.0}}), Error);
  EXPECT_THROW(AtomicMeasure(2, {{vec({1}), 1.0}}), Error);
}

TEST(Measures, CanonicalOrderMakesEqualityStructural) {
  const AtomicMeasure a(2, {{vec({1, 0}), 2.0}, {vec({0, 3}), 1.0}});
  const AtomicMeasure b(2, {{vec({0, 3}), 1.0}, {vec({1, 0}), 2.0}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.atoms()[0].z, vec({0, 3}));
}

TEST(Measures, Homogeneity) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = random_measure(rng, 3, 4);
    const Vector w = vec({0.3, -1.2, 0.8});
    for (int p = 0; p <= 5; ++p) {
      const double alpha = -1.7;
      EXPECT_NEAR(m.poly_integral(alpha * w, p), std::pow(alpha, p) * m.poly_integral(w, p),
                  1e-12 * (1 + std::abs(m.poly_integral(alpha * w, p))));
    }
  }
}

TEST(Measures, OuterMatchesQuadraticForm) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = random_measure(rng, 3, 5);
    const Vector w = vec({g(rng), g(rng), g(rng)});
    const Matrix O = m.outer_integral();
    EXPECT_NEAR(w.dot(O * w), m.poly_integral(w, 2), 1e-12 * (1 + m.poly_integral(w, 2)));
    EXPECT_EQ(O, O.transpose());
  }
}

TEST(Measures, Additivity) {
  std::mt19937_64 rng(3);
  const auto a = random_measure(rng, 2, 3);
  const auto b = random_measure(rng, 2, 2);
  const auto ab = a.merged(b);
  const Vector w = vec({0.4, 1.1});
  for (int p = 0; p <= 4; ++p)
    EXPECT_NEAR(ab.poly_integral(w, p), a.poly_integral(w, p) + b.poly_integral(w, p), 1e-12 * (1 + ab.poly_integral(w, p)));
  EXPECT_NEAR(ab.total_mass(), a.total_mass() + b.total_mass(), 1e-14);
  EXPECT_LE((ab.outer_integral() - a.outer_integral() - b.outer_integral()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Measures, RestrictionAndScaling) {
  const AtomicMeasure m(1, {{vec({0.5}), 1.0}, {vec({2.0}), 1.0}, {vec({4.0}), 2.0}});
  EXPECT_EQ(m.restricted_below(2.0).size(), 1u);
  EXPECT_EQ(m.restricted_below(4.5).size(), 3u);
  EXPECT_DOUBLE_EQ(m.scaled(3.0).total_mass(), 12.0);
  EXPECT_DOUBLE_EQ(m.big_jump_moment(2), 1.0 * 4 + 2.0 * 16);
}

#include "cbi/error.hpp"
#include "cbi/params.hpp"
#include "instances.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cbi;
using cbi::testing::zero_candidate;

namespace {

bool has_issue(const ValidationResult& r, IssueKind kind) {
  for (const auto& i : r.issues)
    if (i.kind == kind) return true;
  return false;
}

}  // namespace

TEST(Validate, AllZeroSetIsValid) {
  const auto r = validate(zero_candidate(1));
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.issues.empty());
}

TEST(Validate, NegativeOffDiagonalReportsOneBasedIndices) {
  ParamsCandidate c = zero_candidate(2);
  c.B = {{-1, -0.5}, {0, -1}};
  const auto r = validate(c);
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].kind, IssueKind::NegativeOffDiagonal);
  EXPECT_EQ(r.issues[0].i, 1);
  EXPECT_EQ(r.issues[0].j, 2);
}

TEST(Validate, AtomAtOrigin) {
  ParamsCandidate c = zero_candidate(1);
  c.nu = {{{0.0}, 1.0}};
  const auto r = validate(c);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_issue(r, IssueKind::AtomAtOrigin));
  EXPECT_EQ(r.issues[0].measure, 0);
  EXPECT_EQ(r.issues[0].atom, 1);
}

TEST(Validate, ReportsEveryViolationAtOnce) {
  ParamsCandidate c = zero_candidate(2);
  c.c = {-1, 0};
  c.beta = {0, -2};
  c.B = {{0, -1}, {0, 0}};
  c.mu[1] = {{{1.0, -1.0}, 1.0}, {{1.0, 0.0}, 0.0}};
  const auto r = validate(c);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_issue(r, IssueKind::NegativeC));
  EXPECT_TRUE(has_issue(r, IssueKind::NegativeBeta));
  EXPECT_TRUE(has_issue(r, IssueKind::NegativeOffDiagonal));
  EXPECT_TRUE(has_issue(r, IssueKind::NegativeAtomComponent));
  EXPECT_TRUE(has_issue(r, IssueKind::NonpositiveWeight));
  EXPECT_EQ(r.issues.size(), 5u);
}

TEST(Validate, DimensionMismatchAndNonFinite) {
  ParamsCandidate c = zero_candidate(2);
  c.c = {0};
  c.nu = {{{1.0}, 1.0}};
  EXPECT_TRUE(has_issue(validate(c), IssueKind::DimensionMismatch));
  ParamsCandidate f = zero_candidate(1);
  f.beta = {std::nan("")};
  EXPECT_TRUE(has_issue(validate(f), IssueKind::NonFinite));
  ParamsCandidate z = zero_candidate(1);
  z.d = 0;
  EXPECT_FALSE(validate(z).ok());
}

TEST(Validate, MakeParamsThrowsListingIssues) {
  ParamsCandidate c = zero_candidate(1);
  c.c = {-1};
  try {
    make_params(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    EXPECT_NE(std::string(e.what()).find("NegativeC"), std::string::npos);
  }
}

TEST(Derive, SingleBranchingAtom) {
  ParamsCandidate c = zero_candidate(1);
  c.B = {{-1}};
  c.mu[0] = {{{2.0}, 0.5}};
  const auto dp = derive(make_params(c));
  EXPECT_DOUBLE_EQ(dp.tbB(0, 0), -0.5);
  // D removes the big-jump mean 0.5 * 2
  EXPECT_DOUBLE_EQ(dp.D(0, 0), -1.5);
}

TEST(Derive, ImmigrationMean) {
  ParamsCandidate c = zero_candidate(1);
  c.beta = {1};
  c.nu = {{{3.0}, 2.0}};
  EXPECT_DOUBLE_EQ(derive(make_params(c)).tbeta[0], 7.0);
}

TEST(Derive, EmptyMeasuresLeaveDriftUntouched) {
  ParamsCandidate c = zero_candidate(2);
  c.B = {{-1, 0.3}, {0.2, 0.5}};
  c.beta = {0.1, 0.2};
  const auto p = make_params(c);
  const auto dp = derive(p);
  EXPECT_EQ(dp.tbB, p.B());
  EXPECT_EQ(dp.D, p.B());
  EXPECT_EQ(dp.tbeta, p.beta());
}

TEST(Derive, OffDiagonalUsesFullComponent) {
  // b~_12 = b_12 + int (z_1)^+ mu_2, b~_22 = b_22 + int (z_2 - 1)^+ mu_2
  ParamsCandidate c = zero_candidate(2);
  c.mu[1] = {{{0.5, 3.0}, 2.0}};
  const auto dp = derive(make_params(c));
  EXPECT_DOUBLE_EQ(dp.tbB(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(dp.tbB(1, 1), 4.0);
  // ||z|| >= 1, so D drops the whole mean of the atom
  EXPECT_DOUBLE_EQ(dp.D(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(dp.D(1, 1), 4.0 - 6.0);
}

TEST(Derive, LinearInWeights) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = cbi::testing::random_params(rng);
    const int j = static_cast<int>(rng() % static_cast<unsigned>(p.d()));
    ParamsCandidate c = zero_candidate(p.d());
    for (int i = 0; i < p.d(); ++i) {
      c.c[static_cast<std::size_t>(i)] = p.c()[i];
      c.beta[static_cast<std::size_t>(i)] = p.beta()[i];
      for (int k = 0; k < p.d(); ++k) c.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = p.B()(i, k);
      for (const auto& a : p.mu(i).atoms())
        c.mu[static_cast<std::size_t>(i)].push_back(
            {std::vector<double>(a.z.data(), a.z.data() + a.z.size()), a.weight * (i == j ? 2.0 : 1.0)});
    }
    const Matrix once = derive(p).tbB - p.B();
    const auto p2 = make_params(c);
    const Matrix twice = derive(p2).tbB - p2.B();
    for (int i = 0; i < p.d(); ++i)
      for (int k = 0; k < p.d(); ++k)
        EXPECT_NEAR(twice(i, k), (k == j ? 2.0 : 1.0) * once(i, k), 1e-14 * (1 + std::abs(once(i, k))));
  }
}

TEST(Derive, FiniteForRandomInstances) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto dp = derive(cbi::testing::random_params(rng));
    EXPECT_TRUE(dp.tbB.allFinite());
    EXPECT_TRUE(dp.D.allFinite());
    EXPECT_TRUE(dp.tbeta.allFinite());
    for (int i = 0; i < dp.tbB.rows(); ++i)
      for (int j = 0; j < dp.tbB.cols(); ++j)
        if (i != j) {
          EXPECT_GE(dp.tbB(i, j), 0.0);
          EXPECT_GE(dp.D(i, j), 0.0);
        }
    EXPECT_GE(dp.tbeta.minCoeff(), 0.0);
  }
}

TEST(MomentCondition, Examples) {
  ParamsCandidate c = zero_candidate(1);
  c.nu = {{{2.0}, 0.5}};
  EXPECT_DOUBLE_EQ(check_moment_condition(make_params(c), 3).nu, 4.0);
  c.nu = {{{0.5}, 10.0}};
  EXPECT_DOUBLE_EQ(check_moment_condition(make_params(c), 2).nu, 0.0);
  const auto r = check_moment_condition(make_params(zero_candidate(2)), 4);
  EXPECT_EQ(r.nu, 0.0);
  ASSERT_EQ(r.mu.size(), 2u);
  EXPECT_EQ(r.mu[0], 0.0);
  EXPECT_EQ(r.mu[1], 0.0);
}

TEST(Truncate, DropsBigAtomAndAdjustsDiagonal) {
  ParamsCandidate c = zero_candidate(1);
  c.mu[0] = {{{5.0}, 1.0}};
  const auto p = make_params(c);
  const auto pk = truncate(p, 2.0);
  EXPECT_DOUBLE_EQ(pk.B()(0, 0), -1.0);
  EXPECT_TRUE(pk.mu(0).empty());
  EXPECT_EQ(derive(pk).D, derive(p).D);
}

TEST(Truncate, LargeKIsIdentity) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = cbi::testing::random_params(rng);
    EXPECT_EQ(truncate(p, std::max(1.5, p.max_atom_norm() + 1e-9)), p);
    EXPECT_EQ(truncate(p, kInfiniteLevel), p);
  }
}

TEST(Truncate, BoundaryAtomExactlyKIsRemoved) {
  ParamsCandidate c = zero_candidate(1);
  c.nu = {{{2.0}, 1.0}};
  c.mu[0] = {{{2.0}, 1.0}};
  const auto pk = truncate(make_params(c), 2.0);
  EXPECT_TRUE(pk.nu().empty());
  EXPECT_TRUE(pk.mu(0).empty());
}

TEST(Truncate, InvalidK) {
  const auto p = make_params(zero_candidate(1));
  for (double K : {1.0, 0.5, -3.0, std::nan("")}) {
    try {
      truncate(p, K);
      FAIL() << K;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidK);
    }
  }
}

TEST(Truncate, DInvariantOnRandomInstances) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> K(1.01, 6.0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = cbi::testing::random_params(rng);
    const auto a = derive(truncate(p, K(rng))).D;
    const auto b = derive(p).D;
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ParamsJson, RoundTrip) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = cbi::testing::random_params(rng);
    const auto back = make_params(parse_params_json(params_to_json(p)));
    EXPECT_EQ(back, p);
  }
}

TEST(ParamsJson, ParsesDocumentedSchema) {
  const auto c = parse_params_json(R"({"d":1,"c":[0],"beta":[0],"B":[[0]],
      "nu":{"atoms":[{"z":[1],"w":2}]},"mu":[{"atoms":[]}]})");
  const auto p = make_params(c);
  EXPECT_EQ(p.nu().size(), 1u);
  EXPECT_DOUBLE_EQ(p.nu().total_mass(), 2.0);
}

TEST(ParamsJson, ErrorsCarryPointer) {
  try {
    parse_params_json(R"({"d":1,"c":[0],"beta":[0],"B":[[0]],"nu":{"atoms":[{"z":[1],"w":"x"}]},"mu":[{"atoms":[]}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("/nu/atoms/0/w"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_params_json("{not json"), Error);
  EXPECT_THROW(parse_params_json(R"({"c":[0]})"), Error);
}

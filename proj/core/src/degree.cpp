#include "cbi/degree.hpp"

#include "cbi/error.hpp"

#include <algorithm>
#include <cmath>

namespace cbi {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double moment_at(const AdmissibleParams& p, const Vector& x0, int k, MomentKind kind, int j, double T, int M) {
  RecursionContext ctx(p, InitialLaw::deterministic(x0), TimeGrid(T, M));
  const Vector e = Vector::Unit(p.d(), j);
  if (kind == MomentKind::Raw) {
    const MomentTrajectory lower = raw_trajectory(ctx, std::max(k - 1, 1));
    return weighted_moment(ctx, lower, e, k, M);
  }
  if (k < 2) return 0.0;
  const MomentTrajectory lower = central_trajectory(ctx, std::max(k - 1, 1));
  return weighted_central_moment(ctx, lower, e, k, M);
}

}  // namespace

DegreeReport degree_check(const AdmissibleParams& p, const DegreeSweep& sweep, int k, MomentKind kind, int j,
                          double T, int M, double rel_tol) {
  if (k < 1 || k > kMaxMomentOrder) throw Error(ErrorCode::InvalidArgument, "degree_check: k must be in [1, 6]");
  if (j < 0 || j >= p.d()) throw Error(ErrorCode::DimensionMismatch, "degree_check: component out of range");
  if (sweep.x0_base.size() != p.d()) throw Error(ErrorCode::DimensionMismatch, "degree_check: x0 length != d");
  if (sweep.coordinate < 0 || sweep.coordinate >= p.d())
    throw Error(ErrorCode::DimensionMismatch, "degree_check: sweep coordinate out of range");
  if (!(sweep.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "degree_check: step must be > 0");

  DegreeReport r;
  r.kind = kind;
  r.k = k;
  r.j = j;
  r.degree_bound = kind == MomentKind::Raw ? k : k / 2;
  r.difference_order = r.degree_bound + 1;
  const int points = r.degree_bound + 2;

  for (int n = 0; n < points; ++n) {
    Vector x0 = sweep.x0_base;
    x0[sweep.coordinate] += n * sweep.step;
    r.x0_values.push_back(x0[sweep.coordinate]);
    r.moments.push_back(moment_at(p, x0, k, kind, j, T, M));
  }

  // forward difference of order points-1 at the first node
  const int order = r.difference_order;
  double diff = 0.0;
  for (int n = 0; n <= order; ++n)
    diff += ((order - n) % 2 == 0 ? 1.0 : -1.0) * binomial(order, n) * r.moments[static_cast<std::size_t>(n)];
  r.difference = diff;
  r.scale = 1.0;
  for (double m : r.moments) r.scale = std::max(r.scale, std::abs(m));
  r.tolerance = rel_tol * r.scale;
  r.passed = std::abs(diff) <= r.tolerance;
  return r;
}

}  // namespace cbi

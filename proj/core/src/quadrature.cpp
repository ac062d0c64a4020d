#include "cbi/quadrature.hpp"

#include "cbi/error.hpp"

#include <cmath>

namespace cbi {

std::vector<NodeWeight> grid_rule(int m, double h, int max_node) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "grid_rule: negative node");
  std::vector<NodeWeight> rule;
  if (m == 0) return rule;
  if (m == 1) {
    if (max_node >= 3) {
      rule = {{0, 9.0 * h / 24.0}, {1, 19.0 * h / 24.0}, {2, -5.0 * h / 24.0}, {3, 1.0 * h / 24.0}};
    } else if (max_node >= 2) {
      rule = {{0, 5.0 * h / 12.0}, {1, 8.0 * h / 12.0}, {2, -1.0 * h / 12.0}};
    } else {
      rule = {{0, 0.5 * h}, {1, 0.5 * h}};
    }
    return rule;
  }

  std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
  int start = 0;
  if (m % 2 == 1) {
    const double c = 3.0 * h / 8.0;
    w[0] += c;
    w[1] += 3.0 * c;
    w[2] += 3.0 * c;
    w[3] += c;
    start = 3;
  }
  const double c = h / 3.0;
  for (int n = start; n + 2 <= m; n += 2) {
    w[static_cast<std::size_t>(n)] += c;
    w[static_cast<std::size_t>(n) + 1] += 4.0 * c;
    w[static_cast<std::size_t>(n) + 2] += c;
  }
  rule.reserve(w.size());
  for (int n = 0; n <= m; ++n) rule.push_back({n, w[static_cast<std::size_t>(n)]});
  return rule;
}

namespace {

template <class T, class Norm>
T simpson_recurse(const std::function<T(double)>& f, double a, double b, const T& fa, const T& fm,
                  const T& fb, const T& whole, double tol, int depth, Norm norm) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0 || norm(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse<T>(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, norm) +
         simpson_recurse<T>(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, norm);
}

template <class T, class Norm>
T simpson_adaptive(const std::function<T(double)>& f, double a, double b, double tol, int max_depth,
                   Norm norm) {
  // Two panels up front so integrands that happen to agree at a, m, b do not
  // terminate the recursion prematurely.
  const double m = 0.5 * (a + b);
  const T fa = f(a);
  const T fm = f(m);
  const T fb = f(b);
  const double q1 = 0.5 * (a + m);
  const double q3 = 0.5 * (m + b);
  const T f1 = f(q1);
  const T f3 = f(q3);
  const T left = (m - a) / 6.0 * (fa + 4.0 * f1 + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * f3 + fb);
  return simpson_recurse<T>(f, a, m, fa, f1, fm, left, 0.5 * tol, max_depth, norm) +
         simpson_recurse<T>(f, m, b, fm, f3, fb, right, 0.5 * tol, max_depth, norm);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  return simpson_adaptive<double>(f, a, b, tol, max_depth, [](double x) { return std::abs(x); });
}

Matrix adaptive_simpson(const std::function<Matrix(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) {
    const Matrix probe = f(a);
    return Matrix::Zero(probe.rows(), probe.cols());
  }
  return simpson_adaptive<Matrix>(f, a, b, tol, max_depth,
                                  [](const Matrix& x) { return x.cwiseAbs().maxCoeff(); });
}

}  // namespace cbi

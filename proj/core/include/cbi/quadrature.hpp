#pragma once

#include "cbi/measures.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace cbi {

/// Node/weight pair of a quadrature rule on the uniform grid; the weight
/// already includes the grid step.
struct NodeWeight {
  int node;
  double weight;
};

/// Rule for int_0^{t_m} f(s) ds on the uniform grid t_n = n h, using f only
/// at grid nodes. Fourth order on every m >= 1:
///   m even:      composite Simpson
///   m odd >= 3:  Simpson 3/8 on [t_0, t_3], composite Simpson on [t_3, t_m]
///   m == 1:      cubic through t_0..t_3 (needs max_node >= 3), else the
///                quadratic through t_0..t_2
/// Nodes beyond m are only touched for m == 1.
std::vector<NodeWeight> grid_rule(int m, double h, int max_node);

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

/// Matrix-valued adaptive Simpson; the error test uses the max-abs entry.
Matrix adaptive_simpson(const std::function<Matrix(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

}  // namespace cbi

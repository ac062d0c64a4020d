#pragma once

#include "cbi/tensor.hpp"

#include <utility>
#include <vector>

namespace cbi {

/// Law of X_0: a point mass or a finite mixture of point masses on R_+^d.
class InitialLaw {
 public:
  static InitialLaw deterministic(Vector x0);
  /// Probabilities must be positive and sum to 1 within 1e-12.
  static InitialLaw mixture(std::vector<std::pair<Vector, double>> components);

  int dim() const noexcept { return static_cast<int>(points_.front().size()); }
  bool is_deterministic() const noexcept { return points_.size() == 1; }
  const std::vector<Vector>& points() const noexcept { return points_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }

  Vector mean() const;
  Matrix covariance() const;
  /// E[X_0^{(x)k}]
  MomentTensor moment(int order) const;
  /// E[(v . X_0)^k]
  double weighted_power(const Vector& v, int k) const;
  /// E[(v . (X_0 - E X_0))^k]
  double centered_weighted_power(const Vector& v, int k) const;

 private:
  InitialLaw(std::vector<Vector> points, std::vector<double> probs);

  std::vector<Vector> points_;
  std::vector<double> probs_;
};

}  // namespace cbi

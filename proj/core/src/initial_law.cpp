#include "cbi/initial_law.hpp"

#include "cbi/error.hpp"

#include <cmath>

namespace cbi {

namespace {

void check_point(const Vector& x) {
  if (x.size() < 1) throw Error(ErrorCode::DimensionMismatch, "initial value must have length >= 1");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || x[i] < 0.0)
      throw Error(ErrorCode::InvalidArgument, "initial value must be finite and componentwise >= 0");
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

InitialLaw::InitialLaw(std::vector<Vector> points, std::vector<double> probs)
    : points_(std::move(points)), probs_(std::move(probs)) {}

InitialLaw InitialLaw::deterministic(Vector x0) {
  check_point(x0);
  return InitialLaw({std::move(x0)}, {1.0});
}

InitialLaw InitialLaw::mixture(std::vector<std::pair<Vector, double>> components) {
  if (components.empty()) throw Error(ErrorCode::InvalidArgument, "mixture needs at least one component");
  std::vector<Vector> points;
  std::vector<double> probs;
  double total = 0.0;
  const auto d = components.front().first.size();
  for (auto& [x, p] : components) {
    check_point(x);
    if (x.size() != d) throw Error(ErrorCode::DimensionMismatch, "mixture components differ in dimension");
    if (!std::isfinite(p) || p <= 0.0) throw Error(ErrorCode::InvalidArgument, "mixture probabilities must be > 0");
    total += p;
    points.push_back(std::move(x));
    probs.push_back(p);
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "mixture probabilities must sum to 1");
  return InitialLaw(std::move(points), std::move(probs));
}

Vector InitialLaw::mean() const {
  Vector m = Vector::Zero(points_.front().size());
  for (std::size_t c = 0; c < points_.size(); ++c) m += probs_[c] * points_[c];
  return m;
}

Matrix InitialLaw::covariance() const {
  const Vector m = mean();
  const auto d = m.size();
  Matrix cov = Matrix::Zero(d, d);
  for (std::size_t c = 0; c < points_.size(); ++c) {
    const Vector y = points_[c] - m;
    cov.noalias() += probs_[c] * (y * y.transpose());
  }
  return cov;
}

MomentTensor InitialLaw::moment(int order) const {
  MomentTensor t(order, dim());
  for (std::size_t c = 0; c < points_.size(); ++c) {
    MomentTensor term = MomentTensor::outer_power(points_[c], order);
    term *= probs_[c];
    t += term;
  }
  return t;
}

double InitialLaw::weighted_power(const Vector& v, int k) const {
  double sum = 0.0;
  for (std::size_t c = 0; c < points_.size(); ++c) sum += probs_[c] * ipow(v.dot(points_[c]), k);
  return sum;
}

double InitialLaw::centered_weighted_power(const Vector& v, int k) const {
  if (is_deterministic()) return k == 0 ? 1.0 : 0.0;
  const Vector m = mean();
  double sum = 0.0;
  for (std::size_t c = 0; c < points_.size(); ++c) sum += probs_[c] * ipow(v.dot(points_[c] - m), k);
  return sum;
}

}  // namespace cbi

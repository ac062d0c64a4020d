#include "cbi/affine.hpp"

#include "cbi/error.hpp"

#include <algorithm>
#include <cmath>

namespace cbi {

Vector phi(const AdmissibleParams& p, const Vector& lambda) {
  const int d = p.d();
  if (lambda.size() != d) throw Error(ErrorCode::DimensionMismatch, "phi: lambda length != d");
  Vector out = -(p.B().transpose() * lambda);
  for (int i = 0; i < d; ++i) {
    out[i] += p.c()[i] * lambda[i] * lambda[i];
    for (const Atom& a : p.mu(i).atoms())
      out[i] += a.weight * (std::expm1(-lambda.dot(a.z)) + lambda[i] * std::min(1.0, a.z[i]));
  }
  return out;
}

double psi(const AdmissibleParams& p, const Vector& lambda) {
  if (lambda.size() != p.d()) throw Error(ErrorCode::DimensionMismatch, "psi: lambda length != d");
  double out = p.beta().dot(lambda);
  for (const Atom& a : p.nu().atoms()) out -= a.weight * std::expm1(-lambda.dot(a.z));
  return out;
}

int default_riccati_steps(double T) {
  const double n = std::max(1000.0, std::ceil(1000.0 * T));
  int steps = static_cast<int>(n);
  return steps % 2 == 0 ? steps : steps + 1;
}

namespace {

// Same integrator for any sign of lambda; the moment oracle differentiates
// through lambda = 0 and needs both sides.
RiccatiSolution integrate(const AdmissibleParams& p, const Vector& lambda, double T, int steps, bool check_sign) {
  if (!std::isfinite(T) || T < 0.0) throw Error(ErrorCode::NegativeTime, "Riccati horizon must be finite and >= 0");
  if (lambda.size() != p.d()) throw Error(ErrorCode::DimensionMismatch, "lambda length != d");
  if (steps <= 0) steps = default_riccati_steps(T);
  if (steps % 2 != 0) ++steps;
  const double h = T / steps;

  Vector v = lambda;
  double simpson = psi(p, v);
  for (int n = 1; n <= steps; ++n) {
    const Vector k1 = -phi(p, v);
    const Vector k2 = -phi(p, v + 0.5 * h * k1);
    const Vector k3 = -phi(p, v + 0.5 * h * k2);
    const Vector k4 = -phi(p, v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (check_sign && v.minCoeff() < -1e-9)
      throw Error(ErrorCode::NegativeComponent, "Riccati solution left R_+^d; use more steps");
    if (!v.allFinite()) throw Error(ErrorCode::Overflow, "Riccati solution blew up");
    const double weight = n == steps ? 1.0 : (n % 2 == 1 ? 4.0 : 2.0);
    simpson += weight * psi(p, v);
  }
  return {v, simpson * h / 3.0};
}

}  // namespace

RiccatiSolution solve_v(const AdmissibleParams& p, const Vector& lambda, double T, int steps) {
  if (lambda.size() == p.d() && lambda.minCoeff() < 0.0)
    throw Error(ErrorCode::InvalidArgument, "solve_v needs lambda >= 0");
  return integrate(p, lambda, T, steps, true);
}

double moment_from_laplace(const AdmissibleParams& p, const Vector& x0, double T, int j, int order, int steps) {
  if (order != 1 && order != 2) throw Error(ErrorCode::InvalidArgument, "moment_from_laplace supports orders 1 and 2");
  if (j < 0 || j >= p.d()) throw Error(ErrorCode::DimensionMismatch, "component out of range");
  if (x0.size() != p.d()) throw Error(ErrorCode::DimensionMismatch, "x0 length != d");

  // cumulant-type exponent K(l) = log E exp(-l X_{T,j})
  auto K = [&](double l) {
    const RiccatiSolution s = integrate(p, l * Vector::Unit(p.d(), j), T, steps, false);
    return -x0.dot(s.v) - s.psi_integral;
  };
  const double h = 1e-4;
  const double kp1 = K(h), km1 = K(-h), kp2 = K(h / 2), km2 = K(-h / 2);
  const double k0 = K(0.0);

  const double d1_h = (kp1 - km1) / (2 * h);
  const double d1_h2 = (kp2 - km2) / h;
  const double d1 = (4 * d1_h2 - d1_h) / 3;
  const double mean = -d1;
  if (order == 1) return mean;

  const double d2_h = (kp1 - 2 * k0 + km1) / (h * h);
  const double d2_h2 = (kp2 - 2 * k0 + km2) / (h * h / 4);
  const double var = (4 * d2_h2 - d2_h) / 3;
  return var + mean * mean;
}

}  // namespace cbi

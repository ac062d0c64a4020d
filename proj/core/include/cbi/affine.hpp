#pragma once

#include "cbi/params.hpp"

namespace cbi {

/// phi_i(l) = c_i l_i^2 - <B e_i, l> + sum_mu_i w (e^{-<l,z>} - 1 + l_i (1 ^ z_i))
Vector phi(const AdmissibleParams& p, const Vector& lambda);
/// psi(l) = <beta, l> - sum_nu w (e^{-<l,z>} - 1)
double psi(const AdmissibleParams& p, const Vector& lambda);

/// max(1000, ceil(1000 T)), rounded up to even.
int default_riccati_steps(double T);

struct RiccatiSolution {
  Vector v;             // v(T, lambda)
  double psi_integral;  // int_0^T psi(v(s, lambda)) ds
};

/// v' = -phi(v), v(0) = lambda >= 0, by classical RK4 with step T/steps
/// (steps <= 0 picks the default; odd counts are bumped to even so the psi
/// integral is a Simpson sum on the RK nodes). Throws Error(NegativeComponent)
/// if a component drops below -1e-9.
RiccatiSolution solve_v(const AdmissibleParams& p, const Vector& lambda, double T, int steps = 0);

/// E[X_{T,j}] (order 1) or E[X_{T,j}^2] (order 2) for X_0 = x0, from central
/// differences of log E e^{-l X_{T,j}} at l = 0 (step 1e-4, one Richardson
/// step).
double moment_from_laplace(const AdmissibleParams& p, const Vector& x0, double T, int j, int order, int steps = 0);

}  // namespace cbi

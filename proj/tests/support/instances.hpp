#pragma once

#include "cbi/params.hpp"

#include <random>

namespace cbi::testing {

inline ParamsCandidate zero_candidate(int d) {
  ParamsCandidate c;
  c.d = d;
  c.c.assign(static_cast<std::size_t>(d), 0.0);
  c.beta.assign(static_cast<std::size_t>(d), 0.0);
  c.B.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
  c.mu.assign(static_cast<std::size_t>(d), {});
  return c;
}

/// d = 1, only immigration jumps of size 1 at rate lambda.
inline AdmissibleParams poisson_params(double lambda) {
  ParamsCandidate c = zero_candidate(1);
  c.nu = {{{1.0}, lambda}};
  return make_params(c);
}

/// d = 1 square-root diffusion dX = (beta + b X) dt + sqrt(2 c X) dW.
inline AdmissibleParams cir_params(double c, double b, double beta) {
  ParamsCandidate p = zero_candidate(1);
  p.c = {c};
  p.B = {{b}};
  p.beta = {beta};
  return make_params(p);
}

struct RandomShape {
  int d_min = 1, d_max = 3;
  int max_atoms = 3;
  double max_norm = 5.0;
  double w_min = 0.05, w_max = 0.3;
  double c_max = 0.5;
  double beta_max = 1.0;
  double diag_min = -1.0, diag_max = 0.3;
  double offdiag_max = 0.4;
};

inline std::vector<RawAtom> random_atoms(std::mt19937_64& rng, int d, const RandomShape& s) {
  std::uniform_int_distribution<int> count(0, s.max_atoms);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<RawAtom> atoms;
  const int n = count(rng);
  for (int a = 0; a < n; ++a) {
    RawAtom atom;
    // direction in the open orthant, norm in (0.1, max_norm]
    std::vector<double> z(static_cast<std::size_t>(d));
    double sq = 0.0;
    for (double& x : z) {
      x = unit(rng) < 0.3 ? 0.0 : unit(rng);
      sq += x * x;
    }
    if (sq == 0.0) {
      z[0] = 1.0;
      sq = 1.0;
    }
    const double norm = 0.1 + (s.max_norm - 0.1) * unit(rng);
    for (double& x : z) x *= norm / std::sqrt(sq);
    atom.z = z;
    atom.weight = s.w_min + (s.w_max - s.w_min) * unit(rng);
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

inline AdmissibleParams random_params(std::mt19937_64& rng, const RandomShape& s = {}) {
  std::uniform_int_distribution<int> dim(s.d_min, s.d_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int d = dim(rng);
  ParamsCandidate c = zero_candidate(d);
  for (int i = 0; i < d; ++i) {
    c.c[static_cast<std::size_t>(i)] = s.c_max * unit(rng);
    c.beta[static_cast<std::size_t>(i)] = s.beta_max * unit(rng);
    for (int j = 0; j < d; ++j)
      c.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          i == j ? s.diag_min + (s.diag_max - s.diag_min) * unit(rng) : s.offdiag_max * unit(rng);
  }
  c.nu = random_atoms(rng, d, s);
  for (int j = 0; j < d; ++j) c.mu[static_cast<std::size_t>(j)] = random_atoms(rng, d, s);
  return make_params(c);
}

inline Vector random_x0(std::mt19937_64& rng, int d, double max = 2.0) {
  std::uniform_real_distribution<double> unit(0.0, max);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = unit(rng);
  return x;
}

}  // namespace cbi::testing

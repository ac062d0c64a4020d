#pragma once

#include "cbi/moments.hpp"

#include <vector>

namespace cbi {

struct DegreeSweep {
  Vector x0_base;     // first point of the sweep
  int coordinate = 0; // 0-based coordinate of x0 that moves
  double step = 1.0;  // spacing of the equally spaced x0 values
};

struct DegreeReport {
  MomentKind kind = MomentKind::Raw;
  int k = 0;
  int j = 0;
  int degree_bound = 0;       // k (raw) or floor(k/2) (central)
  int difference_order = 0;   // degree_bound + 1
  std::vector<double> x0_values;
  std::vector<double> moments;
  double difference = 0.0;
  double scale = 0.0;         // max(1, max |moment|)
  double tolerance = 0.0;     // rel_tol * scale
  bool passed = false;
};

/// Evaluates E[X_{T,j}^k] (raw) or E[(X_{T,j} - E X_{T,j})^k] (central) on
/// degree_bound + 2 equally spaced x0 values and checks that the finite
/// difference of order degree_bound + 1 vanishes within rel_tol * scale.
DegreeReport degree_check(const AdmissibleParams& p, const DegreeSweep& sweep, int k, MomentKind kind, int j,
                          double T, int M, double rel_tol = 1e-6);

}  // namespace cbi

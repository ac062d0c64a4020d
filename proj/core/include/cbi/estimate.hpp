#pragma once

#include "cbi/tensor.hpp"

#include <vector>

namespace cbi {

/// Empirical moment tensors at one time. raw[k] / central[k] hold order k
/// (k = 0..q); *_se the matching jackknife standard errors.
struct EmpiricalMoments {
  double time = 0.0;
  std::vector<MomentTensor> raw, raw_se, central, central_se;
};

/// Plug-in estimates from samples (one row per path). Raw entries are sample
/// means, so their jackknife error is the usual sd / sqrt(n). Central entries
/// use the sample mean for centering; their jackknife runs on delete-one
/// power sums. Throws Error(InvalidArgument) for fewer than 2 rows.
EmpiricalMoments estimate_moments(const Matrix& samples, int q, double time = 0.0);

std::vector<EmpiricalMoments> estimate_moments(const std::vector<Matrix>& samples_per_time,
                                               const std::vector<double>& times, int q);

}  // namespace cbi

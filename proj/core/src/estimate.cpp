#include "cbi/estimate.hpp"

#include "cbi/error.hpp"

#include <cmath>

namespace cbi {

namespace {

double jackknife_se(const std::vector<double>& leave_one_out) {
  const auto n = static_cast<double>(leave_one_out.size());
  double mean = 0.0;
  for (double v : leave_one_out) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : leave_one_out) ss += (v - mean) * (v - mean);
  return std::sqrt((n - 1.0) / n * ss);
}

}  // namespace

EmpiricalMoments estimate_moments(const Matrix& X, int q, double time) {
  const Eigen::Index n = X.rows();
  const int d = static_cast<int>(X.cols());
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "estimate_moments needs at least 2 paths");
  if (q < 0 || q > kMaxTensorOrder) throw Error(ErrorCode::InvalidArgument, "order out of range");
  const double nd = static_cast<double>(n);

  EmpiricalMoments out;
  out.time = time;
  const Vector mean = X.colwise().mean().transpose();
  // leave-one-out means, reused by every central entry
  const Matrix loo_mean = ((nd * mean.transpose()).replicate(n, 1) - X) / (nd - 1.0);

  for (int k = 0; k <= q; ++k) {
    MomentTensor raw(k, d), raw_se(k, d), cen(k, d), cen_se(k, d);
    const auto set = SymmetricIndexSet::get(k, d);
    for (std::size_t pos = 0; pos < set->size(); ++pos) {
      const std::vector<int>& idx = set->index(pos);

      Vector prod = Vector::Ones(n);
      for (int i : idx) prod.array() *= X.col(i).array();
      const double m = prod.mean();
      raw.at(pos) = m;
      raw_se.at(pos) = k == 0 ? 0.0 : std::sqrt((prod.array() - m).square().sum() / (nd - 1.0) / nd);

      if (k == 0) {
        cen.at(pos) = 1.0;
        continue;
      }
      // prod_r (x_{i_r} - m_{i_r}) = sum over subsets S of the positions of
      // prod_{S} x * prod_{not S} (-m); keep the per-path terms of each S
      const unsigned subsets = 1u << k;
      std::vector<Vector> terms(subsets);
      std::vector<double> sums(subsets);
      for (unsigned s = 0; s < subsets; ++s) {
        Vector t = Vector::Ones(n);
        for (int r = 0; r < k; ++r)
          if ((s >> r) & 1u) t.array() *= X.col(idx[static_cast<std::size_t>(r)]).array();
        sums[s] = t.sum();
        terms[s] = std::move(t);
      }
      auto centered = [&](auto&& mean_of, auto&& sum_of, double count) {
        double total = 0.0;
        for (unsigned s = 0; s < subsets; ++s) {
          double coef = sum_of(s) / count;
          for (int r = 0; r < k; ++r)
            if (!((s >> r) & 1u)) coef *= -mean_of(idx[static_cast<std::size_t>(r)]);
          total += coef;
        }
        return total;
      };
      cen.at(pos) = centered([&](int i) { return mean[i]; }, [&](unsigned s) { return sums[s]; }, nd);
      std::vector<double> loo(static_cast<std::size_t>(n));
      for (Eigen::Index p = 0; p < n; ++p)
        loo[static_cast<std::size_t>(p)] =
            centered([&](int i) { return loo_mean(p, i); }, [&](unsigned s) { return sums[s] - terms[s][p]; }, nd - 1.0);
      cen_se.at(pos) = jackknife_se(loo);
    }
    out.raw.push_back(std::move(raw));
    out.raw_se.push_back(std::move(raw_se));
    out.central.push_back(std::move(cen));
    out.central_se.push_back(std::move(cen_se));
  }
  return out;
}

std::vector<EmpiricalMoments> estimate_moments(const std::vector<Matrix>& samples, const std::vector<double>& times,
                                               int q) {
  if (samples.size() != times.size()) throw Error(ErrorCode::DimensionMismatch, "one sample matrix per time");
  std::vector<EmpiricalMoments> out;
  for (std::size_t r = 0; r < samples.size(); ++r) out.push_back(estimate_moments(samples[r], q, times[r]));
  return out;
}

}  // namespace cbi

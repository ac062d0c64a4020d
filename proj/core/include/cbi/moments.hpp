#pragma once

#include "cbi/initial_law.hpp"
#include "cbi/matfun.hpp"
#include "cbi/params.hpp"
#include "cbi/tensor.hpp"

#include <span>
#include <vector>

namespace cbi {

inline constexpr int kMaxMomentOrder = 6;
inline constexpr int kMaxMomentDim = 6;

/// Uniform grid t_m = m T / M, m = 0..M. M must be even and >= 2 because the
/// time integrals are composite Simpson sums on this grid.
class TimeGrid {
 public:
  TimeGrid(double T, int M);

  double horizon() const noexcept { return T_; }
  int intervals() const noexcept { return M_; }
  double step() const noexcept { return T_ / M_; }
  double time(int m) const noexcept { return m == M_ ? T_ : m * step(); }

 private:
  double T_;
  int M_;
};

enum class MomentKind { Raw, Central };

/// Moment tensors of every order 0..max_order at every grid node.
class MomentTrajectory {
 public:
  MomentTrajectory(MomentKind kind, TimeGrid grid, int dim);

  MomentKind kind() const noexcept { return kind_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }
  /// Highest order present at every node; -1 when empty.
  int max_order() const noexcept { return max_order_; }

  const MomentTensor& at(int node, int order) const;
  /// Appends the next order; `per_node` has one tensor per grid node.
  void push_order(std::vector<MomentTensor> per_node);

 private:
  MomentKind kind_;
  TimeGrid grid_;
  int dim_;
  int max_order_ = -1;
  std::vector<std::vector<MomentTensor>> by_order_;  // [order][node]
};

/// E X_t = e^{t B~} E X_0 + int_0^t e^{u B~} beta~ du.
/// Throws Error(NegativeTime) for t < 0.
Vector first_moment(const DerivedParams& dp, const InitialLaw& law, double t);

/// Everything the recursions share for one (parameters, initial law, grid):
/// derived parameters, e^{n h B~} for n = -2..M, and the closed-form mean at
/// every node.
class RecursionContext {
 public:
  RecursionContext(const AdmissibleParams& p, InitialLaw law, TimeGrid grid);

  const AdmissibleParams& params() const noexcept { return params_; }
  const DerivedParams& derived() const noexcept { return derived_; }
  const InitialLaw& law() const noexcept { return law_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return params_.d(); }

  /// (e^{lag h B~})^T, lag in [-2, M] (the rule at node 1 reaches node 3).
  const Matrix& propagator_transpose(int lag) const { return prop_t_.at(static_cast<std::size_t>(lag + 2)); }
  /// E X_{t_m}
  const Vector& mean_at(int node) const { return means_.at(static_cast<std::size_t>(node)); }

 private:
  AdmissibleParams params_;
  DerivedParams derived_;
  InitialLaw law_;
  TimeGrid grid_;
  std::vector<Matrix> prop_t_;
  std::vector<Vector> means_;
};

/// E[<w, X_{t_m}>^k] from the raw recursion, with every time integral a grid
/// quadrature over tensors of order <= k-1 taken from `lower` (a raw
/// trajectory on the context's grid). Throws Error(MissingLowerOrder) when
/// `lower` stops below order k-1.
double weighted_moment(const RecursionContext& ctx, const MomentTrajectory& lower, const Vector& w, int k,
                       int node);

/// E[<w, X_{t_m} - E X_{t_m}>^k] from the central recursion; `lower` is a
/// central trajectory holding orders <= k-1.
double weighted_central_moment(const RecursionContext& ctx, const MomentTrajectory& lower, const Vector& w,
                               int k, int node);

/// Standalone E[<w, X_T>^k]: builds the raw trajectory to order k-1 first.
double weighted_moment(const AdmissibleParams& p, const InitialLaw& law, const Vector& w, int k, double T,
                       int M);

struct MomentOptions {
  /// Worker threads for the polarization vectors of one order; results do
  /// not depend on this value.
  int threads = 1;
};

MomentTrajectory raw_trajectory(const RecursionContext& ctx, int q, const MomentOptions& opts = {});
MomentTrajectory raw_trajectory(const AdmissibleParams& p, const InitialLaw& law, int q, double T, int M,
                                const MomentOptions& opts = {});
MomentTrajectory central_trajectory(const RecursionContext& ctx, int q, const MomentOptions& opts = {});
MomentTrajectory central_trajectory(const AdmissibleParams& p, const InitialLaw& law, int q, double T, int M,
                                    const MomentOptions& opts = {});

/// E[prod_r (X_{T,i_r} - E X_{T,i_r})] for the given (0-based) indices.
double mixed_central(const AdmissibleParams& p, const InitialLaw& law, int q, double T, int M,
                     std::span<const int> indices);

/// Closed-form Var(X_T): outer time integrals by adaptive Simpson with
/// absolute tolerance `tol`, inner immigration integral exact.
Matrix variance(const DerivedParams& dp, const AdmissibleParams& p, const InitialLaw& law, double T,
                double tol = 1e-10);

/// One signed direction w = sum_r s_r e_{i_r} (integer coefficients) and the
/// weight it carries in the polarization sum.
struct PolarizationTerm {
  std::vector<int> direction;
  double weight;
};

/// Terms of a_1 ... a_k = 1/(k! 2^k) sum_{s in {+-1}^k} (prod s) (sum_r s_r a_r)^k
/// for a_r = <e_{i_r}, x>, with s_1 fixed to +1 (the s -> -s half repeats the
/// same terms) and equal directions merged.
std::vector<PolarizationTerm> polarization_terms(std::span<const int> indices, int dim);

/// a_1 ... a_k through the polarization sum; exists to check the identity.
double polarized_product(std::span<const double> a);

}  // namespace cbi

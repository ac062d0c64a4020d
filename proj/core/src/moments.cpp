#include "cbi/moments.hpp"

#include "cbi/error.hpp"
#include "cbi/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <thread>

namespace cbi {

TimeGrid::TimeGrid(double T, int M) : T_(T), M_(M) {
  if (!std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "horizon must be finite");
  if (T < 0.0) throw Error(ErrorCode::NegativeTime, "horizon must be >= 0");
  if (M < 2) throw Error(ErrorCode::InvalidArgument, "grid needs M >= 2 intervals");
  if (M % 2 != 0) throw Error(ErrorCode::OddGrid, "grid needs an even number of intervals, got " + std::to_string(M));
}

MomentTrajectory::MomentTrajectory(MomentKind kind, TimeGrid grid, int dim)
    : kind_(kind), grid_(grid), dim_(dim) {}

const MomentTensor& MomentTrajectory::at(int node, int order) const {
  if (order < 0 || order > max_order_)
    throw Error(ErrorCode::MissingLowerOrder, "trajectory holds orders <= " + std::to_string(max_order_) +
                                                  ", order " + std::to_string(order) + " requested");
  return by_order_[static_cast<std::size_t>(order)].at(static_cast<std::size_t>(node));
}

void MomentTrajectory::push_order(std::vector<MomentTensor> per_node) {
  if (static_cast<int>(per_node.size()) != grid_.intervals() + 1)
    throw Error(ErrorCode::DimensionMismatch, "one tensor per grid node expected");
  for (const auto& t : per_node)
    if (t.order() != max_order_ + 1 || t.dim() != dim_)
      throw Error(ErrorCode::DimensionMismatch, "tensor order/dimension does not extend the trajectory");
  by_order_.push_back(std::move(per_node));
  ++max_order_;
}

Vector first_moment(const DerivedParams& dp, const InitialLaw& law, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "first_moment at t < 0");
  if (law.dim() != dp.tbB.rows()) throw Error(ErrorCode::DimensionMismatch, "initial law dimension");
  if (t == 0.0) return law.mean();
  return expm(dp.tbB, t) * law.mean() + expm_integral(dp.tbB, t, dp.tbeta);
}

RecursionContext::RecursionContext(const AdmissibleParams& p, InitialLaw law, TimeGrid grid)
    : params_(p), derived_(derive(p)), law_(std::move(law)), grid_(grid) {
  if (p.d() > kMaxMomentDim) throw Error(ErrorCode::DimensionMismatch, "moment engine supports d <= 6");
  if (law_.dim() != p.d()) throw Error(ErrorCode::DimensionMismatch, "initial law dimension != d");
  const int M = grid_.intervals();
  const double h = grid_.step();
  prop_t_.reserve(static_cast<std::size_t>(M) + 3);
  for (int lag = -2; lag <= M; ++lag) prop_t_.push_back(expm(derived_.tbB, lag * h).transpose());
  means_.reserve(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) means_.push_back(first_moment(derived_, law_, grid_.time(m)));
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// sum_a w_a (v . z_a)^p for p = 0..k, one pass over the atoms.
std::array<double, kMaxMomentOrder + 1> jump_powers(const AtomicMeasure& m, const Vector& v, int k) {
  std::array<double, kMaxMomentOrder + 1> out{};
  for (const Atom& a : m.atoms()) {
    const double x = v.dot(a.z);
    double xp = a.weight;
    for (int p = 0; p <= k; ++p) {
      out[static_cast<std::size_t>(p)] += xp;
      xp *= x;
    }
  }
  return out;
}

void check_lower(const RecursionContext& ctx, const MomentTrajectory& lower, MomentKind kind, int k) {
  if (lower.kind() != kind) throw Error(ErrorCode::InvalidArgument, "lower-order trajectory has the wrong kind");
  if (lower.grid().intervals() != ctx.grid().intervals() || lower.grid().horizon() != ctx.grid().horizon())
    throw Error(ErrorCode::InvalidArgument, "lower-order trajectory lives on a different grid");
  if (lower.max_order() < k - 1)
    throw Error(ErrorCode::MissingLowerOrder, "order " + std::to_string(k) + " needs tensors up to order " +
                                                  std::to_string(k - 1) + ", have " +
                                                  std::to_string(lower.max_order()));
}

// Integrand of the order-k recursion at grid node n, written for the
// propagated direction v = e^{(t-s) B~^T} w. Every expectation it reads has
// total order <= k-1, which is what lets the orders be computed one by one.
//
// P[l] = E[(v.Y)^l] and G[l]_i = E[(v.Y)^l X_i], where Y = X (raw) or
// Y = X - E X (central); in the central case X_i = E X_i + Y_i splits G.
double integrand(const RecursionContext& ctx, const MomentTrajectory& lower, MomentKind kind, int k, int n,
                 const Vector& v) {
  const AdmissibleParams& p = ctx.params();
  const int d = p.d();
  std::array<double, kMaxMomentOrder + 1> P{};
  std::array<Vector, kMaxMomentOrder + 1> G;
  P[0] = 1.0;
  for (int l = 0; l + 2 <= k; ++l) {
    const MomentTensor& next = lower.at(n, l + 1);
    Vector g = next.contract_all_but_one(v);
    P[static_cast<std::size_t>(l) + 1] = v.dot(g);
    if (kind == MomentKind::Central) g += ctx.mean_at(n) * P[static_cast<std::size_t>(l)];
    G[static_cast<std::size_t>(l)] = std::move(g);
  }

  double f = 0.0;
  if (kind == MomentKind::Raw) {
    // P[k-1] for k >= 2 came from the loop; P[0] = 1 covers k = 1.
    f += k * ctx.derived().tbeta.dot(v) * P[static_cast<std::size_t>(k) - 1];
  }
  if (k < 2) return f;

  const Vector& Gk2 = G[static_cast<std::size_t>(k) - 2];
  double diffusion = 0.0;
  for (int i = 0; i < d; ++i) diffusion += p.c()[i] * v[i] * v[i] * Gk2[i];
  f += k * (k - 1) * diffusion;

  const auto nu_pow = jump_powers(p.nu(), v, k);
  std::array<std::array<double, kMaxMomentOrder + 1>, kMaxMomentDim> mu_pow{};
  for (int i = 0; i < d; ++i) mu_pow[static_cast<std::size_t>(i)] = jump_powers(p.mu(i), v, k);

  for (int l = 0; l + 2 <= k; ++l) {
    const auto jl = static_cast<std::size_t>(k - l);
    const Vector& Gl = G[static_cast<std::size_t>(l)];
    double branching = 0.0;
    for (int i = 0; i < d; ++i) branching += mu_pow[static_cast<std::size_t>(i)][jl] * Gl[i];
    f += binomial(k, l) * (branching + nu_pow[jl] * P[static_cast<std::size_t>(l)]);
  }
  return f;
}

double recursion_value(const RecursionContext& ctx, const MomentTrajectory& lower, MomentKind kind,
                       const Vector& w, int k, int node) {
  if (w.size() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "direction vector length != d");
  const int M = ctx.grid().intervals();
  if (node < 0 || node > M) throw Error(ErrorCode::InvalidArgument, "grid node out of range");
  if (k == 0) return 1.0;
  check_lower(ctx, lower, kind, k);

  const Vector v0 = ctx.propagator_transpose(node) * w;
  double value = kind == MomentKind::Raw ? ctx.law().weighted_power(v0, k)
                                         : ctx.law().centered_weighted_power(v0, k);
  if (kind == MomentKind::Central && k == 1) return value;

  for (const NodeWeight& nw : grid_rule(node, ctx.grid().step(), M)) {
    const Vector v = ctx.propagator_transpose(node - nw.node) * w;
    value += nw.weight * integrand(ctx, lower, kind, k, nw.node, v);
  }
  return value;
}

void check_order_bounds(int q, int d) {
  if (q < 1 || q > kMaxMomentOrder) throw Error(ErrorCode::InvalidArgument, "moment order must be in [1, 6]");
  if (d > kMaxMomentDim) throw Error(ErrorCode::DimensionMismatch, "moment engine supports d <= 6");
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Order-k tensors at every node, each entry assembled by polarization from
// E[<w, .>^k] along the distinct signed directions w.
std::vector<MomentTensor> next_order(const RecursionContext& ctx, const MomentTrajectory& lower, MomentKind kind,
                                     int k, int threads) {
  const int d = ctx.dim();
  const int M = ctx.grid().intervals();
  const auto set = SymmetricIndexSet::get(k, d);

  std::map<std::vector<int>, std::size_t> direction_id;
  std::vector<std::vector<int>> directions;
  std::vector<std::vector<std::pair<std::size_t, double>>> recipe(set->size());
  for (std::size_t pos = 0; pos < set->size(); ++pos) {
    for (PolarizationTerm& term : polarization_terms(set->index(pos), d)) {
      auto [it, inserted] = direction_id.try_emplace(term.direction, directions.size());
      if (inserted) directions.push_back(term.direction);
      recipe[pos].push_back({it->second, term.weight});
    }
  }

  std::vector<std::vector<double>> values(directions.size(), std::vector<double>(static_cast<std::size_t>(M) + 1));
  parallel_for(directions.size(), threads, [&](std::size_t id) {
    Vector w(d);
    for (int i = 0; i < d; ++i) w[i] = directions[id][static_cast<std::size_t>(i)];
    for (int m = 0; m <= M; ++m) values[id][static_cast<std::size_t>(m)] = recursion_value(ctx, lower, kind, w, k, m);
  });

  std::vector<MomentTensor> out;
  out.reserve(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) {
    MomentTensor t(k, d);
    for (std::size_t pos = 0; pos < set->size(); ++pos) {
      double sum = 0.0;
      for (const auto& [id, weight] : recipe[pos]) sum += weight * values[id][static_cast<std::size_t>(m)];
      t.at(pos) = sum;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<MomentTensor> constant_order(const RecursionContext& ctx, int order, double value) {
  std::vector<MomentTensor> out;
  for (int m = 0; m <= ctx.grid().intervals(); ++m) {
    MomentTensor t(order, ctx.dim());
    for (std::size_t pos = 0; pos < t.size(); ++pos) t.at(pos) = value;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

double weighted_moment(const RecursionContext& ctx, const MomentTrajectory& lower, const Vector& w, int k,
                       int node) {
  return recursion_value(ctx, lower, MomentKind::Raw, w, k, node);
}

double weighted_central_moment(const RecursionContext& ctx, const MomentTrajectory& lower, const Vector& w,
                               int k, int node) {
  return recursion_value(ctx, lower, MomentKind::Central, w, k, node);
}

double weighted_moment(const AdmissibleParams& p, const InitialLaw& law, const Vector& w, int k, double T,
                       int M) {
  check_order_bounds(k, p.d());
  RecursionContext ctx(p, law, TimeGrid(T, M));
  MomentTrajectory lower(MomentKind::Raw, ctx.grid(), p.d());
  lower.push_order(constant_order(ctx, 0, 1.0));
  for (int order = 1; order < k; ++order) lower.push_order(next_order(ctx, lower, MomentKind::Raw, order, 1));
  return weighted_moment(ctx, lower, w, k, M);
}

MomentTrajectory raw_trajectory(const RecursionContext& ctx, int q, const MomentOptions& opts) {
  check_order_bounds(q, ctx.dim());
  MomentTrajectory traj(MomentKind::Raw, ctx.grid(), ctx.dim());
  traj.push_order(constant_order(ctx, 0, 1.0));
  for (int k = 1; k <= q; ++k) traj.push_order(next_order(ctx, traj, MomentKind::Raw, k, opts.threads));
  return traj;
}

MomentTrajectory raw_trajectory(const AdmissibleParams& p, const InitialLaw& law, int q, double T, int M,
                                const MomentOptions& opts) {
  check_order_bounds(q, p.d());
  return raw_trajectory(RecursionContext(p, law, TimeGrid(T, M)), q, opts);
}

MomentTrajectory central_trajectory(const RecursionContext& ctx, int q, const MomentOptions& opts) {
  check_order_bounds(q, ctx.dim());
  MomentTrajectory traj(MomentKind::Central, ctx.grid(), ctx.dim());
  traj.push_order(constant_order(ctx, 0, 1.0));
  traj.push_order(constant_order(ctx, 1, 0.0));
  for (int k = 2; k <= q; ++k) traj.push_order(next_order(ctx, traj, MomentKind::Central, k, opts.threads));
  return traj;
}

MomentTrajectory central_trajectory(const AdmissibleParams& p, const InitialLaw& law, int q, double T, int M,
                                    const MomentOptions& opts) {
  check_order_bounds(q, p.d());
  return central_trajectory(RecursionContext(p, law, TimeGrid(T, M)), q, opts);
}

double mixed_central(const AdmissibleParams& p, const InitialLaw& law, int q, double T, int M,
                     std::span<const int> indices) {
  check_order_bounds(q, p.d());
  const int k = static_cast<int>(indices.size());
  if (k < 1 || k > q) throw Error(ErrorCode::InvalidArgument, "mixed_central needs 1 <= k <= q indices");
  for (int i : indices)
    if (i < 0 || i >= p.d()) throw Error(ErrorCode::DimensionMismatch, "mixed_central index out of range");
  RecursionContext ctx(p, law, TimeGrid(T, M));
  MomentTrajectory lower = k >= 2 ? central_trajectory(ctx, k - 1) : MomentTrajectory(MomentKind::Central, ctx.grid(), p.d());
  if (k == 1) lower.push_order(constant_order(ctx, 0, 1.0));
  double sum = 0.0;
  for (const PolarizationTerm& term : polarization_terms(indices, p.d())) {
    Vector w(p.d());
    for (int i = 0; i < p.d(); ++i) w[i] = term.direction[static_cast<std::size_t>(i)];
    sum += term.weight * weighted_central_moment(ctx, lower, w, k, M);
  }
  return sum;
}

std::vector<PolarizationTerm> polarization_terms(std::span<const int> indices, int dim) {
  const int k = static_cast<int>(indices.size());
  if (k < 1 || k > kMaxTensorOrder) throw Error(ErrorCode::InvalidArgument, "polarization needs 1..8 indices");
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  // 2 / (k! 2^k): the factor 2 accounts for the mirrored half with s_1 = -1.
  const double base = 2.0 / (kfact * std::ldexp(1.0, k));

  std::map<std::vector<int>, double> merged;
  for (unsigned mask = 0; mask < (1u << (k - 1)); ++mask) {
    std::vector<int> dir(static_cast<std::size_t>(dim), 0);
    int sign_product = 1;
    for (int r = 0; r < k; ++r) {
      const int s = (r > 0 && (mask >> (r - 1)) & 1u) ? -1 : 1;
      sign_product *= s;
      dir[static_cast<std::size_t>(indices[static_cast<std::size_t>(r)])] += s;
    }
    // (-w)^k = (-1)^k w^k: orient every direction so its first nonzero
    // coefficient is positive and merge.
    auto first = std::find_if(dir.begin(), dir.end(), [](int c) { return c != 0; });
    if (first == dir.end()) continue;
    double weight = base * sign_product;
    if (*first < 0) {
      for (int& c : dir) c = -c;
      if (k % 2 == 1) weight = -weight;
    }
    merged[dir] += weight;
  }
  std::vector<PolarizationTerm> out;
  for (auto& [dir, weight] : merged)
    if (weight != 0.0) out.push_back({dir, weight});
  return out;
}

double polarized_product(std::span<const double> a) {
  const int k = static_cast<int>(a.size());
  if (k == 0) return 1.0;
  std::vector<int> indices(a.size());
  for (int r = 0; r < k; ++r) indices[static_cast<std::size_t>(r)] = r;
  double sum = 0.0;
  for (const PolarizationTerm& term : polarization_terms(indices, k)) {
    double inner = 0.0;
    for (int r = 0; r < k; ++r) inner += term.direction[static_cast<std::size_t>(r)] * a[static_cast<std::size_t>(r)];
    sum += term.weight * ipow(inner, k);
  }
  return sum;
}

}  // namespace cbi

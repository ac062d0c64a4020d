#include "cbi/tensor.hpp"

#include "cbi/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <sstream>

namespace cbi {

namespace {

int code_of(std::span<const int> sorted, int dim) {
  int code = 0;
  for (int i : sorted) code = code * dim + i;
  return code;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void enumerate(int order, int dim, int lo, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == order) {
    out.push_back(cur);
    return;
  }
  for (int i = lo; i < dim; ++i) {
    cur.push_back(i);
    enumerate(order, dim, i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

SymmetricIndexSet::SymmetricIndexSet(int order, int dim) : order_(order), dim_(dim) {
  if (dim < 1 || dim > kMaxTensorDim) throw Error(ErrorCode::DimensionMismatch, "tensor dimension must be in [1, 6]");
  if (order < 0 || order > kMaxTensorOrder) throw Error(ErrorCode::InvalidArgument, "tensor order must be in [0, 8]");
  std::vector<int> cur;
  enumerate(order, dim, 0, cur, indices_);
  int codes = 1;
  for (int r = 0; r < order; ++r) codes *= dim;
  rank_.assign(static_cast<std::size_t>(codes), -1);
  counts_.assign(indices_.size() * static_cast<std::size_t>(dim), 0);
  multinomial_.resize(indices_.size());
  for (std::size_t pos = 0; pos < indices_.size(); ++pos) {
    rank_[static_cast<std::size_t>(code_of(indices_[pos], dim))] = static_cast<int>(pos);
    double denom = 1.0;
    for (int i : indices_[pos]) ++counts_[pos * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)];
    for (int i = 0; i < dim; ++i) denom *= factorial(count(pos, i));
    multinomial_[pos] = factorial(order) / denom;
  }
}

std::shared_ptr<const SymmetricIndexSet> SymmetricIndexSet::get(int order, int dim) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SymmetricIndexSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{order, dim}];
  if (!slot) slot = std::make_shared<const SymmetricIndexSet>(order, dim);
  return slot;
}

std::size_t SymmetricIndexSet::position(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw Error(ErrorCode::DimensionMismatch, "index length != tensor order");
  std::array<int, kMaxTensorOrder> sorted{};
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] < 0 || idx[r] >= dim_) throw Error(ErrorCode::DimensionMismatch, "tensor index out of range");
    sorted[r] = idx[r];
  }
  std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(idx.size()));
  return static_cast<std::size_t>(rank_[static_cast<std::size_t>(
      code_of(std::span<const int>(sorted.data(), idx.size()), dim_))]);
}

MomentTensor::MomentTensor(int order, int dim)
    : order_(order), dim_(dim), set_(SymmetricIndexSet::get(order, dim)), values_(set_->size(), 0.0) {}

double MomentTensor::contract(const Vector& v) const {
  if (v.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "contract: vector length");
  double sum = 0.0;
  for (std::size_t pos = 0; pos < values_.size(); ++pos) {
    double mono = set_->multinomial(pos);
    for (int i : set_->index(pos)) mono *= v[i];
    sum += mono * values_[pos];
  }
  return sum;
}

Vector MomentTensor::contract_all_but_one(const Vector& v) const {
  if (v.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "contract: vector length");
  if (order_ < 1) throw Error(ErrorCode::InvalidArgument, "contract_all_but_one needs order >= 1");
  // d/dv_i <T, v^k> = k <T, v^{k-1} e_i>; differentiate each monomial.
  Vector g = Vector::Zero(dim_);
  const double inv_k = 1.0 / order_;
  for (std::size_t pos = 0; pos < values_.size(); ++pos) {
    const double base = set_->multinomial(pos) * values_[pos] * inv_k;
    if (base == 0.0) continue;
    for (int i = 0; i < dim_; ++i) {
      const int n_i = set_->count(pos, i);
      if (n_i == 0) continue;
      double mono = base * n_i;
      for (int r = 0; r < dim_; ++r) {
        const int e = set_->count(pos, r) - (r == i ? 1 : 0);
        for (int p = 0; p < e; ++p) mono *= v[r];
      }
      g[i] += mono;
    }
  }
  return g;
}

MomentTensor MomentTensor::outer_power(const Vector& x, int order) {
  MomentTensor t(order, static_cast<int>(x.size()));
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    double prod = 1.0;
    for (int i : t.set_->index(pos)) prod *= x[i];
    t.values_[pos] = prod;
  }
  return t;
}

MomentTensor& MomentTensor::operator+=(const MomentTensor& other) {
  if (other.order_ != order_ || other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "tensor shapes differ");
  for (std::size_t pos = 0; pos < values_.size(); ++pos) values_[pos] += other.values_[pos];
  return *this;
}

MomentTensor& MomentTensor::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

std::string format_index(std::span<const int> sorted_index) {
  std::string out;
  for (std::size_t r = 0; r < sorted_index.size(); ++r) {
    if (r) out += '.';
    out += std::to_string(sorted_index[r] + 1);
  }
  return out;
}

std::vector<int> parse_index(const std::string& text) {
  std::vector<int> idx;
  if (text.empty()) return idx;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw Error(ErrorCode::ParseError, "malformed index '" + text + "'");
    std::size_t used = 0;
    const int v = std::stoi(part, &used);
    if (used != part.size() || v < 1) throw Error(ErrorCode::ParseError, "malformed index '" + text + "'");
    idx.push_back(v - 1);
  }
  return idx;
}

}  // namespace cbi

#pragma once

#include "cbi/measures.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cbi {

inline constexpr int kMaxTensorDim = 6;
inline constexpr int kMaxTensorOrder = 8;

/// Sorted multi-indices (i_1 <= ... <= i_k) over {0..d-1}, in lexicographic
/// order, with their multiplicity vectors and multinomial coefficients.
/// Shared (immutable) per (order, dim) pair.
class SymmetricIndexSet {
 public:
  static std::shared_ptr<const SymmetricIndexSet> get(int order, int dim);

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const std::vector<int>& index(std::size_t pos) const { return indices_[pos]; }
  /// Multiplicity of coordinate i in the multi-index at pos.
  int count(std::size_t pos, int i) const { return counts_[pos * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i)]; }
  /// k! / prod_i n_i!: number of ordered index tuples mapping to pos.
  double multinomial(std::size_t pos) const { return multinomial_[pos]; }
  /// Position of an arbitrary (unsorted) index tuple.
  std::size_t position(std::span<const int> idx) const;

  SymmetricIndexSet(int order, int dim);

 private:
  int order_;
  int dim_;
  std::vector<std::vector<int>> indices_;
  std::vector<int> counts_;
  std::vector<double> multinomial_;
  std::vector<int> rank_;  // base-d code of the sorted tuple -> position
};

/// Symmetric order-k tensor over d dimensions, stored once per sorted index.
/// Holds mixed moments E[X_{i_1} ... X_{i_k}].
class MomentTensor {
 public:
  MomentTensor() = default;
  MomentTensor(int order, int dim);

  int order() const noexcept { return order_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return values_.size(); }
  const SymmetricIndexSet& indices() const noexcept { return *set_; }

  double& at(std::size_t pos) { return values_[pos]; }
  double at(std::size_t pos) const { return values_[pos]; }
  double operator()(std::span<const int> idx) const { return values_[set_->position(idx)]; }
  double& operator()(std::span<const int> idx) { return values_[set_->position(idx)]; }
  double operator()(std::initializer_list<int> idx) const {
    return (*this)(std::span<const int>(idx.begin(), idx.size()));
  }
  double& operator()(std::initializer_list<int> idx) {
    return (*this)(std::span<const int>(idx.begin(), idx.size()));
  }
  const std::vector<double>& values() const noexcept { return values_; }

  /// <T, v^{(x)k}> = E[(v . X)^k]
  double contract(const Vector& v) const;
  /// g_i = <T, v^{(x)(k-1)} (x) e_i> = E[(v . X)^{k-1} X_i]; requires k >= 1.
  Vector contract_all_but_one(const Vector& v) const;

  /// Order-k outer power x^{(x)k}.
  static MomentTensor outer_power(const Vector& x, int order);

  MomentTensor& operator+=(const MomentTensor& other);
  MomentTensor& operator*=(double s);

 private:
  int order_ = 0;
  int dim_ = 0;
  std::shared_ptr<const SymmetricIndexSet> set_;
  std::vector<double> values_;
};

/// "i1.i2.i3" with 1-based coordinates; empty string for order 0.
std::string format_index(std::span<const int> sorted_index);
/// Inverse of format_index.
std::vector<int> parse_index(const std::string& text);

}  // namespace cbi

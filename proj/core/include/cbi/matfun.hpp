#pragma once

#include "cbi/measures.hpp"

#include <vector>

namespace cbi {

inline constexpr int kMaxMatrixDim = 16;

/// e^{tA} by scaling and squaring with a Taylor kernel on ||tA||_1 / 2^s <= 1/2.
///
/// When tA is essentially non-negative the kernel runs on the shifted
/// non-negative matrix tA + sI, so every series term is non-negative and the
/// result has non-negative entries to the last bit.
///
/// Throws Error(DimensionMismatch) for non-square or d > 16 input,
/// Error(InvalidArgument) for non-finite input, Error(Overflow) when the
/// result is not representable.
Matrix expm(const Matrix& A, double t);

/// e^{tA} v
Vector expm_action(const Matrix& A, double t, const Vector& v);

/// Row j of e^{tA}, i.e. e_j^T e^{tA}, returned as a column vector.
Vector expm_row(const Matrix& A, double t, int j);

/// Integral int_0^t e^{uA} b du, evaluated exactly through the exponential of
/// the augmented matrix [[A, b], [0, 0]].
Vector expm_integral(const Matrix& A, double t, const Vector& b);

/// e^{n h A} for n = -1, 0, ..., N, built once by repeated multiplication of
/// e^{hA} and reused by the quadrature loops.
class PropagatorTable {
 public:
  PropagatorTable() = default;
  PropagatorTable(const Matrix& A, double h, int N);

  /// e^{n h A}; n in [-1, N].
  const Matrix& at(int n) const { return powers_.at(static_cast<std::size_t>(n + 1)); }
  int size() const noexcept { return static_cast<int>(powers_.size()) - 1; }
  double step() const noexcept { return h_; }

 private:
  double h_ = 0.0;
  std::vector<Matrix> powers_;
};

}  // namespace cbi

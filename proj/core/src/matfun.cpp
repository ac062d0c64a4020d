#include "cbi/matfun.hpp"

#include "cbi/error.hpp"

#include <algorithm>
#include <cmath>

namespace cbi {

namespace {

constexpr int kTaylorDegree = 18;
constexpr double kScaledNormBound = 0.5;

void check_square(const Matrix& A) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "expm needs a square matrix");
  if (A.rows() < 1 || A.rows() > kMaxMatrixDim)
    throw Error(ErrorCode::DimensionMismatch, "expm supports 1 <= d <= 16");
  if (!A.allFinite()) throw Error(ErrorCode::InvalidArgument, "expm input has non-finite entries");
}

bool essentially_nonnegative(const Matrix& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (i != j && A(i, j) < 0.0) return false;
  return true;
}

// Horner evaluation of the degree-kTaylorDegree Taylor polynomial.
Matrix taylor(const Matrix& X) {
  const auto n = X.rows();
  Matrix result = Matrix::Identity(n, n);
  for (int k = kTaylorDegree; k >= 1; --k) {
    result = Matrix::Identity(n, n) + (X * result) / static_cast<double>(k);
  }
  return result;
}

}  // namespace

Matrix expm(const Matrix& A, double t) {
  check_square(A);
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "expm time must be finite");
  const auto n = A.rows();
  if (t == 0.0) return Matrix::Identity(n, n);

  Matrix X = t * A;
  // Shift so the kernel sees a non-negative matrix when X is essentially
  // non-negative, otherwise center the spectrum on the trace mean.
  double shift = 0.0;
  if (essentially_nonnegative(X)) {
    shift = std::max(0.0, -X.diagonal().minCoeff());
  } else {
    shift = -X.trace() / static_cast<double>(n);
  }
  X.diagonal().array() += shift;

  const double norm = X.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > kScaledNormBound) squarings = static_cast<int>(std::ceil(std::log2(norm / kScaledNormBound)));
  const double scale = std::ldexp(1.0, -squarings);

  // e^{-shift} is folded into every factor so the squaring phase never
  // overflows on intermediate values that the final result would not.
  Matrix E = taylor(X * scale) * std::exp(-shift * scale);
  for (int s = 0; s < squarings; ++s) E = E * E;

  if (!E.allFinite()) throw Error(ErrorCode::Overflow, "matrix exponential overflowed");
  return E;
}

Vector expm_action(const Matrix& A, double t, const Vector& v) {
  if (v.size() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "expm_action vector length");
  return expm(A, t) * v;
}

Vector expm_row(const Matrix& A, double t, int j) {
  if (j < 0 || j >= A.rows()) throw Error(ErrorCode::DimensionMismatch, "expm_row index out of range");
  return expm(A, t).row(j).transpose();
}

Vector expm_integral(const Matrix& A, double t, const Vector& b) {
  const auto n = A.rows();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "expm_integral vector length");
  if (n + 1 > kMaxMatrixDim) {
    throw Error(ErrorCode::DimensionMismatch, "expm_integral supports d <= 15");
  }
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = A;
  aug.topRightCorner(n, 1) = b;
  return expm(aug, t).topRightCorner(n, 1);
}

PropagatorTable::PropagatorTable(const Matrix& A, double h, int N) : h_(h) {
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "propagator table size must be >= 0");
  powers_.reserve(static_cast<std::size_t>(N) + 2);
  for (int k = -1; k <= N; ++k) powers_.push_back(expm(A, k * h));
}

}  // namespace cbi

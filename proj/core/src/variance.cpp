#include "cbi/error.hpp"
#include "cbi/moments.hpp"
#include "cbi/quadrature.hpp"

namespace cbi {

// d/dt Var = B~ Var + Var B~^T + sum_l (E X_t)_l C_l + N_nu, so by variation
// of constants the two E X_0 / beta~ pieces collapse into E X_{T-u}.
Matrix variance(const DerivedParams& dp, const AdmissibleParams& p, const InitialLaw& law, double T, double tol) {
  if (!(T >= 0.0)) throw Error(ErrorCode::NegativeTime, "variance at T < 0");
  const int d = p.d();
  if (law.dim() != d) throw Error(ErrorCode::DimensionMismatch, "initial law dimension != d");

  std::vector<Matrix> C;
  C.reserve(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    Matrix Cl = p.mu(l).outer_integral();
    Cl(l, l) += 2.0 * p.c()[l];
    C.push_back(std::move(Cl));
  }
  const Matrix N = p.nu().outer_integral();

  Matrix out = Matrix::Zero(d, d);
  if (!law.is_deterministic()) {
    const Matrix E = expm(dp.tbB, T);
    out += E * law.covariance() * E.transpose();
  }
  if (T == 0.0) return out;

  auto integrand = [&](double u) -> Matrix {
    const Vector m = first_moment(dp, law, T - u);
    Matrix S = N;
    for (int l = 0; l < d; ++l) S += m[l] * C[static_cast<std::size_t>(l)];
    const Matrix E = expm(dp.tbB, u);
    return E * S * E.transpose();
  };
  out += adaptive_simpson(std::function<Matrix(double)>(integrand), 0.0, T, tol);
  return 0.5 * (out + out.transpose());
}

}  // namespace cbi

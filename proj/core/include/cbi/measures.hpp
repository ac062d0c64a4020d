#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace cbi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Atom {
  Vector z;
  double weight = 0.0;
};

/// Finite weighted point set on U_d = R_+^d \ {0}.
///
/// Atoms are kept in lexicographic order of their location so that two
/// measures built from the same atoms compare equal and every integral is
/// accumulated in the same order. Atoms at identical locations are kept
/// separate; integrals do not care.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  /// Empty measure on U_dim.
  explicit AtomicMeasure(int dim);
  /// Throws Error(InvalidArgument) if an atom is off U_dim or has a
  /// non-positive or non-finite weight, Error(DimensionMismatch) on size.
  AtomicMeasure(int dim, std::vector<Atom> atoms);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  /// Euclidean norm of atom i.
  double norm(std::size_t i) const { return norms_[i]; }

  /// sum_a w_a (w . z_a)^p
  double poly_integral(const Vector& w, int p) const;
  /// sum_a w_a z_a z_a^T
  Matrix outer_integral() const;
  double total_mass() const noexcept;
  /// Mass of atoms with ||z|| >= K.
  double tail_mass(double K) const noexcept;
  /// sum_a w_a z_a over atoms with ||z|| >= 1.
  Vector big_jump_mean() const;
  /// sum_a w_a z_a over atoms with ||z|| < 1.
  Vector small_jump_mean() const;
  /// sum_a w_a z_a
  Vector mean() const;
  /// sum_a w_a ||z_a||^q over atoms with ||z|| >= 1.
  double big_jump_moment(int q) const;
  /// Atoms with ||z|| < K.
  AtomicMeasure restricted_below(double K) const;
  /// Same atoms, every weight multiplied by factor (> 0).
  AtomicMeasure scaled(double factor) const;
  /// Concatenation of the atom lists.
  AtomicMeasure merged(const AtomicMeasure& other) const;

  friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b);

 private:
  void canonicalize();

  int dim_ = 0;
  std::vector<Atom> atoms_;
  std::vector<double> norms_;
};

}  // namespace cbi

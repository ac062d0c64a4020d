#include "cbi/measures.hpp"

#include "cbi/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbi {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

AtomicMeasure::AtomicMeasure(int dim) : dim_(dim) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "measure dimension must be >= 1");
}

AtomicMeasure::AtomicMeasure(int dim, std::vector<Atom> atoms) : dim_(dim), atoms_(std::move(atoms)) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "measure dimension must be >= 1");
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    const Atom& atom = atoms_[a];
    const std::string where = "atom " + std::to_string(a);
    if (atom.z.size() != dim) throw Error(ErrorCode::DimensionMismatch, where + " has wrong length");
    if (!std::isfinite(atom.weight) || atom.weight <= 0.0)
      throw Error(ErrorCode::InvalidArgument, where + " weight must be finite and > 0");
    bool nonzero = false;
    for (int i = 0; i < dim; ++i) {
      if (!std::isfinite(atom.z[i]) || atom.z[i] < 0.0)
        throw Error(ErrorCode::InvalidArgument, where + " must be finite and componentwise >= 0");
      nonzero = nonzero || atom.z[i] > 0.0;
    }
    if (!nonzero) throw Error(ErrorCode::InvalidArgument, where + " lies at the origin");
  }
  canonicalize();
}

void AtomicMeasure::canonicalize() {
  std::stable_sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
    if (lex_less(a.z, b.z)) return true;
    if (lex_less(b.z, a.z)) return false;
    return a.weight < b.weight;
  });
  norms_.resize(atoms_.size());
  for (std::size_t a = 0; a < atoms_.size(); ++a) norms_[a] = atoms_[a].z.norm();
}

double AtomicMeasure::poly_integral(const Vector& w, int p) const {
  if (w.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "poly_integral weight vector");
  double sum = 0.0;
  for (const Atom& a : atoms_) sum += a.weight * ipow(w.dot(a.z), p);
  return sum;
}

Matrix AtomicMeasure::outer_integral() const {
  Matrix m = Matrix::Zero(dim_, dim_);
  for (const Atom& a : atoms_)
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) m(i, j) += a.weight * a.z[i] * a.z[j];
  m.triangularView<Eigen::StrictlyLower>() = m.transpose();
  return m;
}

double AtomicMeasure::total_mass() const noexcept {
  double sum = 0.0;
  for (const Atom& a : atoms_) sum += a.weight;
  return sum;
}

double AtomicMeasure::tail_mass(double K) const noexcept {
  double sum = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    if (norms_[a] >= K) sum += atoms_[a].weight;
  return sum;
}

Vector AtomicMeasure::big_jump_mean() const {
  Vector m = Vector::Zero(dim_);
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    if (norms_[a] >= 1.0) m += atoms_[a].weight * atoms_[a].z;
  return m;
}

Vector AtomicMeasure::small_jump_mean() const {
  Vector m = Vector::Zero(dim_);
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    if (norms_[a] < 1.0) m += atoms_[a].weight * atoms_[a].z;
  return m;
}

Vector AtomicMeasure::mean() const {
  Vector m = Vector::Zero(dim_);
  for (const Atom& a : atoms_) m += a.weight * a.z;
  return m;
}

double AtomicMeasure::big_jump_moment(int q) const {
  double sum = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    if (norms_[a] >= 1.0) sum += atoms_[a].weight * ipow(norms_[a], q);
  return sum;
}

AtomicMeasure AtomicMeasure::restricted_below(double K) const {
  AtomicMeasure out(dim_);
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (norms_[a] < K) {
      out.atoms_.push_back(atoms_[a]);
      out.norms_.push_back(norms_[a]);
    }
  }
  return out;
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorCode::InvalidArgument, "scale factor must be finite and > 0");
  AtomicMeasure out = *this;
  for (Atom& a : out.atoms_) a.weight *= factor;
  return out;
}

AtomicMeasure AtomicMeasure::merged(const AtomicMeasure& other) const {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "merging measures of different dimension");
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  return AtomicMeasure(dim_, std::move(atoms));
}

bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.dim_ != b.dim_ || a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
    if (a.atoms_[i].weight != b.atoms_[i].weight) return false;
    if (a.atoms_[i].z != b.atoms_[i].z) return false;
  }
  return true;
}

}  // namespace cbi

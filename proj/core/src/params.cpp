#include "cbi/params.hpp"

#include "cbi/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cbi {

struct ParamsAccess {
  static AdmissibleParams make() { return AdmissibleParams(); }
  static int& d(AdmissibleParams& p) { return p.d_; }
  static Vector& c(AdmissibleParams& p) { return p.c_; }
  static Vector& beta(AdmissibleParams& p) { return p.beta_; }
  static Matrix& B(AdmissibleParams& p) { return p.B_; }
  static AtomicMeasure& nu(AdmissibleParams& p) { return p.nu_; }
  static std::vector<AtomicMeasure>& mu(AdmissibleParams& p) { return p.mu_; }
};

std::string to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::DimensionMismatch: return "DimensionMismatch";
    case IssueKind::NegativeC: return "NegativeC";
    case IssueKind::NegativeBeta: return "NegativeBeta";
    case IssueKind::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case IssueKind::NonFinite: return "NonFinite";
    case IssueKind::AtomAtOrigin: return "AtomAtOrigin";
    case IssueKind::NegativeAtomComponent: return "NegativeAtomComponent";
    case IssueKind::NonpositiveWeight: return "NonpositiveWeight";
  }
  return "Unknown";
}

double AdmissibleParams::max_atom_norm() const noexcept {
  double m = 0.0;
  for (std::size_t a = 0; a < nu_.size(); ++a) m = std::max(m, nu_.norm(a));
  for (const auto& mu : mu_)
    for (std::size_t a = 0; a < mu.size(); ++a) m = std::max(m, mu.norm(a));
  return m;
}

bool operator==(const AdmissibleParams& a, const AdmissibleParams& b) {
  return a.d_ == b.d_ && a.c_ == b.c_ && a.beta_ == b.beta_ && a.B_ == b.B_ && a.nu_ == b.nu_ &&
         a.mu_ == b.mu_;
}

namespace {

std::string measure_name(int measure) {
  return measure == 0 ? std::string("nu") : "mu_" + std::to_string(measure);
}

void check_atoms(const std::vector<RawAtom>& atoms, int d, int measure,
                 std::vector<ValidationIssue>& issues) {
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const RawAtom& atom = atoms[a];
    const int idx = static_cast<int>(a) + 1;
    const std::string where = measure_name(measure) + " atom " + std::to_string(idx);
    if (static_cast<int>(atom.z.size()) != d) {
      issues.push_back({IssueKind::DimensionMismatch, -1, -1, measure, idx,
                        where + ": expected " + std::to_string(d) + " components"});
      continue;
    }
    if (!std::isfinite(atom.weight)) {
      issues.push_back({IssueKind::NonFinite, -1, -1, measure, idx, where + ": weight not finite"});
    } else if (atom.weight <= 0.0) {
      issues.push_back({IssueKind::NonpositiveWeight, -1, -1, measure, idx, where + ": weight must be > 0"});
    }
    bool nonzero = false;
    bool finite = true;
    for (int i = 0; i < d; ++i) {
      const double zi = atom.z[static_cast<std::size_t>(i)];
      if (!std::isfinite(zi)) {
        finite = false;
        continue;
      }
      if (zi < 0.0)
        issues.push_back({IssueKind::NegativeAtomComponent, i + 1, -1, measure, idx,
                          where + ": component " + std::to_string(i + 1) + " is negative"});
      nonzero = nonzero || zi > 0.0;
    }
    if (!finite) {
      issues.push_back({IssueKind::NonFinite, -1, -1, measure, idx, where + ": location not finite"});
    } else if (!nonzero) {
      issues.push_back({IssueKind::AtomAtOrigin, -1, -1, measure, idx, where + ": lies at the origin"});
    }
  }
}

AtomicMeasure to_measure(const std::vector<RawAtom>& raw, int d) {
  std::vector<Atom> atoms;
  atoms.reserve(raw.size());
  for (const RawAtom& r : raw) {
    Atom a;
    a.z = Eigen::Map<const Vector>(r.z.data(), static_cast<Eigen::Index>(r.z.size()));
    a.weight = r.weight;
    atoms.push_back(std::move(a));
  }
  return AtomicMeasure(d, std::move(atoms));
}

}  // namespace

ValidationResult validate(const ParamsCandidate& raw) {
  ValidationResult result;
  auto& issues = result.issues;
  const int d = raw.d;
  if (d < 1) {
    issues.push_back({IssueKind::DimensionMismatch, -1, -1, -1, -1, "d must be >= 1"});
    return result;
  }
  const auto ud = static_cast<std::size_t>(d);

  if (raw.c.size() != ud) {
    issues.push_back({IssueKind::DimensionMismatch, -1, -1, -1, -1, "c must have length d"});
  } else {
    for (int i = 0; i < d; ++i) {
      const double v = raw.c[static_cast<std::size_t>(i)];
      if (!std::isfinite(v))
        issues.push_back({IssueKind::NonFinite, i + 1, -1, -1, -1, "c_" + std::to_string(i + 1) + " not finite"});
      else if (v < 0.0)
        issues.push_back({IssueKind::NegativeC, i + 1, -1, -1, -1, "c_" + std::to_string(i + 1) + " < 0"});
    }
  }

  if (raw.beta.size() != ud) {
    issues.push_back({IssueKind::DimensionMismatch, -1, -1, -1, -1, "beta must have length d"});
  } else {
    for (int i = 0; i < d; ++i) {
      const double v = raw.beta[static_cast<std::size_t>(i)];
      if (!std::isfinite(v))
        issues.push_back({IssueKind::NonFinite, i + 1, -1, -1, -1, "beta_" + std::to_string(i + 1) + " not finite"});
      else if (v < 0.0)
        issues.push_back({IssueKind::NegativeBeta, i + 1, -1, -1, -1, "beta_" + std::to_string(i + 1) + " < 0"});
    }
  }

  bool b_shape_ok = raw.B.size() == ud;
  for (const auto& row : raw.B) b_shape_ok = b_shape_ok && row.size() == ud;
  if (!b_shape_ok) {
    issues.push_back({IssueKind::DimensionMismatch, -1, -1, -1, -1, "B must be d x d"});
  } else {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double v = raw.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const std::string name = "b_" + std::to_string(i + 1) + "," + std::to_string(j + 1);
        if (!std::isfinite(v))
          issues.push_back({IssueKind::NonFinite, i + 1, j + 1, -1, -1, name + " not finite"});
        else if (i != j && v < 0.0)
          issues.push_back({IssueKind::NegativeOffDiagonal, i + 1, j + 1, -1, -1, name + " < 0 off the diagonal"});
      }
    }
  }

  check_atoms(raw.nu, d, 0, issues);
  if (raw.mu.size() != ud) {
    issues.push_back({IssueKind::DimensionMismatch, -1, -1, -1, -1, "mu must hold d measures"});
  } else {
    for (int j = 0; j < d; ++j) check_atoms(raw.mu[static_cast<std::size_t>(j)], d, j + 1, issues);
  }

  if (!issues.empty()) return result;

  AdmissibleParams p = ParamsAccess::make();
  ParamsAccess::d(p) = d;
  ParamsAccess::c(p) = Eigen::Map<const Vector>(raw.c.data(), d);
  ParamsAccess::beta(p) = Eigen::Map<const Vector>(raw.beta.data(), d);
  Matrix B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = raw.B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  ParamsAccess::B(p) = std::move(B);
  ParamsAccess::nu(p) = to_measure(raw.nu, d);
  auto& mu = ParamsAccess::mu(p);
  for (int j = 0; j < d; ++j) mu.push_back(to_measure(raw.mu[static_cast<std::size_t>(j)], d));
  result.params = std::move(p);
  return result;
}

AdmissibleParams make_params(const ParamsCandidate& raw) {
  ValidationResult r = validate(raw);
  if (!r.ok()) {
    std::ostringstream os;
    os << "inadmissible parameters:";
    for (const auto& issue : r.issues) os << "\n  " << to_string(issue.kind) << ": " << issue.message;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return std::move(*r.params);
}

DerivedParams derive(const AdmissibleParams& p) {
  const int d = p.d();
  DerivedParams out;
  out.tbB = p.B();
  out.D.resize(d, d);
  for (int j = 0; j < d; ++j) {
    const AtomicMeasure& mu = p.mu(j);
    for (int i = 0; i < d; ++i) {
      const double delta = i == j ? 1.0 : 0.0;
      double excess = 0.0;
      double big = 0.0;
      for (std::size_t a = 0; a < mu.size(); ++a) {
        const Atom& atom = mu.atoms()[a];
        excess += atom.weight * std::max(atom.z[i] - delta, 0.0);
        if (mu.norm(a) >= 1.0) big += atom.weight * atom.z[i];
      }
      out.tbB(i, j) += excess;
      out.D(i, j) = out.tbB(i, j) - big;
    }
  }
  out.tbeta = p.beta() + p.nu().mean();
  return out;
}

MomentConditionReport check_moment_condition(const AdmissibleParams& p, int q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "moment order q must be >= 1");
  MomentConditionReport r;
  r.q = q;
  r.nu = p.nu().big_jump_moment(q);
  for (const auto& mu : p.mu()) r.mu.push_back(mu.big_jump_moment(q));
  return r;
}

AdmissibleParams truncate(const AdmissibleParams& p, double K) {
  if (std::isnan(K) || K <= 1.0) throw Error(ErrorCode::InvalidK, "truncation level must be > 1");
  if (std::isinf(K)) return p;
  AdmissibleParams out = p;
  const int d = p.d();
  for (int j = 0; j < d; ++j) {
    const AtomicMeasure& mu = p.mu(j);
    double removed = 0.0;
    for (std::size_t a = 0; a < mu.size(); ++a)
      if (mu.norm(a) >= K) removed += mu.atoms()[a].weight * std::min(mu.atoms()[a].z[j], 1.0);
    ParamsAccess::B(out)(j, j) = p.B()(j, j) - removed;
    ParamsAccess::mu(out)[static_cast<std::size_t>(j)] = mu.restricted_below(K);
  }
  ParamsAccess::nu(out) = p.nu().restricted_below(K);
  return out;
}

}  // namespace cbi

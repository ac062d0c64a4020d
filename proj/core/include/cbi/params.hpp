#pragma once

#include "cbi/measures.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cbi {

/// Raw atom as read from user input, before any checking.
struct RawAtom {
  std::vector<double> z;
  double weight = 0.0;
};

/// Unchecked parameter tuple (d, c, beta, B, nu, mu_1..mu_d).
struct ParamsCandidate {
  int d = 0;
  std::vector<double> c;
  std::vector<double> beta;
  std::vector<std::vector<double>> B;
  std::vector<RawAtom> nu;
  std::vector<std::vector<RawAtom>> mu;
};

enum class IssueKind {
  DimensionMismatch,
  NegativeC,
  NegativeBeta,
  NegativeOffDiagonal,
  NonFinite,
  AtomAtOrigin,
  NegativeAtomComponent,
  NonpositiveWeight,
};

/// Which measure an atom issue refers to; `measure == 0` is nu, `measure == j`
/// is mu_j (1-based). Index fields are 1-based, -1 when unused.
struct ValidationIssue {
  IssueKind kind;
  int i = -1;
  int j = -1;
  int measure = -1;
  int atom = -1;
  std::string message;
};

std::string to_string(IssueKind kind);

/// Validated admissible parameters. Only `validate` and `truncate` produce
/// instances, so every instance satisfies the admissibility conditions.
class AdmissibleParams {
 public:
  int d() const noexcept { return d_; }
  const Vector& c() const noexcept { return c_; }
  const Vector& beta() const noexcept { return beta_; }
  const Matrix& B() const noexcept { return B_; }
  const AtomicMeasure& nu() const noexcept { return nu_; }
  const AtomicMeasure& mu(int j) const { return mu_.at(static_cast<std::size_t>(j)); }
  const std::vector<AtomicMeasure>& mu() const noexcept { return mu_; }

  /// Largest atom norm over nu and all mu_j (0 if every measure is empty).
  double max_atom_norm() const noexcept;

  friend bool operator==(const AdmissibleParams& a, const AdmissibleParams& b);

 private:
  friend struct ParamsAccess;
  AdmissibleParams() = default;

  int d_ = 0;
  Vector c_;
  Vector beta_;
  Matrix B_;
  AtomicMeasure nu_;
  std::vector<AtomicMeasure> mu_;
};

struct ValidationResult {
  std::optional<AdmissibleParams> params;
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return params.has_value(); }
};

/// Checks every admissibility condition and reports all violations at once.
ValidationResult validate(const ParamsCandidate& raw);

/// Convenience wrapper: throws Error(InvalidArgument) listing every issue.
AdmissibleParams make_params(const ParamsCandidate& raw);

/// B~, beta~ and D: the drift matrix and immigration vector of the first
/// moment equation, and the drift matrix of the SDE with compensated small
/// and uncompensated big branching jumps.
struct DerivedParams {
  Matrix tbB;
  Vector tbeta;
  Matrix D;
};

DerivedParams derive(const AdmissibleParams& p);

/// Big-jump moments int ||z||^q 1{||z|| >= 1} of nu and of each mu_i.
struct MomentConditionReport {
  int q = 0;
  double nu = 0.0;
  std::vector<double> mu;
};

MomentConditionReport check_moment_condition(const AdmissibleParams& p, int q);

/// Parameters of the process whose jumps of norm >= K are removed. K may be
/// +infinity, in which case the input is returned unchanged.
AdmissibleParams truncate(const AdmissibleParams& p, double K);

inline constexpr double kInfiniteLevel = std::numeric_limits<double>::infinity();

/// JSON encoding:
/// {"d":int,"c":[...],"beta":[...],"B":[[...]],"nu":{"atoms":[{"z":[...],"w":x}]},"mu":[{"atoms":[...]},...]}
/// Throws Error(ParseError) on malformed documents (message carries a JSON pointer).
ParamsCandidate parse_params_json(const std::string& text);
ParamsCandidate load_params_file(const std::string& path);
std::string params_to_json(const AdmissibleParams& p);

}  // namespace cbi

#pragma once

#include "cbi/params.hpp"

#include <cstdint>
#include <vector>

namespace cbi {

enum class DiffusionScheme {
  /// x <- max(max(sqrt(x) + sqrt(2c) dW / 2, 0)^2 - c h / 2, 0); monotone in x,
  /// which keeps coupled truncation levels ordered path by path.
  SquareRoot,
  /// x <- max(x + sqrt(2 c x^+) dW, 0)
  EulerClamp,
};

struct SimConfig {
  double T = 1.0;
  double h = 1e-3;
  std::int64_t n_paths = 1000;
  std::uint64_t seed = 0;
  /// Strictly increasing, each in (1, inf]; simulate_path ignores this.
  std::vector<double> K_levels;
  Vector x0;
  DiffusionScheme scheme = DiffusionScheme::SquareRoot;
  /// Times at which states are stored (each must be a grid node); empty
  /// means every node 0, h, ..., T.
  std::vector<double> record_times;
  bool log_jumps = false;
  int threads = 1;
};

/// Checks the config against p and returns the number of Euler steps T/h.
/// Throws Error(InvalidArgument / InvalidK / DimensionMismatch).
std::int64_t check_config(const AdmissibleParams& p, const SimConfig& cfg);

enum class JumpSource { Immigration, Branching };

struct JumpEvent {
  double time = 0.0;
  JumpSource source = JumpSource::Immigration;
  int type = -1;       // branching type j (0-based); -1 for immigration
  Vector z;
  double u = 0.0;      // thinning mark; 0 for immigration
  int level = 0;       // index into the simulated levels that applied it
};

struct SimPath {
  std::vector<double> times;
  std::vector<double> levels;                 // truncation level per state row
  std::vector<std::vector<Vector>> states;    // [level][record]
  std::vector<JumpEvent> jumps;               // applied jumps, when logged
};

/// One path of the untruncated process.
SimPath simulate_path(const AdmissibleParams& p, const SimConfig& cfg, std::uint64_t path_index);

/// One path of every level in cfg.K_levels driven by the same Brownian
/// increments and the same untruncated jump stream.
SimPath simulate_coupled(const AdmissibleParams& p, const SimConfig& cfg, std::uint64_t path_index);

/// Recorded states of n_paths paths: samples[level][record] is n_paths x d.
struct SimEnsemble {
  std::vector<double> times;
  std::vector<double> levels;
  std::vector<std::vector<Matrix>> samples;
};

/// Paths 0..n_paths-1 of simulate_coupled (or simulate_path when K_levels is
/// empty), spread over cfg.threads workers; output does not depend on threads.
SimEnsemble simulate_ensemble(const AdmissibleParams& p, const SimConfig& cfg);

}  // namespace cbi

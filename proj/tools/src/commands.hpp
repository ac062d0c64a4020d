#pragma once

#include "config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cbi::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kComparisonFailure = 2, kInternalError = 3 };

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config
  int threads = 1;
};

int cmd_validate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_moments(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_compare(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_riccati(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_degree(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);

}  // namespace cbi::cli

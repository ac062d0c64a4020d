#pragma once

#include "cbi/initial_law.hpp"
#include "cbi/params.hpp"
#include "cbi/simulator.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbi::cli {

/// Bad configuration; `pointer` locates the offending field (RFC 6901).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// Typed access to a JSON object that remembers where it sits in the document.
class Node {
 public:
  Node(const nlohmann::json& j, std::string pointer) : j_(&j), ptr_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return ptr_; }
  const nlohmann::json& json() const noexcept { return *j_; }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node child(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, std::optional<int> fallback = std::nullopt, int lo = INT32_MIN,
              int hi = INT32_MAX) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  Vector vector(const std::string& key) const;

 private:
  const nlohmann::json* j_;
  std::string ptr_;
};

struct RunConfig {
  nlohmann::json doc;
  std::string base_dir;  // directory of the config file, for relative paths

  Node root() const { return Node(doc, ""); }
};

RunConfig load_config(const std::string& path);

/// Parameters from "params" (inline object) or "params_file" (path). Returns
/// the unchecked candidate; validation is left to the caller.
ParamsCandidate params_candidate(const RunConfig& cfg);

/// Validated parameters; throws ConfigError pointing at the parameter block.
AdmissibleParams admissible_params(const RunConfig& cfg);

/// {"x0": [...]} or {"mixture": [{"x0": [...], "p": ...}, ...]}
InitialLaw initial_law(const Node& block, int d);

/// Simulation block: T, h, n_paths, seed, K_levels ("inf" allowed), x0,
/// scheme ("sqrt" | "euler"), record_times.
SimConfig sim_config(const Node& block, int d);

}  // namespace cbi::cli

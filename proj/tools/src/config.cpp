#include "config.hpp"

#include "cbi/error.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cbi::cli {

namespace {

std::string join(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

const nlohmann::json& require(const nlohmann::json& j, const std::string& ptr, const std::string& key) {
  if (!j.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(ptr, key), "missing field");
  return *it;
}

double as_number(const nlohmann::json& j, const std::string& ptr) {
  if (j.is_string() && (j == "inf" || j == "Infinity")) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
  return v;
}

}  // namespace

Node Node::child(const std::string& key) const { return Node(require(*j_, ptr_, key), join(ptr_, key)); }

double Node::number(const std::string& key) const { return as_number(require(*j_, ptr_, key), join(ptr_, key)); }

double Node::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int Node::integer(const std::string& key, std::optional<int> fallback, int lo, int hi) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(ptr_, key), "missing field");
  }
  const auto& j = (*j_)[key];
  if (!j.is_number_integer()) throw ConfigError(join(ptr_, key), "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw ConfigError(join(ptr_, key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::uint64_t Node::u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const auto& j = (*j_)[key];
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(join(ptr_, key), "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string Node::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const auto& j = (*j_)[key];
  if (!j.is_string()) throw ConfigError(join(ptr_, key), "expected a string");
  return j.get<std::string>();
}

std::vector<double> Node::numbers(const std::string& key) const {
  const auto& j = require(*j_, ptr_, key);
  const std::string ptr = join(ptr_, key);
  if (!j.is_array()) throw ConfigError(ptr, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

std::vector<double> Node::numbers(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

Vector Node::vector(const std::string& key) const {
  const auto v = numbers(key);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file '" + path + "'");
  RunConfig cfg;
  try {
    cfg.doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  if (!cfg.doc.is_object()) throw ConfigError("/", "config must be a JSON object");
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  return cfg;
}

ParamsCandidate params_candidate(const RunConfig& cfg) {
  const Node root = cfg.root();
  std::string text;
  std::string prefix;
  if (root.has("params")) {
    text = cfg.doc["params"].dump();
    prefix = "/params";
  } else if (root.has("params_file")) {
    std::filesystem::path file = root.text("params_file", "");
    if (file.is_relative() && !cfg.base_dir.empty()) file = std::filesystem::path(cfg.base_dir) / file;
    std::ifstream in(file);
    if (!in) throw ConfigError("/params_file", "cannot open '" + file.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    prefix = "/params_file";
  } else {
    throw ConfigError("/params", "missing field (give \"params\" or \"params_file\")");
  }
  try {
    return parse_params_json(text);
  } catch (const Error& e) {
    // "ParseError: /nu/atoms/0/w: ..." -> pointer inside the parameter block
    std::string msg = e.what();
    const std::string tag = "ParseError: ";
    if (msg.rfind(tag, 0) == 0) msg = msg.substr(tag.size());
    const auto colon = msg.find(": ");
    if (colon != std::string::npos && !msg.empty() && msg[0] == '/') {
      const std::string inner = msg.substr(0, colon);
      throw ConfigError(prefix + (inner == "/" ? "" : inner), msg.substr(colon + 2));
    }
    throw ConfigError(prefix, msg);
  }
}

AdmissibleParams admissible_params(const RunConfig& cfg) {
  const auto result = validate(params_candidate(cfg));
  if (!result.ok()) {
    std::string msg = "parameters are not admissible:";
    for (const auto& issue : result.issues) msg += " [" + to_string(issue.kind) + "] " + issue.message + ";";
    throw ConfigError(cfg.root().has("params") ? "/params" : "/params_file", msg);
  }
  return *result.params;
}

InitialLaw initial_law(const Node& block, int d) {
  auto check_len = [&](const Vector& x, const std::string& ptr) {
    if (x.size() != d) throw ConfigError(ptr, "expected " + std::to_string(d) + " entries");
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] < 0.0) throw ConfigError(ptr + "/" + std::to_string(i), "initial values must be >= 0");
  };
  if (block.has("mixture")) {
    const Node mix = block.child("mixture");
    if (!mix.json().is_array() || mix.json().empty()) throw ConfigError(mix.pointer(), "expected a non-empty array");
    std::vector<std::pair<Vector, double>> comps;
    for (std::size_t i = 0; i < mix.json().size(); ++i) {
      const Node c(mix.json()[i], mix.pointer() + "/" + std::to_string(i));
      Vector x = c.vector("x0");
      check_len(x, c.pointer() + "/x0");
      const double p = c.number("p");
      if (!(p > 0.0)) throw ConfigError(c.pointer() + "/p", "probabilities must be > 0");
      comps.emplace_back(std::move(x), p);
    }
    try {
      return InitialLaw::mixture(std::move(comps));
    } catch (const Error& e) {
      throw ConfigError(mix.pointer(), e.what());
    }
  }
  Vector x = block.vector("x0");
  check_len(x, block.pointer() + "/x0");
  return InitialLaw::deterministic(std::move(x));
}

SimConfig sim_config(const Node& block, int d) {
  SimConfig cfg;
  cfg.T = block.number("T");
  if (!(cfg.T > 0.0)) throw ConfigError(block.pointer() + "/T", "must be > 0");
  cfg.h = block.number("h");
  if (!(cfg.h > 0.0)) throw ConfigError(block.pointer() + "/h", "must be > 0");
  const double ratio = cfg.T / cfg.h;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError(block.pointer() + "/h", "T / h must be an integer");
  cfg.n_paths = block.integer("n_paths", std::nullopt, 1);
  cfg.seed = block.u64("seed", 0);
  cfg.K_levels = block.numbers("K_levels", {});
  for (std::size_t l = 0; l < cfg.K_levels.size(); ++l) {
    if (!(cfg.K_levels[l] > 1.0))
      throw ConfigError(block.pointer() + "/K_levels/" + std::to_string(l), "truncation levels must be > 1");
    if (l > 0 && !(cfg.K_levels[l] > cfg.K_levels[l - 1]))
      throw ConfigError(block.pointer() + "/K_levels/" + std::to_string(l), "levels must be strictly increasing");
  }
  cfg.x0 = block.vector("x0");
  if (cfg.x0.size() != d) throw ConfigError(block.pointer() + "/x0", "expected " + std::to_string(d) + " entries");
  for (Eigen::Index i = 0; i < d; ++i)
    if (cfg.x0[i] < 0.0) throw ConfigError(block.pointer() + "/x0/" + std::to_string(i), "must be >= 0");
  const std::string scheme = block.text("scheme", "sqrt");
  if (scheme == "sqrt") cfg.scheme = DiffusionScheme::SquareRoot;
  else if (scheme == "euler") cfg.scheme = DiffusionScheme::EulerClamp;
  else throw ConfigError(block.pointer() + "/scheme", "expected \"sqrt\" or \"euler\"");
  cfg.record_times = block.numbers("record_times", {cfg.T});
  for (std::size_t r = 0; r < cfg.record_times.size(); ++r) {
    const double pos = cfg.record_times[r] / cfg.h;
    if (cfg.record_times[r] < 0.0 || cfg.record_times[r] > cfg.T * (1 + 1e-12) || std::abs(pos - std::round(pos)) > 1e-6)
      throw ConfigError(block.pointer() + "/record_times/" + std::to_string(r), "must be a grid node in [0, T]");
  }
  return cfg;
}

}  // namespace cbi::cli

#include "commands.hpp"

#include "cbi/error.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
  using namespace cbi::cli;

  CLI::App app{"Moments of multi-type CBI processes: recursion, simulation and Laplace oracle"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions opts;
  std::uint64_t seed = 0;

  using Command = int (*)(const RunConfig&, const RunOptions&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> table = {
      {"validate", "check admissibility and big-jump moments", cmd_validate},
      {"moments", "raw and/or central moment trajectories", cmd_moments},
      {"simulate", "Monte Carlo moment estimates with standard errors", cmd_simulate},
      {"compare", "recursion vs Monte Carlo vs Laplace oracle", cmd_compare},
      {"riccati", "solve the Riccati system for v(T, lambda)", cmd_riccati},
      {"degree", "polynomial degree of moments in x0", cmd_degree},
  };
  std::map<const CLI::App*, Command> dispatch;
  for (const auto& [name, help, fn] : table) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::Range(1, 1024));
    dispatch[sub] = fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidationFailure;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) opts.seed = seed;
  try {
    const RunConfig cfg = load_config(config_path);
    return dispatch.at(chosen)(cfg, opts, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return kValidationFailure;
  } catch (const cbi::Error& e) {
    switch (e.code()) {
      case cbi::ErrorCode::DimensionMismatch:
      case cbi::ErrorCode::InvalidArgument:
      case cbi::ErrorCode::InvalidK:
      case cbi::ErrorCode::NegativeTime:
      case cbi::ErrorCode::OddGrid:
      case cbi::ErrorCode::ParseError:
        std::cerr << "invalid input: " << e.what() << '\n';
        return kValidationFailure;
      default:
        std::cerr << "error: " << e.what() << '\n';
        return kInternalError;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

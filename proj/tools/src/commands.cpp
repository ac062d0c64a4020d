#include "commands.hpp"

#include "cbi/affine.hpp"
#include "cbi/csv.hpp"
#include "cbi/degree.hpp"
#include "cbi/error.hpp"
#include "cbi/estimate.hpp"
#include "cbi/moments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace cbi::cli {

namespace {

std::ofstream open_output(const RunOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  const auto path = std::filesystem::path(opts.out_dir) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

// JSON numbers in the shortest round-trip form, so reports are byte-stable.
nlohmann::ordered_json number(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return nlohmann::ordered_json::parse(format_double(x));
}

nlohmann::ordered_json numbers(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

void write_json(const RunOptions& opts, const std::string& name, const nlohmann::ordered_json& j) {
  auto os = open_output(opts, name);
  os << j.dump(2) << '\n';
}

struct MomentsBlock {
  int q;
  double T;
  int M;
};

MomentsBlock moments_block(const Node& b, int d) {
  if (d > kMaxMomentDim)
    throw ConfigError("/params/d", "moment recursion supports d <= " + std::to_string(kMaxMomentDim));
  MomentsBlock m;
  m.q = b.integer("q", std::nullopt, 1, kMaxMomentOrder);
  m.T = b.number("T");
  if (!(m.T > 0.0)) throw ConfigError(b.pointer() + "/T", "must be > 0");
  m.M = b.integer("M", 400, 2);
  if (m.M % 2 != 0) throw ConfigError(b.pointer() + "/M", "must be even");
  return m;
}

Vector vector_from(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

int cmd_validate(const RunConfig& cfg, const RunOptions&, std::ostream& log) {
  const auto result = validate(params_candidate(cfg));
  if (!result.ok()) {
    log << "invalid parameters:\n";
    for (const auto& issue : result.issues) log << "  [" << to_string(issue.kind) << "] " << issue.message << '\n';
    return kValidationFailure;
  }
  const auto& p = *result.params;
  const Node root = cfg.root();
  const int q = root.has("validate") ? root.child("validate").integer("q", 2, 1) : 2;
  const auto report = check_moment_condition(p, q);
  log << "parameters admissible (d = " << p.d() << ")\n";
  log << "big-jump moments of order " << q << ": nu " << format_double(report.nu);
  for (std::size_t i = 0; i < report.mu.size(); ++i) log << ", mu_" << i + 1 << ' ' << format_double(report.mu[i]);
  log << '\n';
  return kOk;
}

int cmd_moments(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const auto p = admissible_params(cfg);
  const Node b = cfg.root().child("moments");
  const auto mb = moments_block(b, p.d());
  const InitialLaw law = initial_law(b, p.d());
  const std::string kind = b.text("kind", "both");
  if (kind != "raw" && kind != "central" && kind != "both")
    throw ConfigError(b.pointer() + "/kind", "expected \"raw\", \"central\" or \"both\"");

  const RecursionContext ctx(p, law, TimeGrid(mb.T, mb.M));
  MomentOptions mo;
  mo.threads = opts.threads;
  if (kind != "central") {
    const auto traj = raw_trajectory(ctx, mb.q, mo);
    auto os = open_output(opts, "moments_raw.csv");
    write_moment_csv(os, traj);
    log << "wrote moments_raw.csv (orders 1.." << mb.q << ", " << mb.M + 1 << " nodes)\n";
  }
  if (kind != "raw") {
    const auto traj = central_trajectory(ctx, mb.q, mo);
    auto os = open_output(opts, "moments_central.csv");
    write_moment_csv(os, traj);
    log << "wrote moments_central.csv (orders 1.." << mb.q << ", " << mb.M + 1 << " nodes)\n";
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const auto p = admissible_params(cfg);
  const Node b = cfg.root().child("simulate");
  SimConfig sc = sim_config(b, p.d());
  if (opts.seed) sc.seed = *opts.seed;
  sc.threads = opts.threads;
  const int q = b.integer("q", 2, 1, kMaxMomentOrder);

  const auto ens = simulate_ensemble(p, sc);
  for (std::size_t l = 0; l < ens.levels.size(); ++l) {
    const auto est = estimate_moments(ens.samples[l], ens.times, q);
    const std::string suffix = ens.levels.size() == 1 ? "" : "_level" + std::to_string(l + 1);
    {
      auto os = open_output(opts, "simulate_raw" + suffix + ".csv");
      write_ensemble_csv(os, est, false);
    }
    {
      auto os = open_output(opts, "simulate_central" + suffix + ".csv");
      write_ensemble_csv(os, est, true);
    }
    log << "level K = " << format_double(ens.levels[l]) << ": wrote simulate_raw" << suffix
        << ".csv, simulate_central" << suffix << ".csv\n";
  }
  log << sc.n_paths << " paths, seed " << sc.seed << '\n';
  return kOk;
}

int cmd_compare(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const auto p = admissible_params(cfg);
  const Node b = cfg.root().child("compare");
  const auto mb = moments_block(b, p.d());
  const double rel_tol = b.number("rel_tol", 0.02);
  const double se_factor = b.number("se_factor", 4.0);
  const double oracle_tol = b.number("oracle_rel_tol", 1e-5);
  if (!(rel_tol >= 0.0)) throw ConfigError(b.pointer() + "/rel_tol", "must be >= 0");
  if (!(se_factor >= 0.0)) throw ConfigError(b.pointer() + "/se_factor", "must be >= 0");

  // The simulation block reuses T and x0 from the comparison.
  nlohmann::json sim_doc = b.json();
  sim_doc["record_times"] = nlohmann::json::array({mb.T});
  sim_doc.erase("K_levels");
  SimConfig sc = sim_config(Node(sim_doc, b.pointer()), p.d());
  if (opts.seed) sc.seed = *opts.seed;
  sc.threads = opts.threads;

  const InitialLaw law = InitialLaw::deterministic(sc.x0);
  const RecursionContext ctx(p, law, TimeGrid(mb.T, mb.M));
  MomentOptions mo;
  mo.threads = opts.threads;
  const auto raw = raw_trajectory(ctx, mb.q, mo);
  const auto central = central_trajectory(ctx, mb.q, mo);

  const auto ens = simulate_ensemble(p, sc);
  const auto est = estimate_moments(ens.samples[0].back(), mb.q, mb.T);

  auto os = open_output(opts, "compare.csv");
  os << "kind,order,index,recursion,mc,mc_stderr,band,laplace,pass\n";
  int entries = 0, failures = 0;
  for (int central_kind = 0; central_kind < 2; ++central_kind) {
    const auto& traj = central_kind ? central : raw;
    for (int k = 1; k <= mb.q; ++k) {
      if (central_kind && k == 1) continue;  // identically zero
      const MomentTensor& rec = traj.at(mb.M, k);
      const MomentTensor& mc = central_kind ? est.central[static_cast<std::size_t>(k)] : est.raw[static_cast<std::size_t>(k)];
      const MomentTensor& se =
          central_kind ? est.central_se[static_cast<std::size_t>(k)] : est.raw_se[static_cast<std::size_t>(k)];
      for (std::size_t pos = 0; pos < rec.size(); ++pos) {
        const auto& idx = rec.indices().index(pos);
        const double band = std::max(se_factor * se.at(pos), rel_tol * std::abs(rec.at(pos)));
        bool pass = std::abs(rec.at(pos) - mc.at(pos)) <= band;
        std::string laplace;
        const bool diagonal = std::all_of(idx.begin(), idx.end(), [&](int i) { return i == idx.front(); });
        if (!central_kind && k <= 2 && diagonal) {
          const double oracle = moment_from_laplace(p, sc.x0, mb.T, idx.front(), k);
          laplace = format_double(oracle);
          pass = pass && std::abs(oracle - rec.at(pos)) <= oracle_tol * std::max(1.0, std::abs(rec.at(pos)));
        }
        ++entries;
        if (!pass) ++failures;
        os << (central_kind ? "central" : "raw") << ',' << k << ',' << format_index(idx) << ','
           << format_double(rec.at(pos)) << ',' << format_double(mc.at(pos)) << ',' << format_double(se.at(pos))
           << ',' << format_double(band) << ',' << laplace << ',' << (pass ? "true" : "false") << '\n';
      }
    }
  }
  log << "compare: " << entries - failures << "/" << entries << " entries within band (" << sc.n_paths
      << " paths, seed " << sc.seed << "); wrote compare.csv\n";
  return failures == 0 ? kOk : kComparisonFailure;
}

int cmd_riccati(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const auto p = admissible_params(cfg);
  const Node b = cfg.root().child("riccati");
  const Vector lambda = b.vector("lambda");
  if (lambda.size() != p.d()) throw ConfigError(b.pointer() + "/lambda", "expected " + std::to_string(p.d()) + " entries");
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] < 0.0) throw ConfigError(b.pointer() + "/lambda/" + std::to_string(i), "must be >= 0");
  const double T = b.number("T");
  if (!(T > 0.0)) throw ConfigError(b.pointer() + "/T", "must be > 0");
  const int steps = b.integer("steps", 0, 0);

  const auto sol = solve_v(p, lambda, T, steps);
  nlohmann::ordered_json out;
  out["T"] = number(T);
  out["lambda"] = numbers(lambda);
  out["steps"] = steps > 0 ? steps + steps % 2 : default_riccati_steps(T);
  out["v"] = numbers(sol.v);
  out["psi_integral"] = number(sol.psi_integral);
  if (b.has("x0")) {
    const Vector x0 = b.vector("x0");
    if (x0.size() != p.d()) throw ConfigError(b.pointer() + "/x0", "expected " + std::to_string(p.d()) + " entries");
    out["x0"] = numbers(x0);
    out["laplace"] = number(std::exp(-x0.dot(sol.v) - sol.psi_integral));
  }
  write_json(opts, "riccati.json", out);
  log << "v(T) = [";
  for (Eigen::Index i = 0; i < sol.v.size(); ++i) log << (i ? ", " : "") << format_double(sol.v[i]);
  log << "], int psi = " << format_double(sol.psi_integral) << "; wrote riccati.json\n";
  return kOk;
}

int cmd_degree(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const auto p = admissible_params(cfg);
  const Node b = cfg.root().child("degree");
  if (p.d() > kMaxMomentDim)
    throw ConfigError("/params/d", "moment recursion supports d <= " + std::to_string(kMaxMomentDim));
  const int k = b.integer("k", std::nullopt, 1, kMaxMomentOrder);
  const std::string kind_text = b.text("kind", "raw");
  if (kind_text != "raw" && kind_text != "central")
    throw ConfigError(b.pointer() + "/kind", "expected \"raw\" or \"central\"");
  const MomentKind kind = kind_text == "raw" ? MomentKind::Raw : MomentKind::Central;
  DegreeSweep sweep;
  sweep.x0_base = b.vector("x0");
  if (sweep.x0_base.size() != p.d())
    throw ConfigError(b.pointer() + "/x0", "expected " + std::to_string(p.d()) + " entries");
  sweep.coordinate = b.integer("coordinate", 1, 1, p.d()) - 1;
  sweep.step = b.number("step", 1.0);
  if (!(sweep.step > 0.0)) throw ConfigError(b.pointer() + "/step", "must be > 0");
  for (Eigen::Index i = 0; i < sweep.x0_base.size(); ++i)
    if (sweep.x0_base[i] < 0.0) throw ConfigError(b.pointer() + "/x0/" + std::to_string(i), "must be >= 0");
  const int j = b.integer("j", 1, 1, p.d()) - 1;
  const double T = b.number("T");
  if (!(T > 0.0)) throw ConfigError(b.pointer() + "/T", "must be > 0");
  const int M = b.integer("M", 200, 2);
  if (M % 2 != 0) throw ConfigError(b.pointer() + "/M", "must be even");
  const double rel_tol = b.number("rel_tol", 1e-6);

  const auto r = degree_check(p, sweep, k, kind, j, T, M, rel_tol);
  nlohmann::ordered_json out;
  out["kind"] = kind_text;
  out["k"] = k;
  out["j"] = j + 1;
  out["coordinate"] = sweep.coordinate + 1;
  out["degree_bound"] = r.degree_bound;
  out["difference_order"] = r.difference_order;
  out["x0_values"] = numbers(vector_from(r.x0_values));
  out["moments"] = numbers(vector_from(r.moments));
  out["difference"] = number(r.difference);
  out["tolerance"] = number(r.tolerance);
  out["passed"] = r.passed;
  write_json(opts, "degree.json", out);
  log << "degree " << kind_text << " k=" << k << ": order-" << r.difference_order << " difference "
      << format_double(r.difference) << " (tolerance " << format_double(r.tolerance) << ") "
      << (r.passed ? "PASS" : "FAIL") << "; wrote degree.json\n";
  return r.passed ? kOk : kComparisonFailure;
}

}  // namespace cbi::cli

#include "cbi/simulator.hpp"

#include "cbi/error.hpp"
#include "cbi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace cbi {

namespace {

struct JumpTable {
  std::vector<Vector> z;
  std::vector<double> norm;
  std::vector<double> cumulative;  // normalized cumulative weights
  double mass = 0.0;

  explicit JumpTable(const AtomicMeasure& m) {
    double acc = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a) {
      z.push_back(m.atoms()[a].z);
      norm.push_back(m.norm(a));
      acc += m.atoms()[a].weight;
      cumulative.push_back(acc);
    }
    mass = acc;
    for (double& c : cumulative) c /= acc;
  }

  std::size_t pick(double u) const {
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), z.size() - 1);
  }
};

struct Event {
  double time;
  double u;
  std::size_t atom;
};

// Events of one Poisson stream, generated in time order with the whole
// horizon at once; `cursor` walks it during the simulation.
struct Stream {
  std::vector<Event> events;
  std::size_t cursor = 0;

  const Event* peek(double t_end) const {
    return cursor < events.size() && events[cursor].time <= t_end ? &events[cursor] : nullptr;
  }
};

constexpr std::uint64_t kLayerShift = 32;
constexpr int kMaxLayers = 60;

struct Model {
  int d = 0;
  Matrix A;  // drift with compensated small branching jumps folded in
  Vector beta;
  Vector c;
  JumpTable nu;
  std::vector<JumpTable> mu;
  std::int64_t steps = 0;
  double h = 0.0;
  double T = 0.0;
  double layer_base = 1.0;
  std::vector<std::int64_t> record_nodes;
  std::vector<double> record_times;

  Model(const AdmissibleParams& p, const SimConfig& cfg) : d(p.d()), beta(p.beta()), c(p.c()), nu(p.nu()) {
    steps = check_config(p, cfg);
    T = cfg.T;
    h = cfg.T / static_cast<double>(steps);
    A = p.B();
    for (int j = 0; j < d; ++j) {
      mu.emplace_back(p.mu(j));
      for (const Atom& a : p.mu(j).atoms()) A(j, j) -= a.weight * std::min(1.0, a.z[j]);
    }
    for (int i = 0; i < d; ++i)
      if (1.0 + h * A(i, i) < 0.0)
        throw Error(ErrorCode::UnstableStep, "step h too large for the drift: 1 + h a_ii < 0 for type " +
                                                 std::to_string(i + 1));
    layer_base = std::max(1.0, 2.0 * cfg.x0.maxCoeff());

    if (cfg.record_times.empty()) {
      for (std::int64_t n = 0; n <= steps; ++n) record_nodes.push_back(n);
    } else {
      for (double t : cfg.record_times) {
        const double pos = t / h;
        const auto node = static_cast<std::int64_t>(std::llround(pos));
        if (!(t >= 0.0) || node > steps || std::abs(pos - static_cast<double>(node)) > 1e-6)
          throw Error(ErrorCode::InvalidArgument, "record time " + std::to_string(t) + " is not a grid node");
        record_nodes.push_back(node);
      }
      std::sort(record_nodes.begin(), record_nodes.end());
      record_nodes.erase(std::unique(record_nodes.begin(), record_nodes.end()), record_nodes.end());
    }
    for (std::int64_t n : record_nodes) record_times.push_back(n == steps ? T : static_cast<double>(n) * h);
  }

  double layer_low(int layer) const { return layer == 0 ? 0.0 : layer_base * std::ldexp(1.0, layer - 1); }
  double layer_high(int layer) const { return layer_base * std::ldexp(1.0, layer); }
};

Stream make_stream(const CounterRng& rng, std::uint32_t channel, std::uint64_t base, double rate, double lo,
                   double width, const JumpTable& table, double T) {
  Stream s;
  if (rate <= 0.0) return s;
  double t = 0.0;
  for (std::uint64_t n = 0;; ++n) {
    const auto u = rng.uniforms(channel, base + n);
    t += -std::log(u[0]) / rate;
    if (t > T) break;
    s.events.push_back({t, lo + width * u[1], table.pick(u[2])});
  }
  return s;
}

class PathRunner {
 public:
  PathRunner(const Model& m, std::vector<double> levels, std::uint64_t seed, std::uint64_t path, bool log)
      : m_(m), levels_(std::move(levels)), rng_(seed, path), log_(log) {}

  template <class Sink>
  void run(const Vector& x0, Sink&& record, std::vector<JumpEvent>* jumps) {
    const int d = m_.d;
    const std::size_t L = levels_.size();
    std::vector<Vector> x(L, x0);
    layers_.assign(static_cast<std::size_t>(d), {});
    immigration_ = make_stream(rng_, 0, 0, m_.nu.mass, 0.0, 0.0, m_.nu, m_.T);

    std::size_t next_record = 0;
    auto maybe_record = [&](std::int64_t node) {
      if (next_record < m_.record_nodes.size() && m_.record_nodes[next_record] == node) {
        for (std::size_t l = 0; l < L; ++l) record(l, next_record, x[l]);
        ++next_record;
      }
    };
    maybe_record(0);

    Vector drifted(d);
    for (std::int64_t n = 0; n < m_.steps; ++n) {
      const double t0 = static_cast<double>(n) * m_.h;
      const double t1 = n + 1 == m_.steps ? m_.T : static_cast<double>(n + 1) * m_.h;
      cover(x, t0);

      // jumps in (t0, t1] in time order, continuous part frozen
      for (;;) {
        const Event* best = immigration_.peek(t1);
        int best_type = -1;
        Stream* best_stream = best ? &immigration_ : nullptr;
        for (int j = 0; j < d; ++j) {
          for (Stream& s : layers_[static_cast<std::size_t>(j)]) {
            const Event* e = s.peek(t1);
            if (e && (!best || e->time < best->time)) {
              best = e;
              best_type = j;
              best_stream = &s;
            }
          }
        }
        if (!best) break;
        const Event ev = *best;
        ++best_stream->cursor;
        if (best_type < 0) {
          for (std::size_t l = 0; l < L; ++l) {
            if (m_.nu.norm[ev.atom] >= levels_[l]) continue;
            x[l] += m_.nu.z[ev.atom];
            if (log_ && jumps) jumps->push_back({ev.time, JumpSource::Immigration, -1, m_.nu.z[ev.atom], 0.0, static_cast<int>(l)});
          }
        } else {
          const JumpTable& tab = m_.mu[static_cast<std::size_t>(best_type)];
          for (std::size_t l = 0; l < L; ++l) {
            if (tab.norm[ev.atom] >= levels_[l] || ev.u > x[l][best_type]) continue;
            x[l] += tab.z[ev.atom];
            if (log_ && jumps)
              jumps->push_back({ev.time, JumpSource::Branching, best_type, tab.z[ev.atom], ev.u, static_cast<int>(l)});
          }
        }
        cover(x, ev.time);
      }

      // continuous part: linear drift, then the diffusion step, same noise for every level
      std::array<double, 16> dw{};
      for (int i = 0; i < d; ++i)
        if (m_.c[i] > 0.0)
          dw[static_cast<std::size_t>(i)] = std::sqrt(m_.h) *
                                            rng_.normals(static_cast<std::uint32_t>(1 + d + i), static_cast<std::uint64_t>(n))[0];
      for (std::size_t l = 0; l < L; ++l) {
        Vector& xl = x[l];
        const double bound = 10.0 * (1.0 + xl.norm());
        for (int i = 0; i < d; ++i) {
          double off = 0.0;
          for (int k = 0; k < d; ++k)
            if (k != i) off += m_.A(i, k) * xl[k];
          drifted[i] = xl[i] * (1.0 + m_.h * m_.A(i, i)) + m_.h * (m_.beta[i] + off);
          if (std::abs(drifted[i] - xl[i]) > bound)
            throw Error(ErrorCode::UnstableStep, "drift increment exceeds 10 (1 + |X|); reduce h");
        }
        for (int i = 0; i < d; ++i) {
          const double ci = m_.c[i];
          double v = std::max(drifted[i], 0.0);
          if (ci > 0.0) {
            const double w = dw[static_cast<std::size_t>(i)];
            if (scheme_ == DiffusionScheme::SquareRoot) {
              const double s = std::max(std::sqrt(v) + std::sqrt(2.0 * ci) * w / 2.0, 0.0);
              v = std::max(s * s - ci * m_.h / 2.0, 0.0);
            } else {
              v = std::max(v + std::sqrt(2.0 * ci * v) * w, 0.0);
            }
          }
          xl[i] = v;
        }
        if (!xl.allFinite()) throw Error(ErrorCode::Overflow, "state is no longer finite");
      }
      maybe_record(n + 1);
    }
  }

  void set_scheme(DiffusionScheme s) { scheme_ = s; }

 private:
  // Make sure the branching streams of type j reach above the largest
  // current x_j; new layers only matter from time t on.
  void cover(const std::vector<Vector>& x, double t) {
    for (int j = 0; j < m_.d; ++j) {
      const JumpTable& tab = m_.mu[static_cast<std::size_t>(j)];
      if (tab.mass <= 0.0) continue;
      double need = 0.0;
      for (const Vector& xl : x) need = std::max(need, xl[j]);
      auto& layers = layers_[static_cast<std::size_t>(j)];
      while (layers.empty() || m_.layer_high(static_cast<int>(layers.size()) - 1) < need) {
        const int layer = static_cast<int>(layers.size());
        if (layer >= kMaxLayers) throw Error(ErrorCode::Overflow, "branching state too large to thin");
        const double lo = m_.layer_low(layer);
        const double width = m_.layer_high(layer) - lo;
        Stream s = make_stream(rng_, static_cast<std::uint32_t>(1 + j), static_cast<std::uint64_t>(layer) << kLayerShift,
                               tab.mass * width, lo, width, tab, m_.T);
        while (s.cursor < s.events.size() && s.events[s.cursor].time <= t) ++s.cursor;
        layers.push_back(std::move(s));
      }
    }
  }

  const Model& m_;
  std::vector<double> levels_;
  CounterRng rng_;
  bool log_;
  DiffusionScheme scheme_ = DiffusionScheme::SquareRoot;
  Stream immigration_;
  std::vector<std::vector<Stream>> layers_;
};

SimPath run_one(const Model& m, const SimConfig& cfg, std::vector<double> levels, std::uint64_t path_index) {
  SimPath out;
  out.times = m.record_times;
  out.levels = levels;
  out.states.assign(levels.size(), std::vector<Vector>(m.record_nodes.size()));
  PathRunner runner(m, std::move(levels), cfg.seed, path_index, cfg.log_jumps);
  runner.set_scheme(cfg.scheme);
  runner.run(
      cfg.x0, [&](std::size_t l, std::size_t r, const Vector& x) { out.states[l][r] = x; },
      cfg.log_jumps ? &out.jumps : nullptr);
  return out;
}

std::vector<double> coupled_levels(const SimConfig& cfg) {
  if (cfg.K_levels.empty()) throw Error(ErrorCode::InvalidArgument, "simulate_coupled needs K_levels");
  return cfg.K_levels;
}

}  // namespace

std::int64_t check_config(const AdmissibleParams& p, const SimConfig& cfg) {
  if (!std::isfinite(cfg.T) || cfg.T <= 0.0) throw Error(ErrorCode::InvalidArgument, "T must be finite and > 0");
  if (!std::isfinite(cfg.h) || cfg.h <= 0.0) throw Error(ErrorCode::InvalidArgument, "h must be finite and > 0");
  const double ratio = cfg.T / cfg.h;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps))
    throw Error(ErrorCode::InvalidArgument, "T / h must be an integer");
  if (steps > 1e12) throw Error(ErrorCode::InvalidArgument, "too many steps");
  if (cfg.n_paths < 1) throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1");
  if (cfg.x0.size() != p.d()) throw Error(ErrorCode::DimensionMismatch, "x0 length != d");
  for (Eigen::Index i = 0; i < cfg.x0.size(); ++i)
    if (!std::isfinite(cfg.x0[i]) || cfg.x0[i] < 0.0) throw Error(ErrorCode::InvalidArgument, "x0 must be >= 0");
  if (p.d() > 16) throw Error(ErrorCode::DimensionMismatch, "simulator supports d <= 16");
  for (std::size_t l = 0; l < cfg.K_levels.size(); ++l) {
    const double K = cfg.K_levels[l];
    if (std::isnan(K) || K <= 1.0) throw Error(ErrorCode::InvalidK, "truncation levels must be > 1");
    if (l > 0 && !(K > cfg.K_levels[l - 1])) throw Error(ErrorCode::InvalidK, "K_levels must be strictly increasing");
  }
  if (cfg.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
  return static_cast<std::int64_t>(steps);
}

SimPath simulate_path(const AdmissibleParams& p, const SimConfig& cfg, std::uint64_t path_index) {
  const Model m(p, cfg);
  return run_one(m, cfg, {kInfiniteLevel}, path_index);
}

SimPath simulate_coupled(const AdmissibleParams& p, const SimConfig& cfg, std::uint64_t path_index) {
  const Model m(p, cfg);
  return run_one(m, cfg, coupled_levels(cfg), path_index);
}

SimEnsemble simulate_ensemble(const AdmissibleParams& p, const SimConfig& cfg) {
  const Model m(p, cfg);
  const std::vector<double> levels = cfg.K_levels.empty() ? std::vector<double>{kInfiniteLevel} : cfg.K_levels;
  SimEnsemble out;
  out.times = m.record_times;
  out.levels = levels;
  const auto n = static_cast<Eigen::Index>(cfg.n_paths);
  out.samples.assign(levels.size(), std::vector<Matrix>(m.record_nodes.size(), Matrix(n, p.d())));

  const int workers = static_cast<int>(std::min<std::int64_t>(cfg.threads, cfg.n_paths));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      for (std::int64_t path = w; path < cfg.n_paths; path += workers) {
        PathRunner runner(m, levels, cfg.seed, static_cast<std::uint64_t>(path), false);
        runner.set_scheme(cfg.scheme);
        runner.run(
            cfg.x0,
            [&](std::size_t l, std::size_t r, const Vector& x) { out.samples[l][r].row(static_cast<Eigen::Index>(path)) = x.transpose(); },
            nullptr);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace cbi

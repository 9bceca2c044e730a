#include "occtime/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "occtime/errors.hpp"

namespace occtime {

std::mt19937_64 path_stream(std::uint64_t root_seed, std::uint64_t path_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32),
                    static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

void check_band(double x, double b) {
  if (!(0.0 <= x && x <= b) || !std::isfinite(b)) throw DomainError("requires 0 <= x <= b");
}

// int_0^T omega(Y_s) ds for Y_s = max(y0 - mu s, 0).
double drift_occupation(const WeightFunction& omega, double mu, double y0, double T) {
  const double to_zero = y0 / mu;
  if (T <= to_zero) return omega.integral(y0 - mu * T, y0) / mu;
  return omega.integral(0.0, y0) / mu + omega(0.0) * (T - to_zero);
}

}  // namespace

PathOutcome simulate_cl_exact(const CramerLundbergExp<double>& m, const WeightFunction& omega, double x,
                              double b, std::mt19937_64& rng, std::uint64_t max_events) {
  check_band(x, b);
  PathOutcome out;
  if (x == b) {
    out.exit_kind = ExitKind::Up;
    out.S_at_exit = b;
    return out;
  }
  std::exponential_distribution<double> wait(m.lambda), claim(m.beta);
  double X = x, S = x, L = 0.0, t = 0.0;
  for (std::uint64_t event = 0; event < max_events; ++event) {
    const double gap = wait(rng);
    const double y0 = S - X;
    const double to_b = (b - X) / m.mu;
    if (to_b <= gap) {
      out.exit_kind = ExitKind::Up;
      out.L_at_exit = L + drift_occupation(omega, m.mu, y0, to_b);
      out.exit_time = t + to_b;
      out.S_at_exit = b;
      return out;
    }
    L += drift_occupation(omega, m.mu, y0, gap);
    t += gap;
    X += m.mu * gap;
    S = std::max(S, X);
    X -= claim(rng);
    if (X < 0.0) {
      out.exit_kind = ExitKind::Down;
      out.L_at_exit = L;
      out.exit_time = t;
      out.S_at_exit = S;
      return out;
    }
  }
  out.L_at_exit = L;
  out.exit_time = t;
  out.S_at_exit = S;
  return out;
}

PathOutcome simulate_brownian_euler(const BrownianDrift<double>& m, const WeightFunction& omega,
                                    double x, double b, double dt, std::mt19937_64& rng,
                                    std::uint64_t max_steps) {
  check_band(x, b);
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  PathOutcome out;
  if (x == b) {
    out.exit_kind = ExitKind::Up;
    out.S_at_exit = b;
    return out;
  }
  if (x == 0.0) {
    out.exit_kind = ExitKind::Down;
    return out;
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  const double drift = m.mu * dt, scale = m.sigma * std::sqrt(dt);
  double X = x, S = x, L = 0.0;
  for (std::uint64_t step = 1; step <= max_steps; ++step) {
    L += omega(S - X) * dt;
    X += drift + scale * noise(rng);
    S = std::max(S, X);
    if (X > b || X < 0.0) {
      out.exit_kind = X > b ? ExitKind::Up : ExitKind::Down;
      out.L_at_exit = L;
      out.exit_time = static_cast<double>(step) * dt;
      out.S_at_exit = std::min(S, b);
      return out;
    }
  }
  out.L_at_exit = L;
  out.exit_time = static_cast<double>(max_steps) * dt;
  out.S_at_exit = S;
  return out;
}

std::string engine_name(Engine e) { return e == Engine::ExactCL ? "exact_cl" : "euler_brownian"; }

namespace {

struct BlockSums {
  double up = 0.0, up_sq = 0.0, down = 0.0, down_sq = 0.0;
  std::uint64_t n_up = 0, n_down = 0, n_censored = 0;
};

McEstimate finish(double sum, double sum_sq, const McOptions& o, Engine engine, std::uint64_t n_up,
                  std::uint64_t n_down, std::uint64_t n_censored) {
  McEstimate e;
  const auto n = static_cast<double>(o.n_paths);
  e.n_paths = o.n_paths;
  e.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1.0));
  e.std_error = std::sqrt(var / n);
  e.up_fraction = static_cast<double>(n_up) / n;
  e.down_fraction = static_cast<double>(n_down) / n;
  e.censored_fraction = static_cast<double>(n_censored) / n;
  e.seed = o.seed;
  e.engine = engine;
  return e;
}

}  // namespace

ExitEstimates estimate_exit_laplace(const LevyModeld& model, const WeightFunction& omega, double x,
                                    double b, const McOptions& o) {
  check_band(x, b);
  if (o.n_paths < 100) throw DomainError("at least 100 paths are required");
  if (o.block == 0) throw DomainError("block size must be positive");
  const Engine engine = model.is_brownian() ? Engine::EulerBrownian : Engine::ExactCL;
  if (engine == Engine::EulerBrownian && !(o.dt > 0.0)) throw DomainError("dt must be positive");

  auto run_path = [&](std::uint64_t index) {
    auto rng = path_stream(o.seed, index);
    if (const auto* cl = std::get_if<CramerLundbergExp<double>>(&model.params()))
      return simulate_cl_exact(*cl, omega, x, b, rng);
    return simulate_brownian_euler(std::get<BrownianDrift<double>>(model.params()), omega, x, b, o.dt, rng);
  };

  const std::uint64_t n_blocks = (o.n_paths + o.block - 1) / o.block;
  std::vector<BlockSums> blocks(n_blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k = next++; k < n_blocks; k = next++) {
      BlockSums s;
      const std::uint64_t end = std::min(o.n_paths, (k + 1) * o.block);
      for (std::uint64_t i = k * o.block; i < end; ++i) {
        const PathOutcome p = run_path(i);
        const double v = std::exp(-p.L_at_exit);
        switch (p.exit_kind) {
          case ExitKind::Up:
            s.up += v;
            s.up_sq += v * v;
            ++s.n_up;
            break;
          case ExitKind::Down:
            s.down += v;
            s.down_sq += v * v;
            ++s.n_down;
            break;
          case ExitKind::Censored:
            ++s.n_censored;
            break;
        }
      }
      blocks[k] = s;
    }
  };
  const unsigned threads = std::max(1u, o.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BlockSums total;
  for (const auto& s : blocks) {
    total.up += s.up;
    total.up_sq += s.up_sq;
    total.down += s.down;
    total.down_sq += s.down_sq;
    total.n_up += s.n_up;
    total.n_down += s.n_down;
    total.n_censored += s.n_censored;
  }
  return {finish(total.up, total.up_sq, o, engine, total.n_up, total.n_down, total.n_censored),
          finish(total.down, total.down_sq, o, engine, total.n_up, total.n_down, total.n_censored)};
}

}  // namespace occtime

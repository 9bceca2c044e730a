#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "occtime/levy_model.hpp"
#include "occtime/weight_function.hpp"

namespace occtime {

enum class ExitKind { Up, Down, Censored };

struct PathOutcome {
  ExitKind exit_kind = ExitKind::Censored;
  double L_at_exit = 0.0;  // int_0^exit omega(Y_s) ds
  double exit_time = 0.0;
  double S_at_exit = 0.0;
};

/// Random stream of path `index` under `root_seed`: a Mersenne Twister seeded
/// through std::seed_seq with the 32-bit halves (root lo, root hi, index lo, index hi).
std::mt19937_64 path_stream(std::uint64_t root_seed, std::uint64_t path_index);

/// Event-driven path of the Cramer-Lundberg surplus started at x with Y_0 = 0.
/// Between claims X climbs at slope mu, so hitting b and the occupation
/// increment over each drift segment are exact.
PathOutcome simulate_cl_exact(const CramerLundbergExp<double>& model, const WeightFunction& omega,
                              double x, double b, std::mt19937_64& rng,
                              std::uint64_t max_events = 10'000'000);

/// Euler-Maruyama path; occupation by the left-endpoint rule, exits detected
/// at step endpoints.
PathOutcome simulate_brownian_euler(const BrownianDrift<double>& model, const WeightFunction& omega,
                                    double x, double b, double dt, std::mt19937_64& rng,
                                    std::uint64_t max_steps = 100'000'000);

enum class Engine { ExactCL, EulerBrownian };
std::string engine_name(Engine e);

struct McEstimate {
  std::uint64_t n_paths = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double up_fraction = 0.0;
  double down_fraction = 0.0;
  double censored_fraction = 0.0;
  std::uint64_t seed = 0;
  Engine engine = Engine::ExactCL;
};

struct McOptions {
  std::uint64_t n_paths = 100'000;
  std::uint64_t seed = 42;
  double dt = 1e-4;         // Euler engine only
  unsigned threads = 1;
  std::uint64_t block = 1024;  // paths per reduction block
};

struct ExitEstimates {
  McEstimate up;    // E[e^{-L}; up-exit first]
  McEstimate down;  // E[e^{-L}; down-exit first]
};

/// Paths are split into fixed blocks; block sums are combined in block order,
/// so the result does not depend on the thread count.
ExitEstimates estimate_exit_laplace(const LevyModeld& model, const WeightFunction& omega, double x,
                                    double b, const McOptions& options);

}  // namespace occtime

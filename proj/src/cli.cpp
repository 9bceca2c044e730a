#include "occtime/cli.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "occtime/config.hpp"
#include "occtime/errors.hpp"
#include "occtime/exit_functionals.hpp"
#include "occtime/mc_oracle.hpp"
#include "occtime/omega_scale.hpp"
#include "occtime/scale_function.hpp"

namespace occtime {

namespace {

struct Flags {
  std::string config;
  std::optional<double> x, b, c, mesh, dt, delta, q, y_max;
  std::optional<std::uint64_t> paths, seed;
  std::optional<int> points, stride, z_points, y_points;
  std::optional<unsigned> threads;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << '\n';
  }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(std::uint64_t n) { return std::to_string(n); }
  std::ostream& out_;
};

template <typename T>
T pick(const std::optional<T>& flag, const std::optional<T>& task, T fallback) {
  if (flag) return *flag;
  if (task) return *task;
  return fallback;
}

template <typename T>
T need(const std::optional<T>& flag, const std::optional<T>& task, const char* name) {
  if (flag) return *flag;
  if (task) return *task;
  throw ConfigError(std::string("missing required parameter '") + name + "'");
}

int positive_count(int v, const char* name) {
  if (v < 1) throw ConfigError(std::string(name) + " must be at least 1");
  return v;
}

double mesh_of(const Flags& f, const RunConfig& cfg) { return f.mesh ? *f.mesh : cfg.numerics.mesh; }

void warn_residual(const OmegaScaleGrid& grid, std::ostream& err) {
  if (grid.residual_alarm())
    err << "warning: dual-equation residual " << fmt(grid.max_dual_residual())
        << " exceeds the alarm threshold\n";
}

void cmd_scale(const Flags& f, const RunConfig& cfg, std::ostream& out) {
  const double q = pick(f.q, cfg.task.q, 0.0);
  const double x_max = pick(f.b, cfg.numerics.x_max, 1.0);
  const int points = positive_count(pick(f.points, cfg.task.points, 101), "points");
  if (!(x_max > 0.0)) throw DomainError("x_max must be positive");
  const ScaleEvald s(cfg.model, q);
  CsvWriter csv(out, {"x", "W", "Wprime", "Z"});
  for (int k = 0; k < points; ++k) {
    const double x = points == 1 ? x_max : x_max * k / (points - 1);
    csv.row(x, s.W(x), x > 0.0 ? s.W_prime(x) : s.W_prime_at_zero(), s.Z(x));
  }
}

void cmd_omega_scale(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double x_max = pick(f.b, cfg.numerics.x_max, 1.0);
  const OmegaScaleGrid grid = solve_omega_scale(cfg.model, cfg.omega, x_max, mesh_of(f, cfg));
  warn_residual(grid, err);
  const int fallback = static_cast<int>(std::max<std::size_t>(1, grid.intervals() / 50));
  const auto stride = static_cast<std::size_t>(positive_count(pick(f.stride, cfg.task.stride, fallback), "stride"));
  CsvWriter csv(out, {"x", "y", "W_omega", "W2", "Zhat", "Zhat1", "Zhat2", "dual_residual"});
  for (std::size_t i = 0; i < grid.nodes(); i += stride)
    for (std::size_t j = 0; j <= i; j += stride)
      csv.row(grid.node(i), grid.node(j), grid.w(i, j), grid.w2(i, j), grid.z_hat(i, j), grid.z_hat_1(i, j),
              grid.z_hat_2(i, j), grid.dual_residual(i, j));
}

void cmd_exit(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double x = need(f.x, cfg.task.x, "x");
  const double b = need(f.b, cfg.task.b, "b");
  const double c = pick(f.c, cfg.task.c, 0.0);
  if (!(c <= x && x <= b && c < b)) throw DomainError("requires c <= x <= b and c < b");
  const OmegaScaleGrid grid = solve_omega_scale(cfg.model, cfg.omega, b - c, mesh_of(f, cfg));
  warn_residual(grid, err);
  const HFunction h(grid);
  const ExitLaplaceReport r = shifted_exit_laplace(grid, h, x, b, c);
  CsvWriter csv(out, {"x", "b", "c", "up", "down", "residual"});
  csv.row(r.x, r.b, r.c, r.up, r.down, r.dual_residual);
}

void cmd_table(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double b = need(f.b, cfg.task.b, "b");
  const double c = pick(f.c, cfg.task.c, 0.0);
  const int points = positive_count(pick(f.points, cfg.task.points, 21), "points");
  if (!(c < b)) throw DomainError("requires c < b");
  const OmegaScaleGrid grid = solve_omega_scale(cfg.model, cfg.omega, b - c, mesh_of(f, cfg));
  warn_residual(grid, err);
  const HFunction h(grid);
  CsvWriter csv(out, {"x", "up", "down"});
  for (int k = 0; k < points; ++k) {
    const double x = points == 1 ? b : c + (b - c) * k / (points - 1);
    const ExitLaplaceReport r = shifted_exit_laplace(grid, h, std::min(x, b), b, c);
    csv.row(x, r.up, r.down);
  }
}

void cmd_gerber_shiu(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double x = need(f.x, cfg.task.x, "x");
  const double b = need(f.b, cfg.task.b, "b");
  const double delta = pick(f.delta, cfg.task.delta, 0.0);
  const int nz = positive_count(pick(f.z_points, cfg.task.z_points, 20), "z-points");
  const int ny = positive_count(pick(f.y_points, cfg.task.y_points, 20), "y-points");
  const double y_max = pick(f.y_max, cfg.task.y_max, 5.0);
  if (!(y_max > 0.0)) throw DomainError("y-max must be positive");
  if (!(0.0 <= x && x <= b)) throw DomainError("requires 0 <= x <= b");
  const OmegaScaleGrid grid = solve_omega_scale(cfg.model, cfg.omega.plus(delta), b, mesh_of(f, cfg));
  warn_residual(grid, err);
  const HFunction h(grid);
  if (cfg.model.is_brownian()) err << "warning: the model has no jumps; the density is identically zero\n";
  CsvWriter csv(out, {"z", "y", "density"});
  for (int k = 1; k <= nz; ++k) {
    const double z = b * k / (nz + 1);
    for (int m = 1; m <= ny; ++m) {
      const double y = y_max * m / ny;
      const GerberShiuValue v = gerber_shiu_density(grid, h, x, z, y, b, delta);
      csv.row(v.z_used, y, v.density);
    }
  }
}

void cmd_mc_validate(const Flags& f, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double x = need(f.x, cfg.task.x, "x");
  const double b = need(f.b, cfg.task.b, "b");
  if (!(0.0 <= x && x <= b && b > 0.0)) throw DomainError("requires 0 <= x <= b, b > 0");
  McOptions o;
  o.n_paths = pick(f.paths, cfg.task.paths, std::uint64_t{100'000});
  o.seed = pick(f.seed, cfg.task.seed, std::uint64_t{42});
  o.dt = pick(f.dt, cfg.task.dt, 1e-4);
  o.threads = pick(f.threads, cfg.task.threads, 1u);

  const OmegaScaleGrid grid = solve_omega_scale(cfg.model, cfg.omega, b, mesh_of(f, cfg));
  warn_residual(grid, err);
  const HFunction h(grid);
  const double up = up_exit_laplace(h, x, b);
  const double down = down_exit_laplace(grid, h, x, b);

  CsvWriter csv(out, {"engine", "n", "mean_up", "se_up", "mean_down", "se_down", "analytic_up",
                      "analytic_down", "z_up", "z_down"});
  auto emit = [&](const std::string& engine, const ExitEstimates& e) {
    auto zscore = [](double mean, double se, double exact) {
      return se > 0.0 ? (mean - exact) / se : (mean == exact ? 0.0 : INFINITY);
    };
    csv.row(engine, e.up.n_paths, e.up.mean, e.up.std_error, e.down.mean, e.down.std_error, up, down,
            zscore(e.up.mean, e.up.std_error, up), zscore(e.down.mean, e.down.std_error, down));
    if (e.up.censored_fraction > 0.0)
      err << "warning: " << fmt(e.up.censored_fraction) << " of paths were censored\n";
  };
  if (cfg.model.is_brownian()) {
    // Euler runs at dt and dt/4 expose the barrier-detection bias.
    for (double dt : {o.dt, o.dt / 4.0}) {
      McOptions run = o;
      run.dt = dt;
      emit(engine_name(Engine::EulerBrownian) + "_dt_" + fmt(dt),
           estimate_exit_laplace(cfg.model, cfg.omega, x, b, run));
    }
  } else {
    emit(engine_name(Engine::ExactCL), estimate_exit_laplace(cfg.model, cfg.omega, x, b, o));
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Occupation-time exit transforms for spectrally negative Levy surplus processes"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sc) {
    sc->add_option("--config", f.config, "JSON run configuration")->required();
    sc->add_option("--mesh", f.mesh, "Largest mesh step");
  };
  auto* scale = app.add_subcommand("scale", "Tabulate W^(q), W^(q)' and Z^(q) on [0, b]");
  common(scale);
  scale->add_option("--q", f.q, "Discount rate q");
  scale->add_option("--b", f.b, "Right end of the table");
  scale->add_option("--points", f.points, "Number of rows");

  auto* omega = app.add_subcommand("omega-scale", "Dump the omega-scale grid on [0, b]");
  common(omega);
  omega->add_option("--b", f.b, "Grid range x_max");
  omega->add_option("--stride", f.stride, "Node stride in both directions");

  auto* exit = app.add_subcommand("exit", "Two-sided exit transforms for one start level");
  common(exit);
  exit->add_option("--x", f.x, "Start level");
  exit->add_option("--b", f.b, "Upper barrier");
  exit->add_option("--c", f.c, "Lower barrier");

  auto* gs = app.add_subcommand("gerber-shiu", "Discounted density of pre-ruin surplus and deficit");
  common(gs);
  gs->add_option("--x", f.x, "Start level");
  gs->add_option("--b", f.b, "Upper barrier");
  gs->add_option("--delta", f.delta, "Discount rate of the ruin time");
  gs->add_option("--z-points", f.z_points, "Lattice points in z");
  gs->add_option("--y-points", f.y_points, "Lattice points in y");
  gs->add_option("--y-max", f.y_max, "Largest deficit in the lattice");

  auto* mc = app.add_subcommand("mc-validate", "Monte Carlo estimates against the exit transforms");
  common(mc);
  mc->add_option("--x", f.x, "Start level");
  mc->add_option("--b", f.b, "Upper barrier");
  mc->add_option("--paths", f.paths, "Number of simulated paths");
  mc->add_option("--seed", f.seed, "Root seed");
  mc->add_option("--dt", f.dt, "Euler step (Brownian model)");
  mc->add_option("--threads", f.threads, "Worker threads");

  auto* table = app.add_subcommand("table", "Exit transforms over a lattice of start levels");
  common(table);
  table->add_option("--b", f.b, "Upper barrier");
  table->add_option("--c", f.c, "Lower barrier");
  table->add_option("--points", f.points, "Number of start levels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const RunConfig cfg = load_run_config(f.config);
    if (*scale) cmd_scale(f, cfg, out);
    else if (*omega) cmd_omega_scale(f, cfg, out, err);
    else if (*exit) cmd_exit(f, cfg, out, err);
    else if (*gs) cmd_gerber_shiu(f, cfg, out, err);
    else if (*mc) cmd_mc_validate(f, cfg, out, err);
    else cmd_table(f, cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace occtime

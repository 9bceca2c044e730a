#include "occtime/exit_functionals.hpp"

#include <cmath>
#include <limits>

#include "occtime/errors.hpp"

namespace occtime {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_levels(double x, double b, double x_max) {
  if (!(0.0 <= x && x <= b)) throw DomainError("requires 0 <= x <= b");
  if (b > x_max * (1.0 + 1e-12)) throw DomainError("barrier b exceeds the grid range");
}

double ratio(double log_x, double log_z) {
  if (log_x == kNegInf) return 0.0;
  return std::exp(log_x - log_z);
}

}  // namespace

HFunction::HFunction(const OmegaScaleGrid& grid, double base_point)
    : scale_(grid.model(), 0.0), h_(grid.h()) {
  const auto& w = grid.w_section();
  const auto& w2 = grid.w2_section();
  const auto& wt = grid.w_table();
  const auto& wp = grid.w_prime_table();
  const Eigen::Index n = w.size();
  Eigen::VectorXd integrand(n);
  integrand(0) = wt(0) > 0.0 ? w2(0) / w(0) + wp(0) / wt(0) : 0.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (!(w(k) > 0.0)) throw NumericalError("omega-scale section is not positive");
    integrand(k) = w2(k) / w(k) + wp(k) / wt(k);
  }
  remainder_.resize(n);
  remainder_(0) = 0.0;
  for (Eigen::Index k = 1; k < n; ++k)
    remainder_(k) = remainder_(k - 1) + 0.5 * h_ * (integrand(k - 1) + integrand(k));
  if (!remainder_.allFinite()) throw NumericalError("non-finite value in H");
  if (!(base_point > 0.0)) throw DomainError("H base point must be positive");
  base_ = std::min(base_point, x_max());
  offset_ = std::log(scale_.W(base_)) - interpolate_nodes(remainder_, h_, base_);
}

double HFunction::log_value(double u) const {
  if (!(u >= 0.0) || u > x_max() * (1.0 + 1e-12)) throw DomainError("H evaluated outside the grid");
  const double w = scale_.W(u);
  if (!(w > 0.0)) return kNegInf;
  return std::log(w) - interpolate_nodes(remainder_, h_, u) - offset_;
}

HFunction h_function(const OmegaScaleGrid& grid, double base_point) { return HFunction(grid, base_point); }

double up_exit_laplace(const HFunction& h, double x, double b) {
  check_levels(x, b, h.x_max());
  if (x == b) return 1.0;
  return ratio(h.log_value(x), h.log_value(b));
}

double down_exit_laplace(const OmegaScaleGrid& grid, const HFunction& h, double x, double b) {
  check_levels(x, b, grid.x_max());
  if (x == b) return 0.0;
  const double step = grid.h();
  const auto& w = grid.w_section();
  const auto& zhat = grid.z_hat_section();
  const auto& zhat2 = grid.z_hat_2_section();
  const double zx = interpolate_nodes(zhat, step, x);
  const double lx = h.log_value(x);
  if (lx == kNegInf) return zx;
  const double zb = interpolate_nodes(zhat, step, b);
  const double integral = integrate_on_mesh(step, x, b, [&](double z, std::size_t cell) {
    const double partials =
        grid.omega_cell(cell) * interpolate_nodes(w, step, z) + interpolate_nodes(zhat2, step, z);
    return ratio(lx, h.log_value(z)) * partials;
  });
  return zx - ratio(lx, h.log_value(b)) * zb + integral;
}

ExitLaplaceReport shifted_exit_laplace(const OmegaScaleGrid& grid, const HFunction& h, double x,
                                       double b, double c) {
  if (!(c <= x && x <= b)) throw DomainError("requires c <= x <= b");
  ExitLaplaceReport r{x, b, c, 0.0, 0.0, grid.h(), grid.max_dual_residual()};
  r.up = up_exit_laplace(h, x - c, b - c);
  r.down = down_exit_laplace(grid, h, x - c, b - c);
  return r;
}

double occupation_potential_density(const OmegaScaleGrid& grid, const HFunction& h, double x,
                                    double z, double y, double b) {
  if (!(0.0 <= x && x < z && z < b)) throw DomainError("density requires 0 <= x < z < b");
  if (!(0.0 < y && y < z)) throw DomainError("density requires 0 < y < z");
  check_levels(x, b, grid.x_max());
  const double step = grid.h();
  const auto& w = grid.w_section();
  const auto& w2 = grid.w2_section();
  const double slope = interpolate_nodes(w2, step, z) / interpolate_nodes(w, step, z);
  return ratio(h.log_value(x), h.log_value(z)) *
         (slope * interpolate_nodes(w, step, y) - interpolate_nodes(w2, step, y));
}

double atom_at_zero(const OmegaScaleGrid& grid, const HFunction& h, double x, double z) {
  if (!(0.0 <= x && x < z)) throw DomainError("atom requires 0 <= x < z");
  check_levels(z, z, grid.x_max());
  return ratio(h.log_value(x), h.log_value(z)) * grid.w_at_zero();
}

double occupation_closure(const OmegaScaleGrid& grid, const HFunction& h, double x, double b) {
  check_levels(x, b, grid.x_max());
  const double step = grid.h();
  const auto& w = grid.w_section();
  const auto& w2 = grid.w2_section();
  const double lx = h.log_value(x);
  const double w0 = grid.w_at_zero();
  return integrate_on_mesh(step, x, b, [&](double z, std::size_t) {
    if (!(z > 0.0)) return 0.0;
    const double slope = interpolate_nodes(w2, step, z) / interpolate_nodes(w, step, z);
    const double inner = integrate_on_mesh(step, 0.0, z, [&](double y, std::size_t cell) {
      return grid.omega_cell(cell) *
             (slope * interpolate_nodes(w, step, y) - interpolate_nodes(w2, step, y));
    });
    return ratio(lx, h.log_value(z)) * (inner + grid.omega_cell(0) * w0);
  });
}

double classical_sy_resolvent(const LevyModeld& model, double x, double z, double y) {
  if (!(0.0 <= x && x < z)) throw DomainError("resolvent requires 0 <= x < z");
  if (!(y >= 0.0)) throw DomainError("resolvent requires y >= 0");
  const ScaleEvald s(model, 0.0);
  const double wpy = y > 0.0 ? s.W_prime(y) : s.W_prime_at_zero();
  return s.W(x) / s.W(z) * (wpy - s.W_prime(z) / s.W(z) * s.W(y));
}

double classical_sy_atom(const LevyModeld& model, double x, double z) {
  if (!(0.0 <= x && x < z)) throw DomainError("resolvent requires 0 <= x < z");
  const ScaleEvald s(model, 0.0);
  return s.W(x) / s.W(z) * s.w_at_zero();
}

double gerber_shiu_bracket(const OmegaScaleGrid& grid, const HFunction& h, double x, std::size_t z_index,
                           double b, Side side) {
  check_levels(x, b, grid.x_max());
  const double step = grid.h();
  const double z = grid.node(z_index);
  if (z > b * (1.0 + 1e-12)) throw DomainError("pre-ruin level must not exceed b");
  const auto& w = grid.w_section();
  const auto& w1 = grid.w1_section();
  const auto& w2 = grid.w2_section();
  const double w0 = grid.w_at_zero();
  const double lx = h.log_value(x);

  const double up_part = ratio(lx, h.log_value(b)) * interpolate_nodes(w, step, b - z);
  double start_part = 0.0;
  const double v0 = x - z;
  if (std::abs(v0) <= 1e-12 * std::max(1.0, x))
    start_part = side == Side::Below ? w0 : 0.0;
  else if (v0 > 0.0)
    start_part = interpolate_nodes(w, step, v0);

  // W_1 without its last term is continuous, so it interpolates cleanly; the
  // W(0) omega(v) W^omega(v) term takes omega from the cell being integrated.
  auto w1_smooth = [&](double v) {
    const double r = std::clamp(v / step, 0.0, static_cast<double>(grid.intervals()));
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(r), grid.intervals() - 1);
    const double t = r - static_cast<double>(k);
    const auto ki = static_cast<Eigen::Index>(k);
    const double lo = w1(ki) - w0 * grid.omega_cell(k) * w(ki);
    const double hi = w1(ki + 1) - w0 * grid.omega_cell(k + 1) * w(ki + 1);
    return (1.0 - t) * lo + t * hi;
  };
  const double integral = integrate_on_mesh(step, x, b, [&](double u, std::size_t cell) {
    if (cell < z_index) return 0.0;
    const double v = std::max(0.0, u - z);
    const double wv = interpolate_nodes(w, step, v);
    const double derivs = w1_smooth(v) + w0 * grid.omega_cell(cell - z_index) * wv +
                          interpolate_nodes(w2, step, v);
    return ratio(lx, h.log_value(u)) * derivs;
  });
  return up_part - start_part - integral;
}

GerberShiuValue gerber_shiu_density(const OmegaScaleGrid& grid, const HFunction& h, double x, double z,
                                    double y, double b, double delta) {
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  if (!(y > 0.0)) throw DomainError("deficit y must be positive");
  if (!(0.0 < z && z < b)) throw DomainError("requires 0 < z < b");
  check_levels(x, b, grid.x_max());
  const auto k = static_cast<std::size_t>(std::llround(z / grid.h()));
  const double z_used = grid.node(k);
  GerberShiuValue out{0.0, z_used, std::abs(z - z_used), grid.model().is_brownian()};
  if (out.no_jumps) return out;
  out.density = gerber_shiu_bracket(grid, h, x, k, b) * levy_measure_density(grid.model(), y + z_used);
  return out;
}

double gerber_shiu_marginal(const OmegaScaleGrid& grid, const HFunction& h, double x, double b) {
  check_levels(x, b, grid.x_max());
  if (grid.model().is_brownian()) return 0.0;
  const std::size_t kx = grid.index_of(x), kb = grid.index_of(b);
  const double step = grid.h();
  auto term = [&](std::size_t k, Side side) {
    return gerber_shiu_bracket(grid, h, x, k, b, side) * levy_tail(grid.model(), grid.node(k));
  };
  double sum = 0.0;
  for (std::size_t k = 0; k < kb; ++k) {
    const Side left_side = k == kx ? Side::Above : Side::Below;
    sum += 0.5 * step * (term(k, left_side) + term(k + 1, Side::Below));
  }
  return sum;
}

}  // namespace occtime

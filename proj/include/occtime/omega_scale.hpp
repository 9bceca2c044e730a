#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "occtime/levy_model.hpp"
#include "occtime/weight_function.hpp"

namespace occtime {

/// Largest step h' <= h_max such that every length is an integer multiple of
/// h' (to 1e-9 relative). Throws ConfigError when h' would fall below h_max/64.
double aligned_step(double h_max, std::span<const double> lengths);

struct OmegaScaleOptions {
  double h = 1e-3;
  double residual_alarm = 1e-4;
};

/// W^omega, its y-partial and Zhat (with both partials) on the lower
/// triangle {(x_i, y_j): 0 <= y_j <= x_i <= x_max} of a uniform mesh.
///
/// Diagonal entries hold the limits x -> y+: W^omega(y, y) = W(0) and
/// W_2(y, y) = -W'(0+) - W(0)^2 omega(y).
class OmegaScaleGrid {
 public:
  OmegaScaleGrid(const LevyModeld& model, const WeightFunction& omega, double x_max,
                 const OmegaScaleOptions& options = {});

  const LevyModeld& model() const { return model_; }
  const WeightFunction& omega() const { return omega_; }
  double h() const { return h_; }
  double x_max() const { return h_ * static_cast<double>(intervals_); }
  std::size_t intervals() const { return intervals_; }
  std::size_t nodes() const { return intervals_ + 1; }
  double node(std::size_t i) const { return h_ * static_cast<double>(i); }
  double w_at_zero() const { return w0_; }

  /// Node index of x; throws DomainError when x is not on the mesh.
  std::size_t index_of(double x) const;

  double w(std::size_t i, std::size_t j) const { return i < j ? 0.0 : w_(packed(i, j)); }
  double w2(std::size_t i, std::size_t j) const { return i < j ? 0.0 : w2_(packed(i, j)); }
  double z_hat(std::size_t i, std::size_t j) const { return i < j ? 1.0 : zhat_(packed(i, j)); }
  double z_hat_2(std::size_t i, std::size_t j) const { return i < j ? 0.0 : zhat2_(packed(i, j)); }
  double z_hat_1(std::size_t i, std::size_t j) const { return i < j ? 0.0 : omega_cell_(i) * w(i, j); }
  double dual_residual(std::size_t i, std::size_t j) const {
    return i < j ? 0.0 : static_cast<double>(residual_(packed(i, j)));
  }
  double max_dual_residual() const { return max_residual_; }
  bool residual_alarm() const { return max_residual_ > residual_alarm_; }

  /// omega on the cell [x_k, x_{k+1}); also omega(x_k) by right-continuity.
  double omega_cell(std::size_t k) const { return omega_cell_(k); }

  /// Sections y = 0 as vectors over the nodes.
  const Eigen::VectorXd& w_section() const { return w_section_; }
  const Eigen::VectorXd& w2_section() const { return w2_section_; }
  const Eigen::VectorXd& z_hat_section() const { return zhat_section_; }
  const Eigen::VectorXd& z_hat_2_section() const { return zhat2_section_; }

  /// Right derivative d/dx W^omega(x, 0) at every node.
  const Eigen::VectorXd& w1_section() const { return w1_section_; }

  /// W(k h) and W'(k h) of the q = 0 scale function (W'(0+) at k = 0).
  const Eigen::VectorXd& w_table() const { return w_tab_; }
  const Eigen::VectorXd& w_prime_table() const { return wp_tab_; }

 private:
  static std::size_t packed(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }

  LevyModeld model_;
  WeightFunction omega_;
  double h_ = 0.0;
  std::size_t intervals_ = 0;
  double w0_ = 0.0;
  double residual_alarm_ = 1e-4;
  double max_residual_ = 0.0;
  Eigen::VectorXd w_tab_, wp_tab_, omega_cell_;
  Eigen::ArrayXd w_, w2_, zhat_, zhat2_;
  Eigen::ArrayXf residual_;
  Eigen::VectorXd w_section_, w2_section_, zhat_section_, zhat2_section_, w1_section_;
};

/// Build the grid on [0, x_max] with step at most h (snapped to the weight's jumps).
OmegaScaleGrid solve_omega_scale(const LevyModeld& model, const WeightFunction& omega, double x_max,
                                 double h = 1e-3);

/// W_2(x, y) at mesh nodes.
double partial_w2(const OmegaScaleGrid& grid, double x, double y);
double z_hat(const OmegaScaleGrid& grid, double x, double y);
double z_hat_1(const OmegaScaleGrid& grid, double x, double y);
double z_hat_2(const OmegaScaleGrid& grid, double x, double y);

/// x -> W^omega(x, y) on y + k h, k = 0..intervals, for a single y.
struct OmegaColumn {
  double y = 0.0;
  double h = 0.0;
  Eigen::VectorXd values;
  double at(double x) const;
};

OmegaColumn solve_omega_column(const LevyModeld& model, const WeightFunction& omega, double y,
                               double x_end, double h = 1e-3);

/// |W^{omega_u}(u - y, u - x) - W^omega(x, y)| with omega_u(z) = omega(u - z).
double reflected_weight_check(const LevyModeld& model, const WeightFunction& omega, double u,
                              double x, double y, double h = 1e-3);

/// Trapezoid rule over [lo, hi] split at every mesh node k h. The integrand
/// is called as f(z, k) with k the cell [k h, (k+1) h] being integrated, so
/// one-sided values at nodes follow that cell.
template <typename F>
double integrate_on_mesh(double h, double lo, double hi, F&& f) {
  if (!(hi > lo)) return 0.0;
  double sum = 0.0;
  double s = lo;
  auto k = static_cast<long long>(std::floor(lo / h + 1e-9));
  while (s < hi) {
    double t = std::min(hi, h * static_cast<double>(k + 1));
    if (t - s <= 1e-12 * h) {
      ++k;
      continue;
    }
    const auto cell = static_cast<std::size_t>(std::max(0LL, k));
    sum += 0.5 * (t - s) * (f(s, cell) + f(t, cell));
    s = t;
    ++k;
  }
  return sum;
}

/// Linear interpolation of nodal values at x in [0, (n-1) h].
double interpolate_nodes(const Eigen::VectorXd& values, double h, double x);

}  // namespace occtime

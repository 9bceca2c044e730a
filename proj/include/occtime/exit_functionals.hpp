#pragma once

#include <cstddef>
#include <utility>

#include <Eigen/Dense>

#include "occtime/levy_model.hpp"
#include "occtime/omega_scale.hpp"
#include "occtime/scale_function.hpp"

namespace occtime {

/// H(u) = exp(-int_{u0}^u W_2(z, 0) / W^omega(z, 0) dz) with base point u0
/// (1 by default, x_max when the grid is shorter), held in log form.
///
/// The integrand is split as W'/W (done exactly through log W) plus a bounded
/// remainder integrated by trapezoid on the mesh and interpolated linearly.
class HFunction {
 public:
  explicit HFunction(const OmegaScaleGrid& grid, double base_point = 1.0);

  double base_point() const { return base_; }
  double x_max() const { return h_ * static_cast<double>(remainder_.size() - 1); }
  double mesh() const { return h_; }

  /// log H(u); -inf at u = 0 when W(0) = 0.
  double log_value(double u) const;
  double operator()(double u) const { return std::exp(log_value(u)); }

  /// log(H(x) / H(b)).
  double log_ratio(double x, double b) const { return log_value(x) - log_value(b); }

 private:
  ScaleEvald scale_;
  double h_;
  Eigen::VectorXd remainder_;  // int_0^{u_k} (W_2 / W^omega + W' / W) dz
  double base_ = 1.0;
  double offset_ = 0.0;
};

HFunction h_function(const OmegaScaleGrid& grid, double base_point = 1.0);

double up_exit_laplace(const HFunction& h, double x, double b);
double down_exit_laplace(const OmegaScaleGrid& grid, const HFunction& h, double x, double b);

struct ExitLaplaceReport {
  double x, b, c;
  double up, down;
  double mesh;
  double dual_residual;
};

/// Exit transforms for the band [c, b] started at x; needs b - c <= x_max.
ExitLaplaceReport shifted_exit_laplace(const OmegaScaleGrid& grid, const HFunction& h, double x,
                                       double b, double c = 0.0);

/// Density in (z, y) of the discounted occupation of (S, Y) before exit.
double occupation_potential_density(const OmegaScaleGrid& grid, const HFunction& h, double x,
                                    double z, double y, double b);
/// Mass at Y = 0, per unit z.
double atom_at_zero(const OmegaScaleGrid& grid, const HFunction& h, double x, double z);

/// int_x^b int_0^z omega(y) density dy dz + int_x^b omega(0) atom dz; equals
/// 1 - up - down.
double occupation_closure(const OmegaScaleGrid& grid, const HFunction& h, double x, double b);

/// Resolvent density of (S, Y) without weight, from the plain scale function.
double classical_sy_resolvent(const LevyModeld& model, double x, double z, double y);
double classical_sy_atom(const LevyModeld& model, double x, double z);

/// Which limit to take for a pre-ruin level equal to the start level.
enum class Side { Below, Above };

struct GerberShiuValue {
  double density;
  double z_used;         // z snapped to the mesh
  double snap_distance;  // |z - z_used|
  bool no_jumps;         // model has no Levy measure; density is identically 0
};

/// The bracket multiplying Pi(dy + z) in the discounted joint law of the
/// pre-ruin surplus and deficit, at the mesh node z_index. The grid and H
/// must be built for omega + delta.
double gerber_shiu_bracket(const OmegaScaleGrid& grid, const HFunction& h, double x, std::size_t z_index,
                           double b, Side side = Side::Below);

GerberShiuValue gerber_shiu_density(const OmegaScaleGrid& grid, const HFunction& h, double x, double z,
                                    double y, double b, double delta);

/// int_0^b int_0^inf density dy dz, with the y-integral done exactly as Pi((z, inf)).
double gerber_shiu_marginal(const OmegaScaleGrid& grid, const HFunction& h, double x, double b);

}  // namespace occtime

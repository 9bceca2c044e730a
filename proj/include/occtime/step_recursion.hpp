#pragma once

#include <optional>
#include <vector>

#include "occtime/levy_model.hpp"
#include "occtime/scale_function.hpp"
#include "occtime/weight_function.hpp"

namespace occtime {

struct StepScaleValue {
  double w_omega;
  double z_hat;
};

/// W^omega and Zhat for a step weight by layering one level at a time:
/// W_0 = W^{(p_0)}(x - y) and
/// W_{k+1}(x, y) = W_k(x, y) + (p_{k+1} - p_k) int_y^{min(x, a_{k+1})} W_k(x, z) W^{(p_{k+1})}(z - y) dz,
/// with the same layering for Zhat from Zhat_0 = Z^{(p_0)}(x - y).
class StepRecursion {
 public:
  StepRecursion(const LevyModeld& model, const WeightFunction& omega, double tol = 1e-11);

  double w_omega(double x, double y) const { return w_level(levels(), x, y); }
  double z_hat(double x, double y) const { return z_level(levels(), x, y); }

 private:
  std::size_t levels() const { return a_.size(); }
  double w_level(std::size_t k, double x, double y) const;
  double z_level(std::size_t k, double x, double y) const;

  std::vector<ScaleEvald> scales_;
  std::vector<double> a_, p_;
  std::vector<double> cuts_;
  double tol_;
};

StepScaleValue step_scale_recursion(const LevyModeld& model, const WeightFunction& omega, double x,
                                    double y);

/// sum_k c_k e^{r_k x}
struct ExpSum {
  std::vector<double> coef, rate;
  double operator()(double x) const;
  static ExpSum from(const ExpPair<double>& f) { return {{f.c1, f.c2}, {f.r1, f.r2}}; }
};

/// int_lo^hi f(x - z) g(z) dz in closed form.
double exp_convolution(const ExpSum& f, const ExpSum& g, double lo, double hi, double x);

struct TwoStepValues {
  double w_pq;       // W^{(p,q)}_{(a2)}(x)
  double w_pqp;      // W^{(p,q,p)}_{(a2,a1)}(x)
  double z_hat_qp;   // Zhat^{(q,p)}_{(a1)}(x, y)
  double z_hat_pqp;  // Zhat^{(p,q,p)}_{(a2,a1)}(x, y)
};

/// Auxiliary functions for omega = p + (q - p) 1(a2 <= z < a1).
/// Exponential-product integrals are done in closed form when both scale
/// functions have distinct roots; otherwise by adaptive quadrature.
class TwoStepFamily {
 public:
  TwoStepFamily(const LevyModeld& model, double p, double q);

  double w_pq(double a2, double x) const;
  double w_pqp(double a2, double a1, double x) const;
  double z_hat_qp(double a1, double x, double y) const;
  double z_hat_pqp(double a2, double a1, double x, double y) const;

  bool closed_form() const { return closed_; }

 private:
  ExpSum w_pq_tail(double a2) const;  // W^{(p,q)}_{(a2)} on [a2, inf)

  double p_, q_;
  ScaleEvald sp_, sq_;
  bool closed_ = false;
  ExpSum wp_, wq_, zp_;
};

TwoStepValues two_step_family(const LevyModeld& model, double p, double q, double a2, double a1,
                              double x, double y = 0.0);

/// Up-exit transform of omega = p + (q - p) 1(a2 <= z < a1) from the two-step
/// auxiliary functions: exp(-int_x^b F_t'(t) / F_t(t) dt), where
/// F_t = W^{(p,q,p)}_{(max(0, t - a1), t - a2)} and F_t' is its left derivative
/// in the argument with the subscripts held at t.
double two_step_up_exit(const LevyModeld& model, double p, double q, double a2, double a1, double x,
                        double b, double eps = 1e-4);

}  // namespace occtime

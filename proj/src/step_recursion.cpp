#include "occtime/step_recursion.hpp"

#include <algorithm>
#include <cmath>

#include "occtime/errors.hpp"
#include "occtime/quadrature.hpp"

namespace occtime {

StepRecursion::StepRecursion(const LevyModeld& model, const WeightFunction& omega, double tol)
    : a_(omega.canonical().breakpoints), p_(omega.canonical().levels), cuts_(a_), tol_(tol) {
  scales_.reserve(p_.size());
  for (double p : p_) scales_.emplace_back(model, p);
}

double StepRecursion::w_level(std::size_t k, double x, double y) const {
  if (k == 0) return scales_[0].W(x - y);
  const double below = w_level(k - 1, x, y);
  const double a = a_[k - 1];
  const double jump = p_[k] - p_[k - 1];
  const double upper = std::min(x, a);
  if (jump == 0.0 || !(upper > y)) return below;
  const ScaleEvald& s = scales_[k];
  const double integral = integrate_adaptive(
      [&](double z) { return w_level(k - 1, x, z) * s.W(z - y); }, y, upper, cuts_, tol_);
  return below + jump * integral;
}

double StepRecursion::z_level(std::size_t k, double x, double y) const {
  if (k == 0) return scales_[0].Z(x - y);
  const double below = z_level(k - 1, x, y);
  const double a = a_[k - 1];
  const double jump = p_[k] - p_[k - 1];
  const double upper = std::min(x, a);
  if (jump == 0.0 || !(upper > y)) return below;
  const ScaleEvald& s = scales_[k];
  const double integral = integrate_adaptive(
      [&](double z) { return z_level(k - 1, x, z) * s.W(z - y); }, y, upper, cuts_, tol_);
  return below + jump * integral;
}

StepScaleValue step_scale_recursion(const LevyModeld& model, const WeightFunction& omega, double x,
                                    double y) {
  const StepRecursion rec(model, omega);
  return {rec.w_omega(x, y), rec.z_hat(x, y)};
}

double ExpSum::operator()(double x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * std::exp(rate[k] * x);
  return s;
}

double exp_convolution(const ExpSum& f, const ExpSum& g, double lo, double hi, double x) {
  if (!(hi > lo)) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < f.coef.size(); ++i)
    for (std::size_t j = 0; j < g.coef.size(); ++j) {
      const double d = g.rate[j] - f.rate[i];
      s += f.coef[i] * g.coef[j] * std::exp(f.rate[i] * x + d * lo) * expm1_ratio(d, hi - lo);
    }
  return s;
}

TwoStepFamily::TwoStepFamily(const LevyModeld& model, double p, double q)
    : p_(p), q_(q), sp_(model, p), sq_(model, q) {
  const auto wp = sp_.w_exponential_form(), wq = sq_.w_exponential_form();
  const auto zp = sp_.z_exponential_form();
  if (wp && wq && zp) {
    closed_ = true;
    wp_ = ExpSum::from(*wp);
    wq_ = ExpSum::from(*wq);
    zp_ = ExpSum::from(*zp);
  }
}

ExpSum TwoStepFamily::w_pq_tail(double a2) const {
  ExpSum out = wq_;
  if (a2 > 0.0)
    for (std::size_t i = 0; i < wq_.coef.size(); ++i) {
      double k = 0.0;
      for (std::size_t j = 0; j < wp_.coef.size(); ++j)
        k += wp_.coef[j] * expm1_ratio(wp_.rate[j] - wq_.rate[i], a2);
      out.coef[i] -= (q_ - p_) * wq_.coef[i] * k;
    }
  return out;
}

double TwoStepFamily::w_pq(double a2, double x) const {
  if (x < 0.0) return 0.0;
  if (x <= a2) return sp_.W(x);
  if (closed_) return w_pq_tail(a2)(x);
  const double integral =
      integrate_adaptive([&](double z) { return sq_.W(x - z) * sp_.W(z); }, 0.0, a2, {}, 1e-13);
  return sq_.W(x) - (q_ - p_) * integral;
}

double TwoStepFamily::w_pqp(double a2, double a1, double x) const {
  if (!(a1 > a2) || a2 < 0.0) throw DomainError("two-step family requires 0 <= a2 < a1");
  const double base = w_pq(a2, x);
  if (!(x > a1)) return base;
  double integral;
  if (closed_) {
    integral = exp_convolution(wp_, w_pq_tail(a2), a1, x, x);
  } else {
    integral = integrate_adaptive([&](double z) { return sp_.W(x - z) * w_pq(a2, z); }, a1, x, {},
                                  1e-13);
  }
  return base + (p_ - q_) * integral;
}

double TwoStepFamily::z_hat_qp(double a1, double x, double y) const {
  const double base = sp_.Z(x - y);
  const double upper = std::min(x, a1);
  if (!(upper > y)) return base;
  double integral;
  if (closed_)
    integral = exp_convolution(zp_, wq_, 0.0, upper - y, x - y);
  else
    integral = integrate_adaptive([&](double z) { return sp_.Z(x - z) * sq_.W(z - y); }, y, upper,
                                  {}, 1e-13);
  return base + (q_ - p_) * integral;
}

double TwoStepFamily::z_hat_pqp(double a2, double a1, double x, double y) const {
  if (!(a1 > a2) || a2 < 0.0) throw DomainError("two-step family requires 0 <= a2 < a1");
  const double base = z_hat_qp(a1, x, y);
  const double upper = std::min(x, a2);
  if (!(upper > y)) return base;
  const double cuts[] = {a1};
  const double integral = integrate_adaptive(
      [&](double z) { return z_hat_qp(a1, x, z) * sp_.W(z - y); }, y, upper, cuts, 1e-13);
  return base + (p_ - q_) * integral;
}

TwoStepValues two_step_family(const LevyModeld& model, double p, double q, double a2, double a1,
                              double x, double y) {
  if (!(p >= 0.0) || !(q >= 0.0)) throw DomainError("two-step family requires p, q >= 0");
  const TwoStepFamily fam(model, p, q);
  return {fam.w_pq(a2, x), fam.w_pqp(a2, a1, x), fam.z_hat_qp(a1, x, y), fam.z_hat_pqp(a2, a1, x, y)};
}

double two_step_up_exit(const LevyModeld& model, double p, double q, double a2, double a1, double x,
                        double b, double eps) {
  if (!(0.0 <= x && x <= b)) throw DomainError("requires 0 <= x <= b");
  if (!(0.0 <= a2 && a2 < a1)) throw DomainError("requires 0 <= a2 < a1");
  if (x == b) return 1.0;
  if (x == 0.0 && model.is_brownian()) return 0.0;
  const TwoStepFamily fam(model, p, q);
  const ScaleEvald sp(model, p);
  // The reflected weight at level t is q exactly on (t - a1, t - a2].
  auto f = [&](double t, double s) {
    const double lo = std::max(0.0, t - a1), hi = t - a2;
    if (!(hi > lo)) return sp.W(s);
    return fam.w_pqp(lo, hi, s);
  };
  auto log_derivative = [&](double t) {
    const double h = std::min(eps, t / 4.0);
    const double d = (3.0 * f(t, t) - 4.0 * f(t, t - h) + f(t, t - 2.0 * h)) / (2.0 * h);
    return d / f(t, t);
  };
  const double cuts[] = {a2, a1};
  return std::exp(-integrate_adaptive(log_derivative, x, b, cuts, 1e-10, 14));
}

}  // namespace occtime

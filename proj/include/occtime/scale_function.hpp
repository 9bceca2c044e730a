#pragma once

#include <cmath>
#include <optional>
#include <variant>

#include "occtime/errors.hpp"
#include "occtime/levy_model.hpp"

namespace occtime {

/// (e^{d x} - 1) / d, continuous through d = 0 where it equals x.
template <typename Scalar>
Scalar expm1_ratio(Scalar d, Scalar x) {
  using std::abs;
  using std::expm1;
  const Scalar dx = d * x;
  if (abs(dx) < Scalar(1e-8)) return x * (Scalar(1) + dx / Scalar(2));
  return expm1(dx) / d;
}

/// c1 e^{r1 x} + c2 e^{r2 x}
template <typename Scalar>
struct ExpPair {
  Scalar c1, r1, c2, r2;
  Scalar operator()(Scalar x) const {
    using std::exp;
    return c1 * exp(r1 * x) + c2 * exp(r2 * x);
  }
};

/// Closed-form q-scale functions of a supported model.
///
/// Both families share the representation
///   W(x) = e^{rho2 x} (A_w E(x) + W(0)),   Z(x) = e^{rho2 x} (A_z E(x) + 1),
/// with E(x) = (e^{(rho1 - rho2) x} - 1) / (rho1 - rho2). It reduces to the
/// usual difference of exponentials when the roots are distinct and to the
/// confluent x e^{rho x} form when they coincide.
template <typename Scalar>
class ScaleEval {
 public:
  ScaleEval(const LevyModel<Scalar>& model, Scalar q) : model_(model), q_(q) {
    const auto roots = quadratic_roots(model, q);
    rho1_ = roots.rho1;
    rho2_ = roots.rho2;
    std::visit(
        [this](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>) {
            const Scalar D = m.sigma * m.sigma / Scalar(2);
            a_w_ = Scalar(1) / D;
            w0_ = Scalar(0);
            a_z_ = -rho2_;
          } else {
            a_w_ = (m.beta + rho1_) / m.mu;
            w0_ = Scalar(1) / m.mu;
            a_z_ = -rho2_ * (m.beta + rho1_) / m.beta;
          }
        },
        model.params());
  }

  const LevyModel<Scalar>& model() const { return model_; }
  Scalar q() const { return q_; }
  Scalar rho1() const { return rho1_; }
  Scalar rho2() const { return rho2_; }
  Scalar w_at_zero() const { return w0_; }

  Scalar W(Scalar x) const {
    if (x < Scalar(0)) return Scalar(0);
    using std::exp;
    const Scalar d = rho1_ - rho2_;
    if (d * x > Scalar(1)) return w_exponential_form()->operator()(x);
    return exp(rho2_ * x) * (a_w_ * expm1_ratio(d, x) + w0_);
  }

  /// Derivative for x > 0.
  Scalar W_prime(Scalar x) const {
    if (!(x > Scalar(0))) throw DomainError("W_prime: x must be positive");
    return W_prime_unchecked(x);
  }

  /// Right derivative at the origin, W'(0+).
  Scalar W_prime_at_zero() const { return W_prime_unchecked(Scalar(0)); }

  Scalar Z(Scalar x) const {
    if (x <= Scalar(0) || q_ == Scalar(0)) return Scalar(1);
    using std::exp;
    const Scalar d = rho1_ - rho2_;
    if (d * x > Scalar(1)) return z_exponential_form()->operator()(x);
    return exp(rho2_ * x) * (a_z_ * expm1_ratio(d, x) + Scalar(1));
  }

  /// W on [0, inf) as c1 e^{rho1 x} + c2 e^{rho2 x}; empty for coincident roots.
  std::optional<ExpPair<Scalar>> w_exponential_form() const {
    const Scalar d = rho1_ - rho2_;
    if (d == Scalar(0)) return std::nullopt;
    return ExpPair<Scalar>{a_w_ / d, rho1_, w0_ - a_w_ / d, rho2_};
  }

  std::optional<ExpPair<Scalar>> z_exponential_form() const {
    const Scalar d = rho1_ - rho2_;
    if (d == Scalar(0)) return std::nullopt;
    return ExpPair<Scalar>{a_z_ / d, rho1_, Scalar(1) - a_z_ / d, rho2_};
  }

 private:
  Scalar W_prime_unchecked(Scalar x) const {
    using std::exp;
    const Scalar d = rho1_ - rho2_;
    if (d * x > Scalar(1)) {
      const auto f = *w_exponential_form();
      return f.c1 * f.r1 * exp(f.r1 * x) + f.c2 * f.r2 * exp(f.r2 * x);
    }
    return exp(rho2_ * x) *
           (rho2_ * (a_w_ * expm1_ratio(d, x) + w0_) + a_w_ * exp(d * x));
  }

  LevyModel<Scalar> model_;
  Scalar q_;
  Scalar rho1_{}, rho2_{};
  Scalar a_w_{}, w0_{}, a_z_{};
};

using ScaleEvald = ScaleEval<double>;

template <typename Scalar>
ScaleEval<Scalar> make_scale_eval(const LevyModel<Scalar>& model, Scalar q) {
  return ScaleEval<Scalar>(model, q);
}

template <typename Scalar>
Scalar eval_W(const ScaleEval<Scalar>& se, Scalar x) { return se.W(x); }

template <typename Scalar>
Scalar eval_W_prime(const ScaleEval<Scalar>& se, Scalar x) { return se.W_prime(x); }

template <typename Scalar>
Scalar eval_Z(const ScaleEval<Scalar>& se, Scalar x) { return se.Z(x); }

}  // namespace occtime

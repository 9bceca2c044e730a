#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "occtime/errors.hpp"

namespace occtime {

/// X_t = mu t + sigma B_t.
template <typename Scalar>
struct BrownianDrift {
  Scalar mu;
  Scalar sigma;
};

/// X_t = x + mu t - (compound Poisson sum of Exp(beta) claims at rate lambda).
template <typename Scalar>
struct CramerLundbergExp {
  Scalar mu;
  Scalar lambda;
  Scalar beta;
};

/// One of the two supported spectrally negative surplus processes. Parameters
/// are validated by the named constructors; every evaluator assumes a valid
/// model afterwards.
template <typename Scalar>
class LevyModel {
 public:
  using Params = std::variant<BrownianDrift<Scalar>, CramerLundbergExp<Scalar>>;

  static LevyModel brownian(Scalar mu, Scalar sigma) {
    if (!std::isfinite(static_cast<double>(mu)) || !(sigma > Scalar(0)) ||
        !std::isfinite(static_cast<double>(sigma)))
      throw DomainError("brownian model requires finite mu and sigma > 0");
    return LevyModel(BrownianDrift<Scalar>{mu, sigma});
  }

  static LevyModel cramer_lundberg(Scalar mu, Scalar lambda, Scalar beta) {
    if (!(mu > Scalar(0)) || !(lambda > Scalar(0)) || !(beta > Scalar(0)) ||
        !std::isfinite(static_cast<double>(mu)) || !std::isfinite(static_cast<double>(lambda)) ||
        !std::isfinite(static_cast<double>(beta)))
      throw DomainError("cramer-lundberg model requires mu, lambda, beta > 0");
    return LevyModel(CramerLundbergExp<Scalar>{mu, lambda, beta});
  }

  const Params& params() const { return params_; }

  bool is_brownian() const { return std::holds_alternative<BrownianDrift<Scalar>>(params_); }

  /// Bounded-variation paths are exactly the ones with W(0) > 0.
  bool has_bounded_variation() const { return !is_brownian(); }

  template <typename NewScalar>
  LevyModel<NewScalar> cast() const {
    return std::visit(
        [](const auto& m) -> LevyModel<NewScalar> {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>)
            return LevyModel<NewScalar>::brownian(NewScalar(m.mu), NewScalar(m.sigma));
          else
            return LevyModel<NewScalar>::cramer_lundberg(NewScalar(m.mu), NewScalar(m.lambda),
                                                         NewScalar(m.beta));
        },
        params_);
  }

 private:
  explicit LevyModel(Params p) : params_(std::move(p)) {}
  Params params_;
};

using LevyModeld = LevyModel<double>;

/// Ordered roots rho1 >= rho2 of psi(s) = q written as a quadratic:
///   Brownian: D s^2 + mu s - q = 0,  D = sigma^2 / 2
///   Cramer-Lundberg: mu s^2 + (mu beta - lambda - q) s - q beta = 0
template <typename Scalar>
struct RootPair {
  Scalar rho1;
  Scalar rho2;
};

namespace detail {

// Roots of a s^2 + b s + c = 0 (a > 0, real roots guaranteed) without
// cancellation in the smaller-magnitude root.
template <typename Scalar>
RootPair<Scalar> stable_quadratic(Scalar a, Scalar b, Scalar c) {
  using std::sqrt;
  Scalar disc = b * b - Scalar(4) * a * c;
  if (disc < Scalar(0)) disc = Scalar(0);
  const Scalar s = sqrt(disc);
  if (b >= Scalar(0)) {
    const Scalar big = (-b - s) / (Scalar(2) * a);  // most negative
    const Scalar other = big == Scalar(0) ? Scalar(0) : c / (a * big);
    return {other, big};
  }
  const Scalar big = (-b + s) / (Scalar(2) * a);  // most positive
  const Scalar other = c / (a * big);
  return {big, other};
}

}  // namespace detail

template <typename Scalar>
RootPair<Scalar> quadratic_roots(const LevyModel<Scalar>& model, Scalar q) {
  if (!(q >= Scalar(0))) throw DomainError("q must be nonnegative");
  return std::visit(
      [q](const auto& m) -> RootPair<Scalar> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>) {
          const Scalar D = m.sigma * m.sigma / Scalar(2);
          return detail::stable_quadratic(D, m.mu, -q);
        } else {
          return detail::stable_quadratic(m.mu, m.mu * m.beta - m.lambda - q, -q * m.beta);
        }
      },
      model.params());
}

/// psi(s) = log E exp(s X_1), s >= 0.
template <typename Scalar>
Scalar laplace_exponent(const LevyModel<Scalar>& model, Scalar s) {
  if (!(s >= Scalar(0))) throw DomainError("laplace_exponent: s must be nonnegative");
  return std::visit(
      [s](const auto& m) -> Scalar {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>)
          return m.mu * s + m.sigma * m.sigma * s * s / Scalar(2);
        else
          return m.mu * s - m.lambda * s / (s + m.beta);
      },
      model.params());
}

/// Right inverse of psi: the largest root of psi(lambda) = q.
template <typename Scalar>
Scalar phi(const LevyModel<Scalar>& model, Scalar q) {
  const Scalar r = quadratic_roots(model, q).rho1;
  return r > Scalar(0) ? r : Scalar(0);
}

/// Density of the Levy measure of -X (claim sizes), lambda beta e^{-beta y}.
template <typename Scalar>
Scalar levy_measure_density(const LevyModel<Scalar>& model, Scalar y) {
  if (!(y > Scalar(0))) throw DomainError("levy_measure_density: y must be positive");
  return std::visit(
      [y](const auto& m) -> Scalar {
        using M = std::decay_t<decltype(m)>;
        using std::exp;
        if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>)
          return Scalar(0);
        else
          return m.lambda * m.beta * exp(-m.beta * y);
      },
      model.params());
}

/// Tail mass Pi((y, inf)).
template <typename Scalar>
Scalar levy_tail(const LevyModel<Scalar>& model, Scalar y) {
  if (!(y >= Scalar(0))) throw DomainError("levy_tail: y must be nonnegative");
  return std::visit(
      [y](const auto& m) -> Scalar {
        using M = std::decay_t<decltype(m)>;
        using std::exp;
        if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>)
          return Scalar(0);
        else
          return m.lambda * exp(-m.beta * y);
      },
      model.params());
}

template <typename Scalar>
std::string describe(const LevyModel<Scalar>& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, BrownianDrift<Scalar>>)
          return "brownian(mu=" + std::to_string(double(m.mu)) +
                 ", sigma=" + std::to_string(double(m.sigma)) + ")";
        else
          return "cramer_lundberg_exp(mu=" + std::to_string(double(m.mu)) +
                 ", lambda=" + std::to_string(double(m.lambda)) +
                 ", beta=" + std::to_string(double(m.beta)) + ")";
      },
      model.params());
}

}  // namespace occtime

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "occtime/errors.hpp"

namespace occtime {

/// n-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes start from the eigenvalues of the symmetric Jacobi matrix
/// (Golub-Welsch) and are polished by Newton steps on the three-term
/// recurrence, so nodes and weights are accurate to working precision.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order) : nodes_(order), weights_(order) {
    if (order < 1) throw DomainError("GaussLegendre: order must be positive");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      jacobi(k, k - 1) = b;
      jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    for (int i = 0; i < order; ++i) {
      double x = solver.eigenvalues()(i);
      double dp = 1.0;
      for (int it = 0; it < 3; ++it) {
        const auto [p, d] = legendre(order, x);
        dp = d;
        x -= p / d;
      }
      dp = legendre(order, x).second;
      nodes_(i) = x;
      weights_(i) = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  int order() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nodes_.size(); ++i) sum += weights_(i) * f(mid + half * nodes_(i));
    return half * sum;
  }

 private:
  // (P_n(x), P_n'(x))
  static std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 0) return {1.0, 0.0};
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
  }

  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

/// Shared 20-point rule.
inline const GaussLegendre& gauss_legendre_20() {
  static const GaussLegendre rule(20);
  return rule;
}

/// Composite rule over [a, b] with panel edges at every cut strictly inside
/// (a, b); panels longer than max_panel are subdivided evenly.
template <typename F>
double integrate_panels(F&& f, double a, double b, std::span<const double> cuts,
                        double max_panel = 0.5, const GaussLegendre& rule = gauss_legendre_20()) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges{a};
  for (double c : cuts)
    if (c > a && c < b) edges.push_back(c);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k], hi = edges[k + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
    const double step = (hi - lo) / pieces;
    for (int m = 0; m < pieces; ++m) {
      const double pa = lo + m * step;
      const double pb = m + 1 == pieces ? hi : pa + step;
      sum += rule.integrate(f, pa, pb);
    }
  }
  return sum;
}

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }

template <typename Derived>
double magnitude(const Eigen::ArrayBase<Derived>& v) {
  return v.abs().maxCoeff();
}

template <typename V>
V zero() {
  if constexpr (std::is_arithmetic_v<V>)
    return V(0);
  else
    return V::Zero();
}

template <typename F>
using quad_value_t = std::decay_t<std::invoke_result_t<F&, double>>;

template <typename F>
std::pair<quad_value_t<F>, double> kronrod15(F& f, double a, double b) {
  using V = quad_value_t<F>;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const V fc = f(mid);
  V kronrod = fc * kKronrodW[7];
  V gauss = fc * kGaussW[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodX[j];
    const V s = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodW[j] * s;
    if (j % 2 == 1) gauss += kGaussW[j / 2] * s;
  }
  const V value = half * kronrod;
  return {value, half * magnitude(V(kronrod - gauss))};
}

template <typename F>
quad_value_t<F> adaptive_step(F& f, double a, double b, double tol, int depth) {
  auto [value, err] = kronrod15(f, a, b);
  if (depth <= 0 || err <= tol) return value;
  const double mid = 0.5 * (a + b);
  return adaptive_step(f, a, mid, 0.5 * tol, depth - 1) +
         adaptive_step(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 7/15 with bisection, panels split at every cut
/// inside (a, b). The embedded Gauss estimate is pessimistic for smooth
/// integrands, so `tol` bounds the error comfortably.
template <typename F>
detail::quad_value_t<F> integrate_adaptive(F&& f, double a, double b, std::span<const double> cuts,
                                           double tol = 1e-12, int max_depth = 10) {
  using V = detail::quad_value_t<F>;
  std::vector<double> edges{a};
  for (double c : cuts)
    if (c > a && c < b) edges.push_back(c);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  V sum = detail::zero<V>();
  if (!(b > a)) return sum;
  const double span = b - a;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double share = tol * (edges[k + 1] - edges[k]) / span;
    sum += detail::adaptive_step(f, edges[k], edges[k + 1], share, max_depth);
  }
  return sum;
}

}  // namespace occtime

#include "occtime/omega_scale.hpp"

#include <cmath>
#include <limits>

#include "occtime/errors.hpp"
#include "occtime/quadrature.hpp"
#include "occtime/scale_function.hpp"

namespace occtime {

namespace {

bool near_integer(double r) { return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r)); }

void tabulate_scale(const LevyModeld& model, double h, std::size_t intervals, Eigen::VectorXd& w_tab,
                    Eigen::VectorXd& wp_tab) {
  const ScaleEvald scale(model, 0.0);
  w_tab.resize(static_cast<Eigen::Index>(intervals + 1));
  wp_tab.resize(static_cast<Eigen::Index>(intervals + 1));
  w_tab(0) = scale.w_at_zero();
  wp_tab(0) = scale.W_prime_at_zero();
  for (std::size_t k = 1; k <= intervals; ++k) {
    const double x = h * static_cast<double>(k);
    w_tab(static_cast<Eigen::Index>(k)) = scale.W(x);
    wp_tab(static_cast<Eigen::Index>(k)) = scale.W_prime(x);
  }
}

// Per-lag moments of W over [m h, (m+1) h]: lower(m) pairs with the left
// endpoint of a linear interpolant, upper(m) with the right one.
void scale_moments(const LevyModeld& model, double h, std::size_t intervals, Eigen::VectorXd& lower,
                   Eigen::VectorXd& upper) {
  const ScaleEvald scale(model, 0.0);
  const auto& rule = gauss_legendre_20();
  lower.resize(static_cast<Eigen::Index>(intervals));
  upper.resize(static_cast<Eigen::Index>(intervals));
  for (std::size_t m = 0; m < intervals; ++m) {
    const double a = h * static_cast<double>(m);
    const double m0 = rule.integrate([&](double s) { return scale.W(s); }, a, a + h);
    const double m1 = rule.integrate([&](double s) { return scale.W(s) * (s - a) / h; }, a, a + h);
    lower(static_cast<Eigen::Index>(m)) = m0 - m1;
    upper(static_cast<Eigen::Index>(m)) = m1;
  }
}

// Product-trapezoid march of u(t_i) = W^omega(t_i, t_0) along one column.
// omega_cell[k] is the weight on [t_k, t_{k+1}); w_rev is the W table reversed
// (w_rev[m] = W((n_tab - m) h)) and v is scratch of length >= len.
void march_column(const Eigen::VectorXd& w_tab, const Eigen::VectorXd& w_rev, const double* omega_cell,
                  std::size_t len, double h, double w0, double* out, Eigen::VectorXd& v) {
  const auto n_tab = static_cast<Eigen::Index>(w_tab.size() - 1);
  out[0] = w0;
  v(0) = 0.5 * omega_cell[0] * w0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double dot = w_rev.segment(n_tab - ii, ii).dot(v.head(ii));
    const double denom = 1.0 - 0.5 * h * w0 * omega_cell[i - 1];
    if (!(denom > 0.5)) throw ConfigError("mesh step too coarse for the weight; reduce the mesh");
    const double u = (w_tab(ii) + h * dot) / denom;
    if (!std::isfinite(u)) throw NumericalError("non-finite value in the omega-scale march");
    out[i] = u;
    v(ii) = 0.5 * (omega_cell[i - 1] + omega_cell[i]) * u;
  }
}

}  // namespace

double aligned_step(double h_max, std::span<const double> lengths) {
  if (!(h_max > 0.0) || !std::isfinite(h_max)) throw ConfigError("mesh step must be positive");
  double l_min = std::numeric_limits<double>::infinity();
  for (double l : lengths)
    if (l > 0.0) l_min = std::min(l_min, l);
  if (!std::isfinite(l_min)) return h_max;
  for (auto m = static_cast<long long>(std::ceil(l_min / h_max - 1e-9)); ; ++m) {
    const double h = l_min / static_cast<double>(std::max(1LL, m));
    if (h < h_max / 64.0) throw ConfigError("weight breakpoints cannot be aligned with the mesh");
    bool ok = true;
    for (double l : lengths)
      if (l > 0.0 && !near_integer(l / h)) {
        ok = false;
        break;
      }
    if (ok) return h;
  }
}

OmegaScaleGrid::OmegaScaleGrid(const LevyModeld& model, const WeightFunction& omega, double x_max,
                               const OmegaScaleOptions& options)
    : model_(model), omega_(omega), residual_alarm_(options.residual_alarm) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be positive");
  if (!(options.h > 0.0) || options.h > x_max / 10.0)
    throw ConfigError("mesh step must lie in (0, x_max / 10]");
  std::vector<double> lengths;
  for (double a : omega.jumps())
    if (a < x_max) lengths.push_back(a);
  h_ = aligned_step(options.h, lengths);
  intervals_ = static_cast<std::size_t>(std::ceil(x_max / h_ - 1e-9));
  const std::size_t n = intervals_ + 1;
  const auto ni = static_cast<Eigen::Index>(n);

  tabulate_scale(model, h_, intervals_, w_tab_, wp_tab_);
  w0_ = w_tab_(0);
  const double wp0 = wp_tab_(0);
  const Eigen::VectorXd w_rev = w_tab_.reverse();

  omega_cell_.resize(ni);
  for (Eigen::Index k = 0; k < ni; ++k) omega_cell_(k) = omega((static_cast<double>(k) + 0.5) * h_);
  Eigen::VectorXd wbar(ni);
  wbar(0) = omega_cell_(0);
  for (Eigen::Index k = 1; k < ni; ++k) wbar(k) = 0.5 * (omega_cell_(k - 1) + omega_cell_(k));

  const std::size_t total = n * (n + 1) / 2;
  w_.resize(static_cast<Eigen::Index>(total));
  w2_.resize(static_cast<Eigen::Index>(total));
  zhat_.resize(static_cast<Eigen::Index>(total));
  zhat2_.resize(static_cast<Eigen::Index>(total));
  residual_.resize(static_cast<Eigen::Index>(total));

  // Columns: x -> W^omega(x, y_j).
  Eigen::VectorXd scratch(ni), col(ni);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t len = n - j;
    march_column(w_tab_, w_rev, omega_cell_.data() + j, len, h_, w0_, col.data(), scratch);
    for (std::size_t i = 0; i < len; ++i) w_(static_cast<Eigen::Index>(packed(j + i, j))) = col(static_cast<Eigen::Index>(i));
  }

  // Rows: dual residual, y-partial and the cumulative Zhat integrals. The
  // residual integrates W exactly against the cell-wise linear interpolant of
  // omega W^omega(x, .), so it measures consistency rather than re-deriving
  // the march's own discrete identity.
  Eigen::VectorXd m_lower, m_upper;
  scale_moments(model, h_, intervals_, m_lower, m_upper);
  Eigen::VectorXd rho(ni), rho_l(ni), rho_r(ni);
  max_residual_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto row = static_cast<Eigen::Index>(packed(i, 0));
    rho.head(ii + 1) = wbar.head(ii + 1).cwiseProduct(w_.segment(row, ii + 1).matrix());
    if (i > 0) {
      rho_l.head(ii) = omega_cell_.head(ii).cwiseProduct(w_.segment(row, ii).matrix());
      rho_r.head(ii) = omega_cell_.head(ii).cwiseProduct(w_.segment(row + 1, ii).matrix());
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const Eigen::Index len = ii - jj + 1;
      const double rj = w_(row + jj), ri = w_(row + ii);
      const double cl = h_ * (0.5 * omega_cell_(jj) - wbar(jj)) * rj;
      const double cr = h_ * (0.5 * omega_cell_(ii - 1) - wbar(ii)) * ri;
      const auto seg = rho.segment(jj, len);
      const double int_w = rho_l.segment(jj, len - 1).dot(m_lower.head(len - 1)) +
                           rho_r.segment(jj, len - 1).dot(m_upper.head(len - 1));
      const double int_wp = h_ * seg.dot(wp_tab_.head(len)) + cl * wp_tab_(0) + cr * wp_tab_(len - 1);
      const double res = std::abs(rj - w_tab_(len - 1) - int_w);
      residual_(row + jj) = static_cast<float>(res);
      max_residual_ = std::max(max_residual_, res);
      const double w2 = -wp_tab_(len - 1) - rj * omega_cell_(jj) * w0_ - int_wp;
      if (!std::isfinite(w2)) throw NumericalError("non-finite value in the y-partial");
      w2_(row + jj) = w2;
    }
    residual_(row + ii) = 0.0f;
    w2_(row + ii) = -wp0 - w0_ * w0_ * omega_cell_(ii);

    zhat_(row + ii) = 1.0;
    zhat2_(row + ii) = -omega_cell_(ii) * w0_;
    if (i > 0) {
      const auto prev = static_cast<Eigen::Index>(packed(i - 1, 0));
      const double f = 0.5 * h_ * omega_cell_(ii - 1);
      zhat_.segment(row, ii) = zhat_.segment(prev, ii) + f * (w_.segment(prev, ii) + w_.segment(row, ii));
      zhat2_.segment(row, ii) =
          zhat2_.segment(prev, ii) + f * (w2_.segment(prev, ii) + w2_.segment(row, ii));
    }
  }

  w_section_.resize(ni);
  w2_section_.resize(ni);
  zhat_section_.resize(ni);
  zhat2_section_.resize(ni);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    w_section_(ii) = w(i, 0);
    w2_section_(ii) = w2(i, 0);
    zhat_section_(ii) = z_hat(i, 0);
    zhat2_section_(ii) = z_hat_2(i, 0);
  }

  // Right derivative in x of the y = 0 section.
  w1_section_.resize(ni);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double acc = 0.0;
    if (i > 0) {
      acc += 0.5 * omega_cell_(0) * wp_tab_(ii) * w(0, 0);
      for (std::size_t k = 1; k < i; ++k)
        acc += wbar(static_cast<Eigen::Index>(k)) * wp_tab_(ii - static_cast<Eigen::Index>(k)) * w(k, 0);
      acc += 0.5 * omega_cell_(ii - 1) * wp_tab_(0) * w(i, 0);
    }
    w1_section_(ii) = wp_tab_(ii) + h_ * acc + w0_ * omega_cell_(ii) * w(i, 0);
  }
}

std::size_t OmegaScaleGrid::index_of(double x) const {
  const double r = x / h_;
  const double k = std::round(r);
  if (!(x >= 0.0) || std::abs(x - k * h_) > 1e-9 * std::max(1.0, std::abs(x)) ||
      k > static_cast<double>(intervals_))
    throw DomainError("point is not a node of the mesh");
  return static_cast<std::size_t>(k);
}

OmegaScaleGrid solve_omega_scale(const LevyModeld& model, const WeightFunction& omega, double x_max,
                                 double h) {
  OmegaScaleOptions options;
  options.h = h;
  return OmegaScaleGrid(model, omega, x_max, options);
}

namespace {

std::pair<std::size_t, std::size_t> node_pair(const OmegaScaleGrid& grid, double x, double y) {
  const std::size_t i = grid.index_of(x), j = grid.index_of(y);
  if (j > i) throw DomainError("requires y <= x");
  return {i, j};
}

}  // namespace

double partial_w2(const OmegaScaleGrid& grid, double x, double y) {
  const auto [i, j] = node_pair(grid, x, y);
  return grid.w2(i, j);
}

double z_hat(const OmegaScaleGrid& grid, double x, double y) {
  const auto [i, j] = node_pair(grid, x, y);
  return grid.z_hat(i, j);
}

double z_hat_1(const OmegaScaleGrid& grid, double x, double y) {
  const auto [i, j] = node_pair(grid, x, y);
  return grid.z_hat_1(i, j);
}

double z_hat_2(const OmegaScaleGrid& grid, double x, double y) {
  const auto [i, j] = node_pair(grid, x, y);
  return grid.z_hat_2(i, j);
}

double interpolate_nodes(const Eigen::VectorXd& values, double h, double x) {
  const Eigen::Index n = values.size();
  if (n == 1) return values(0);
  const double r = std::clamp(x / h, 0.0, static_cast<double>(n - 1));
  const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(r)), n - 2);
  const double t = r - static_cast<double>(k);
  return (1.0 - t) * values(k) + t * values(k + 1);
}

double OmegaColumn::at(double x) const {
  if (!(x >= y - 1e-12)) throw DomainError("column evaluated below its base point");
  return interpolate_nodes(values, h, x - y);
}

OmegaColumn solve_omega_column(const LevyModeld& model, const WeightFunction& omega, double y,
                               double x_end, double h) {
  if (!(y >= 0.0) || !(x_end >= y)) throw DomainError("column requires 0 <= y <= x_end");
  OmegaColumn out;
  out.y = y;
  const double span = x_end - y;
  if (span == 0.0) {
    out.h = h;
    out.values = Eigen::VectorXd::Constant(1, ScaleEvald(model, 0.0).w_at_zero());
    return out;
  }
  std::vector<double> lengths{span};
  for (double a : omega.jumps())
    if (a > y && a < x_end) lengths.push_back(a - y);
  out.h = aligned_step(std::min(h, span), lengths);
  const auto intervals = static_cast<std::size_t>(std::llround(span / out.h));
  Eigen::VectorXd w_tab, wp_tab;
  tabulate_scale(model, out.h, intervals, w_tab, wp_tab);
  const Eigen::VectorXd w_rev = w_tab.reverse();
  const auto n = static_cast<Eigen::Index>(intervals + 1);
  Eigen::VectorXd omega_cell(n), scratch(n);
  for (Eigen::Index k = 0; k < n; ++k) omega_cell(k) = omega(y + (static_cast<double>(k) + 0.5) * out.h);
  out.values.resize(n);
  march_column(w_tab, w_rev, omega_cell.data(), intervals + 1, out.h, w_tab(0), out.values.data(), scratch);
  return out;
}

double reflected_weight_check(const LevyModeld& model, const WeightFunction& omega, double u,
                              double x, double y, double h) {
  if (!(0.0 <= y && y <= x && x <= u)) throw DomainError("reflection check requires 0 <= y <= x <= u");
  const OmegaColumn reflected = solve_omega_column(model, omega.reflected(u), u - x, u - y, h);
  const OmegaColumn direct = solve_omega_column(model, omega, y, x, h);
  return std::abs(reflected.values(reflected.values.size() - 1) - direct.values(direct.values.size() - 1));
}

}  // namespace occtime

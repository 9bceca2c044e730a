#include "occtime/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "occtime/errors.hpp"

namespace occtime {

namespace {

void check_level(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("weight levels must be finite and nonnegative");
}

GeneralStepWeight to_canonical(const WeightFunction::Params& p) {
  return std::visit(
      [](const auto& w) -> GeneralStepWeight {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantWeight>)
          return {{}, {w.q}};
        else if constexpr (std::is_same_v<T, OneStepWeight>)
          return {{w.a}, {w.p, w.q}};
        else
          return w;
      },
      p);
}

}  // namespace

WeightFunction::WeightFunction(Params p) : params_(std::move(p)), canonical_(to_canonical(params_)) {}

WeightFunction WeightFunction::constant(double q) {
  check_level(q);
  return WeightFunction(ConstantWeight{q});
}

WeightFunction WeightFunction::one_step(double q, double p, double a) {
  check_level(q);
  check_level(p);
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("one_step weight requires a > 0");
  return WeightFunction(OneStepWeight{q, p, a});
}

WeightFunction WeightFunction::step(std::vector<double> breakpoints, std::vector<double> levels) {
  if (levels.size() != breakpoints.size() + 1)
    throw DomainError("step weight needs exactly one more level than breakpoints");
  for (double v : levels) check_level(v);
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > 0.0) || !std::isfinite(breakpoints[k]))
      throw DomainError("step breakpoints must be positive");
    if (k > 0 && !(breakpoints[k] < breakpoints[k - 1]))
      throw DomainError("step breakpoints must be strictly decreasing");
  }
  return WeightFunction(GeneralStepWeight{std::move(breakpoints), std::move(levels)});
}

double WeightFunction::operator()(double z) const {
  const auto& a = canonical_.breakpoints;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (z >= a[k]) return canonical_.levels[k];
  return canonical_.levels.back();
}

double WeightFunction::integral(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  // Walk the pieces bottom-up: [0, a_n), [a_n, a_{n-1}), ..., [a_1, inf).
  const auto& a = canonical_.breakpoints;
  const auto& p = canonical_.levels;
  const std::size_t n = a.size();
  double total = 0.0;
  double left = 0.0;
  for (std::size_t m = 0; m <= n; ++m) {
    const double right = m < n ? a[n - 1 - m] : INFINITY;
    const double level = p[n - m];
    const double s = std::max(lo, left), t = std::min(hi, right);
    if (t > s) total += level * (t - s);
    left = right;
  }
  return total;
}

std::vector<double> WeightFunction::jumps() const {
  std::vector<double> out;
  const auto& a = canonical_.breakpoints;
  const auto& p = canonical_.levels;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (p[k] != p[k + 1]) out.push_back(a[k]);
  std::reverse(out.begin(), out.end());
  return out;
}

double WeightFunction::sup() const {
  return *std::max_element(canonical_.levels.begin(), canonical_.levels.end());
}

std::optional<double> WeightFunction::constant_level() const {
  const auto& p = canonical_.levels;
  if (std::all_of(p.begin(), p.end(), [&](double v) { return v == p.front(); })) return p.front();
  return std::nullopt;
}

WeightFunction WeightFunction::plus(double delta) const {
  check_level(delta);
  return std::visit(
      [delta](const auto& w) -> WeightFunction {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantWeight>) {
          return constant(w.q + delta);
        } else if constexpr (std::is_same_v<T, OneStepWeight>) {
          return one_step(w.q + delta, w.p + delta, w.a);
        } else {
          auto levels = w.levels;
          for (double& v : levels) v += delta;
          return step(w.breakpoints, std::move(levels));
        }
      },
      params_);
}

WeightFunction WeightFunction::reflected(double u) const {
  if (!(u > 0.0)) throw DomainError("reflection point must be positive");
  const auto& a = canonical_.breakpoints;
  const auto& p = canonical_.levels;
  const std::size_t n = a.size();
  std::size_t first = 0;  // first breakpoint below u
  while (first < n && a[first] >= u) ++first;
  if (first == n) return constant(p[n]);
  std::vector<double> bp;
  std::vector<double> lv{p[n]};
  for (std::size_t k = n; k-- > first;) {
    bp.push_back(u - a[k]);
    lv.push_back(p[k]);
  }
  return step(std::move(bp), std::move(lv));
}

std::string WeightFunction::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantWeight>) {
          os << "constant(q=" << w.q << ")";
        } else if constexpr (std::is_same_v<T, OneStepWeight>) {
          os << "one_step(q=" << w.q << ", p=" << w.p << ", a=" << w.a << ")";
        } else {
          os << "step(breakpoints=[";
          for (std::size_t k = 0; k < w.breakpoints.size(); ++k) os << (k ? "," : "") << w.breakpoints[k];
          os << "], levels=[";
          for (std::size_t k = 0; k < w.levels.size(); ++k) os << (k ? "," : "") << w.levels[k];
          os << "])";
        }
      },
      params_);
  return os.str();
}

}  // namespace occtime

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace occtime {

/// omega(z) = q
struct ConstantWeight {
  double q;
};

/// omega(z) = q on [0, a), p on [a, inf)
struct OneStepWeight {
  double q;
  double p;
  double a;
};

/// breakpoints a_1 > a_2 > ... > a_n > 0 with levels p_0, ..., p_n:
/// p_0 on [a_1, inf), p_k on [a_{k+1}, a_k), p_n on [0, a_n).
struct GeneralStepWeight {
  std::vector<double> breakpoints;
  std::vector<double> levels;
};

/// Nonnegative right-continuous step weight on [0, inf).
class WeightFunction {
 public:
  using Params = std::variant<ConstantWeight, OneStepWeight, GeneralStepWeight>;

  static WeightFunction constant(double q);
  static WeightFunction one_step(double q, double p, double a);
  static WeightFunction step(std::vector<double> breakpoints, std::vector<double> levels);

  const Params& params() const { return params_; }

  /// Every variant in the breakpoints/levels form.
  const GeneralStepWeight& canonical() const { return canonical_; }

  double operator()(double z) const;

  /// int_lo^hi omega(z) dz for 0 <= lo <= hi.
  double integral(double lo, double hi) const;

  /// Points where the level actually changes, ascending.
  std::vector<double> jumps() const;

  double sup() const;
  std::optional<double> constant_level() const;

  /// omega + delta.
  WeightFunction plus(double delta) const;

  /// z -> omega(u - z), restricted to [0, u].
  WeightFunction reflected(double u) const;

  std::string describe() const;

 private:
  explicit WeightFunction(Params p);
  Params params_;
  GeneralStepWeight canonical_;
};

}  // namespace occtime

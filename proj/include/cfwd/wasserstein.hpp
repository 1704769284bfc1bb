#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfwd/monotone.hpp"

namespace cfwd {

/// Finitely many atoms at strictly increasing positions; masses sum to one.
class AtomicMeasure {
 public:
  AtomicMeasure(std::vector<double> positions, std::vector<double> masses);
  static AtomicMeasure dirac(double x) { return AtomicMeasure({x}, {1.0}); }

  std::span<const double> positions() const { return pos_; }
  std::span<const double> masses() const { return mass_; }
  std::size_t atoms() const { return pos_.size(); }

  double second_moment() const;

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<double> pos_;
  std::vector<double> mass_;
};

/// Pushforward of Lebesgue measure on [0,1] under g.
AtomicMeasure iota(const PiecewiseConstant& g);
/// Right-continuous quantile function.
StepFunction iota_inv(const AtomicMeasure& mu);

/// L2 distance of the quantile functions.
double w2_quantile(const PiecewiseConstant& g1, const PiecewiseConstant& g2);

/// Splits both measures into D equal cells (D = common denominator of all
/// masses, at most `max_denominator`) and returns
/// sqrt(min over matchings of sum |x_i - y_pi(i)|^2 / D) with the sorted matching.
/// Throws ValidationError when no such D exists.
double w2_bruteforce(const AtomicMeasure& mu1, const AtomicMeasure& mu2,
                     int max_denominator = 64);

/// The same minimum by exhaustive search over all D! matchings (D <= 9).
double w2_exhaustive(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int max_denominator = 9);

/// Smallest D with every mass an integer multiple of 1/D (to 1e-12), or 0.
int common_denominator(const AtomicMeasure& mu, int max_denominator);

/// Twice-differentiable scalar test function from a closed-form family.
struct ScalarFunction {
  enum class Kind { Constant, Linear, Quadratic, Sine, Bump, SineBump };
  Kind kind = Kind::Linear;
  double a = 1.0;  // frequency / slope / constant
  double c = 0.0;  // centre
  double s = 1.0;  // width of the Gaussian bump

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  std::string name() const;

  /// Parses names such as "linear", "quadratic", "sin:2", "bump:0:0.5", "sinbump:3:0:1".
  static ScalarFunction parse(const std::string& spec);
};

/// Fixed list of scalar test functions used by the martingale checks.
std::vector<ScalarFunction> scalar_bank();

/// <mu, f> = sum of mass * f(position).
double pair_observable(const AtomicMeasure& mu, const ScalarFunction& f);
/// <|mu|, f''> = sum over atoms of f''(position).
double pair_support(const AtomicMeasure& mu, const ScalarFunction& f);

}  // namespace cfwd

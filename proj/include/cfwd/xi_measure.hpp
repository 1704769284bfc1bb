#pragma once

// The sigma-finite reference measure Xi = sum_n Xi_n on monotone step
// functions, for a step-function interaction potential xi.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cfwd/monotone.hpp"
#include "cfwd/random.hpp"

namespace cfwd {

struct NullStratum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RejectionBudgetExhausted : std::runtime_error {
  RejectionBudgetExhausted(const std::string& what, double rate)
      : std::runtime_error(what), acceptance_rate(rate) {}
  double acceptance_rate;
};

/// Largest stratum the samplers accept.
inline constexpr int kMaxStratum = 8;

/// xi together with a truncation level and a ball radius.
struct XiSpec {
  PiecewiseConstant xi;
  int max_n = 1;
  double radius = 1.0;

  void validate() const;
};

/// xi = identity on [0,1] as a step function with `resolution` cells:
/// breakpoints j/K and value (j + 1/2)/K on the j-th cell.
PiecewiseConstant xi_identity(std::size_t resolution = 1024);

/// Number of distinct values of xi.
inline std::size_t distinct_values(const PiecewiseConstant& xi) { return xi.pieces(); }

/// (prod_k m_{theta_k}) * prod_{k < |theta|} (s_{i_k + 1} - s_{i_k}), i_k the last index of block k.
double c_theta(const Partition& theta, const MassVector& m, std::span<const double> varsigma);

/// prod_i (q_i - q_{i-1}) with q_0 = 0 and q_n = 1; 1 when q is empty.
double mu_xi_density(std::span<const double> q);

/// 2 pi^{n/2} r^n (xi(1) - xi(0))^{n-1} / (n! Gamma(n/2)).
double xi_n_ball_bound(int n, double r, const PiecewiseConstant& xi);

/// One proposal of the box-rejection scheme for Xi_n restricted to B_r.
///
/// q is drawn from mu_xi^n / Z, x uniformly from the box
/// |x_i| <= r / sqrt(q_i - q_{i-1}); `hit` says whether x is ordered and
/// inside the ellipsoid. weight = Z * box volume, so weight * hit has
/// expectation Xi_n(B_r) and weight * hit * F has expectation
/// the Xi_n-integral of F over B_r.
struct Candidate {
  std::vector<double> q;
  std::vector<double> x;
  double weight = 0.0;
  bool hit = false;
};

struct WeightedSample {
  StepFunction g;
  int n = 1;
  /// Unnormalized importance weight; self-normalize across samples.
  double weight = 0.0;
  std::vector<double> q;
  std::vector<double> x;
};

/// Exact sampler for one stratum. Breakpoint tuples are drawn by a
/// dynamic program over the jump points of xi, so no enumeration is needed.
class XiStratumSampler {
 public:
  XiStratumSampler(int n, double radius, const PiecewiseConstant& xi);

  int n() const { return n_; }
  double radius() const { return r_; }
  /// Total mass of mu_xi^n.
  double breakpoint_mass() const { return z_; }

  /// Draws q from mu_xi^n / Z.
  std::vector<double> sample_breakpoints(Rng& rng) const;
  Candidate propose(Rng& rng) const;
  void propose(Rng& rng, Candidate& out) const;

  /// Rejection loop; throws RejectionBudgetExhausted after `max_attempts`.
  WeightedSample sample(Rng& rng, std::size_t max_attempts = 1'000'000);

  std::size_t attempts() const { return attempts_; }
  std::size_t accepts() const { return accepts_; }
  double acceptance_rate() const {
    return attempts_ == 0 ? 0.0 : static_cast<double>(accepts_) / static_cast<double>(attempts_);
  }

 private:
  int n_;
  double r_;
  std::vector<double> s_;  // jump locations, s_[0] = 0 is the origin
  std::vector<double> h_;  // jump heights, h_[0] unused
  // level j: F_j(p), prefix sums of h F_j s and h F_j
  std::vector<std::vector<double>> f_;
  std::vector<std::vector<double>> pa_;
  std::vector<std::vector<double>> pb_;
  double z_ = 1.0;
  std::size_t attempts_ = 0;
  std::size_t accepts_ = 0;
};

WeightedSample sample_xi_n_ball(int n, double r, const PiecewiseConstant& xi, Rng& rng);

struct MassEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t samples = 0;
  double acceptance_rate = 0.0;
};

/// Hit-or-miss estimate of Xi_n(B_r) with a 95% normal interval.
/// A null stratum yields exactly zero.
MassEstimate estimate_xi_n_mass(int n, double r, const PiecewiseConstant& xi, std::size_t samples,
                                Rng& rng);

}  // namespace cfwd

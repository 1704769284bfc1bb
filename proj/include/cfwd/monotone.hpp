#pragma once

// Piecewise-constant functions on [0,1], ordered partitions of particle
// indices and the mass-weighted projections acting on them.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfwd {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A right-continuous piecewise-constant function on [0,1].
///
/// Value `values()[i]` is taken on [q_{i-1}, q_i) with q_0 = 0, q_n = 1, and
/// the last value is also taken at u = 1. Adjacent pieces with exactly equal
/// values are merged on construction, so the representation is unique.
class PiecewiseConstant {
 public:
  PiecewiseConstant();
  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values);

  static PiecewiseConstant constant(double c);
  /// Uniform grid with `values.size()` cells.
  static PiecewiseConstant from_grid(std::vector<double> values);

  std::span<const double> breakpoints() const { return q_; }
  std::span<const double> values() const { return x_; }
  std::size_t pieces() const { return x_.size(); }

  double cell_left(std::size_t i) const { return i == 0 ? 0.0 : q_[i - 1]; }
  double cell_right(std::size_t i) const { return i + 1 == x_.size() ? 1.0 : q_[i]; }
  double cell_length(std::size_t i) const { return cell_right(i) - cell_left(i); }

  double operator()(double u) const;
  std::size_t cell_index(double u) const;

  /// Exact integral over [a, b] (a <= b, clamped to [0,1]).
  double integral(double a, double b) const;
  double integral() const { return cum_.back(); }

  bool is_nondecreasing() const;

  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;

 private:
  void build_prefix();

  std::vector<double> q_;
  std::vector<double> x_;
  std::vector<double> cum_;  // cum_[i] = integral over [0, q_i], size pieces()+1
};

/// Monotone step function: a PiecewiseConstant whose values are strictly
/// increasing after merging (the canonical element of S↑).
class StepFunction : public PiecewiseConstant {
 public:
  StepFunction() = default;
  explicit StepFunction(PiecewiseConstant f);

  /// Number of distinct values (♯g).
  std::size_t distinct_values() const { return pieces(); }
};

/// Builds the canonical monotone step function with breakpoints q and values x.
/// Requires 0 < q_1 < ... < q_{n-1} < 1, |x| = |q| + 1 and x non-decreasing.
StepFunction make_step_function(std::vector<double> q, std::vector<double> x);

double inner(const PiecewiseConstant& f, const PiecewiseConstant& g);
double norm_sq(const PiecewiseConstant& f);
double norm_p(const PiecewiseConstant& f, double p);

/// sum_k coeffs[k] * fs[k], evaluated exactly on the merged breakpoint grid.
PiecewiseConstant linear_combination(std::span<const double> coeffs,
                                     std::span<const PiecewiseConstant* const> fs);
PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b);
PiecewiseConstant operator-(const PiecewiseConstant& a, const PiecewiseConstant& b);
PiecewiseConstant operator*(double s, const PiecewiseConstant& a);

/// Conditional expectation of h given sigma(g): on each constancy interval of
/// g the result equals the Lebesgue average of h over that interval.
PiecewiseConstant pr_step(const PiecewiseConstant& g, const PiecewiseConstant& h);

/// Discretizes a general function on a uniform grid of `resolution` cells
/// (cell averages by the midpoint rule). Error is O(1/resolution) for
/// Lipschitz h.
template <class F>
PiecewiseConstant discretize(F&& h, std::size_t resolution) {
  std::vector<double> v(resolution);
  for (std::size_t i = 0; i < resolution; ++i)
    v[i] = h((static_cast<double>(i) + 0.5) / static_cast<double>(resolution));
  return PiecewiseConstant::from_grid(std::move(v));
}

/// True iff for every a < b with xi(a) = xi(b), g is constant on [a, b).
bool is_xi_measurable(const PiecewiseConstant& g, const PiecewiseConstant& xi);

/// Positive masses summing to one.
class MassVector {
 public:
  /// A single particle of unit mass.
  MassVector() : m_{1.0} {}
  explicit MassVector(std::vector<double> m);
  static MassVector uniform(std::size_t n);

  std::size_t size() const { return m_.size(); }
  double operator[](std::size_t i) const { return m_[i]; }
  std::span<const double> values() const { return m_; }
  /// Cumulative mass boundaries u_0 = 0 < u_1 < ... < u_n = 1.
  std::vector<double> cumulative() const;

  friend bool operator==(const MassVector&, const MassVector&) = default;

 private:
  std::vector<double> m_;
};

/// Ordered partition of {0,...,n-1} into consecutive index blocks.
class Partition {
 public:
  Partition() = default;
  /// `starts` holds the first index of every block, starting with 0.
  Partition(std::vector<std::size_t> starts, std::size_t n);

  static Partition singletons(std::size_t n);
  static Partition single_block(std::size_t n);
  static Partition from_sizes(std::span<const std::size_t> sizes);

  std::size_t size() const { return n_; }
  std::size_t block_count() const { return starts_.size(); }
  std::size_t block_begin(std::size_t k) const { return starts_[k]; }
  std::size_t block_end(std::size_t k) const {
    return k + 1 == starts_.size() ? n_ : starts_[k + 1];
  }
  std::span<const std::size_t> starts() const { return starts_; }

  /// 1-based block notation, e.g. "({1,2},{3})".
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> starts_;
  std::size_t n_ = 0;
};

/// Maximal blocks of consecutive indices whose successive gaps are <= tol.
Partition partition_of(std::span<const double> x, double tol);

/// P_theta v: inside every block, each coordinate becomes the mass-weighted
/// block average.
std::vector<double> project_mass(const Partition& theta, const MassVector& m,
                                 std::span<const double> v);

/// sqrt(dt) A_theta w: the common increment of block k is
/// sqrt(dt) * sum_{i in k} sqrt(m_i) w_i / m_k.
std::vector<double> noise_map(const Partition& theta, const MassVector& m,
                              std::span<const double> w, double dt);

struct IsotonicResult {
  std::vector<double> y;
  Partition blocks;
};

/// Scratch buffers for the allocation-free projection used by the integrator.
struct IsotonicWorkspace {
  std::vector<std::size_t> pool_begin;
  std::vector<double> pool_mass;
  std::vector<double> pool_sum;
  std::vector<std::size_t> starts;
};

/// Projects y onto the ordered cone in place; `ws.starts` receives the
/// block starts of the merged partition (see weighted_isotonic_projection).
void isotonic_project_inplace(std::span<double> y, const MassVector& m, double tol,
                              IsotonicWorkspace& ws);

/// Minimizer of sum m_i (y_i - x_i)^2 over the ordered cone (pool adjacent
/// violators). The pooled blocks are further merged with partition_of(tol)
/// and merged blocks are set to their mass-weighted mean.
IsotonicResult weighted_isotonic_projection(std::span<const double> x, const MassVector& m,
                                            double tol = 1e-9);

/// Ordered particle positions with masses and the induced coalescence
/// partition.
struct ParticleState {
  std::vector<double> positions;
  MassVector masses;
  Partition partition;
  double time = 0.0;

  /// Validates ordering and recomputes the partition at the given tolerance.
  static ParticleState from_positions(std::vector<double> x, MassVector m, double tol,
                                      double time = 0.0);

  std::size_t size() const { return positions.size(); }
  /// The state as a monotone function of the mass coordinate.
  StepFunction as_step_function() const;
};

}  // namespace cfwd

#pragma once

// Monte-Carlo checks of the integration-by-parts identity, the martingale
// problems and the short-time (Varadhan) asymptotics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfwd/cylinder.hpp"
#include "cfwd/dynamics.hpp"
#include "cfwd/stats.hpp"
#include "cfwd/wasserstein.hpp"

namespace cfwd {

// ---------------------------------------------------------------------------
// Integration by parts

/// Per-stratum identity
///   Xi_n[<DU,DV> + L_0 U * V] + Xi_{n-1}[V * phi sum_j d_j u <h_j, xi - pr_g xi>] = 0
/// (no second term for n = 1), estimated from `samples` proposals on each
/// stratum inside B_radius. One report per (U, V) pair, z-scored against 0.
std::vector<StatReport> check_ibp_bank(int n,
                                       std::span<const std::pair<TestFunctionFC, TestFunctionFC>> pairs,
                                       const PiecewiseConstant& xi, double radius,
                                       std::size_t samples, std::uint64_t seed, unsigned threads,
                                       double threshold = 4.0);

StatReport check_ibp(int n, const TestFunctionFC& U, const TestFunctionFC& V,
                     const PiecewiseConstant& xi, double radius, std::size_t samples,
                     std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Martingale problems

/// Per-path values of a martingale check.
struct MartingalePath {
  double m_T = 0.0;           ///< terminal value of the martingale
  double qv_realized = 0.0;   ///< sum of squared increments
  double qv_predicted = 0.0;  ///< compensator of the quadratic variation
};

/// M^f_t = <mu_t, f> - <mu_0, f> - (1/2) int <|mu_s|, f''> ds, left-point rule.
class MartingaleF {
 public:
  explicit MartingaleF(ScalarFunction f) : f_(f) {}
  void start(const ParticleState& s);
  void observe(const ParticleState& next, double ds);
  const MartingalePath& path() const { return path_; }

 private:
  void local(const ParticleState& s);
  ScalarFunction f_;
  double pair_ = 0.0, support_ = 0.0, grad_sq_ = 0.0;
  MartingalePath path_;
};

/// <X_t, h> - (1/2) int <h - pr_{X_s} h, xi> ds with quadratic variation
/// int |pr_{X_s} h|^2 ds. Particle i occupies the i-th mass cell.
class MartingaleH {
 public:
  MartingaleH(const PiecewiseConstant& h, const PiecewiseConstant& xi, const MassVector& m);
  void start(const ParticleState& s);
  void observe(const ParticleState& next, double ds);
  const MartingalePath& path() const { return path_; }

 private:
  void local(const ParticleState& s);
  std::vector<double> hcell_, xicell_;
  double hxi_ = 0.0;
  double pair_ = 0.0, comp_ = 0.0, qv_ = 0.0;
  MartingalePath path_;
};

struct MartingaleCheck {
  StatReport drift;  ///< mean of M_T against 0
  StatReport qv;     ///< mean pathwise |QV_realized - QV_predicted| / QV_predicted
};

/// Summarizes per-path results; pass iff |z| <= threshold and the mean
/// relative QV error is at most qv_tolerance.
MartingaleCheck summarize_martingale(const std::string& name, std::span<const MartingalePath> paths,
                                     double threshold = 4.0, double qv_tolerance = 0.05);

/// Checks over recorded trajectories (record_every = 1 gives the exact scheme values).
MartingaleCheck check_martingale_f(std::span<const Trajectory> trajectories, const ScalarFunction& f);
MartingaleCheck check_martingale_h(std::span<const Trajectory> trajectories, const PiecewiseConstant& h,
                                   const PiecewiseConstant& xi);

struct EnsembleResult {
  /// paths_f[j][k]: function j, trajectory k.
  std::vector<std::vector<MartingalePath>> paths_f;
  std::vector<std::vector<MartingalePath>> paths_h;
  /// Realized quadratic variation of the centre of mass per trajectory.
  std::vector<double> com_qv;
};

/// Streams `count` trajectories (seeds derived from cfg.seed and the index)
/// without storing them.
EnsembleResult run_martingale_ensemble(const SimConfig& cfg, std::span<const ScalarFunction> fs,
                                       std::span<const PiecewiseConstant> hs, std::size_t count,
                                       unsigned threads);

// ---------------------------------------------------------------------------
// Mass of Xi_n on balls

/// One-sided check of Xi_n(B_r) against the closed-form upper bound: pass iff
/// the estimate exceeds the bound by at most `z_max` standard errors.
StatReport check_xi_bound(int n, double r, const PiecewiseConstant& xi, std::size_t samples,
                          std::uint64_t seed, double z_max = 2.5758);

/// xi with a single unit jump at 1/2: Xi_2(B_r) = pi r^2 / 4.
StatReport check_xi_jump_oracle(double r, std::size_t samples, std::uint64_t seed, double threshold = 3.0);

// ---------------------------------------------------------------------------
// Short-time asymptotics

struct L2Ball {
  PiecewiseConstant center;
  double radius = 0.1;
};

struct VaradhanSetup {
  MassVector masses;
  std::vector<double> varsigma;
  /// A must be centred at a constant function; the start law is the
  /// normalized restriction of Xi to A.
  L2Ball A;
  L2Ball B;
  std::size_t steps_per_path = 64;
  double merge_tol = 1e-9;
  /// Lower bound on the standard deviation of the guided driving noise; the
  /// guide shrinks it like a Brownian bridge towards the end of each path.
  double min_noise_scale = 0.1;
};

struct VaradhanPoint {
  double t = 0.0;
  double t_log_p = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  std::size_t hits = 0;
};

struct VaradhanResult {
  std::vector<VaradhanPoint> points;
  /// Extrapolated limit of t log P_t (fit c0 + c1 t + c2 t log t when at
  /// least three times are given, else the value at the smallest t).
  double limit = 0.0;
  double target = 0.0;  ///< -d(A,B)^2 / 2
  double rel_error = 0.0;
  StatReport report;
};

/// d(A,B) for two balls: max(0, |c_A - c_B| - r_A - r_B).
double ball_distance(const L2Ball& A, const L2Ball& B);

/// Exact t log P_t for one particle (standard Brownian motion) started
/// uniformly on [0, eps] and hitting [1, 1 + eps] at time t.
double varadhan_gaussian_oracle(double eps, double t);

/// Importance-sampled estimates of t log P_t(A,B) with guided noise; pass iff
/// the relative error of the limit is at most rel_tol.
VaradhanResult varadhan_exponent(const VaradhanSetup& setup, std::span<const double> t_list,
                                 std::size_t paths, std::uint64_t seed, unsigned threads,
                                 double rel_tol);

}  // namespace cfwd

#pragma once

// Euler-Maruyama integration of the coalescing-fragmenting particle system
// dX = P_X dB + (1/2)(s - P_X s) dt, Var B_i(t) = t / m_i, followed by the
// weighted isotonic projection back onto the ordered cone.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfwd/monotone.hpp"
#include "cfwd/random.hpp"
#include "cfwd/wasserstein.hpp"

namespace cfwd {

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  MassVector masses;
  /// Interaction potentials s_1 <= ... <= s_n (one per particle).
  std::vector<double> varsigma;
  double dt = 1e-4;
  double T = 1.0;
  double merge_tol = 1e-9;
  std::uint64_t seed = 1;
  std::size_t record_every = 1;
  /// Ordered initial positions; empty means all particles at 0.
  std::vector<double> initial;
  /// Test functions f whose pairings <mu_t, f> are recorded.
  std::vector<ScalarFunction> observables;

  std::size_t n() const { return masses.size(); }
  void validate() const;
};

/// s_i = xi at the midpoint of the i-th mass cell.
std::vector<double> varsigma_from_xi(const PiecewiseConstant& xi, const MassVector& m);

/// The step function with value s_i on the i-th mass cell: the potential the
/// n-particle system realizes.
PiecewiseConstant xi_on_mass_grid(std::span<const double> varsigma, const MassVector& m);

/// (1/2)(s - P_theta s) for the state's partition.
std::vector<double> drift(const ParticleState& state, std::span<const double> varsigma);

ParticleState initial_state(const SimConfig& cfg);

/// Number of steps: ceil(T / dt).
std::size_t step_count(const SimConfig& cfg);

/// Allocation-free integrator for one configuration.
class Stepper {
 public:
  explicit Stepper(const SimConfig& cfg);

  void advance(ParticleState& state, Rng& rng);

  /// Advance with the given driving normals (one per particle) instead of
  /// fresh N(0, 1) draws; used for importance sampling.
  void advance_with(ParticleState& state, std::span<const double> w);

  double dt() const { return dt_; }

 private:
  void move(ParticleState& state);
  void finish(ParticleState& state);

  MassVector m_;
  std::vector<double> sigma_;
  std::vector<double> sqrt_m_;
  double dt_;
  double sqrt_dt_;
  double tol_;
  std::vector<double> w_;
  IsotonicWorkspace ws_;
  std::size_t steps_ = 0;
};

/// One step as a pure function of the state.
ParticleState step(const ParticleState& state, double dt, Rng& rng, const SimConfig& cfg);

AtomicMeasure empirical_measure(const ParticleState& state);
double center_of_mass(const ParticleState& state);
/// Interior block boundaries in mass coordinates.
std::vector<double> block_boundaries(const ParticleState& state);

struct Trajectory {
  std::vector<double> times;
  std::vector<ParticleState> states;
  std::vector<std::size_t> atom_count;
  std::vector<double> center_of_mass;
  std::vector<std::string> observable_names;
  /// pairings[k][j] = <mu_{t_k}, f_j>.
  std::vector<std::vector<double>> pairings;
  std::vector<std::vector<double>> boundaries;
};

/// Runs ceil(T/dt) steps, recording every `record_every` steps (and t = 0).
Trajectory simulate(const SimConfig& cfg);

}  // namespace cfwd

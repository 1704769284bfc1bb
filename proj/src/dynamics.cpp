#include "cfwd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfwd {

void SimConfig::validate() const {
  const auto n = masses.size();
  if (varsigma.size() != n) throw ValidationError("varsigma must have one entry per particle");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(varsigma[i])) throw ValidationError("non-finite varsigma");
    if (i > 0 && varsigma[i] < varsigma[i - 1]) throw ValidationError("varsigma must be non-decreasing");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
  if (!(merge_tol > 0.0)) throw ValidationError("merge_tol must be positive");
  if (record_every == 0) throw ValidationError("record_every must be at least 1");
  if (!initial.empty()) {
    if (initial.size() != n) throw ValidationError("initial positions must have one entry per particle");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(initial[i])) throw ValidationError("non-finite initial position");
      if (i > 0 && initial[i] < initial[i - 1]) throw ValidationError("initial positions must be ordered");
    }
  }
}

std::vector<double> varsigma_from_xi(const PiecewiseConstant& xi, const MassVector& m) {
  const auto u = m.cumulative();
  std::vector<double> s(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) s[i] = xi(0.5 * (u[i] + u[i + 1]));
  return s;
}

PiecewiseConstant xi_on_mass_grid(std::span<const double> varsigma, const MassVector& m) {
  if (varsigma.size() != m.size()) throw ValidationError("dimension mismatch in xi_on_mass_grid");
  const auto u = m.cumulative();
  return PiecewiseConstant(std::vector<double>(u.begin() + 1, u.end() - 1),
                           std::vector<double>(varsigma.begin(), varsigma.end()));
}

std::vector<double> drift(const ParticleState& state, std::span<const double> varsigma) {
  if (varsigma.size() != state.size()) throw ValidationError("dimension mismatch in drift");
  const auto avg = project_mass(state.partition, state.masses, varsigma);
  std::vector<double> b(varsigma.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.5 * (varsigma[i] - avg[i]);
  return b;
}

ParticleState initial_state(const SimConfig& cfg) {
  auto x = cfg.initial.empty() ? std::vector<double>(cfg.n(), 0.0) : cfg.initial;
  return ParticleState::from_positions(std::move(x), cfg.masses, cfg.merge_tol, 0.0);
}

std::size_t step_count(const SimConfig& cfg) {
  const double ratio = cfg.T / cfg.dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

Stepper::Stepper(const SimConfig& cfg)
    : m_(cfg.masses),
      sigma_(cfg.varsigma),
      dt_(cfg.dt),
      sqrt_dt_(std::sqrt(cfg.dt)),
      tol_(cfg.merge_tol),
      w_(cfg.n()) {
  cfg.validate();
  sqrt_m_.resize(m_.size());
  for (std::size_t i = 0; i < m_.size(); ++i) sqrt_m_[i] = std::sqrt(m_[i]);
}

void Stepper::advance(ParticleState& state, Rng& rng) {
  for (auto& w : w_) w = rng.normal();
  move(state);
}

void Stepper::advance_with(ParticleState& state, std::span<const double> w) {
  if (w.size() != w_.size()) throw ValidationError("driving noise has the wrong dimension");
  std::copy(w.begin(), w.end(), w_.begin());
  move(state);
}

void Stepper::move(ParticleState& state) {
  const auto& th = state.partition;
  auto& x = state.positions;
  for (std::size_t k = 0; k < th.block_count(); ++k) {
    const auto b = th.block_begin(k), e = th.block_end(k);
    double mass = 0.0, sm = 0.0, acc = 0.0;
    for (auto i = b; i < e; ++i) {
      mass += m_[i];
      sm += m_[i] * sigma_[i];
      acc += sqrt_m_[i] * w_[i];
    }
    const double inc = sqrt_dt_ * acc / mass;
    const double sbar = e - b == 1 ? sigma_[b] : sm / mass;
    for (auto i = b; i < e; ++i) x[i] += 0.5 * (sigma_[i] - sbar) * dt_ + inc;
  }
  finish(state);
}

void Stepper::finish(ParticleState& state) {
  ++steps_;
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    if (!std::isfinite(state.positions[i])) {
      std::ostringstream os;
      os << "integration failure: particle " << i + 1 << " is non-finite after step " << steps_
         << " (t = " << state.time + dt_ << ", dt = " << dt_ << ")";
      throw IntegrationError(os.str());
    }
  }
  isotonic_project_inplace(state.positions, m_, tol_, ws_);
  state.partition = Partition(ws_.starts, state.positions.size());
  state.time += dt_;
}

ParticleState step(const ParticleState& state, double dt, Rng& rng, const SimConfig& cfg) {
  SimConfig local = cfg;
  local.dt = dt;
  Stepper stepper(local);
  ParticleState next = state;
  stepper.advance(next, rng);
  return next;
}

AtomicMeasure empirical_measure(const ParticleState& state) {
  std::vector<double> pos, mass;
  const auto& th = state.partition;
  for (std::size_t k = 0; k < th.block_count(); ++k) {
    double bm = 0.0;
    for (auto i = th.block_begin(k); i < th.block_end(k); ++i) bm += state.masses[i];
    pos.push_back(state.positions[th.block_begin(k)]);
    mass.push_back(bm);
  }
  return AtomicMeasure(std::move(pos), std::move(mass));
}

double center_of_mass(const ParticleState& state) {
  double c = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) c += state.masses[i] * state.positions[i];
  return c;
}

std::vector<double> block_boundaries(const ParticleState& state) {
  const auto u = state.masses.cumulative();
  std::vector<double> out;
  for (std::size_t k = 1; k < state.partition.block_count(); ++k)
    out.push_back(u[state.partition.block_begin(k)]);
  return out;
}

namespace {

void record(Trajectory& tr, const ParticleState& s, const SimConfig& cfg) {
  tr.times.push_back(s.time);
  tr.states.push_back(s);
  tr.atom_count.push_back(s.partition.block_count());
  tr.center_of_mass.push_back(center_of_mass(s));
  const auto mu = empirical_measure(s);
  std::vector<double> p;
  p.reserve(cfg.observables.size());
  for (const auto& f : cfg.observables) p.push_back(pair_observable(mu, f));
  tr.pairings.push_back(std::move(p));
  tr.boundaries.push_back(block_boundaries(s));
}

}  // namespace

Trajectory simulate(const SimConfig& cfg) {
  cfg.validate();
  Trajectory tr;
  for (const auto& f : cfg.observables) tr.observable_names.push_back(f.name());
  Stepper stepper(cfg);
  Rng rng(cfg.seed);
  auto state = initial_state(cfg);
  record(tr, state, cfg);
  const auto steps = step_count(cfg);
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.advance(state, rng);
    state.time = static_cast<double>(k) * cfg.dt;
    if (k % cfg.record_every == 0) record(tr, state, cfg);
  }
  return tr;
}

}  // namespace cfwd

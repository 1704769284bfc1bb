#pragma once

// Hand-rolled random generators for the property tests.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "cfwd/cylinder.hpp"
#include "cfwd/monotone.hpp"
#include "cfwd/wasserstein.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline double uniform(Engine& e, double a, double b) { return std::uniform_real_distribution<double>(a, b)(e); }
inline std::size_t index(Engine& e, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(e);
}

/// Positive masses summing to one, bounded away from zero.
inline cfwd::MassVector masses(Engine& e, std::size_t n) {
  std::vector<double> m(n);
  double total = 0.0;
  for (auto& v : m) total += v = uniform(e, 0.2, 1.0);
  for (auto& v : m) v /= total;
  return cfwd::MassVector(m);
}

/// Sorted distinct breakpoints in (0,1), separated by at least `gap`.
inline std::vector<double> breakpoints(Engine& e, std::size_t count, double gap = 1e-3) {
  for (;;) {
    std::vector<double> q(count);
    for (auto& v : q) v = uniform(e, gap, 1.0 - gap);
    std::sort(q.begin(), q.end());
    bool ok = true;
    for (std::size_t i = 1; i < q.size(); ++i) ok = ok && q[i] - q[i - 1] > gap;
    if (ok) return q;
  }
}

/// Arbitrary piecewise-constant function with `pieces` cells.
inline cfwd::PiecewiseConstant step(Engine& e, std::size_t pieces, double lo = -1.0, double hi = 1.0) {
  auto q = breakpoints(e, pieces - 1);
  std::vector<double> v(pieces);
  for (auto& x : v) x = uniform(e, lo, hi);
  return cfwd::PiecewiseConstant(q, v);
}

/// Strictly increasing values on `pieces` cells.
inline std::vector<double> increasing(Engine& e, std::size_t count, double lo = -1.0, double hi = 1.0) {
  for (;;) {
    std::vector<double> v(count);
    for (auto& x : v) x = uniform(e, lo, hi);
    std::sort(v.begin(), v.end());
    bool ok = true;
    for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i] - v[i - 1] > 1e-3;
    if (ok) return v;
  }
}

inline cfwd::StepFunction monotone_step(Engine& e, std::size_t pieces, double lo = -1.0, double hi = 1.0) {
  return cfwd::make_step_function(breakpoints(e, pieces - 1), increasing(e, pieces, lo, hi));
}

/// Atomic measure whose masses are multiples of 1/D.
inline cfwd::AtomicMeasure commensurable(Engine& e, int D, std::size_t max_atoms) {
  const std::size_t atoms = index(e, 1, std::min<std::size_t>(max_atoms, static_cast<std::size_t>(D)));
  std::vector<int> cuts;
  while (cuts.size() + 1 < atoms) {
    const int c = static_cast<int>(index(e, 1, static_cast<std::size_t>(D - 1)));
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(D);
  std::vector<double> mass;
  for (std::size_t i = 1; i < cuts.size(); ++i) mass.push_back(static_cast<double>(cuts[i] - cuts[i - 1]) / D);
  return cfwd::AtomicMeasure(increasing(e, atoms, -2.0, 2.0), mass);
}

/// Random cylinder function with 1 to 3 directions and a cutoff support in [1, 2.25].
inline cfwd::TestFunctionFC cylinder(Engine& e) {
  cfwd::TestFunctionFC U;
  U.label = "random";
  const std::size_t m = index(e, 1, 3);
  for (std::size_t j = 0; j < m; ++j) {
    U.u.scale.push_back(uniform(e, 0.5, 2.0));
    U.h.push_back(step(e, index(e, 1, 6)));
  }
  const std::size_t terms = index(e, 1, 4);
  for (std::size_t k = 0; k < terms; ++k) {
    cfwd::OuterFunction::Term t;
    t.coef = uniform(e, -1.0, 1.0);
    int total = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const int p = static_cast<int>(index(e, 0, static_cast<std::size_t>(3 - total)));
      t.power.push_back(p);
      total += p;
    }
    U.u.terms.push_back(std::move(t));
  }
  U.phi.support = uniform(e, 1.0, 2.25);
  return U;
}

/// Monotone step function with |g|^2 < fraction * bound.
inline cfwd::StepFunction inside(Engine& e, std::size_t pieces, double bound, double fraction = 0.8) {
  for (;;) {
    auto g = monotone_step(e, pieces, -1.5, 1.5);
    if (cfwd::norm_sq(g) < fraction * bound) return g;
  }
}

}  // namespace gen

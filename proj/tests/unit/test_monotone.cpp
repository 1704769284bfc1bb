#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <numeric>

#include "cfwd/monotone.hpp"
#include "cfwd/random.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfwd;

namespace {

// Exact integral of f * g from the union of breakpoints, written independently
// of the library sweep.
double oracle_inner(const PiecewiseConstant& f, const PiecewiseConstant& g) {
  std::vector<double> cuts{0.0, 1.0};
  for (double q : f.breakpoints()) cuts.push_back(q);
  for (double q : g.breakpoints()) cuts.push_back(q);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = cuts[i - 1], b = cuts[i];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b);
    acc += f(mid) * g(mid) * (b - a);
  }
  return acc;
}

}  // namespace

TEST_CASE("piecewise constant functions are right-continuous and merge equal neighbours") {
  const PiecewiseConstant f({0.25, 0.5, 0.75}, {1.0, 2.0, 2.0, -1.0});
  CHECK(f.pieces() == 3);
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.25) == 2.0);
  CHECK(f(0.7499) == 2.0);
  CHECK(f(0.75) == -1.0);
  CHECK(f(1.0) == -1.0);
  CHECK(f.integral() == doctest::Approx(0.25 + 1.0 - 0.25));
  CHECK(f.integral(0.2, 0.6) == doctest::Approx(0.05 + 0.7));
  CHECK(f.integral(0.6, 0.2) == doctest::Approx(-(0.05 + 0.7)));
}

TEST_CASE("invalid piecewise constant data is rejected") {
  CHECK_THROWS_AS(PiecewiseConstant({0.5, 0.4}, {0, 1, 2}), ValidationError);
  CHECK_THROWS_AS(PiecewiseConstant({0.0}, {0, 1}), ValidationError);
  CHECK_THROWS_AS(PiecewiseConstant({1.0}, {0, 1}), ValidationError);
  CHECK_THROWS_AS(PiecewiseConstant({0.5}, {0}), ValidationError);
  CHECK_THROWS_AS(PiecewiseConstant({0.5}, {0, std::nan("")}), ValidationError);
  CHECK_THROWS_AS(make_step_function({0.5}, {1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(MassVector({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(MassVector({1.5, -0.5}), ValidationError);
}

TEST_CASE("make_step_function merges equal values into one step") {
  const auto g = make_step_function({0.3, 0.6}, {0.0, 0.0, 1.0});
  CHECK(g.distinct_values() == 2);
  CHECK(g.breakpoints()[0] == doctest::Approx(0.6));
}

TEST_CASE("inner products and norms agree with the union-of-breakpoints oracle") {
  gen::Engine e(11);
  for (int rep = 0; rep < 300; ++rep) {
    const auto f = gen::step(e, gen::index(e, 1, 9));
    const auto g = gen::step(e, gen::index(e, 1, 9));
    CHECK(inner(f, g) == doctest::Approx(oracle_inner(f, g)).epsilon(1e-12));
    CHECK(norm_sq(f) == doctest::Approx(oracle_inner(f, f)).epsilon(1e-12));
    CHECK(norm_p(f, 2.0) == doctest::Approx(std::sqrt(norm_sq(f))).epsilon(1e-12));
    const auto d = f - g;
    CHECK(norm_sq(d) == doctest::Approx(norm_sq(f) - 2 * inner(f, g) + norm_sq(g)).epsilon(1e-9).scale(1.0));
    const auto s = 2.5 * f + g;
    CHECK(inner(s, g) == doctest::Approx(2.5 * inner(f, g) + norm_sq(g)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("projection onto sigma(g): measurability, idempotence, self-adjointness and contraction") {
  gen::Engine e(12);
  for (int rep = 0; rep < 300; ++rep) {
    const auto g = gen::monotone_step(e, gen::index(e, 1, 6));
    const auto h = gen::step(e, gen::index(e, 1, 8));
    const auto k = gen::step(e, gen::index(e, 1, 8));
    const auto ph = pr_step(g, h);
    CHECK(is_xi_measurable(ph, g));
    const auto pph = pr_step(g, ph);
    for (double u = 0.005; u < 1.0; u += 0.01) CHECK(pph(u) == doctest::Approx(ph(u)).epsilon(1e-12));
    CHECK(inner(ph, k) == doctest::Approx(inner(h, pr_step(g, k))).epsilon(1e-10).scale(1.0));
    for (double q : {1.0, 2.0, 4.0}) CHECK(norm_p(ph, q) <= norm_p(h, q) * (1 + 1e-12) + 1e-15);
    const auto pg = pr_step(g, g);
    for (double u = 0.005; u < 1.0; u += 0.01) CHECK(pg(u) == doctest::Approx(g(u)).epsilon(1e-12));
    const auto p1 = pr_step(g, PiecewiseConstant::constant(1.0));
    CHECK(p1.pieces() == 1);
    CHECK(p1(0.3) == doctest::Approx(1.0));
  }
}

TEST_CASE("projection of an indicator is the cell-average step function") {
  const auto g = make_step_function({0.5}, {0.0, 1.0});
  const PiecewiseConstant h({0.25}, {1.0, 0.0});
  const auto ph = pr_step(g, h);
  CHECK(ph(0.1) == doctest::Approx(0.5));
  CHECK(ph(0.7) == doctest::Approx(0.0));
}

TEST_CASE("xi-measurability is breakpoint inclusion") {
  const PiecewiseConstant xi({0.25, 0.5, 0.75}, {0, 1, 2, 3});
  CHECK(is_xi_measurable(PiecewiseConstant({0.5}, {-1, 1}), xi));
  CHECK(is_xi_measurable(PiecewiseConstant::constant(4.0), xi));
  CHECK_FALSE(is_xi_measurable(PiecewiseConstant({0.4}, {-1, 1}), xi));
}

TEST_CASE("discretize samples a function at cell midpoints") {
  const auto d = discretize([](double u) { return u * u; }, 4);
  CHECK(d.pieces() == 4);
  CHECK(d(0.1) == doctest::Approx(0.125 * 0.125));
  CHECK(d(0.9) == doctest::Approx(0.875 * 0.875));
  // O(1/K) error of the integral for a Lipschitz function
  const auto fine = discretize([](double u) { return u * u; }, 1000);
  CHECK(fine.integral() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("partitions print as ordered blocks and detect chained ties") {
  const std::size_t sizes[] = {2, 1};
  CHECK(Partition::from_sizes(sizes).to_string() == "({1,2},{3})");
  CHECK(Partition::singletons(3).block_count() == 3);
  CHECK(Partition::single_block(4).block_count() == 1);
  const double x[] = {0.0, 0.6e-9, 1.2e-9, 1.0};
  const auto th = partition_of(x, 1e-9);
  CHECK(th.to_string() == "({1,2,3},{4})");
  const double bad[] = {1.0, 0.0};
  CHECK_THROWS_AS(partition_of(bad, 1e-9), ValidationError);
  CHECK_THROWS_AS(Partition({1}, 3), ValidationError);
}

TEST_CASE("mass projection averages blocks and preserves block mass") {
  gen::Engine e(13);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = gen::index(e, 1, 9);
    const auto m = gen::masses(e, n);
    std::vector<std::size_t> sizes;
    for (std::size_t left = n; left > 0;) {
      const auto s = gen::index(e, 1, left);
      sizes.push_back(s);
      left -= s;
    }
    const auto th = Partition::from_sizes(sizes);
    std::vector<double> v(n);
    for (auto& x : v) x = gen::uniform(e, -1, 1);
    const auto p = project_mass(th, m, v);
    for (std::size_t k = 0; k < th.block_count(); ++k) {
      double lhs = 0.0;
      for (auto i = th.block_begin(k); i < th.block_end(k); ++i) {
        lhs += m[i] * (v[i] - p[i]);
        CHECK(p[i] == p[th.block_begin(k)]);
      }
      CHECK(std::abs(lhs) < 1e-14);
    }
  }
}

TEST_CASE("noise map: common increment within blocks with variance dt / m_block") {
  const MassVector m({0.1, 0.3, 0.6});
  const std::size_t sizes[] = {1, 2};
  const auto th = Partition::from_sizes(sizes);
  Rng rng(5);
  const double dt = 0.01;
  const int N = 200000;
  double s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < N; ++k) {
    const double w[] = {rng.normal(), rng.normal(), rng.normal()};
    const auto inc = noise_map(th, m, w, dt);
    CHECK(inc[1] == inc[2]);
    s0 += inc[0] * inc[0];
    s1 += inc[1] * inc[1];
  }
  // relative standard error of a variance estimate is sqrt(2/N) ~ 0.3%
  CHECK(s0 / N == doctest::Approx(dt / 0.1).epsilon(0.013));
  CHECK(s1 / N == doctest::Approx(dt / 0.9).epsilon(0.013));
}

TEST_CASE("weighted isotonic projection matches exhaustive contiguous pooling") {
  gen::Engine e(14);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = gen::index(e, 1, 12);
    const auto m = gen::masses(e, n);
    std::vector<double> x(n);
    for (auto& v : x) v = gen::uniform(e, -1, 1);
    const auto got = weighted_isotonic_projection(x, m, 0.0);
    const auto want = oracle::isotonic(x, m);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got.y[i] - want[i]) <= 1e-10);
  }
}

TEST_CASE("isotonic projection properties") {
  gen::Engine e(15);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = gen::index(e, 1, 20);
    const auto m = gen::masses(e, n);
    std::vector<double> x(n);
    for (auto& v : x) v = gen::uniform(e, -1, 1);
    const auto r = weighted_isotonic_projection(x, m);
    for (std::size_t i = 1; i < n; ++i) CHECK(r.y[i] >= r.y[i - 1]);
    double before = 0.0, after = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      before += m[i] * x[i];
      after += m[i] * r.y[i];
    }
    CHECK(after == doctest::Approx(before).epsilon(1e-12).scale(1.0));
    const auto again = weighted_isotonic_projection(r.y, m);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(again.y[i] - r.y[i]) <= 1e-14);
    CHECK(again.blocks == r.blocks);
    CHECK(partition_of(r.y, 1e-9) == r.blocks);
  }
}

TEST_CASE("isotonic projection examples") {
  const double x[] = {1.0, 0.0};
  const auto r = weighted_isotonic_projection(x, MassVector::uniform(2));
  CHECK(r.y[0] == doctest::Approx(0.5));
  CHECK(r.y[1] == doctest::Approx(0.5));
  CHECK(r.blocks.block_count() == 1);
  const double y[] = {0.0, 3.0, 1.0};
  const auto s = weighted_isotonic_projection(y, MassVector({0.5, 0.25, 0.25}));
  CHECK(s.y[0] == 0.0);
  CHECK(s.y[1] == doctest::Approx(2.0));
  CHECK(s.blocks.to_string() == "({1},{2,3})");
  const double ordered[] = {-1.0, 0.0, 2.0};
  const auto t = weighted_isotonic_projection(ordered, MassVector::uniform(3));
  CHECK(t.y == std::vector<double>{-1.0, 0.0, 2.0});
}

TEST_CASE("particle states validate input and snap tied blocks") {
  const MassVector m = MassVector::uniform(3);
  CHECK_THROWS_AS(ParticleState::from_positions({0.0, 1.0}, m, 1e-9), ValidationError);
  CHECK_THROWS_AS(ParticleState::from_positions({1.0, 0.0, 2.0}, m, 1e-9), ValidationError);
  CHECK_THROWS_AS(ParticleState::from_positions({0.0, std::nan(""), 2.0}, m, 1e-9), ValidationError);
  const auto s = ParticleState::from_positions({0.0, 1e-10, 2.0}, m, 1e-9);
  CHECK(s.partition.to_string() == "({1,2},{3})");
  CHECK(s.positions[0] == s.positions[1]);
  const auto g = s.as_step_function();
  CHECK(g.distinct_values() == 2);
  CHECK(g.breakpoints()[0] == doctest::Approx(2.0 / 3.0));
}

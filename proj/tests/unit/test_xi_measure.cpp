#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include "cfwd/xi_measure.hpp"
#include "generators.hpp"

using namespace cfwd;

namespace {

// Total mass of mu_xi^n by enumerating every increasing tuple of jump points.
double brute_mass(int n, const PiecewiseConstant& xi, std::map<std::vector<double>, double>* tuples = nullptr) {
  const auto q = xi.breakpoints();
  const auto v = xi.values();
  double total = 0.0;
  std::vector<double> pick;
  std::function<void(std::size_t, double)> rec = [&](std::size_t from, double height) {
    if (static_cast<int>(pick.size()) == n - 1) {
      const double w = height * mu_xi_density(pick);
      total += w;
      if (tuples) (*tuples)[pick] += w;
      return;
    }
    for (std::size_t j = from; j < q.size(); ++j) {
      pick.push_back(q[j]);
      rec(j + 1, height * (v[j + 1] - v[j]));
      pick.pop_back();
    }
  };
  rec(0, 1.0);
  return total;
}

}  // namespace

TEST_CASE("mu_xi density and c_theta examples") {
  CHECK(mu_xi_density(std::vector<double>{}) == 1.0);
  CHECK(mu_xi_density(std::vector<double>{0.5}) == doctest::Approx(0.25));
  CHECK(mu_xi_density(std::vector<double>{0.25, 0.5}) == doctest::Approx(0.25 * 0.25 * 0.5));
  CHECK_THROWS_AS(mu_xi_density(std::vector<double>{0.5, 0.5}), ValidationError);

  const MassVector m = MassVector::uniform(2);
  const double s[] = {0.0, 1.0};
  CHECK(c_theta(Partition::single_block(2), m, s) == doctest::Approx(1.0));
  CHECK(c_theta(Partition::singletons(2), m, s) == doctest::Approx(0.25));
  const double flat[] = {0.0, 0.0};
  CHECK_THROWS_AS(c_theta(Partition::singletons(2), m, flat), ValidationError);
}

TEST_CASE("ball bound formula") {
  const auto id = xi_identity();
  CHECK(xi_n_ball_bound(1, 1.5, id) == doctest::Approx(3.0));
  CHECK(xi_n_ball_bound(2, 1.0, PiecewiseConstant({0.5}, {0, 1})) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("breakpoint mass matches enumeration of jump tuples") {
  gen::Engine e(21);
  for (int rep = 0; rep < 60; ++rep) {
    const auto xi = gen::monotone_step(e, gen::index(e, 2, 7), 0.0, 3.0);
    for (int n = 1; n <= 4; ++n) {
      if (static_cast<std::size_t>(n) > xi.pieces()) {
        CHECK_THROWS_AS(XiStratumSampler(n, 1.0, xi), NullStratum);
        continue;
      }
      XiStratumSampler s(n, 1.0, xi);
      CHECK(s.breakpoint_mass() == doctest::Approx(brute_mass(n, xi)).epsilon(1e-11));
    }
  }
}

TEST_CASE("breakpoint tuples are drawn with probability proportional to their weight") {
  const PiecewiseConstant xi({0.2, 0.45, 0.7, 0.9}, {0.0, 0.5, 0.7, 1.6, 2.0});
  for (int n : {2, 3}) {
    std::map<std::vector<double>, double> weights;
    const double Z = brute_mass(n, xi, &weights);
    XiStratumSampler s(n, 1.0, xi);
    Rng rng(100 + n);
    const int N = 200000;
    std::map<std::vector<double>, int> counts;
    for (int i = 0; i < N; ++i) ++counts[s.sample_breakpoints(rng)];
    for (const auto& [tuple, w] : weights) {
      const double p = w / Z;
      const double se = std::sqrt(p * (1 - p) / N);
      CHECK(std::abs(counts[tuple] / static_cast<double>(N) - p) <= 4.5 * se);
    }
    for (const auto& [tuple, c] : counts) CHECK(weights.count(tuple) == 1);
  }
}

TEST_CASE("stratum one has mass exactly 2r") {
  Rng rng(1);
  for (double r : {0.5, 1.0, 2.0}) {
    const auto est = estimate_xi_n_mass(1, r, xi_identity(), 5000, rng);
    CHECK(est.estimate == doctest::Approx(2.0 * r).epsilon(1e-12));
    CHECK(est.std_error == 0.0);
  }
}

TEST_CASE("single jump: Xi_2(B_r) = (pi/2) r^2 h sqrt(q(1-q))") {
  for (double q : {0.5, 0.3}) {
    const double h = 1.7;
    const PiecewiseConstant xi({q}, {0.0, h});
    for (double r : {0.5, 1.0, 2.0}) {
      Rng rng(static_cast<std::uint64_t>(1000 * q + 10 * r));
      const auto est = estimate_xi_n_mass(2, r, xi, 200000, rng);
      const double exact = 0.5 * std::numbers::pi * r * r * h * std::sqrt(q * (1 - q));
      CHECK(std::abs(est.estimate - exact) <= 4.0 * est.std_error);
      CHECK(est.estimate <= xi_n_ball_bound(2, r, xi) + 4.0 * est.std_error);
    }
  }
}

TEST_CASE("two equally spaced jumps: Xi_3(B_r) from the symmetric ordered cone") {
  // Cells of length 1/3: the ellipsoid is a ball of radius r sqrt(3) and the
  // ordered cone holds 1/6 of it.
  const double h1 = 0.4, h2 = 1.1;
  const PiecewiseConstant xi({1.0 / 3.0, 2.0 / 3.0}, {0.0, h1, h1 + h2});
  const double r = 0.8;
  const double ball = 4.0 / 3.0 * std::numbers::pi * std::pow(r * std::sqrt(3.0), 3);
  const double exact = h1 * h2 / 27.0 * ball / 6.0;
  Rng rng(77);
  const auto est = estimate_xi_n_mass(3, r, xi, 400000, rng);
  CHECK(std::abs(est.estimate - exact) <= 4.0 * est.std_error);
}

TEST_CASE("null strata and validation") {
  Rng rng(2);
  const auto c = PiecewiseConstant::constant(1.0);
  CHECK(estimate_xi_n_mass(2, 1.0, c, 1000, rng).estimate == 0.0);
  CHECK_THROWS_AS(sample_xi_n_ball(2, 1.0, c, rng), NullStratum);
  CHECK_THROWS_AS(XiStratumSampler(0, 1.0, xi_identity()), ValidationError);
  CHECK_THROWS_AS(XiStratumSampler(kMaxStratum + 1, 1.0, xi_identity()), ValidationError);
  CHECK_THROWS_AS(XiStratumSampler(1, 0.0, xi_identity()), ValidationError);
  CHECK_THROWS_AS(XiStratumSampler(1, 1.0, PiecewiseConstant({0.5}, {1.0, 0.0})), ValidationError);
  CHECK_THROWS_AS(estimate_xi_n_mass(1, 1.0, xi_identity(), 10, rng), ValidationError);
}

TEST_CASE("accepted samples are ordered, inside the ball and carry positive weight") {
  const auto xi = xi_identity(64);
  for (int n = 1; n <= 4; ++n) {
    XiStratumSampler s(n, 1.0, xi);
    Rng rng(static_cast<std::uint64_t>(n));
    for (int i = 0; i < 200; ++i) {
      const auto w = s.sample(rng);
      CHECK(w.g.distinct_values() == static_cast<std::size_t>(n));
      CHECK(norm_sq(w.g) <= 1.0 + 1e-12);
      CHECK(w.weight > 0.0);
      CHECK(is_xi_measurable(w.g, xi));
    }
    CHECK(s.acceptance_rate() > 0.0);
  }
}

TEST_CASE("an exhausted rejection budget throws") {
  XiStratumSampler s(4, 1.0, xi_identity(64));
  Rng rng(3);
  CHECK_THROWS_AS(s.sample(rng, 0), RejectionBudgetExhausted);
}

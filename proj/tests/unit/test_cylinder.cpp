#include <doctest.h>

#include <cmath>

#include "cfwd/cylinder.hpp"
#include "cfwd/xi_measure.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfwd;

namespace {

TestFunctionFC pure_cutoff(double S) {
  return TestFunctionFC{"phi", OuterFunction{{1.0}, {{1.0, {0}}}}, {PiecewiseConstant::constant(1.0)}, Cutoff{S}};
}

}  // namespace

TEST_CASE("cutoff derivatives agree with central differences and vanish outside the support") {
  for (double S : {1.0, 2.25}) {
    const Cutoff phi{S};
    for (double s = -0.95 * S; s < 0.95 * S; s += 0.07 * S) {
      double f, f1, f2;
      phi.derivatives(s, f, f1, f2);
      const double h = 1e-5 * S;
      CHECK(f == doctest::Approx(phi.value(s)));
      CHECK(f1 == doctest::Approx((phi.value(s + h) - phi.value(s - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
      double g, g1p, g1m, g2;
      phi.derivatives(s + h, g, g1p, g2);
      phi.derivatives(s - h, g, g1m, g2);
      CHECK(f2 == doctest::Approx((g1p - g1m) / (2 * h)).epsilon(1e-6).scale(1.0));
    }
    CHECK(phi.value(S) == 0.0);
    CHECK(phi.value(1.5 * S) == 0.0);
    CHECK(phi.value(0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("outer function derivatives agree with central differences") {
  gen::Engine e(41);
  for (int rep = 0; rep < 100; ++rep) {
    const auto U = gen::cylinder(e);
    const std::size_t m = U.m();
    std::vector<double> y(m), du(m), d2u(m * m), dup(m), dum(m), tmp(m * m);
    for (auto& v : y) v = gen::uniform(e, -1.5, 1.5);
    double u;
    U.u.derivatives(y, u, du, d2u);
    CHECK(u == doctest::Approx(U.u.value(y)));
    const double h = 1e-5;
    for (std::size_t j = 0; j < m; ++j) {
      auto yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      CHECK(du[j] == doctest::Approx((U.u.value(yp) - U.u.value(ym)) / (2 * h)).epsilon(1e-6).scale(1.0));
      double up, um;
      U.u.derivatives(yp, up, dup, tmp);
      U.u.derivatives(ym, um, dum, tmp);
      for (std::size_t i = 0; i < m; ++i)
        CHECK(d2u[i * m + j] == doctest::Approx((dup[i] - dum[i]) / (2 * h)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("gradient of a pure cutoff is 2 phi' g and L0 is 4 phi'' |g|^2 + 2 phi' #g") {
  const auto U = pure_cutoff(2.0);
  const auto g = make_step_function({0.3, 0.7}, {-0.5, 0.2, 0.6});
  const double s = norm_sq(g);
  double f, f1, f2;
  U.phi.derivatives(s, f, f1, f2);
  const auto D = grad_D(U, g);
  for (double u : {0.1, 0.5, 0.9}) CHECK(D(u) == doctest::Approx(2.0 * f1 * g(u)));
  CHECK(l0(U, g) == doctest::Approx(4.0 * f2 * s + 2.0 * f1 * 3.0));
}

TEST_CASE("DU(g) is sigma(g)-measurable") {
  gen::Engine e(42);
  for (int rep = 0; rep < 200; ++rep) {
    const auto U = gen::cylinder(e);
    const auto g = gen::inside(e, gen::index(e, 1, 6), U.phi.support);
    CHECK(is_xi_measurable(grad_D(U, g), g));
  }
}

TEST_CASE("on a stratum the gradient is the chart gradient divided by the cell length") {
  gen::Engine e(43);
  for (int rep = 0; rep < 100; ++rep) {
    const auto U = gen::cylinder(e);
    const std::size_t n = gen::index(e, 1, 5);
    const auto g = gen::inside(e, n, U.phi.support);
    const std::vector<double> q(g.breakpoints().begin(), g.breakpoints().end());
    std::vector<double> x(g.values().begin(), g.values().end());
    const auto D = grad_D(U, g);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (oracle::chart(U, q, xp) - oracle::chart(U, q, xm)) / (2 * h) / g.cell_length(i);
      CHECK(D.values()[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("directional derivatives along pr_g f match central differences") {
  gen::Engine e(44);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto U = gen::cylinder(e);
    const auto g = gen::inside(e, gen::index(e, 1, 6), U.phi.support);
    const auto f = gen::step(e, gen::index(e, 1, 8));
    worst = std::max(worst, oracle::gradient_error(U, g, f));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("L0 agrees with the chart Laplacian weighted by inverse cell lengths") {
  gen::Engine e(45);
  for (int rep = 0; rep < 200; ++rep) {
    const auto U = gen::cylinder(e);
    const auto g = gen::inside(e, gen::index(e, 1, 5), U.phi.support);
    const std::vector<double> q(g.breakpoints().begin(), g.breakpoints().end());
    const std::vector<double> x(g.values().begin(), g.values().end());
    const double closed = l0(U, g);
    const double chart = oracle::l0_chart(U, q, x);
    CHECK(std::abs(closed - chart) <= 1e-4 * std::max(1.0, std::abs(chart)));
  }
}

TEST_CASE("the evaluator agrees with the convenience wrappers and merges equal cells") {
  gen::Engine e(46);
  const auto xi = xi_identity(64);
  for (int rep = 0; rep < 50; ++rep) {
    const auto U = gen::cylinder(e);
    const auto g = gen::inside(e, gen::index(e, 1, 5), U.phi.support);
    FcEvaluator ev(U, xi);
    FcPoint p;
    ev.evaluate(g, p);
    CHECK(p.value == doctest::Approx(U(g)));
    CHECK(p.l0 == doctest::Approx(l0(U, g)));
    CHECK(2.0 * generator_L(U, g, xi) == doctest::Approx(p.l0 + p.xi_term));
    // the same function given with a split cell
    std::vector<double> edges{0.0}, vals;
    for (std::size_t c = 0; c < g.pieces(); ++c) {
      const double mid = 0.5 * (g.cell_left(c) + g.cell_right(c));
      edges.insert(edges.end(), {mid, g.cell_right(c)});
      vals.insert(vals.end(), {g.values()[c], g.values()[c]});
    }
    FcPoint split;
    ev.evaluate(edges, vals, split);
    CHECK(split.grad.size() == g.pieces());
    CHECK(split.l0 == doctest::Approx(p.l0));
    CHECK(split.xi_term == doctest::Approx(p.xi_term));
  }
}

TEST_CASE("the drift term vanishes when xi is a function of g") {
  gen::Engine e(47);
  for (int rep = 0; rep < 50; ++rep) {
    const auto U = gen::cylinder(e);
    const auto g = gen::inside(e, gen::index(e, 1, 5), U.phi.support);
    const std::vector<double> q(g.breakpoints().begin(), g.breakpoints().end());
    std::vector<double> v(g.pieces());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * i);
    const PiecewiseConstant xi(q, v);
    FcEvaluator ev(U, xi);
    FcPoint p;
    ev.evaluate(g, p);
    CHECK(std::abs(p.xi_term) < 1e-12);
  }
}

TEST_CASE("two particles: L equals the finite-dimensional generator through the chart") {
  const PiecewiseConstant xi({0.5}, {0.0, 1.0});
  gen::Engine e(48);
  for (int rep = 0; rep < 100; ++rep) {
    const auto U = gen::cylinder(e);
    const double bound = std::sqrt(0.6 * U.phi.support);
    const double a = gen::uniform(e, -bound, bound), b = gen::uniform(e, -bound, bound);
    const double x1 = std::min(a, b), x2 = std::max(a, b);
    const auto split = make_step_function({0.5}, {x1, x2});
    const double want = oracle::generator_two_particles(U, x1, x2);
    CHECK(std::abs(generator_L(U, split, xi) - want) <= 1e-4 * std::max(1.0, std::abs(want)));
    const auto merged = PiecewiseConstant::constant(a);
    const double want_merged = oracle::generator_two_particles(U, a, a);
    CHECK(std::abs(generator_L(U, merged, xi) - want_merged) <= 1e-4 * std::max(1.0, std::abs(want_merged)));
  }
}

TEST_CASE("bank functions live in the ball of radius 1.5 and validate") {
  const auto bank = fc_bank();
  CHECK(bank.size() == 10);
  for (const auto& [U, V] : bank) {
    CHECK(U.phi.support <= kFcBankRadius * kFcBankRadius);
    CHECK(V.phi.support <= kFcBankRadius * kFcBankRadius);
    CHECK_NOTHROW(FcEvaluator{U});
    CHECK_NOTHROW(FcEvaluator{V});
  }
  TestFunctionFC bad = pure_cutoff(1.0);
  bad.u.scale.push_back(1.0);
  CHECK_THROWS_AS(FcEvaluator{bad}, ValidationError);
}

#include "cfwd/cylinder.hpp"

#include <cmath>

namespace cfwd {

double Cutoff::value(double s) const {
  const double t = s / support;
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

void Cutoff::derivatives(double s, double& f, double& f1, double& f2) const {
  const double S = support;
  const double t = s / S;
  if (std::abs(t) >= 1.0) {
    f = f1 = f2 = 0.0;
    return;
  }
  const double w = 1.0 - t * t;
  f = std::exp(1.0 - 1.0 / w);
  const double k = -2.0 * t / (S * w * w);
  const double dk = -2.0 / (S * S * w * w) - 8.0 * t * t / (S * S * w * w * w);
  f1 = f * k;
  f2 = f * (k * k + dk);
}

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double OuterFunction::value(std::span<const double> y) const {
  double u = 0.0;
  for (const auto& term : terms) {
    double t = term.coef;
    for (std::size_t j = 0; j < dim(); ++j) t *= ipow(std::tanh(scale[j] * y[j]), term.power[j]);
    u += t;
  }
  return u;
}

void OuterFunction::derivatives(std::span<const double> y, double& u, std::span<double> du,
                                std::span<double> d2u) const {
  const std::size_t m = dim();
  double sig[3], sig1[3], sig2[3];
  double p1[3] = {0, 0, 0}, p2[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t j = 0; j < m; ++j) {
    sig[j] = std::tanh(scale[j] * y[j]);
    sig1[j] = scale[j] * (1.0 - sig[j] * sig[j]);
    sig2[j] = -2.0 * scale[j] * scale[j] * sig[j] * (1.0 - sig[j] * sig[j]);
  }
  double p = 0.0;
  for (const auto& term : terms) {
    const auto& e = term.power;
    double full = term.coef;
    for (std::size_t j = 0; j < m; ++j) full *= ipow(sig[j], e[j]);
    p += full;
    for (std::size_t i = 0; i < m; ++i) {
      if (e[i] == 0) continue;
      double di = term.coef * e[i] * ipow(sig[i], e[i] - 1);
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) di *= ipow(sig[j], e[j]);
      p1[i] += di;
      for (std::size_t j = 0; j < m; ++j) {
        double dij = term.coef;
        if (i == j) {
          if (e[i] < 2) continue;
          dij *= e[i] * (e[i] - 1) * ipow(sig[i], e[i] - 2);
          for (std::size_t k = 0; k < m; ++k)
            if (k != i) dij *= ipow(sig[k], e[k]);
        } else {
          if (e[j] == 0) continue;
          dij *= e[i] * ipow(sig[i], e[i] - 1) * e[j] * ipow(sig[j], e[j] - 1);
          for (std::size_t k = 0; k < m; ++k)
            if (k != i && k != j) dij *= ipow(sig[k], e[k]);
        }
        p2[i * m + j] += dij;
      }
    }
  }
  u = p;
  for (std::size_t i = 0; i < m; ++i) {
    du[i] = p1[i] * sig1[i];
    for (std::size_t j = 0; j < m; ++j) {
      d2u[i * m + j] = p2[i * m + j] * sig1[i] * sig1[j] + (i == j ? p1[i] * sig2[i] : 0.0);
    }
  }
}

double TestFunctionFC::operator()(const PiecewiseConstant& g) const {
  std::vector<double> y(m());
  for (std::size_t j = 0; j < m(); ++j) y[j] = inner(g, h[j]);
  return u.value(y) * phi.value(norm_sq(g));
}

FcEvaluator::FcEvaluator(const TestFunctionFC& U) : U_(&U) {
  if (U.u.dim() != U.m() || U.m() == 0 || U.m() > 3)
    throw ValidationError("cylinder function needs 1 to 3 directions matching its outer function");
  for (const auto& t : U.u.terms)
    if (t.power.size() != U.m()) throw ValidationError("term arity does not match the directions");
  y_.resize(U.m());
  du_.resize(U.m());
  d2u_.resize(U.m() * U.m());
}

FcEvaluator::FcEvaluator(const TestFunctionFC& U, const PiecewiseConstant& xi) : FcEvaluator(U) {
  xi_ = &xi;
  h_xi_.resize(U.m());
  for (std::size_t j = 0; j < U.m(); ++j) h_xi_[j] = inner(U.h[j], xi);
}

void FcEvaluator::evaluate(const PiecewiseConstant& g, FcPoint& out) {
  edges_.assign(g.pieces() + 1, 0.0);
  for (std::size_t c = 0; c < g.pieces(); ++c) edges_[c + 1] = g.cell_right(c);
  const std::vector<double> e = edges_;
  evaluate(e, g.values(), out);
}

void FcEvaluator::evaluate(std::span<const double> edges_in, std::span<const double> vals_in,
                           FcPoint& out) {
  // Merge adjacent cells with equal values so that cells are exactly the
  // constancy intervals of g.
  auto& vals = vals_;
  vals.clear();
  edges_.clear();
  edges_.push_back(0.0);
  for (std::size_t c = 0; c < vals_in.size(); ++c) {
    if (c > 0 && vals_in[c] == vals.back()) {
      edges_.back() = edges_in[c + 1];
    } else {
      vals.push_back(vals_in[c]);
      edges_.push_back(edges_in[c + 1]);
    }
  }
  const std::size_t C = vals.size();
  const std::size_t m = U_->m();
  const auto& U = *U_;

  out.grad.assign(C, 0.0);
  double s = 0.0;
  for (std::size_t c = 0; c < C; ++c) s += vals[c] * vals[c] * (edges_[c + 1] - edges_[c]);
  double f, f1, f2;
  U.phi.derivatives(s, f, f1, f2);
  if (f == 0.0 && f1 == 0.0 && f2 == 0.0) {
    out.value = out.l0 = out.xi_term = 0.0;
    return;
  }

  avg_.assign(m * C, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double y = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      const double a = edges_[c], b = edges_[c + 1];
      const double H = U.h[j].integral(a, b);
      avg_[j * C + c] = H / (b - a);
      y += vals[c] * H;
    }
    y_[j] = y;
  }
  double u;
  U.u.derivatives(y_, u, du_, d2u_);

  out.value = u * f;
  for (std::size_t c = 0; c < C; ++c) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += du_[j] * avg_[j * C + c];
    out.grad[c] = f * acc + 2.0 * u * f1 * vals[c];
  }

  double second = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double prij = 0.0;
      for (std::size_t c = 0; c < C; ++c)
        prij += avg_[i * C + c] * avg_[j * C + c] * (edges_[c + 1] - edges_[c]);
      second += d2u_[i * m + j] * prij;
    }
  }
  double mixed = 0.0;
  for (std::size_t j = 0; j < m; ++j) mixed += du_[j] * y_[j];  // <pr_g h_j, g> = <h_j, g>
  out.l0 = f * second + u * (4.0 * f2 * s + 2.0 * f1 * static_cast<double>(C)) + 4.0 * f1 * mixed;

  out.xi_term = 0.0;
  if (xi_ != nullptr) {
    xi_cell_.resize(C);
    for (std::size_t c = 0; c < C; ++c) xi_cell_[c] = xi_->integral(edges_[c], edges_[c + 1]);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double proj = 0.0;
      for (std::size_t c = 0; c < C; ++c) proj += avg_[j * C + c] * xi_cell_[c];
      acc += du_[j] * (h_xi_[j] - proj);
    }
    out.xi_term = f * acc;
  }
}

PiecewiseConstant grad_D(const TestFunctionFC& U, const PiecewiseConstant& g) {
  FcEvaluator ev(U);
  FcPoint p;
  ev.evaluate(g, p);
  return PiecewiseConstant({g.breakpoints().begin(), g.breakpoints().end()}, p.grad);
}

double l0(const TestFunctionFC& U, const PiecewiseConstant& g) {
  FcEvaluator ev(U);
  FcPoint p;
  ev.evaluate(g, p);
  return p.l0;
}

double generator_L(const TestFunctionFC& U, const PiecewiseConstant& g, const PiecewiseConstant& xi) {
  FcEvaluator ev(U, xi);
  FcPoint p;
  ev.evaluate(g, p);
  return 0.5 * (p.l0 + p.xi_term);
}

namespace {

PiecewiseConstant eighths(std::initializer_list<double> v) {
  return PiecewiseConstant::from_grid(std::vector<double>(v));
}

OuterFunction outer(std::vector<double> scale, std::vector<OuterFunction::Term> terms) {
  return OuterFunction{std::move(scale), std::move(terms)};
}

}  // namespace

std::vector<std::pair<TestFunctionFC, TestFunctionFC>> fc_bank() {
  const auto one = PiecewiseConstant::constant(1.0);
  const auto ramp = eighths({-0.4375, -0.3125, -0.1875, -0.0625, 0.0625, 0.1875, 0.3125, 0.4375});
  const auto middle = eighths({0, 0, 1, 1, 1, 1, 0, 0});
  const auto zigzag = eighths({1, -1, 1, -1, 1, -1, 1, -1});
  const auto upper = eighths({0, 0, 0, 0, 1, 1, 1, 1});
  const auto lopsided = eighths({1, 1, 1, -0.5, -0.5, -0.5, -0.5, -0.5});
  const auto tilt = eighths({2, 1.5, 1, 0.5, 0, -0.5, -1, -1.5});

  using T = OuterFunction::Term;
  auto fc = [](std::string label, OuterFunction u, std::vector<PiecewiseConstant> h, double S) {
    return TestFunctionFC{std::move(label), std::move(u), std::move(h), Cutoff{S}};
  };

  std::vector<std::pair<TestFunctionFC, TestFunctionFC>> bank;
  // 1: pure cutoffs
  bank.emplace_back(fc("U1", outer({1.0}, {T{1.0, {0}}}), {one}, 1.0),
                    fc("V1", outer({1.0}, {T{1.0, {0}}}), {one}, 2.0));
  // 2: mean direction against the cutoff
  bank.emplace_back(fc("U2", outer({1.5}, {T{1.0, {1}}}), {one}, 2.25),
                    fc("V2", outer({1.0}, {T{0.5, {0}}, T{1.0, {2}}}), {one}, 1.5));
  // 3: ramp direction, cubic
  bank.emplace_back(fc("U3", outer({2.0}, {T{1.0, {1}}, T{-0.5, {3}}}), {ramp}, 2.0),
                    fc("V3", outer({1.0}, {T{1.0, {0}}, T{0.7, {1}}}), {one}, 1.8));
  // 4: indicator of the middle half
  bank.emplace_back(fc("U4", outer({1.0}, {T{1.0, {2}}, T{0.3, {1}}}), {middle}, 1.2),
                    fc("V4", outer({1.0}, {T{1.0, {1}}}), {upper}, 2.25));
  // 5: two directions
  bank.emplace_back(fc("U5", outer({1.0, 2.0}, {T{1.0, {1, 1}}, T{0.5, {0, 2}}}), {one, ramp}, 2.0),
                    fc("V5", outer({1.0}, {T{1.0, {0}}, T{-0.4, {2}}}), {middle}, 2.25));
  // 6: oscillating direction
  bank.emplace_back(fc("U6", outer({3.0}, {T{1.0, {1}}}), {zigzag}, 1.5),
                    fc("V6", outer({1.0, 1.0}, {T{1.0, {0, 0}}, T{0.5, {1, 1}}}), {one, zigzag}, 2.0));
  // 7: lopsided direction with a cubic
  bank.emplace_back(fc("U7", outer({1.2}, {T{0.8, {3}}, T{0.6, {1}}, T{0.2, {0}}}), {lopsided}, 2.25),
                    fc("V7", outer({1.0}, {T{1.0, {1}}}), {ramp}, 1.6));
  // 8: three directions
  bank.emplace_back(
      fc("U8", outer({1.0, 1.0, 1.5}, {T{1.0, {1, 0, 0}}, T{0.5, {0, 1, 1}}, T{0.3, {1, 1, 1}}}),
         {one, upper, tilt}, 2.0),
      fc("V8", outer({1.0}, {T{1.0, {0}}, T{0.5, {1}}}), {tilt}, 1.4));
  // 9: tilt against ramp
  bank.emplace_back(fc("U9", outer({0.8}, {T{1.0, {2}}, T{-1.0, {1}}}), {tilt}, 1.8),
                    fc("V9", outer({2.0}, {T{1.0, {1}}, T{0.5, {0}}}), {ramp}, 2.25));
  // 10: mixed second derivatives on both sides
  bank.emplace_back(
      fc("U10", outer({1.0, 1.5}, {T{1.0, {2, 1}}, T{0.4, {1, 0}}, T{0.2, {0, 0}}}), {middle, lopsided}, 2.25),
      fc("V10", outer({1.0, 1.0}, {T{1.0, {1, 2}}, T{0.6, {0, 0}}}), {upper, zigzag}, 1.9));
  return bank;
}

}  // namespace cfwd

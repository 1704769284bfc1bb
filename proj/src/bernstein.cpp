#include "cfwd/bernstein.hpp"

#include <algorithm>
#include <cmath>

#include "cfwd/monotone.hpp"

namespace cfwd {

BernsteinPolynomial::BernsteinPolynomial(const std::function<double(std::span<const double>)>& f,
                                         std::size_t k, std::size_t n)
    : k_(k), n_(n), bn_(k), bm_(k) {
  if (k == 0 || k > 4) throw ValidationError("Bernstein dimension must be in 1..4");
  if (n == 0) throw ValidationError("Bernstein degree must be positive");
  std::size_t total = 1;
  for (std::size_t d = 0; d < k; ++d) total *= n + 1;
  coef_.resize(total);
  std::vector<double> node(k);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t d = k; d-- > 0;) {
      node[d] = static_cast<double>(rest % (n + 1)) / static_cast<double>(n);
      rest /= n + 1;
    }
    coef_[idx] = f(node);
  }
}

// de Casteljau triangle run on unit coefficients: yields every basis value.
void BernsteinPolynomial::basis(double s, std::size_t degree, std::vector<double>& out) const {
  out.assign(degree + 1, 0.0);
  out[0] = 1.0;
  for (std::size_t level = 1; level <= degree; ++level) {
    for (std::size_t j = level; j > 0; --j) out[j] = (1.0 - s) * out[j] + s * out[j - 1];
    out[0] *= 1.0 - s;
  }
}

double BernsteinPolynomial::value(std::span<const double> s) const {
  if (s.size() != k_) throw ValidationError("Bernstein evaluation: dimension mismatch");
  for (std::size_t d = 0; d < k_; ++d) basis(s[d], n_, bn_[d]);
  double acc = 0.0;
  for (std::size_t idx = 0; idx < coef_.size(); ++idx) {
    double w = coef_[idx];
    std::size_t rest = idx;
    for (std::size_t d = k_; d-- > 0;) {
      w *= bn_[d][rest % (n_ + 1)];
      rest /= n_ + 1;
    }
    acc += w;
  }
  return acc;
}

double BernsteinPolynomial::gradient(std::span<const double> s, std::span<double> grad) const {
  if (s.size() != k_ || grad.size() != k_) throw ValidationError("Bernstein gradient: dimension mismatch");
  for (std::size_t d = 0; d < k_; ++d) {
    basis(s[d], n_, bn_[d]);
    basis(s[d], n_ - 1, bm_[d]);
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<std::size_t> index(k_);
  std::size_t stride_last = 1;
  std::vector<std::size_t> stride(k_);
  for (std::size_t d = k_; d-- > 0;) {
    stride[d] = stride_last;
    stride_last *= n_ + 1;
  }
  double acc = 0.0;
  for (std::size_t idx = 0; idx < coef_.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t d = k_; d-- > 0;) {
      index[d] = rest % (n_ + 1);
      rest /= n_ + 1;
    }
    double w = coef_[idx];
    for (std::size_t d = 0; d < k_; ++d) w *= bn_[d][index[d]];
    acc += w;
    for (std::size_t d = 0; d < k_; ++d) {
      if (index[d] == n_) continue;
      double v = coef_[idx + stride[d]] - coef_[idx];
      for (std::size_t e = 0; e < k_; ++e) v *= e == d ? bm_[e][index[e]] : bn_[e][index[e]];
      grad[d] += v;
    }
  }
  for (auto& g : grad) g *= static_cast<double>(n_);
  return acc;
}

ShiftedBernstein::ShiftedBernstein(const FieldFunction& f, double M, std::size_t n)
    : M_(M),
      b_(
          [&f, M](std::span<const double> s) {
            std::vector<double> x(s.size());
            for (std::size_t d = 0; d < s.size(); ++d) x[d] = 2.0 * M * s[d] - M;
            return f.f(x);
          },
          f.k, n) {
  if (!(M > 0.0)) throw ValidationError("M must be positive");
  const std::vector<double> half(f.k, 0.5);
  offset_ = b_.value(half);
}

double ShiftedBernstein::value(std::span<const double> x) const {
  std::vector<double> s(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) s[d] = x[d] / (2.0 * M_) + 0.5;
  return b_.value(s) - offset_;
}

double ShiftedBernstein::gradient(std::span<const double> x, std::span<double> grad) const {
  std::vector<double> s(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) s[d] = x[d] / (2.0 * M_) + 0.5;
  const double v = b_.gradient(s, grad);
  for (auto& g : grad) g /= 2.0 * M_;
  return v - offset_;
}

std::vector<ConvergenceRow> convergence_report(const FieldFunction& f, double M,
                                               std::span<const std::size_t> n_list, std::size_t grid) {
  if (grid < 2) throw ValidationError("grid needs at least two points per axis");
  std::size_t total = 1;
  for (std::size_t d = 0; d < f.k; ++d) total *= grid;
  std::vector<ConvergenceRow> rows;
  std::vector<double> x(f.k), gp(f.k), gf(f.k);
  const std::vector<double> origin(f.k, 0.0);
  for (std::size_t n : n_list) {
    const ShiftedBernstein P(f, M, n);
    ConvergenceRow row;
    row.n = n;
    row.at_origin = P.value(origin);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (std::size_t d = 0; d < f.k; ++d) {
        x[d] = -M + 2.0 * M * static_cast<double>(rest % grid) / static_cast<double>(grid - 1);
        rest /= grid;
      }
      const double v = P.gradient(x, gp);
      f.grad(x, gf);
      row.sup_error = std::max(row.sup_error, std::abs(v - f.f(x)));
      for (std::size_t d = 0; d < f.k; ++d) row.grad_sup_error = std::max(row.grad_sup_error, std::abs(gp[d] - gf[d]));
    }
    rows.push_back(row);
  }
  return rows;
}

bool strictly_decreasing(std::span<const ConvergenceRow> rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].sup_error < rows[i - 1].sup_error)) return false;
    if (!(rows[i].grad_sup_error < rows[i - 1].grad_sup_error)) return false;
  }
  return true;
}

std::vector<FieldFunction> bernstein_bank() {
  std::vector<FieldFunction> bank;
  bank.push_back({"x^2", 1, [](std::span<const double> x) { return x[0] * x[0]; },
                  [](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * x[0]; }});
  bank.push_back({"sin(2x)", 1, [](std::span<const double> x) { return std::sin(2.0 * x[0]); },
                  [](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * std::cos(2.0 * x[0]); }});
  bank.push_back({"exp(x)-1", 1, [](std::span<const double> x) { return std::expm1(x[0]); },
                  [](std::span<const double> x, std::span<double> g) { g[0] = std::exp(x[0]); }});
  bank.push_back({"x1*x2+sin(x1)", 2, [](std::span<const double> x) { return x[0] * x[1] + std::sin(x[0]); },
                  [](std::span<const double> x, std::span<double> g) {
                    g[0] = x[1] + std::cos(x[0]);
                    g[1] = x[0];
                  }});
  return bank;
}

}  // namespace cfwd

#pragma once

// Tensor Bernstein polynomials on [0,1]^k and the shifted variant
// P_n^M(f; x) = B_n(f_M; x/(2M) + 1/2) - B_n(f_M; 1/2) with f_M(s) = f(2Ms - M),
// which vanishes at the origin.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cfwd {

struct FieldFunction {
  std::string name;
  std::size_t k = 1;
  std::function<double(std::span<const double>)> f;
  std::function<void(std::span<const double>, std::span<double>)> grad;
};

class BernsteinPolynomial {
 public:
  /// Coefficients f(j_1/n, ..., j_k/n).
  BernsteinPolynomial(const std::function<double(std::span<const double>)>& f, std::size_t k, std::size_t n);

  std::size_t degree() const { return n_; }
  std::size_t dim() const { return k_; }

  double value(std::span<const double> s) const;
  /// Value and gradient at s in [0,1]^k.
  double gradient(std::span<const double> s, std::span<double> grad) const;

 private:
  void basis(double s, std::size_t degree, std::vector<double>& out) const;

  std::size_t k_, n_;
  std::vector<double> coef_;  // row-major, last index fastest
  mutable std::vector<std::vector<double>> bn_, bm_;
};

class ShiftedBernstein {
 public:
  ShiftedBernstein(const FieldFunction& f, double M, std::size_t n);

  double value(std::span<const double> x) const;
  double gradient(std::span<const double> x, std::span<double> grad) const;

 private:
  double M_;
  BernsteinPolynomial b_;
  double offset_;
};

struct ConvergenceRow {
  std::size_t n = 0;
  double sup_error = 0.0;
  double grad_sup_error = 0.0;  ///< max over partials
  double at_origin = 0.0;       ///< P_n^M(f; 0)
};

/// Sup-errors of P_n^M(f) and its partials on a uniform grid of [-M,M]^k with
/// `grid` points per axis.
std::vector<ConvergenceRow> convergence_report(const FieldFunction& f, double M,
                                               std::span<const std::size_t> n_list, std::size_t grid = 101);

/// True iff both error columns strictly decrease along the rows.
bool strictly_decreasing(std::span<const ConvergenceRow> rows);

/// x^2, sin(2x), e^x - 1 and x_1 x_2 + sin(x_1); all vanish at the origin.
std::vector<FieldFunction> bernstein_bank();

}  // namespace cfwd

#pragma once

// Cylinder test functions U(g) = u(<g,h_1>, ..., <g,h_m>) * phi(|g|^2) with
// closed-form derivatives, and the operators D, L_0 and L acting on them.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfwd/monotone.hpp"

namespace cfwd {

/// Smooth cutoff phi(s) = exp(1 - 1/(1 - (s/S)^2)) for |s| < S, else 0.
struct Cutoff {
  double support = 1.0;

  double value(double s) const;
  /// phi, phi', phi'' at s.
  void derivatives(double s, double& f, double& f1, double& f2) const;
};

/// u(y) = sum_k c_k prod_j tanh(a_j y_j)^{e_kj}: a polynomial of degree <= 3 in
/// squashed coordinates, so u and all its derivatives are bounded.
struct OuterFunction {
  struct Term {
    double coef = 0.0;
    std::vector<int> power;
  };
  std::vector<double> scale;
  std::vector<Term> terms;

  std::size_t dim() const { return scale.size(); }
  double value(std::span<const double> y) const;
  /// Value, gradient (size m) and Hessian (row-major m x m).
  void derivatives(std::span<const double> y, double& u, std::span<double> du,
                   std::span<double> d2u) const;
};

struct TestFunctionFC {
  std::string label;
  OuterFunction u;
  std::vector<PiecewiseConstant> h;
  Cutoff phi;

  std::size_t m() const { return h.size(); }
  double operator()(const PiecewiseConstant& g) const;
};

/// Everything the verification routines need about U at one step function.
struct FcPoint {
  double value = 0.0;
  /// D U(g) on each cell of g.
  std::vector<double> grad;
  double l0 = 0.0;
  /// phi * sum_j d_j u * <h_j, xi - pr_g xi> (zero when no xi is attached).
  double xi_term = 0.0;
};

/// Evaluates U and its derivatives on step functions given by raw cells.
/// Cell integrals of the h_j and of xi are exact.
class FcEvaluator {
 public:
  explicit FcEvaluator(const TestFunctionFC& U);
  FcEvaluator(const TestFunctionFC& U, const PiecewiseConstant& xi);
  // U and xi are held by reference
  FcEvaluator(TestFunctionFC&&) = delete;
  FcEvaluator(const TestFunctionFC&, PiecewiseConstant&&) = delete;

  /// Cells [edges[c], edges[c+1]) carrying values vals[c]; edges[0] = 0 and
  /// edges.back() = 1. The number of distinct values is counted over adjacent cells.
  void evaluate(std::span<const double> edges, std::span<const double> vals, FcPoint& out);
  void evaluate(const PiecewiseConstant& g, FcPoint& out);

  const TestFunctionFC& function() const { return *U_; }

 private:
  const TestFunctionFC* U_;
  const PiecewiseConstant* xi_ = nullptr;
  std::vector<double> h_xi_;  // <h_j, xi>
  // scratch
  std::vector<double> avg_;   // avg of h_j on cell c, [j * cells + c]
  std::vector<double> y_, du_, d2u_, xi_cell_;
  std::vector<double> edges_, vals_;
};

/// The projected gradient: a step function with the breakpoints of g.
PiecewiseConstant grad_D(const TestFunctionFC& U, const PiecewiseConstant& g);
double l0(const TestFunctionFC& U, const PiecewiseConstant& g);
/// (1/2) [L_0 U + phi sum_j d_j u <xi - pr_g xi, h_j>].
double generator_L(const TestFunctionFC& U, const PiecewiseConstant& g, const PiecewiseConstant& xi);

inline constexpr const char* kFcBankVersion = "bank v1";

/// The fixed list of ten (U, V) pairs. Every cutoff support is at most 2.25,
/// so all pairs live inside the ball of radius 1.5.
std::vector<std::pair<TestFunctionFC, TestFunctionFC>> fc_bank();

/// Radius whose ball contains the cutoff supports of every bank function.
inline constexpr double kFcBankRadius = 1.5;

}  // namespace cfwd

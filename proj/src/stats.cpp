#include "cfwd/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace cfwd {

StatReport z_report(std::string name, double estimate, double std_error, double target,
                    std::size_t samples, double threshold) {
  StatReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.std_error = std_error;
  r.target = target;
  r.samples = samples;
  r.threshold = threshold;
  const double diff = estimate - target;
  if (std_error > 0.0) {
    r.z = diff / std_error;
  } else {
    r.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  }
  r.pass = std::isfinite(r.z) && std::abs(r.z) <= threshold;
  return r;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

MeanSe mean_se(std::span<const double> v) {
  MeanSe out;
  out.count = v.size();
  if (v.empty()) return out;
  out.mean = pairwise_sum(v) / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - out.mean) * (v[i] - out.mean);
  const double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(v.size()));
  return out;
}

std::vector<double> least_squares(std::span<const double> design, std::size_t cols,
                                  std::span<const double> y) {
  const std::size_t rows = y.size();
  if (design.size() != rows * cols || rows < cols) throw std::invalid_argument("bad design matrix");
  // Normal equations with Gaussian elimination; the systems here are tiny.
  std::vector<double> a(cols * (cols + 1), 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = 0; j < cols; ++j)
        a[i * (cols + 1) + j] += design[r * cols + i] * design[r * cols + j];
      a[i * (cols + 1) + cols] += design[r * cols + i] * y[r];
    }
  }
  for (std::size_t p = 0; p < cols; ++p) {
    std::size_t best = p;
    for (std::size_t i = p + 1; i < cols; ++i)
      if (std::abs(a[i * (cols + 1) + p]) > std::abs(a[best * (cols + 1) + p])) best = i;
    for (std::size_t j = 0; j <= cols; ++j) std::swap(a[p * (cols + 1) + j], a[best * (cols + 1) + j]);
    const double piv = a[p * (cols + 1) + p];
    if (piv == 0.0) throw std::runtime_error("singular least-squares system");
    for (std::size_t i = 0; i < cols; ++i) {
      if (i == p) continue;
      const double f = a[i * (cols + 1) + p] / piv;
      for (std::size_t j = p; j <= cols; ++j) a[i * (cols + 1) + j] -= f * a[p * (cols + 1) + j];
    }
  }
  std::vector<double> beta(cols);
  for (std::size_t i = 0; i < cols; ++i) beta[i] = a[i * (cols + 1) + cols] / a[i * (cols + 1) + i];
  return beta;
}

}  // namespace cfwd

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cfwd {

/// Outcome of one statistical check.
struct StatReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double z = 0.0;
  std::size_t samples = 0;
  double threshold = 4.0;
  bool pass = false;
  std::string note;
};

/// Builds a z-test report: pass iff |estimate - target| / std_error <= threshold.
StatReport z_report(std::string name, double estimate, double std_error, double target,
                    std::size_t samples, double threshold = 4.0);

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);

struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error of the mean.
MeanSe mean_se(std::span<const double> v);

/// Least squares fit of y on the columns of `design` (row-major, rows = y.size()).
std::vector<double> least_squares(std::span<const double> design, std::size_t cols,
                                  std::span<const double> y);

}  // namespace cfwd

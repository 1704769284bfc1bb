#include "cfwd/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cfwd {

namespace {

// Absolute slack used when matching breakpoints produced by different
// arithmetic paths (e.g. j/K computed twice).
constexpr double kBreakpointSlack = 1e-12;

void check_breakpoints(std::span<const double> q) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0 && q[i] < 1.0))
      throw ValidationError("breakpoint " + std::to_string(q[i]) + " outside (0,1)");
    if (i > 0 && !(q[i] > q[i - 1]))
      throw ValidationError("breakpoints must be strictly increasing");
  }
}

}  // namespace

PiecewiseConstant::PiecewiseConstant() : x_{0.0} { build_prefix(); }

PiecewiseConstant::PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    throw ValidationError("need exactly one more value than breakpoints");
  check_breakpoints(breakpoints);
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("non-finite value");

  q_.reserve(breakpoints.size());
  x_.reserve(values.size());
  x_.push_back(values[0]);
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] == x_.back()) continue;  // exact ties only
    q_.push_back(breakpoints[i - 1]);
    x_.push_back(values[i]);
  }
  build_prefix();
}

PiecewiseConstant PiecewiseConstant::constant(double c) { return PiecewiseConstant({}, {c}); }

PiecewiseConstant PiecewiseConstant::from_grid(std::vector<double> values) {
  if (values.empty()) throw ValidationError("empty grid");
  const auto k = values.size();
  std::vector<double> q(k - 1);
  for (std::size_t i = 1; i < k; ++i) q[i - 1] = static_cast<double>(i) / static_cast<double>(k);
  return PiecewiseConstant(std::move(q), std::move(values));
}

void PiecewiseConstant::build_prefix() {
  cum_.assign(x_.size() + 1, 0.0);
  for (std::size_t i = 0; i < x_.size(); ++i) cum_[i + 1] = cum_[i] + x_[i] * cell_length(i);
}

std::size_t PiecewiseConstant::cell_index(double u) const {
  return static_cast<std::size_t>(std::upper_bound(q_.begin(), q_.end(), u) - q_.begin());
}

double PiecewiseConstant::operator()(double u) const { return x_[cell_index(u)]; }

double PiecewiseConstant::integral(double a, double b) const {
  auto prim = [this](double u) {
    u = std::clamp(u, 0.0, 1.0);
    const auto i = cell_index(u);
    if (i >= x_.size()) return cum_.back();
    return cum_[i] + x_[i] * (u - cell_left(i));
  };
  return prim(b) - prim(a);
}

bool PiecewiseConstant::is_nondecreasing() const {
  return std::is_sorted(x_.begin(), x_.end());
}

StepFunction::StepFunction(PiecewiseConstant f) : PiecewiseConstant(std::move(f)) {
  const auto v = values();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ValidationError("step function values must be strictly increasing");
}

StepFunction make_step_function(std::vector<double> q, std::vector<double> x) {
  if (x.size() != q.size() + 1) throw ValidationError("|x| must equal |q| + 1");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] < x[i - 1]) throw ValidationError("values must be non-decreasing");
  return StepFunction(PiecewiseConstant(std::move(q), std::move(x)));
}

double inner(const PiecewiseConstant& f, const PiecewiseConstant& g) {
  const auto qf = f.breakpoints();
  const auto qg = g.breakpoints();
  const auto xf = f.values();
  const auto xg = g.values();
  std::size_t i = 0, j = 0;
  double left = 0.0, acc = 0.0;
  while (true) {
    const double rf = i < qf.size() ? qf[i] : 1.0;
    const double rg = j < qg.size() ? qg[j] : 1.0;
    const double right = std::min(rf, rg);
    acc += xf[i] * xg[j] * (right - left);
    if (right >= 1.0) break;
    left = right;
    if (rf == right) ++i;
    if (rg == right) ++j;
  }
  return acc;
}

double norm_sq(const PiecewiseConstant& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i) acc += f.values()[i] * f.values()[i] * f.cell_length(i);
  return acc;
}

double norm_p(const PiecewiseConstant& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.pieces(); ++i)
    acc += std::pow(std::abs(f.values()[i]), p) * f.cell_length(i);
  return std::pow(acc, 1.0 / p);
}

PiecewiseConstant linear_combination(std::span<const double> coeffs,
                                     std::span<const PiecewiseConstant* const> fs) {
  if (coeffs.size() != fs.size()) throw ValidationError("coefficient count mismatch");
  std::vector<double> grid;
  for (const auto* f : fs) grid.insert(grid.end(), f->breakpoints().begin(), f->breakpoints().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> vals(grid.size() + 1, 0.0);
  for (std::size_t c = 0; c <= grid.size(); ++c) {
    const double a = c == 0 ? 0.0 : grid[c - 1];
    const double b = c == grid.size() ? 1.0 : grid[c];
    const double mid = 0.5 * (a + b);
    double v = 0.0;
    for (std::size_t k = 0; k < fs.size(); ++k) v += coeffs[k] * (*fs[k])(mid);
    vals[c] = v;
  }
  return PiecewiseConstant(std::move(grid), std::move(vals));
}

PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  const double c[] = {1.0, 1.0};
  const PiecewiseConstant* f[] = {&a, &b};
  return linear_combination(c, f);
}

PiecewiseConstant operator-(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  const double c[] = {1.0, -1.0};
  const PiecewiseConstant* f[] = {&a, &b};
  return linear_combination(c, f);
}

PiecewiseConstant operator*(double s, const PiecewiseConstant& a) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x *= s;
  return PiecewiseConstant({a.breakpoints().begin(), a.breakpoints().end()}, std::move(v));
}

PiecewiseConstant pr_step(const PiecewiseConstant& g, const PiecewiseConstant& h) {
  std::vector<double> avg(g.pieces());
  for (std::size_t i = 0; i < g.pieces(); ++i) {
    const double a = g.cell_left(i), b = g.cell_right(i);
    avg[i] = h.integral(a, b) / (b - a);
  }
  return PiecewiseConstant({g.breakpoints().begin(), g.breakpoints().end()}, std::move(avg));
}

bool is_xi_measurable(const PiecewiseConstant& g, const PiecewiseConstant& xi) {
  // xi(a) = xi(b) for a < b exactly when a and b share a constancy cell of xi,
  // so every jump of g has to sit on a jump of xi.
  const auto qx = xi.breakpoints();
  for (double p : g.breakpoints()) {
    const auto it = std::lower_bound(qx.begin(), qx.end(), p - kBreakpointSlack);
    if (it == qx.end() || std::abs(*it - p) > kBreakpointSlack) return false;
  }
  return true;
}

MassVector::MassVector(std::vector<double> m) : m_(std::move(m)) {
  if (m_.empty()) throw ValidationError("mass vector must be non-empty");
  double s = 0.0;
  for (double v : m_) {
    if (!(v > 0.0)) throw ValidationError("masses must be positive");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ValidationError("masses must sum to 1");
}

MassVector MassVector::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("mass vector must be non-empty");
  return MassVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<double> MassVector::cumulative() const {
  std::vector<double> u(m_.size() + 1, 0.0);
  for (std::size_t i = 0; i < m_.size(); ++i) u[i + 1] = u[i] + m_[i];
  u.back() = 1.0;
  return u;
}

Partition::Partition(std::vector<std::size_t> starts, std::size_t n)
    : starts_(std::move(starts)), n_(n) {
  if (n_ == 0) throw ValidationError("partition of an empty index set");
  if (starts_.empty() || starts_.front() != 0) throw ValidationError("first block must start at 0");
  for (std::size_t k = 1; k < starts_.size(); ++k)
    if (!(starts_[k] > starts_[k - 1])) throw ValidationError("block starts must increase");
  if (starts_.back() >= n_) throw ValidationError("block start out of range");
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return Partition(std::move(s), n);
}

Partition Partition::single_block(std::size_t n) { return Partition({0}, n); }

Partition Partition::from_sizes(std::span<const std::size_t> sizes) {
  std::vector<std::size_t> s;
  std::size_t at = 0;
  for (auto z : sizes) {
    if (z == 0) throw ValidationError("empty block");
    s.push_back(at);
    at += z;
  }
  return Partition(std::move(s), at);
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < block_count(); ++k) {
    if (k) os << ',';
    os << '{';
    for (auto i = block_begin(k); i < block_end(k); ++i) {
      if (i != block_begin(k)) os << ',';
      os << i + 1;
    }
    os << '}';
  }
  os << ')';
  return os.str();
}

Partition partition_of(std::span<const double> x, double tol) {
  if (x.empty()) throw ValidationError("empty position vector");
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[i - 1]) throw ValidationError("positions must be ordered");
    if (x[i] - x[i - 1] > tol) starts.push_back(i);
  }
  return Partition(std::move(starts), x.size());
}

std::vector<double> project_mass(const Partition& theta, const MassVector& m,
                                 std::span<const double> v) {
  if (theta.size() != m.size() || v.size() != m.size())
    throw ValidationError("dimension mismatch in project_mass");
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < theta.block_count(); ++k) {
    double mass = 0.0, acc = 0.0;
    for (auto i = theta.block_begin(k); i < theta.block_end(k); ++i) {
      mass += m[i];
      acc += m[i] * v[i];
    }
    const auto b = theta.block_begin(k);
    const double avg = theta.block_end(k) - b == 1 ? v[b] : acc / mass;
    for (auto i = b; i < theta.block_end(k); ++i) out[i] = avg;
  }
  return out;
}

std::vector<double> noise_map(const Partition& theta, const MassVector& m,
                              std::span<const double> w, double dt) {
  if (theta.size() != m.size() || w.size() != m.size())
    throw ValidationError("dimension mismatch in noise_map");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  const double sdt = std::sqrt(dt);
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < theta.block_count(); ++k) {
    double mass = 0.0, acc = 0.0;
    for (auto i = theta.block_begin(k); i < theta.block_end(k); ++i) {
      mass += m[i];
      acc += std::sqrt(m[i]) * w[i];
    }
    const double inc = sdt * acc / mass;
    for (auto i = theta.block_begin(k); i < theta.block_end(k); ++i) out[i] = inc;
  }
  return out;
}

namespace {

// Sets every block of `theta` to its mass-weighted mean.
void snap_blocks(const Partition& theta, const MassVector& m, std::vector<double>& y) {
  for (std::size_t k = 0; k < theta.block_count(); ++k) {
    const auto b = theta.block_begin(k), e = theta.block_end(k);
    if (e - b < 2) continue;
    double mass = 0.0, acc = 0.0;
    for (auto i = b; i < e; ++i) {
      mass += m[i];
      acc += m[i] * y[i];
    }
    const double avg = acc / mass;
    for (auto i = b; i < e; ++i) y[i] = avg;
  }
}

}  // namespace

void isotonic_project_inplace(std::span<double> y, const MassVector& m, double tol,
                              IsotonicWorkspace& ws) {
  if (y.size() != m.size()) throw ValidationError("dimension mismatch in isotonic projection");
  auto& beg = ws.pool_begin;
  auto& mass = ws.pool_mass;
  auto& sum = ws.pool_sum;
  beg.clear();
  mass.clear();
  sum.clear();
  for (std::size_t i = 0; i < y.size(); ++i) {
    beg.push_back(i);
    mass.push_back(m[i]);
    sum.push_back(m[i] * y[i]);
    while (beg.size() > 1) {
      const auto t = beg.size() - 1;
      if (!(sum[t - 1] / mass[t - 1] > sum[t] / mass[t])) break;
      mass[t - 1] += mass[t];
      sum[t - 1] += sum[t];
      beg.pop_back();
      mass.pop_back();
      sum.pop_back();
    }
  }
  for (std::size_t k = 0; k < beg.size(); ++k) {
    const auto end = k + 1 == beg.size() ? y.size() : beg[k + 1];
    const double v = sum[k] / mass[k];
    for (auto i = beg[k]; i < end; ++i) y[i] = v;
  }
  // Rounding in the pooled means can leave a 1-ulp inversion between pools.
  for (std::size_t i = 1; i < y.size(); ++i) y[i] = std::max(y[i], y[i - 1]);

  // Chained tie detection, then snap merged blocks to their weighted mean.
  auto& starts = ws.starts;
  starts.clear();
  starts.push_back(0);
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] - y[i - 1] > tol) starts.push_back(i);
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const auto b = starts[k];
    const auto e = k + 1 == starts.size() ? y.size() : starts[k + 1];
    if (e - b < 2) continue;
    double bm = 0.0, acc = 0.0;
    for (auto i = b; i < e; ++i) {
      bm += m[i];
      acc += m[i] * y[i];
    }
    const double avg = acc / bm;
    for (auto i = b; i < e; ++i) y[i] = avg;
  }
}

IsotonicResult weighted_isotonic_projection(std::span<const double> x, const MassVector& m,
                                            double tol) {
  std::vector<double> y(x.begin(), x.end());
  IsotonicWorkspace ws;
  isotonic_project_inplace(y, m, tol, ws);
  Partition blocks(ws.starts, y.size());
  return {std::move(y), std::move(blocks)};
}

ParticleState ParticleState::from_positions(std::vector<double> x, MassVector m, double tol,
                                            double time) {
  if (x.size() != m.size()) throw ValidationError("positions and masses differ in length");
  for (double v : x)
    if (!std::isfinite(v)) throw ValidationError("non-finite position");
  auto theta = partition_of(x, tol);
  snap_blocks(theta, m, x);
  return ParticleState{std::move(x), std::move(m), std::move(theta), time};
}

StepFunction ParticleState::as_step_function() const {
  const auto u = masses.cumulative();
  std::vector<double> q(u.begin() + 1, u.end() - 1);
  return make_step_function(std::move(q), positions);
}

}  // namespace cfwd

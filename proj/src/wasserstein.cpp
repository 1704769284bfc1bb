#include "cfwd/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cfwd {

AtomicMeasure::AtomicMeasure(std::vector<double> positions, std::vector<double> masses)
    : pos_(std::move(positions)), mass_(std::move(masses)) {
  if (pos_.empty() || pos_.size() != mass_.size())
    throw ValidationError("atomic measure needs matching, non-empty positions and masses");
  double total = 0.0;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (!std::isfinite(pos_[i])) throw ValidationError("non-finite atom position");
    if (i > 0 && !(pos_[i] > pos_[i - 1])) throw ValidationError("atom positions must increase");
    if (!(mass_[i] > 0.0)) throw ValidationError("atom masses must be positive");
    total += mass_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("atom masses must sum to 1");
}

double AtomicMeasure::second_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < pos_.size(); ++i) s += mass_[i] * pos_[i] * pos_[i];
  return s;
}

AtomicMeasure iota(const PiecewiseConstant& g) {
  // Pieces with equal values were merged on construction; sort for the
  // non-monotone case and pool equal positions.
  std::vector<std::pair<double, double>> atoms;
  for (std::size_t i = 0; i < g.pieces(); ++i) atoms.emplace_back(g.values()[i], g.cell_length(i));
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> pos, mass;
  for (const auto& [x, m] : atoms) {
    if (!pos.empty() && pos.back() == x) {
      mass.back() += m;
    } else {
      pos.push_back(x);
      mass.push_back(m);
    }
  }
  return AtomicMeasure(std::move(pos), std::move(mass));
}

StepFunction iota_inv(const AtomicMeasure& mu) {
  std::vector<double> q;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < mu.atoms(); ++i) {
    acc += mu.masses()[i];
    q.push_back(acc);
  }
  return make_step_function(std::move(q), {mu.positions().begin(), mu.positions().end()});
}

double w2_quantile(const PiecewiseConstant& g1, const PiecewiseConstant& g2) {
  return std::sqrt(std::max(0.0, norm_sq(g1 - g2)));
}

int common_denominator(const AtomicMeasure& mu, int max_denominator) {
  for (int d = 1; d <= max_denominator; ++d) {
    bool ok = true;
    for (double m : mu.masses()) {
      const double k = m * d;
      if (std::abs(k - std::round(k)) > 1e-10 * d) {
        ok = false;
        break;
      }
    }
    if (ok) return d;
  }
  return 0;
}

namespace {

int joint_denominator(const AtomicMeasure& a, const AtomicMeasure& b, int max_denominator) {
  const int da = common_denominator(a, max_denominator);
  const int db = common_denominator(b, max_denominator);
  if (da == 0 || db == 0) throw ValidationError("masses are not commensurable within the limit");
  const int d = std::lcm(da, db);
  if (d > max_denominator) throw ValidationError("common denominator exceeds the limit");
  return d;
}

std::vector<double> unit_cells(const AtomicMeasure& mu, int d) {
  std::vector<double> cells;
  for (std::size_t i = 0; i < mu.atoms(); ++i) {
    const auto k = static_cast<int>(std::lround(mu.masses()[i] * d));
    cells.insert(cells.end(), static_cast<std::size_t>(k), mu.positions()[i]);
  }
  return cells;
}

}  // namespace

double w2_bruteforce(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int max_denominator) {
  const int d = joint_denominator(mu1, mu2, max_denominator);
  const auto a = unit_cells(mu1, d);
  const auto b = unit_cells(mu2, d);
  double cost = 0.0;
  for (int i = 0; i < d; ++i) cost += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(cost / d);
}

double w2_exhaustive(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int max_denominator) {
  const int d = joint_denominator(mu1, mu2, std::min(max_denominator, 9));
  const auto a = unit_cells(mu1, d);
  const auto b = unit_cells(mu2, d);
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double cost = 0.0;
    for (int i = 0; i < d; ++i) cost += (a[i] - b[perm[i]]) * (a[i] - b[perm[i]]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / d);
}

double ScalarFunction::value(double x) const {
  const double u = (x - c) / s;
  switch (kind) {
    case Kind::Constant: return a;
    case Kind::Linear: return a * x;
    case Kind::Quadratic: return a * (x - c) * (x - c);
    case Kind::Sine: return std::sin(a * x + c);
    case Kind::Bump: return std::exp(-0.5 * u * u);
    case Kind::SineBump: return std::sin(a * x) * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double ScalarFunction::d1(double x) const {
  const double u = (x - c) / s;
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Linear: return a;
    case Kind::Quadratic: return 2.0 * a * (x - c);
    case Kind::Sine: return a * std::cos(a * x + c);
    case Kind::Bump: return -u / s * std::exp(-0.5 * u * u);
    case Kind::SineBump: {
      const double b = std::exp(-0.5 * u * u);
      return a * std::cos(a * x) * b - std::sin(a * x) * u / s * b;
    }
  }
  return 0.0;
}

double ScalarFunction::d2(double x) const {
  const double u = (x - c) / s;
  switch (kind) {
    case Kind::Constant:
    case Kind::Linear: return 0.0;
    case Kind::Quadratic: return 2.0 * a;
    case Kind::Sine: return -a * a * std::sin(a * x + c);
    case Kind::Bump: return (u * u - 1.0) / (s * s) * std::exp(-0.5 * u * u);
    case Kind::SineBump: {
      const double b = std::exp(-0.5 * u * u);
      const double b1 = -u / s * b;
      const double b2 = (u * u - 1.0) / (s * s) * b;
      const double sn = std::sin(a * x), cs = std::cos(a * x);
      return -a * a * sn * b + 2.0 * a * cs * b1 + sn * b2;
    }
  }
  return 0.0;
}

std::string ScalarFunction::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Constant: os << "constant:" << a; break;
    case Kind::Linear: os << "linear:" << a; break;
    case Kind::Quadratic: os << "quadratic:" << a << ':' << c; break;
    case Kind::Sine: os << "sin:" << a << ':' << c; break;
    case Kind::Bump: os << "bump:" << c << ':' << s; break;
    case Kind::SineBump: os << "sinbump:" << a << ':' << c << ':' << s; break;
  }
  return os.str();
}

ScalarFunction ScalarFunction::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw ValidationError("empty test function name");
  std::vector<double> p;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(parts[i], &used));
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw ValidationError("bad parameter '" + parts[i] + "' in test function '" + spec + "'");
    }
  }
  auto arg = [&](std::size_t i, double def) { return i < p.size() ? p[i] : def; };
  ScalarFunction f;
  const auto& k = parts[0];
  std::size_t max_args = 0;
  if (k == "constant") {
    f.kind = Kind::Constant, f.a = arg(0, 1.0), max_args = 1;
  } else if (k == "linear") {
    f.kind = Kind::Linear, f.a = arg(0, 1.0), max_args = 1;
  } else if (k == "quadratic") {
    f.kind = Kind::Quadratic, f.a = arg(0, 1.0), f.c = arg(1, 0.0), max_args = 2;
  } else if (k == "sin") {
    f.kind = Kind::Sine, f.a = arg(0, 1.0), f.c = arg(1, 0.0), max_args = 2;
  } else if (k == "bump") {
    f.kind = Kind::Bump, f.c = arg(0, 0.0), f.s = arg(1, 1.0), max_args = 2;
  } else if (k == "sinbump") {
    f.kind = Kind::SineBump, f.a = arg(0, 1.0), f.c = arg(1, 0.0), f.s = arg(2, 1.0), max_args = 3;
  } else {
    throw ValidationError("unknown test function '" + k + "'");
  }
  if (p.size() > max_args) throw ValidationError("too many parameters in '" + spec + "'");
  if (!(f.s > 0.0)) throw ValidationError("bump width must be positive");
  return f;
}

std::vector<ScalarFunction> scalar_bank() {
  return {ScalarFunction::parse("linear:1"), ScalarFunction::parse("quadratic:1:0"),
          ScalarFunction::parse("sin:2:0"), ScalarFunction::parse("bump:0.5:0.5"),
          ScalarFunction::parse("sinbump:3:0:1")};
}

double pair_observable(const AtomicMeasure& mu, const ScalarFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.atoms(); ++i) s += mu.masses()[i] * f.value(mu.positions()[i]);
  return s;
}

double pair_support(const AtomicMeasure& mu, const ScalarFunction& f) {
  double s = 0.0;
  for (double x : mu.positions()) s += f.d2(x);
  return s;
}

}  // namespace cfwd

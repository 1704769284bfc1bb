#include "cfwd/xi_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cfwd/stats.hpp"

namespace cfwd {

void XiSpec::validate() const {
  if (!xi.is_nondecreasing()) throw ValidationError("xi must be non-decreasing");
  if (max_n < 1) throw ValidationError("max_n must be at least 1");
  if (!(radius > 0.0)) throw ValidationError("radius must be positive");
}

PiecewiseConstant xi_identity(std::size_t resolution) {
  if (resolution == 0) throw ValidationError("resolution must be positive");
  std::vector<double> v(resolution);
  for (std::size_t j = 0; j < resolution; ++j)
    v[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(resolution);
  return PiecewiseConstant::from_grid(std::move(v));
}

double c_theta(const Partition& theta, const MassVector& m, std::span<const double> varsigma) {
  if (theta.size() != m.size() || varsigma.size() != m.size())
    throw ValidationError("dimension mismatch in c_theta");
  for (std::size_t i = 1; i < varsigma.size(); ++i)
    if (!(varsigma[i] > varsigma[i - 1])) throw ValidationError("varsigma must be strictly increasing");
  double c = 1.0;
  for (std::size_t k = 0; k < theta.block_count(); ++k) {
    double mass = 0.0;
    for (auto i = theta.block_begin(k); i < theta.block_end(k); ++i) mass += m[i];
    c *= mass;
    if (k + 1 < theta.block_count()) {
      const auto last = theta.block_end(k) - 1;
      c *= varsigma[last + 1] - varsigma[last];
    }
  }
  return c;
}

double mu_xi_density(std::span<const double> q) {
  double prev = 0.0, d = 1.0;
  for (double v : q) {
    if (!(v > prev) || !(v < 1.0)) throw ValidationError("breakpoints must increase inside (0,1)");
    d *= v - prev;
    prev = v;
  }
  return d * (1.0 - prev);
}

double xi_n_ball_bound(int n, double r, const PiecewiseConstant& xi) {
  if (n < 1) throw ValidationError("n must be at least 1");
  const double rise = xi.values().back() - xi.values().front();
  const double nn = static_cast<double>(n);
  return 2.0 * std::pow(std::numbers::pi, nn / 2.0) * std::pow(r, nn) * std::pow(rise, nn - 1.0) /
         (std::tgamma(nn + 1.0) * std::tgamma(nn / 2.0));
}

XiStratumSampler::XiStratumSampler(int n, double radius, const PiecewiseConstant& xi)
    : n_(n), r_(radius) {
  if (n < 1 || n > kMaxStratum)
    throw ValidationError("stratum must lie in [1, " + std::to_string(kMaxStratum) + "]");
  if (!(radius > 0.0)) throw ValidationError("radius must be positive");
  if (!xi.is_nondecreasing()) throw ValidationError("xi must be non-decreasing");
  if (xi.pieces() < static_cast<std::size_t>(n))
    throw NullStratum("xi takes " + std::to_string(xi.pieces()) + " values, stratum " +
                      std::to_string(n) + " is null");

  s_.push_back(0.0);
  h_.push_back(0.0);
  for (std::size_t i = 1; i < xi.pieces(); ++i) {
    s_.push_back(xi.breakpoints()[i - 1]);
    h_.push_back(xi.values()[i] - xi.values()[i - 1]);
  }
  const std::size_t J = s_.size() - 1;

  f_.assign(static_cast<std::size_t>(n), std::vector<double>(J + 1, 0.0));
  pa_.assign(static_cast<std::size_t>(n), std::vector<double>(J + 1, 0.0));
  pb_.assign(static_cast<std::size_t>(n), std::vector<double>(J + 1, 0.0));
  for (std::size_t p = 0; p <= J; ++p) f_[0][p] = 1.0 - s_[p];
  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
    if (j > 0) {
      // F_j(p) = sum_{p' > p} h_{p'} (s_{p'} - s_p) F_{j-1}(p'), via suffix sums
      double sa = 0.0, sb = 0.0;
      for (std::size_t p = J + 1; p-- > 0;) {
        f_[j][p] = std::max(0.0, sa - s_[p] * sb);
        if (p >= 1) {
          sa += h_[p] * s_[p] * f_[j - 1][p];
          sb += h_[p] * f_[j - 1][p];
        }
      }
    }
    for (std::size_t p = 1; p <= J; ++p) {
      pa_[j][p] = pa_[j][p - 1] + h_[p] * s_[p] * f_[j][p];
      pb_[j][p] = pb_[j][p - 1] + h_[p] * f_[j][p];
    }
  }
  z_ = f_[static_cast<std::size_t>(n) - 1][0];
  if (!(z_ > 0.0)) throw NullStratum("stratum " + std::to_string(n) + " carries no mass");
}

std::vector<double> XiStratumSampler::sample_breakpoints(Rng& rng) const {
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(n_ - 1));
  const std::size_t J = s_.size() - 1;
  std::size_t p = 0;
  for (int j = n_ - 1; j >= 1; --j) {
    const auto& pa = pa_[static_cast<std::size_t>(j - 1)];
    const auto& pb = pb_[static_cast<std::size_t>(j - 1)];
    const auto& f = f_[static_cast<std::size_t>(j - 1)];
    const double sp = s_[p];
    auto cum = [&](std::size_t k) { return (pa[k] - pa[p]) - sp * (pb[k] - pb[p]); };
    const double target = rng.uniform() * f_[static_cast<std::size_t>(j)][p];
    std::size_t lo = p + 1, hi = J + 1;  // smallest k with cum(k) > target
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (cum(mid) > target) hi = mid;
      else lo = mid + 1;
    }
    std::size_t k = lo;
    if (k > J) {
      k = J;
      while (k > p + 1 && !(h_[k] * f[k] > 0.0)) --k;
    }
    q.push_back(s_[k]);
    p = k;
  }
  return q;
}

void XiStratumSampler::propose(Rng& rng, Candidate& out) const {
  out.q = sample_breakpoints(rng);
  out.x.resize(static_cast<std::size_t>(n_));
  double vol = z_, norm = 0.0, prev_q = 0.0;
  bool ordered = true;
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    const double right = i < out.q.size() ? out.q[i] : 1.0;
    const double len = right - prev_q;
    const double half = r_ / std::sqrt(len);
    const double x = half * (2.0 * rng.uniform() - 1.0);
    out.x[i] = x;
    vol *= 2.0 * half;
    norm += x * x * len;
    if (i > 0 && x < out.x[i - 1]) ordered = false;
    prev_q = right;
  }
  out.weight = vol;
  out.hit = ordered && norm <= r_ * r_;
}

Candidate XiStratumSampler::propose(Rng& rng) const {
  Candidate c;
  propose(rng, c);
  return c;
}

WeightedSample XiStratumSampler::sample(Rng& rng, std::size_t max_attempts) {
  Candidate c;
  for (std::size_t a = 0; a < max_attempts; ++a) {
    propose(rng, c);
    ++attempts_;
    if (!c.hit) continue;
    ++accepts_;
    WeightedSample s;
    s.g = make_step_function(c.q, c.x);
    s.n = n_;
    s.weight = c.weight;
    s.q = std::move(c.q);
    s.x = std::move(c.x);
    return s;
  }
  throw RejectionBudgetExhausted("rejection budget of " + std::to_string(max_attempts) +
                                     " exhausted for stratum " + std::to_string(n_) +
                                     " (acceptance rate " + std::to_string(acceptance_rate()) + ")",
                                 acceptance_rate());
}

WeightedSample sample_xi_n_ball(int n, double r, const PiecewiseConstant& xi, Rng& rng) {
  XiStratumSampler sampler(n, r, xi);
  return sampler.sample(rng);
}

MassEstimate estimate_xi_n_mass(int n, double r, const PiecewiseConstant& xi, std::size_t samples,
                                Rng& rng) {
  if (samples < 1000) throw ValidationError("at least 1000 samples are required");
  MassEstimate out;
  out.samples = samples;
  std::optional<XiStratumSampler> sampler;
  try {
    sampler.emplace(n, r, xi);
  } catch (const NullStratum&) {
    return out;
  }
  std::vector<double> v(samples);
  Candidate c;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    sampler->propose(rng, c);
    v[i] = c.hit ? c.weight : 0.0;
    hits += c.hit ? 1 : 0;
  }
  const auto ms = mean_se(v);
  out.estimate = ms.mean;
  out.std_error = ms.std_error;
  out.ci_low = ms.mean - 1.959963984540054 * ms.std_error;
  out.ci_high = ms.mean + 1.959963984540054 * ms.std_error;
  out.acceptance_rate = static_cast<double>(hits) / static_cast<double>(samples);
  return out;
}

}  // namespace cfwd

#include "cfwd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "cfwd/random.hpp"
#include "cfwd/xi_measure.hpp"

namespace cfwd {

namespace {

constexpr std::size_t kChunks = 64;

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
  }
};

// Estimate and variance of the mean from summed chunk moments.
void finish_moments(const std::vector<Moments>& chunks, std::size_t n, double& mean, double& var_mean) {
  std::vector<double> s, q;
  for (const auto& c : chunks) {
    s.push_back(c.sum);
    q.push_back(c.sumsq);
  }
  const double N = static_cast<double>(n);
  const double sum = pairwise_sum(s), sumsq = pairwise_sum(q);
  mean = sum / N;
  const double var = std::max(0.0, (sumsq - sum * sum / N) / (N - 1.0));
  var_mean = var / N;
}

std::size_t chunk_size(std::size_t total, std::size_t c) {
  return total / kChunks + (c < total % kChunks ? 1 : 0);
}

void candidate_cells(const Candidate& cand, std::vector<double>& edges) {
  edges.clear();
  edges.push_back(0.0);
  for (double q : cand.q) edges.push_back(q);
  edges.push_back(1.0);
}

}  // namespace

std::vector<StatReport> check_ibp_bank(int n,
                                       std::span<const std::pair<TestFunctionFC, TestFunctionFC>> pairs,
                                       const PiecewiseConstant& xi, double radius,
                                       std::size_t samples, std::uint64_t seed, unsigned threads,
                                       double threshold) {
  if (samples < 1000) throw ValidationError("integration by parts needs at least 1000 samples");
  for (const auto& [U, V] : pairs) {
    if (U.phi.support > radius * radius * (1 + 1e-12) || V.phi.support > radius * radius * (1 + 1e-12))
      throw ValidationError("cutoff support of " + U.label + "/" + V.label + " exceeds the ball");
  }
  const XiStratumSampler upper(n, radius, xi);
  std::optional<XiStratumSampler> lower;
  if (n >= 2) lower.emplace(n - 1, radius, xi);
  const std::size_t P = pairs.size();

  struct ChunkOut {
    std::vector<Moments> x, y;
  };
  auto work = [&](std::size_t c) {
    ChunkOut out;
    out.x.assign(P, {});
    out.y.assign(P, {});
    std::vector<FcEvaluator> eu, ev;
    for (const auto& [U, V] : pairs) {
      eu.emplace_back(U, xi);
      ev.emplace_back(V);
    }
    FcPoint pu, pv;
    Candidate cand;
    std::vector<double> edges;
    const std::size_t m = chunk_size(samples, c);

    Rng ru(derive_seed(seed, 2 * c));
    for (std::size_t i = 0; i < m; ++i) {
      upper.propose(ru, cand);
      if (!cand.hit) {
        for (auto& mo : out.x) mo.add(0.0);
        continue;
      }
      candidate_cells(cand, edges);
      for (std::size_t p = 0; p < P; ++p) {
        eu[p].evaluate(edges, cand.x, pu);
        ev[p].evaluate(edges, cand.x, pv);
        double dd = 0.0;
        for (std::size_t k = 0; k < pu.grad.size(); ++k) dd += pu.grad[k] * pv.grad[k] * (edges[k + 1] - edges[k]);
        out.x[p].add(cand.weight * (dd + pu.l0 * pv.value));
      }
    }
    if (lower) {
      Rng rl(derive_seed(seed, 2 * c + 1));
      for (std::size_t i = 0; i < m; ++i) {
        lower->propose(rl, cand);
        if (!cand.hit) {
          for (auto& mo : out.y) mo.add(0.0);
          continue;
        }
        candidate_cells(cand, edges);
        for (std::size_t p = 0; p < P; ++p) {
          eu[p].evaluate(edges, cand.x, pu);
          ev[p].evaluate(edges, cand.x, pv);
          out.y[p].add(cand.weight * pv.value * pu.xi_term);
        }
      }
    }
    return out;
  };
  const auto chunks = parallel_map(kChunks, threads, work);

  std::vector<StatReport> reports;
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<Moments> xs, ys;
    for (const auto& ch : chunks) {
      xs.push_back(ch.x[p]);
      ys.push_back(ch.y[p]);
    }
    double mx, vx, my = 0.0, vy = 0.0;
    finish_moments(xs, samples, mx, vx);
    if (lower) finish_moments(ys, samples, my, vy);
    std::ostringstream name;
    name << "ibp n=" << n << " " << pairs[p].first.label << "/" << pairs[p].second.label;
    auto r = z_report(name.str(), mx + my, std::sqrt(vx + vy), 0.0, samples, threshold);
    std::ostringstream note;
    note.precision(6);
    note << "stratum term " << mx << ", boundary term " << my;
    r.note = note.str();
    reports.push_back(std::move(r));
  }
  return reports;
}

StatReport check_ibp(int n, const TestFunctionFC& U, const TestFunctionFC& V,
                     const PiecewiseConstant& xi, double radius, std::size_t samples,
                     std::uint64_t seed, unsigned threads) {
  const std::pair<TestFunctionFC, TestFunctionFC> one[] = {{U, V}};
  return check_ibp_bank(n, one, xi, radius, samples, seed, threads).front();
}

void MartingaleF::local(const ParticleState& s) {
  pair_ = support_ = grad_sq_ = 0.0;
  const auto& th = s.partition;
  for (std::size_t k = 0; k < th.block_count(); ++k) {
    double mass = 0.0;
    for (auto i = th.block_begin(k); i < th.block_end(k); ++i) mass += s.masses[i];
    const double x = s.positions[th.block_begin(k)];
    const double d1 = f_.d1(x);
    pair_ += mass * f_.value(x);
    support_ += f_.d2(x);
    grad_sq_ += mass * d1 * d1;
  }
}

void MartingaleF::start(const ParticleState& s) {
  path_ = {};
  local(s);
}

void MartingaleF::observe(const ParticleState& next, double ds) {
  const double pair0 = pair_, support0 = support_, grad0 = grad_sq_;
  local(next);
  const double dm = pair_ - pair0 - 0.5 * ds * support0;
  path_.m_T += dm;
  path_.qv_realized += dm * dm;
  path_.qv_predicted += ds * grad0;
}

MartingaleH::MartingaleH(const PiecewiseConstant& h, const PiecewiseConstant& xi, const MassVector& m) {
  const auto u = m.cumulative();
  for (std::size_t i = 0; i < m.size(); ++i) {
    hcell_.push_back(h.integral(u[i], u[i + 1]));
    xicell_.push_back(xi.integral(u[i], u[i + 1]));
  }
  hxi_ = inner(h, xi);
}

void MartingaleH::local(const ParticleState& s) {
  pair_ = 0.0;
  double proj = 0.0, qv = 0.0;
  const auto& th = s.partition;
  for (std::size_t k = 0; k < th.block_count(); ++k) {
    double mass = 0.0, hb = 0.0, xb = 0.0;
    for (auto i = th.block_begin(k); i < th.block_end(k); ++i) {
      mass += s.masses[i];
      hb += hcell_[i];
      xb += xicell_[i];
      pair_ += s.positions[i] * hcell_[i];
    }
    proj += hb * xb / mass;
    qv += hb * hb / mass;
  }
  comp_ = hxi_ - proj;
  qv_ = qv;
}

void MartingaleH::start(const ParticleState& s) {
  path_ = {};
  local(s);
}

void MartingaleH::observe(const ParticleState& next, double ds) {
  const double pair0 = pair_, comp0 = comp_, qv0 = qv_;
  local(next);
  const double dm = pair_ - pair0 - 0.5 * ds * comp0;
  path_.m_T += dm;
  path_.qv_realized += dm * dm;
  path_.qv_predicted += ds * qv0;
}

MartingaleCheck summarize_martingale(const std::string& name, std::span<const MartingalePath> paths,
                                     double threshold, double qv_tolerance) {
  if (paths.size() < 2) throw ValidationError("too few trajectories for a martingale check");
  std::vector<double> m, rel;
  for (const auto& p : paths) {
    m.push_back(p.m_T);
    if (p.qv_predicted > 0.0) rel.push_back(std::abs(p.qv_realized - p.qv_predicted) / p.qv_predicted);
  }
  MartingaleCheck out;
  const auto ms = mean_se(m);
  out.drift = z_report(name + " drift", ms.mean, ms.std_error, 0.0, paths.size(), threshold);
  const auto rs = mean_se(rel);
  out.qv.name = name + " qv";
  out.qv.estimate = rs.mean;
  out.qv.std_error = rs.std_error;
  out.qv.target = 0.0;
  out.qv.samples = rel.size();
  out.qv.threshold = qv_tolerance;
  out.qv.z = rs.std_error > 0.0 ? rs.mean / rs.std_error : 0.0;
  out.qv.pass = !rel.empty() && rs.mean <= qv_tolerance;
  out.qv.note = "mean pathwise relative error of the quadratic variation";
  return out;
}

MartingaleCheck check_martingale_f(std::span<const Trajectory> trajectories, const ScalarFunction& f) {
  std::vector<MartingalePath> paths;
  for (const auto& tr : trajectories) {
    MartingaleF mf(f);
    mf.start(tr.states.front());
    for (std::size_t k = 1; k < tr.states.size(); ++k) mf.observe(tr.states[k], tr.times[k] - tr.times[k - 1]);
    paths.push_back(mf.path());
  }
  return summarize_martingale("M^f " + f.name(), paths);
}

MartingaleCheck check_martingale_h(std::span<const Trajectory> trajectories, const PiecewiseConstant& h,
                                   const PiecewiseConstant& xi) {
  std::vector<MartingalePath> paths;
  for (const auto& tr : trajectories) {
    MartingaleH mh(h, xi, tr.states.front().masses);
    mh.start(tr.states.front());
    for (std::size_t k = 1; k < tr.states.size(); ++k) mh.observe(tr.states[k], tr.times[k] - tr.times[k - 1]);
    paths.push_back(mh.path());
  }
  return summarize_martingale("M~h", paths);
}

EnsembleResult run_martingale_ensemble(const SimConfig& cfg, std::span<const ScalarFunction> fs,
                                       std::span<const PiecewiseConstant> hs, std::size_t count,
                                       unsigned threads) {
  cfg.validate();
  const auto xi = xi_on_mass_grid(cfg.varsigma, cfg.masses);
  const auto steps = step_count(cfg);
  struct One {
    std::vector<MartingalePath> f, h;
    double com_qv = 0.0;
  };
  auto work = [&](std::size_t k) {
    Stepper stepper(cfg);
    Rng rng(derive_seed(cfg.seed, k));
    auto state = initial_state(cfg);
    std::vector<MartingaleF> mf;
    std::vector<MartingaleH> mh;
    for (const auto& f : fs) mf.emplace_back(f);
    for (const auto& h : hs) mh.emplace_back(h, xi, cfg.masses);
    for (auto& x : mf) x.start(state);
    for (auto& x : mh) x.start(state);
    double com = center_of_mass(state), qv = 0.0;
    for (std::size_t s = 1; s <= steps; ++s) {
      stepper.advance(state, rng);
      for (auto& x : mf) x.observe(state, cfg.dt);
      for (auto& x : mh) x.observe(state, cfg.dt);
      const double c = center_of_mass(state);
      qv += (c - com) * (c - com);
      com = c;
    }
    One out;
    for (const auto& x : mf) out.f.push_back(x.path());
    for (const auto& x : mh) out.h.push_back(x.path());
    out.com_qv = qv;
    return out;
  };
  const auto all = parallel_map(count, threads, work);
  EnsembleResult res;
  res.paths_f.assign(fs.size(), {});
  res.paths_h.assign(hs.size(), {});
  for (const auto& one : all) {
    for (std::size_t j = 0; j < fs.size(); ++j) res.paths_f[j].push_back(one.f[j]);
    for (std::size_t j = 0; j < hs.size(); ++j) res.paths_h[j].push_back(one.h[j]);
    res.com_qv.push_back(one.com_qv);
  }
  return res;
}

StatReport check_xi_bound(int n, double r, const PiecewiseConstant& xi, std::size_t samples,
                          std::uint64_t seed, double z_max) {
  Rng rng(seed);
  const auto est = estimate_xi_n_mass(n, r, xi, samples, rng);
  const double bound = xi_n_ball_bound(n, r, xi);
  std::ostringstream name;
  name << "xi bound n=" << n << " r=" << r;
  StatReport rep;
  rep.name = name.str();
  rep.estimate = est.estimate;
  rep.std_error = est.std_error;
  rep.target = bound;
  rep.samples = samples;
  rep.threshold = z_max;
  if (est.std_error > 0.0) {
    rep.z = (est.estimate - bound) / est.std_error;
    rep.pass = rep.z <= z_max;
  } else {
    rep.z = 0.0;
    rep.pass = est.estimate <= bound * (1.0 + 1e-12);
  }
  std::ostringstream note;
  note << "one-sided: estimate <= bound + " << z_max << " se; acceptance " << est.acceptance_rate;
  rep.note = note.str();
  return rep;
}

StatReport check_xi_jump_oracle(double r, std::size_t samples, std::uint64_t seed, double threshold) {
  const PiecewiseConstant jump({0.5}, {0.0, 1.0});
  Rng rng(seed);
  const auto est = estimate_xi_n_mass(2, r, jump, samples, rng);
  std::ostringstream name;
  name << "xi single jump n=2 r=" << r;
  return z_report(name.str(), est.estimate, est.std_error, std::numbers::pi * r * r / 4.0, samples, threshold);
}

namespace {

// log erfc(x), accurate far into the upper tail.
double log_erfc(double x) {
  if (x < 20.0) return std::log(std::erfc(x));
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2) - 15.0 / (8.0 * x2 * x2 * x2);
  return -x2 - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
}

// log of the integral over d >= 0 of exp(-a d^2 + b d), a > 0.
double log_gauss_exp_integral(double a, double b) {
  const double ra = std::sqrt(a);
  return 0.5 * std::log(std::numbers::pi / (4.0 * a)) + b * b / (4.0 * a) + log_erfc(-b / (2.0 * ra));
}

}  // namespace

double varadhan_gaussian_oracle(double eps, double t) {
  if (!(eps > 0.0) || !(t > 0.0)) throw ValidationError("oracle needs eps > 0 and t > 0");
  const std::size_t cells = 2000;
  const double h = eps / static_cast<double>(cells), s = std::sqrt(2.0 * t);
  auto log_p = [&](double c) {
    const double la = log_erfc((1.0 - c) / s), lb = log_erfc((1.0 + eps - c) / s);
    return la + std::log1p(-std::exp(lb - la)) - std::log(2.0);
  };
  std::vector<double> logs;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= cells; ++i) {
    const double w = (i == 0 || i == cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    logs.push_back(std::log(w) + log_p(h * static_cast<double>(i)));
    top = std::max(top, logs.back());
  }
  std::vector<double> terms;
  for (double l : logs) terms.push_back(std::exp(l - top));
  return t * (top + std::log(pairwise_sum(terms) * h / 3.0 / eps));
}

double ball_distance(const L2Ball& A, const L2Ball& B) {
  return std::max(0.0, std::sqrt(norm_sq(A.center - B.center)) - A.radius - B.radius);
}

VaradhanResult varadhan_exponent(const VaradhanSetup& setup, std::span<const double> t_list,
                                 std::size_t paths, std::uint64_t seed, unsigned threads,
                                 double rel_tol) {
  if (t_list.empty()) throw ValidationError("empty time list");
  if (paths < 2) throw ValidationError("too few paths");
  if (setup.A.center.pieces() != 1) throw ValidationError("ball A must be centred at a constant");
  const std::size_t n = setup.masses.size();
  if (n > 2 || n == 0) throw ValidationError("the short-time check supports one or two particles");
  const double shift_a = setup.A.center.values()[0];
  const auto xi = xi_on_mass_grid(setup.varsigma, setup.masses);
  std::vector<XiStratumSampler> strata;
  for (int k = 1; k <= static_cast<int>(n); ++k) {
    try {
      strata.emplace_back(k, setup.A.radius, xi);
    } catch (const NullStratum&) {
    }
  }
  const auto u = setup.masses.cumulative();
  std::vector<double> mid(n), target(n);
  for (std::size_t i = 0; i < n; ++i) {
    mid[i] = 0.5 * (u[i] + u[i + 1]);
    target[i] = setup.B.center(mid[i]);
  }

  VaradhanResult res;
  const double d = ball_distance(setup.A, setup.B);
  res.target = -0.5 * d * d;

  struct PathOut {
    double log_num = -std::numeric_limits<double>::infinity();
    double den = 0.0;
  };
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    const double t = t_list[ti];
    if (!(t > 0.0)) throw ValidationError("times must be positive");
    SimConfig cfg;
    cfg.masses = setup.masses;
    cfg.varsigma = setup.varsigma;
    cfg.dt = t / static_cast<double>(setup.steps_per_path);
    cfg.T = t;
    cfg.merge_tol = setup.merge_tol;
    auto work = [&](std::size_t i) {
      Rng rng(derive_seed(seed, (static_cast<std::uint64_t>(ti) << 40) + i));
      PathOut out;
      const std::size_t which = std::min(strata.size() - 1,
                                         static_cast<std::size_t>(rng.uniform() * static_cast<double>(strata.size())));
      const auto cand = strata[which].propose(rng);
      if (!cand.hit) return out;
      const double wc = cand.weight * static_cast<double>(strata.size());
      out.den = wc;
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t cell = 0;
        while (cell < cand.q.size() && cand.q[cell] <= mid[j]) ++cell;
        x[j] = cand.x[cell] + shift_a;
      }
      // Guide towards y = y0 + d e, a point of B at depth d ~ Exp(rate) below
      // the point of B nearest to the start. The weight uses the guide density
      // integrated over d, so it stays bounded when the end point is pinned.
      std::vector<double> y0(target), e(n, 0.0);
      double dist_sq = 0.0;
      for (std::size_t j = 0; j < n; ++j) dist_sq += setup.masses[j] * (target[j] - x[j]) * (target[j] - x[j]);
      const double dist = std::sqrt(dist_sq);
      const bool mixed = dist > setup.B.radius;
      double rate = 0.0, depth = 0.0;
      if (mixed) {
        rate = (dist - setup.B.radius) / t;
        depth = -std::log1p(-rng.uniform()) / rate;
        for (std::size_t j = 0; j < n; ++j) {
          e[j] = (target[j] - x[j]) / dist;
          y0[j] = target[j] - setup.B.radius * e[j];
        }
      }
      auto state = ParticleState::from_positions(std::move(x), setup.masses, setup.merge_tol);
      Stepper stepper(cfg);
      std::vector<double> w(n);
      // log q(w | d) = c0 + c1 d - c2 d^2 - sum log sigma; log p(w) = -|w|^2 / 2
      double c0 = 0.0, c1 = 0.0, c2 = 0.0, log_p = 0.0, log_sigma = 0.0;
      for (std::size_t s = 0; s < setup.steps_per_path; ++s) {
        const double remaining = t - static_cast<double>(s) * cfg.dt;
        const double sigma = std::sqrt(std::max((remaining - cfg.dt) / remaining,
                                                setup.min_noise_scale * setup.min_noise_scale));
        const double inv_var = 1.0 / (sigma * sigma);
        for (std::size_t j = 0; j < n; ++j) {
          const double k = std::sqrt(setup.masses[j] * cfg.dt) / remaining;
          const double alpha = k * (y0[j] - state.positions[j]);
          const double beta = k * e[j];
          w[j] = alpha + beta * depth + sigma * rng.normal();
          const double r = w[j] - alpha;
          c0 -= 0.5 * r * r * inv_var;
          c1 += r * beta * inv_var;
          c2 += 0.5 * beta * beta * inv_var;
          log_p -= 0.5 * w[j] * w[j];
          log_sigma += std::log(sigma);
        }
        stepper.advance_with(state, w);
      }
      double log_q = c0 - log_sigma;
      if (mixed) log_q += std::log(rate) + log_gauss_exp_integral(c2, c1 - rate);
      const double log_w = log_p - log_q;
      const auto g = state.as_step_function();
      if (norm_sq(g - setup.B.center) <= setup.B.radius * setup.B.radius)
        out.log_num = std::log(wc) + log_w;
      return out;
    };
    const auto outs = parallel_map(paths, threads, work);

    double lmax = -std::numeric_limits<double>::infinity();
    std::size_t hits = 0;
    for (const auto& o : outs) {
      if (std::isfinite(o.log_num)) {
        lmax = std::max(lmax, o.log_num);
        ++hits;
      }
    }
    VaradhanPoint pt;
    pt.t = t;
    pt.paths = paths;
    pt.hits = hits;
    if (hits == 0) {
      pt.t_log_p = -std::numeric_limits<double>::infinity();
      pt.std_error = std::numeric_limits<double>::infinity();
      res.points.push_back(pt);
      continue;
    }
    std::vector<double> num(paths), den(paths);
    for (std::size_t i = 0; i < paths; ++i) {
      num[i] = std::isfinite(outs[i].log_num) ? std::exp(outs[i].log_num - lmax) : 0.0;
      den[i] = outs[i].den;
    }
    const double sn = pairwise_sum(num), sd = pairwise_sum(den);
    const double ratio = sn / sd;
    std::vector<double> resid(paths);
    for (std::size_t i = 0; i < paths; ++i) resid[i] = (num[i] - ratio * den[i]) * (num[i] - ratio * den[i]);
    const double rel_se = std::sqrt(pairwise_sum(resid)) / sn;
    pt.t_log_p = t * (lmax + std::log(sn) - std::log(sd));
    pt.std_error = t * rel_se;
    res.points.push_back(pt);
  }

  bool conclusive = true;
  double se = 0.0;
  for (const auto& p : res.points) {
    if (!std::isfinite(p.t_log_p)) conclusive = false;
    se = std::max(se, p.std_error);
  }
  if (conclusive && res.points.size() >= 3) {
    std::vector<double> design, y;
    for (const auto& p : res.points) {
      design.insert(design.end(), {1.0, p.t, p.t * std::log(p.t)});
      y.push_back(p.t_log_p);
    }
    res.limit = least_squares(design, 3, y)[0];
    double var = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      std::vector<double> unit(y.size(), 0.0);
      unit[k] = 1.0;
      const double a = least_squares(design, 3, unit)[0];
      var += a * a * res.points[k].std_error * res.points[k].std_error;
    }
    se = std::sqrt(var);
  } else if (conclusive) {
    const auto best = std::min_element(res.points.begin(), res.points.end(),
                                       [](const auto& a, const auto& b) { return a.t < b.t; });
    res.limit = best->t_log_p;
    se = best->std_error;
  }
  res.rel_error = res.target != 0.0 ? std::abs(res.limit - res.target) / std::abs(res.target)
                                    : std::abs(res.limit);
  res.report = z_report("varadhan exponent", res.limit, se, res.target, paths);
  res.report.threshold = rel_tol;
  res.report.pass = conclusive && res.rel_error <= rel_tol;
  if (!conclusive) {
    res.report.note = "inconclusive: no path reached B at some t; increase the path count";
  } else {
    std::ostringstream os;
    os << "relative error " << res.rel_error << " (tolerance " << rel_tol << ")";
    res.report.note = os.str();
  }
  return res;
}

}  // namespace cfwd

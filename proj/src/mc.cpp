#include "mptp/mc.hpp"

#include <cmath>
#include <functional>

#include "mptp/action.hpp"
#include "mptp/ivp.hpp"
#include "mptp/linear.hpp"
#include "mptp/philox.hpp"

namespace mptp {

namespace {

// Scalar drift fast path; the sampling loops below run ~1e8 steps.
std::function<double(double)> scalar_gradient(const Potential& p) {
  switch (p.kind()) {
    case Potential::Kind::free:
      return [](double) { return 0.0; };
    case Potential::Kind::ou: {
      double theta = p.theta(), mu = p.mu_bar();
      return [theta, mu](double x) { return theta * (mu - x); };
    }
    case Potential::Kind::double_well:
      return [](double x) { return x - x * x * x; };
    case Potential::Kind::linear: {
      double g = p.G()(0, 0), a = p.a()[0];
      return [g, a](double x) { return g * x + a; };
    }
  }
  throw ConfigError("potential: unknown kind");
}

void check_divergence(long diverged, long n, const char* who) {
  if (diverged * 100 > n)
    throw StatisticsError(std::string(who) + ": " + std::to_string(diverged) + " of " +
                          std::to_string(n) + " paths diverged (> 1%)");
}

double binomial_ci95(double p_hat, long n) {
  if (n <= 0) return 0.0;
  return 1.96 * std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(n));
}

// Normal increment for component c of (path, step); two normals per block.
double normal_at(std::uint64_t seed, std::uint32_t step, std::uint32_t path, int component) {
  auto z = normal_pair(seed, step, path, static_cast<std::uint32_t>(component / 2));
  return z[component % 2];
}

}  // namespace

Ensemble sample_sde(const Potential& p, double sigma, const Eigen::VectorXd& x0, double l,
                    double dt, long n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_sde: n must be >= 1");
  if (!(sigma > 0)) throw ConfigError("sample_sde: sigma must be positive");
  if (x0.size() != p.dim()) throw ConfigError("sample_sde: x0 dimension mismatch");
  const int steps = grid_steps(l, dt);
  const int k = p.dim();
  const double root_dt = std::sqrt(dt);
  Ensemble e;
  e.seed = seed;
  e.dt = dt;
  e.n = n;
  e.paths.reserve(n);
  if (k == 1) {
    auto drift = scalar_gradient(p);
    for (long j = 0; j < n; ++j) {
      Path path;
      path.dt = dt;
      path.values.resize(steps + 1, 1);
      double x = x0[0];
      path.values(0, 0) = x;
      bool ok = true;
      for (int i = 0; i < steps; ++i) {
        x += drift(x) * dt +
             sigma * root_dt * normal_at(seed, static_cast<std::uint32_t>(i),
                                         static_cast<std::uint32_t>(j), 0);
        if (!std::isfinite(x)) {
          ok = false;
          break;
        }
        path.values(i + 1, 0) = x;
      }
      if (ok)
        e.paths.push_back(std::move(path));
      else
        ++e.diverged;
    }
  } else {
    for (long j = 0; j < n; ++j) {
      Path path;
      path.dt = dt;
      path.values.resize(steps + 1, k);
      Eigen::VectorXd x = x0;
      path.values.row(0) = x.transpose();
      bool ok = true;
      for (int i = 0; i < steps; ++i) {
        Eigen::VectorXd g = grad_potential(p, x);
        for (int c = 0; c < k; ++c)
          x[c] += g[c] * dt + sigma * root_dt *
                                  normal_at(seed, static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j), c);
        if (!x.allFinite()) {
          ok = false;
          break;
        }
        path.values.row(i + 1) = x.transpose();
      }
      if (ok)
        e.paths.push_back(std::move(path));
      else
        ++e.diverged;
    }
  }
  check_divergence(e.diverged, n, "sample_sde");
  return e;
}

Ensemble sample_ou_bridge(double theta, double mu_bar, double sigma, double x0, double xl,
                          double l, double dt, long n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_ou_bridge: n must be >= 1");
  if (!(sigma > 0)) throw ConfigError("sample_ou_bridge: sigma must be positive");
  const int steps = grid_steps(l, dt);
  const double root_dt = std::sqrt(dt);
  Ensemble e;
  e.seed = seed;
  e.dt = dt;
  e.n = n;
  e.paths.reserve(n);
  for (long j = 0; j < n; ++j) {
    Path path;
    path.dt = dt;
    path.values.resize(steps + 1, 1);
    double x = x0;
    path.values(0, 0) = x;
    bool ok = true;
    // Conditioned drift up to l - dt; the final node is pinned at xl.
    for (int i = 0; i < steps - 1; ++i) {
      double b = ou_bridge_drift(theta, mu_bar, sigma, xl, l, i * dt, x);
      x += b * dt + sigma * root_dt * normal_at(seed, static_cast<std::uint32_t>(i),
                                                static_cast<std::uint32_t>(j), 0);
      if (!std::isfinite(x)) {
        ok = false;
        break;
      }
      path.values(i + 1, 0) = x;
    }
    path.values(steps, 0) = xl;
    if (ok)
      e.paths.push_back(std::move(path));
    else
      ++e.diverged;
  }
  check_divergence(e.diverged, n, "sample_ou_bridge");
  return e;
}

TubeEstimate tube_probability(const Ensemble& e, const Path& ref, double delta) {
  if (e.paths.empty()) throw StatisticsError("tube_probability: empty ensemble");
  if (!(delta >= 0)) throw ConfigError("tube_probability: delta must be nonnegative");
  const Eigen::Index rows = ref.values.rows();
  long hits = 0;
  for (const Path& path : e.paths) {
    if (path.values.rows() != rows || path.values.cols() != ref.values.cols() ||
        std::abs(path.dt - ref.dt) > 1e-12)
      throw ConfigError("tube_probability: ensemble/reference grid mismatch");
    double sup = (path.values - ref.values).rowwise().norm().maxCoeff();
    if (sup <= delta) ++hits;
  }
  TubeEstimate t;
  t.delta = delta;
  t.hits = hits;
  t.n = static_cast<long>(e.paths.size());
  t.p_hat = static_cast<double>(hits) / static_cast<double>(t.n);
  t.ci95 = binomial_ci95(t.p_hat, t.n);
  return t;
}

namespace {

struct SupDistances {
  std::vector<double> to1, to2;  // per surviving path
  long diverged = 0;
};

// Streams one ensemble and records sup-norm distances to both reference paths;
// avoids storing 2e5 full trajectories.
template <class DriftFn>
SupDistances stream_sup_distances(DriftFn&& drift, double x0, double sigma, double l, double dt,
                                  long n, std::uint64_t seed, const Path& psi1, const Path& psi2,
                                  bool bridge_pin, double xl) {
  const int steps = grid_steps(l, dt);
  const double root_dt = std::sqrt(dt);
  SupDistances out;
  out.to1.reserve(n);
  out.to2.reserve(n);
  const int drift_steps = bridge_pin ? steps - 1 : steps;
  for (long j = 0; j < n; ++j) {
    double x = x0;
    double sup1 = std::abs(x - psi1.values(0, 0));
    double sup2 = std::abs(x - psi2.values(0, 0));
    bool ok = true;
    for (int i = 0; i < drift_steps; ++i) {
      x += drift(i * dt, x) * dt + sigma * root_dt *
                                       normal_at(seed, static_cast<std::uint32_t>(i),
                                                 static_cast<std::uint32_t>(j), 0);
      if (!std::isfinite(x)) {
        ok = false;
        break;
      }
      sup1 = std::max(sup1, std::abs(x - psi1.values(i + 1, 0)));
      sup2 = std::max(sup2, std::abs(x - psi2.values(i + 1, 0)));
    }
    if (!ok) {
      ++out.diverged;
      continue;
    }
    if (bridge_pin) {
      sup1 = std::max(sup1, std::abs(xl - psi1.values(steps, 0)));
      sup2 = std::max(sup2, std::abs(xl - psi2.values(steps, 0)));
    }
    out.to1.push_back(sup1);
    out.to2.push_back(sup2);
  }
  return out;
}

RatioEstimate ratio_at_delta(const SupDistances& d, double delta) {
  long n = static_cast<long>(d.to1.size());
  long h1 = 0, h2 = 0;
  for (long i = 0; i < n; ++i) {
    if (d.to1[i] <= delta) ++h1;
    if (d.to2[i] <= delta) ++h2;
  }
  RatioEstimate r;
  for (auto [tube, hits] : {std::pair{&r.tube1, h1}, std::pair{&r.tube2, h2}}) {
    tube->delta = delta;
    tube->hits = hits;
    tube->n = n;
    tube->p_hat = n > 0 ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
    tube->ci95 = binomial_ci95(tube->p_hat, n);
  }
  r.diverged = d.diverged;
  if (h1 > 0 && h2 > 0) {
    r.log_ratio = std::log(r.tube1.p_hat / r.tube2.p_hat);
    // Delta method: var(log p_hat) ~ (1-p)/(n p).
    r.ci95 = 1.96 * std::sqrt((1.0 - r.tube1.p_hat) / static_cast<double>(h1) +
                              (1.0 - r.tube2.p_hat) / static_cast<double>(h2));
  }
  return r;
}

}  // namespace

OmRatioReport om_ratio_check(const Potential& p, double sigma, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& xl, double l, double dt, const Path& psi1,
                             const Path& psi2, double delta, long n, std::uint64_t seed) {
  if (p.dim() != 1) throw ConfigError("om_ratio_check: scalar problems only");
  if (p.kind() != Potential::Kind::ou && p.kind() != Potential::Kind::free)
    throw ConfigError("om_ratio_check: potential must be 'ou' or 'free' (exact bridge drift)");
  const int steps = grid_steps(l, dt);
  for (const Path* ref : {&psi1, &psi2}) {
    if (ref->n_steps() != steps || std::abs(ref->dt - dt) > 1e-12 || ref->dim() != 1)
      throw ConfigError("om_ratio_check: reference path not on the sampling grid");
  }
  if (!(delta > 0)) throw ConfigError("om_ratio_check: delta must be positive");

  auto unconditioned_drift = [g = scalar_gradient(p)](double, double x) { return g(x); };
  std::function<double(double, double)> bridge_drift;
  if (p.kind() == Potential::Kind::ou) {
    double theta = p.theta(), mu = p.mu_bar();
    double xl0 = xl[0];
    bridge_drift = [theta, mu, sigma, xl0, l](double t, double x) {
      return ou_bridge_drift(theta, mu, sigma, xl0, l, t, x);
    };
  } else {
    double xl0 = xl[0];
    bridge_drift = [xl0, l](double t, double x) { return (xl0 - x) / (l - t); };
  }

  SupDistances unc = stream_sup_distances(unconditioned_drift, x0[0], sigma, l, dt, n, seed,
                                          psi1, psi2, /*bridge_pin=*/false, xl[0]);
  SupDistances bri = stream_sup_distances(bridge_drift, x0[0], sigma, l, dt, n, seed + 1, psi1,
                                          psi2, /*bridge_pin=*/true, xl[0]);
  check_divergence(unc.diverged, n, "om_ratio_check (unconditioned ensemble)");
  check_divergence(bri.diverged, n, "om_ratio_check (bridge ensemble)");

  OmRatioReport report;
  report.delta_requested = delta;
  report.n = n;
  report.mc_dt = dt;
  report.seed = seed;
  report.ds_om = om_action(psi2, p, sigma) - om_action(psi1, p, sigma);

  // Too few hits in any tube: widen delta (x2) and re-evaluate; the paths are
  // a pure function of the seed, so only the tube radii change.
  constexpr long kMinHits = 100;
  constexpr int kMaxRetries = 3;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    double delta_a = delta * std::pow(2.0, attempt);
    RatioEstimate u = ratio_at_delta(unc, delta_a);
    RatioEstimate b = ratio_at_delta(bri, delta_a);
    long min_hits = std::min(std::min(u.tube1.hits, u.tube2.hits),
                             std::min(b.tube1.hits, b.tube2.hits));
    if (min_hits >= kMinHits) {
      report.delta_used = delta_a;
      report.retries = attempt;
      report.unconditioned = u;
      report.bridge = b;
      return report;
    }
  }
  throw StatisticsError("om_ratio_check: fewer than 100 tube hits at delta=" +
                        std::to_string(delta * std::pow(2.0, kMaxRetries)) +
                        " after 3 retries (n=" + std::to_string(n) + ")");
}

}  // namespace mptp

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mptp/path.hpp"
#include "mptp/potential.hpp"

namespace mptp {

// Sampled paths on a common grid. Paths that left the finite range are
// excluded from `paths` and counted in `diverged`; more than 1% divergence
// fails loudly at the sampling call.
struct Ensemble {
  std::vector<Path> paths;
  std::uint64_t seed = 0;
  double dt = 0.0;
  long n = 0;  // requested count, including diverged
  long diverged = 0;
};

struct TubeEstimate {
  double delta = 0.0;
  long hits = 0;
  long n = 0;
  double p_hat = 0.0;
  double ci95 = 0.0;  // binomial 95% half-width
};

// Euler-Maruyama for dX = grad U dt + sigma dW; normals come from the
// counter-based generator keyed (seed; step, path).
Ensemble sample_sde(const Potential& p, double sigma, const Eigen::VectorXd& x0, double l,
                    double dt, long n, std::uint64_t seed);

// Scalar OU bridge SDE (conditioned drift); integration stops at l - dt and
// the last node is pinned to xl.
Ensemble sample_ou_bridge(double theta, double mu_bar, double sigma, double x0, double xl,
                          double l, double dt, long n, std::uint64_t seed);

// Fraction of paths with max_i |psi_i - ref_i| <= delta (per-node Euclidean
// norm over the grid — the cylinder approximation of the closed tube).
TubeEstimate tube_probability(const Ensemble& e, const Path& ref, double delta);

// Tube-ratio vs action-difference comparison for one ensemble kind.
struct RatioEstimate {
  TubeEstimate tube1, tube2;
  double log_ratio = 0.0;
  double ci95 = 0.0;  // delta-method half-width of log_ratio
  long diverged = 0;
};

struct OmRatioReport {
  double delta_requested = 0.0;
  double delta_used = 0.0;
  int retries = 0;
  long n = 0;
  double mc_dt = 0.0;
  std::uint64_t seed = 0;
  double ds_om = 0.0;  // om_action(psi2) - om_action(psi1)
  RatioEstimate unconditioned;
  RatioEstimate bridge;
};

// Compares log(p1/p2) with the OM action difference on both the unconditioned
// and the bridge ensemble. Too few tube hits (< 100 in any tube) widens delta
// by 2 and retries, at most 3 times, then raises a statistics error.
// Supported potentials: ou and free (these have exact bridge drifts).
OmRatioReport om_ratio_check(const Potential& p, double sigma, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& xl, double l, double dt, const Path& psi1,
                             const Path& psi2, double delta, long n, std::uint64_t seed);

}  // namespace mptp

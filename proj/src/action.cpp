#include "mptp/action.hpp"

namespace mptp {

namespace {

void require_points(const Path& path, int min_points, const char* who) {
  if (path.values.rows() < min_points)
    throw SolverError(std::string(who) + ": path needs at least " + std::to_string(min_points) +
                      " points");
  if (!(path.dt > 0)) throw ConfigError(std::string(who) + ": path dt must be positive");
}

// Integrand |(psi_i - psi_{i-1})/dt - grad U(psi_{i-1})|^2 at step i (left drift).
double fw_step(const Path& path, const Potential& p, int i) {
  Eigen::VectorXd left = path.at(i - 1);
  Eigen::VectorXd vel = (path.at(i) - left) / path.dt;
  return (vel - grad_potential(p, left)).squaredNorm();
}

}  // namespace

double om_action(const Path& path, const Potential& p, double sigma, QuadRule rule) {
  require_points(path, 2, "om_action");
  if (!(sigma > 0)) throw ConfigError("om_action: sigma must be positive");
  int n = path.n_steps();
  double inv_s2 = 1.0 / (sigma * sigma);
  double total = 0.0;
  if (rule == QuadRule::left_point) {
    for (int i = 1; i <= n; ++i)
      total += (fw_step(path, p, i) * inv_s2 + laplacian_potential(p, path.at(i - 1))) * path.dt;
  } else {
    // Trapezoid in the Laplacian and midpoint-free kinetic part, for grid
    // convergence studies; velocities are still forward differences.
    for (int i = 1; i <= n; ++i) {
      Eigen::VectorXd lo = path.at(i - 1), hi = path.at(i);
      Eigen::VectorXd vel = (hi - lo) / path.dt;
      double kin_lo = (vel - grad_potential(p, lo)).squaredNorm();
      double kin_hi = (vel - grad_potential(p, hi)).squaredNorm();
      double lap = 0.5 * (laplacian_potential(p, lo) + laplacian_potential(p, hi));
      total += (0.5 * (kin_lo + kin_hi) * inv_s2 + lap) * path.dt;
    }
  }
  return 0.5 * total;
}

double fw_action_paper_discrete(const Path& path, const Potential& p) {
  require_points(path, 2, "fw_action_paper_discrete");
  int n = path.n_steps();
  double total = 0.0;
  for (int i = 1; i <= n; ++i) total += fw_step(path, p, i) * path.dt;
  return total;
}

double fw_action(const Path& path, const Potential& p) {
  return 0.5 * fw_action_paper_discrete(path, p);
}

double el_residual(const Path& path, const Potential& p) {
  require_points(path, 3, "el_residual");
  int n = path.n_steps();
  double dt2 = path.dt * path.dt;
  double worst = 0.0;
  for (int i = 1; i < n; ++i) {
    Eigen::VectorXd second = (path.at(i + 1) - 2.0 * path.at(i) + path.at(i - 1)) / dt2;
    double r = (second - 0.5 * grad_sq_gradient(p, path.at(i))).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

ActionReport action_report(const Path& path, const Potential& p, std::optional<double> sigma) {
  ActionReport r;
  r.fw_paper_discrete = fw_action_paper_discrete(path, p);
  r.fw_half = 0.5 * r.fw_paper_discrete;
  if (sigma) r.om = om_action(path, p, *sigma);
  r.n_steps = path.n_steps();
  r.dt = path.dt;
  return r;
}

}  // namespace mptp

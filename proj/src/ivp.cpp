#include "mptp/ivp.hpp"

#include <cmath>

namespace mptp {

int grid_steps(double l, double dt) {
  if (!(dt > 0) || !(l > 0)) throw ConfigError("grid: l and dt must be positive");
  if (!(dt < l)) throw ConfigError("grid: dt must be smaller than l");
  double steps = l / dt;
  int n = static_cast<int>(std::llround(steps));
  if (n < 1 || std::abs(steps - n) > 1e-6 * steps)
    throw ConfigError("grid: horizon l is not a multiple of dt");
  return n;
}

Path integrate_ivp(const DriftField& f, const Eigen::VectorXd& x0, double l, double dt,
                   const std::optional<Eigen::VectorXd>& pin_endpoint) {
  int n = grid_steps(l, dt);
  Path path;
  path.dt = dt;
  path.values.resize(n + 1, x0.size());
  path.values.row(0) = x0.transpose();
  Eigen::VectorXd x = x0;
  bool singular_end = std::abs(f.singular_at - l) <= 1e-12 * std::max(1.0, std::abs(l));
  int last_drift_step = singular_end ? n - 1 : n;
  Eigen::VectorXd b;
  for (int i = 0; i < last_drift_step; ++i) {
    double t = i * dt;
    b = f.eval(t, x);
    if (!b.allFinite())
      throw SolverError("integrate_ivp: non-finite drift at t=" + std::to_string(t));
    x += dt * b;
    if (!x.allFinite())
      throw SolverError("integrate_ivp: non-finite state at t=" + std::to_string(t + dt));
    path.values.row(i + 1) = x.transpose();
  }
  if (singular_end) {
    if (pin_endpoint) {
      path.values.row(n) = pin_endpoint->transpose();
    } else {
      // No known endpoint: extrapolate the final step with the last usable drift.
      path.values.row(n) = (x + dt * b).transpose();
      if (!path.values.row(n).allFinite())
        throw SolverError("integrate_ivp: non-finite extrapolation at t=l");
    }
  }
  return path;
}

}  // namespace mptp

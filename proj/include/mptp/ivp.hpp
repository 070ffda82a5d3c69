#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>

#include "mptp/path.hpp"

namespace mptp {

// Time-dependent vector field, possibly singular at a terminal time (bridge
// drifts blow up at t = l; they are only evaluated on [0, l - dt]).
struct DriftField {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> eval;
  double singular_at = std::numeric_limits<double>::infinity();
  int dim = 0;
};

// Forward Euler on t_i = i*dt up to t_n = l (l must be a grid multiple of dt).
// If the field is singular at l, the last node is set to `pin_endpoint` when
// given, otherwise extrapolated with the drift at l - dt. Throws SolverError
// with the failing time when the drift turns non-finite.
Path integrate_ivp(const DriftField& f, const Eigen::VectorXd& x0, double l, double dt,
                   const std::optional<Eigen::VectorXd>& pin_endpoint = std::nullopt);

// Number of Euler steps for horizon l; rejects grids that miss l.
int grid_steps(double l, double dt);

}  // namespace mptp

#pragma once

#include <Eigen/Dense>

#include "mptp/errors.hpp"

namespace mptp {

// Discrete path on a uniform grid: row i of `values` is the state at t0 + i*dt.
struct Path {
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::MatrixXd values;  // (n+1) x k

  int n_steps() const { return static_cast<int>(values.rows()) - 1; }
  int dim() const { return static_cast<int>(values.cols()); }
  double time(int i) const { return t0 + i * dt; }
  double horizon() const { return t0 + n_steps() * dt; }
  Eigen::VectorXd at(int i) const { return values.row(i).transpose(); }
};

inline bool path_is_finite(const Path& p) { return p.values.allFinite(); }

// Largest per-node Euclidean distance between two paths on the same grid.
inline double sup_distance(const Path& a, const Path& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw ConfigError("sup_distance: paths are on different grids");
  return (a.values - b.values).rowwise().norm().maxCoeff();
}

// Checks the Path invariants: nonempty, finite, dt > 0, grid hits the horizon.
inline void validate_path(const Path& p, double l) {
  if (p.values.rows() < 1) throw ConfigError("path: empty");
  if (!(p.dt > 0)) throw ConfigError("path: dt must be positive");
  if (!path_is_finite(p)) throw SolverError("path: non-finite values");
  double end = p.horizon();
  if (std::abs(end - (p.t0 + l)) > 1e-9 * (1.0 + std::abs(l)))
    throw ConfigError("path: grid does not reach the horizon");
}

}  // namespace mptp

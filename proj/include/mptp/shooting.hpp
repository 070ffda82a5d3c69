#pragma once

#include <Eigen/Dense>

#include "mptp/path.hpp"
#include "mptp/potential.hpp"

namespace mptp {

struct ShootingResult {
  Path path;                    // always finite; boundary x0 exact
  int iterations = 0;           // Newton iterations performed
  double endpoint_error = 0.0;  // |psi(l) - xl|
  bool converged = false;
};

// Two-point BVP psi'' = (1/2) grad|grad U|^2, psi(0)=x0, psi(l)=xl, solved by
// shooting on the initial velocity: forward Euler on (psi, v), Newton on
// v0 -> psi(l) - xl with forward-difference Jacobian (step 1e-6 per component,
// backward difference when the forward probe diverges) and a backtracking line
// search (halving, at most 20 halvings). Initial guess v0 = (xl - x0)/l; if
// its forward pass diverges the guess is halved until the pass stays finite
// (long-horizon escape makes the naive slope overshoot). Nonconvergence is
// structural: converged=false with the best finite path, never non-finite.
ShootingResult shoot_el(const Potential& p, const Eigen::VectorXd& x0, const Eigen::VectorXd& xl,
                        double l, double dt, double tol = 1e-4, int max_iter = 100);

}  // namespace mptp

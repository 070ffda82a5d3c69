#pragma once

#include <Eigen/Dense>

#include "mptp/ivp.hpp"
#include "mptp/potential.hpp"

namespace mptp {

// Short-horizon bridge-drift approximations around the free-Brownian pull.
struct ApproxSpec {
  enum class Scheme { free_bridge, appr1, appr2 };
  Scheme scheme = Scheme::free_bridge;
  Potential potential = Potential::double_well();
  Eigen::VectorXd xl;
  double l = 1.0;
  int quad_order = 16;  // appr2 inner integral only
};

// (t, x) -> (xl - x)/(l - t); the exact Brownian bridge drift.
DriftField free_bridge_drift(const Eigen::VectorXd& xl, double l);

// (xl - x)/(l - t) - (l - t)/4 * grad|grad U|^2(x).
DriftField appr1_drift(const ApproxSpec& spec);

// (xl - x)/(l - t) - (l - t)/2 * int_0^1 (1-u) grad|grad U|^2(xl u + x(1-u)) du,
// inner integral by fixed-order Gauss-Legendre; scalar potentials only.
DriftField appr2_drift(const ApproxSpec& spec);

}  // namespace mptp

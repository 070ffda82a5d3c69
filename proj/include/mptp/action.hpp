#pragma once

#include <optional>

#include "mptp/path.hpp"
#include "mptp/potential.hpp"

namespace mptp {

enum class QuadRule { left_point, trapezoid };

struct ActionReport {
  std::optional<double> om;   // absent when sigma was not supplied
  double fw_half = 0.0;       // continuous convention, with the 1/2
  double fw_paper_discrete = 0.0;  // no 1/2, left-endpoint drift
  int n_steps = 0;
  double dt = 0.0;
};

// (1/2) sum_i [ |(psi_i - psi_{i-1})/dt - grad U(psi_{i-1})|^2 / sigma^2
//              + lap U(psi_{i-1}) ] dt.
// The trapezoid rule exists for convergence studies only; the left-point rule
// is the default so OM and FW share the same discretization error.
double om_action(const Path& path, const Potential& p, double sigma,
                 QuadRule rule = QuadRule::left_point);

// sum_i |(psi_i - psi_{i-1})/dt - grad U(psi_{i-1})|^2 dt, no 1/2 factor.
// Stated for scalar paths; for k >= 2 the square generalizes to the squared
// Euclidean norm.
double fw_action_paper_discrete(const Path& path, const Potential& p);

// Continuous convention: half of fw_action_paper_discrete.
double fw_action(const Path& path, const Potential& p);

// max over interior nodes of |second difference / dt^2 - (1/2) grad|grad U|^2|.
double el_residual(const Path& path, const Potential& p);

ActionReport action_report(const Path& path, const Potential& p,
                           std::optional<double> sigma = std::nullopt);

}  // namespace mptp

#pragma once

#include <cstdint>

namespace mptp {

// Knobs for the mc-verify command; all have documented defaults and live under
// the optional "mc" object of the config document.
struct McOptions {
  long n = 200000;
  double delta = 0.2;
  double dt = 1e-2;            // sampling step; coarser than the solver grid
  double perturbation = 0.465;  // amplitude of the sin(pi t / l) bump on psi2
};

}  // namespace mptp

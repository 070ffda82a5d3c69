#pragma once

#include <utility>

#include "mptp/errors.hpp"

namespace mptp {

namespace detail {
struct GlPoint {
  double x, w;
};
// Nodes/weights on [-1, 1].
const GlPoint* gl_table(int order);  // throws ConfigError for unsupported order
}  // namespace detail

// Fixed-order Gauss-Legendre quadrature of f over [0, 1]; order in {4, 8, 16}.
// Exact for polynomials of degree <= 2*order - 1.
template <class F>
double gauss_legendre(F&& f, int order) {
  const detail::GlPoint* pts = detail::gl_table(order);
  double s = 0.0;
  for (int i = 0; i < order; ++i) {
    double u = 0.5 * (pts[i].x + 1.0);
    s += 0.5 * pts[i].w * f(u);
  }
  return s;
}

}  // namespace mptp

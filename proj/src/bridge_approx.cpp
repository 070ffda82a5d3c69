#include "mptp/bridge_approx.hpp"

#include "mptp/quadrature.hpp"

namespace mptp {

namespace {

void check_time(double t, double l, const char* who) {
  if (!(t >= 0) || !(t < l))
    throw SolverError(std::string(who) + ": singular at t >= l (t=" + std::to_string(t) + ")");
}

}  // namespace

DriftField free_bridge_drift(const Eigen::VectorXd& xl, double l) {
  if (!(l > 0)) throw ConfigError("free_bridge_drift: l must be positive");
  DriftField f;
  f.dim = static_cast<int>(xl.size());
  f.singular_at = l;
  f.eval = [xl, l](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    check_time(t, l, "free_bridge_drift");
    return (xl - x) / (l - t);
  };
  return f;
}

DriftField appr1_drift(const ApproxSpec& spec) {
  if (spec.scheme != ApproxSpec::Scheme::appr1) throw ConfigError("appr1_drift: wrong scheme tag");
  if (spec.xl.size() != spec.potential.dim()) throw ConfigError("appr1_drift: xl dimension");
  DriftField f;
  f.dim = spec.potential.dim();
  f.singular_at = spec.l;
  Potential p = spec.potential;
  Eigen::VectorXd xl = spec.xl;
  double l = spec.l;
  f.eval = [p, xl, l](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    check_time(t, l, "appr1_drift");
    return (xl - x) / (l - t) - 0.25 * (l - t) * grad_sq_gradient(p, x);
  };
  return f;
}

DriftField appr2_drift(const ApproxSpec& spec) {
  if (spec.scheme != ApproxSpec::Scheme::appr2) throw ConfigError("appr2_drift: wrong scheme tag");
  if (spec.potential.dim() != 1)
    throw ConfigError("appr2_drift: only scalar potentials are supported");
  if (spec.xl.size() != 1) throw ConfigError("appr2_drift: xl dimension");
  DriftField f;
  f.dim = 1;
  f.singular_at = spec.l;
  Potential p = spec.potential;
  double xl = spec.xl[0];
  double l = spec.l;
  int order = spec.quad_order;
  detail::gl_table(order);  // validate order up front
  f.eval = [p, xl, l, order](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    check_time(t, l, "appr2_drift");
    double xs = x[0];
    double corr = gauss_legendre(
        [&](double u) {
          Eigen::VectorXd z = Eigen::VectorXd::Constant(1, xl * u + xs * (1.0 - u));
          return (1.0 - u) * grad_sq_gradient(p, z)[0];
        },
        order);
    return Eigen::VectorXd::Constant(1, (xl - xs) / (l - t) - 0.5 * (l - t) * corr);
  };
  return f;
}

}  // namespace mptp

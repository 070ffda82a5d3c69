#include "mptp/shooting.hpp"

#include <optional>

#include "mptp/ivp.hpp"

namespace mptp {

namespace {

constexpr double kFdStep = 1e-6;
constexpr int kMaxHalvings = 20;
constexpr int kMaxRestores = 200;
constexpr double kEscape = 1e100;  // beyond this the cubic terms overflow anyway

}  // namespace

ShootingResult shoot_el(const Potential& p, const Eigen::VectorXd& x0, const Eigen::VectorXd& xl,
                        double l, double dt, double tol, int max_iter) {
  if (x0.size() != p.dim() || xl.size() != p.dim())
    throw ConfigError("shoot_el: endpoint dimension mismatch");
  if (!(tol > 0)) throw ConfigError("shoot_el: tol must be positive");
  const int n = grid_steps(l, dt);
  const int k = static_cast<int>(x0.size());

  // Forward Euler pass of (psi, v), v' = (1/2) grad|grad U|^2; nullopt when the
  // state escapes (EL dynamics blow up in finite time for overshooting slopes).
  auto forward = [&](const Eigen::VectorXd& v0,
                     Eigen::MatrixXd* store) -> std::optional<Eigen::VectorXd> {
    Eigen::VectorXd x = x0, v = v0;
    if (store) store->row(0) = x.transpose();
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd acc = 0.5 * grad_sq_gradient(p, x);
      x += dt * v;
      v += dt * acc;
      if (!x.allFinite() || !v.allFinite() || x.cwiseAbs().maxCoeff() > kEscape)
        return std::nullopt;
      if (store) store->row(i + 1) = x.transpose();
    }
    return x;
  };

  auto fallback = [&](int iterations) {
    ShootingResult r;
    r.path.dt = dt;
    r.path.values = x0.transpose().replicate(n + 1, 1);
    r.iterations = iterations;
    r.endpoint_error = (x0 - xl).norm();
    r.converged = false;
    return r;
  };

  Eigen::VectorXd v0 = (xl - x0) / l;
  std::optional<Eigen::VectorXd> end = forward(v0, nullptr);
  for (int r = 0; !end && r < kMaxRestores; ++r) {
    v0 *= 0.5;
    end = forward(v0, nullptr);
  }
  if (!end) return fallback(0);

  Eigen::VectorXd F = *end - xl;
  int it = 0;
  bool converged = F.norm() < tol;
  while (!converged && it < max_iter) {
    Eigen::MatrixXd J(k, k);
    bool jacobian_ok = true;
    for (int j = 0; j < k && jacobian_ok; ++j) {
      Eigen::VectorXd probe = v0;
      probe[j] += kFdStep;
      if (auto fwd = forward(probe, nullptr)) {
        J.col(j) = (*fwd - xl - F) / kFdStep;
      } else {
        probe[j] = v0[j] - kFdStep;
        auto bwd = forward(probe, nullptr);
        if (!bwd) {
          jacobian_ok = false;
          break;
        }
        J.col(j) = (F - (*bwd - xl)) / kFdStep;
      }
    }
    if (!jacobian_ok) break;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) break;
    Eigen::VectorXd newton = lu.solve(-F);
    double s = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h, s *= 0.5) {
      Eigen::VectorXd trial = v0 + s * newton;
      auto fwd = forward(trial, nullptr);
      if (fwd && (*fwd - xl).norm() < F.norm()) {
        v0 = trial;
        F = *fwd - xl;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // line search stalled
    ++it;
    converged = F.norm() < tol;
  }

  ShootingResult result;
  result.path.dt = dt;
  result.path.values.resize(n + 1, k);
  if (!forward(v0, &result.path.values)) return fallback(it);  // cannot happen: F was finite
  result.iterations = it;
  result.endpoint_error = F.norm();
  result.converged = converged;
  return result;
}

}  // namespace mptp

#include "mptp/linear.hpp"

#include <cmath>

#include "mptp/ivp.hpp"

namespace mptp {

namespace {

// (e^z - 1)/z, series near 0 to dodge cancellation.
double phi1(double z) {
  if (std::abs(z) < 1e-6) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return std::expm1(z) / z;
}

struct Eig {
  Eigen::MatrixXd Q;
  Eigen::VectorXd lam;
};

Eig decompose(const LinearModel& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(m.G);
  return {s.eigenvectors(), s.eigenvalues()};
}

// diag factors of int_0^tau Phi^-1(s) ds and int_0^tau Phi^-1 Phi^-T ds.
Eigen::VectorXd inv_flow_integral(const Eigen::VectorXd& lam, double tau) {
  return tau * lam.unaryExpr([tau](double l) { return phi1(-l * tau); });
}

Eigen::VectorXd gramian_diag(const Eigen::VectorXd& lam, double tau) {
  return tau * lam.unaryExpr([tau](double l) { return phi1(-2.0 * l * tau); });
}

}  // namespace

LinearModel make_linear_model(const Eigen::MatrixXd& G, const Eigen::VectorXd& a, double sigma) {
  if (G.rows() != G.cols() || a.size() != G.rows())
    throw ConfigError("linear model: G/a dimension mismatch");
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("linear model: G must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  if (eig.eigenvalues().cwiseAbs().minCoeff() <= 1e-12)
    throw ConfigError("linear model: G must be nondegenerate");
  if (!(sigma > 0)) throw ConfigError("linear model: sigma must be positive");
  return {G, a, sigma};
}

LinearModel to_linear_model(const Potential& p, double sigma) {
  switch (p.kind()) {
    case Potential::Kind::linear:
      return make_linear_model(p.G(), p.a(), sigma);
    case Potential::Kind::ou:
      return make_linear_model(Eigen::MatrixXd::Constant(1, 1, -p.theta()),
                               Eigen::VectorXd::Constant(1, p.theta() * p.mu_bar()), sigma);
    default:
      throw ConfigError("potential '" + p.id() + "' has no linear closed form");
  }
}

Eigen::MatrixXd state_transition(const LinearModel& m, double t) {
  if (!std::isfinite(t)) throw ConfigError("state_transition: t must be finite");
  Eig e = decompose(m);
  return e.Q * (e.lam.array() * t).exp().matrix().asDiagonal() * e.Q.transpose();
}

GaussianMoments moments(const LinearModel& m, const Eigen::VectorXd& x0, double t) {
  if (t < 0) throw SolverError("moments: t must be nonnegative");
  Eig e = decompose(m);
  Eigen::VectorXd a_eig = e.Q.transpose() * m.a;
  Eigen::VectorXd x0_eig = e.Q.transpose() * x0;
  Eigen::ArrayXd elt = (e.lam.array() * t).exp();
  Eigen::VectorXd mean_eig =
      (elt * (x0_eig.array() + inv_flow_integral(e.lam, t).array() * a_eig.array())).matrix();
  // sigma^2 Phi M Phi^T collapses per eigenvalue to sigma^2 (e^{2 lam t}-1)/(2 lam).
  Eigen::VectorXd cov_eig =
      m.sigma * m.sigma * (elt * elt * gramian_diag(e.lam, t).array()).matrix();
  GaussianMoments g;
  g.mean = e.Q * mean_eig;
  g.cov = e.Q * cov_eig.asDiagonal() * e.Q.transpose();
  g.t = t;
  return g;
}

double gaussian_density(const LinearModel& m, const Eigen::VectorXd& x, double t,
                        const Eigen::VectorXd& x0) {
  if (!(t > 0)) throw SolverError("gaussian_density: t must be positive (Dirac at t=0)");
  GaussianMoments g = moments(m, x0, t);
  Eigen::LLT<Eigen::MatrixXd> llt(g.cov);
  if (llt.info() != Eigen::Success)
    throw SolverError("gaussian_density: covariance not positive definite");
  Eigen::VectorXd d = x - g.mean;
  double quad = d.dot(llt.solve(d));
  double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double k = static_cast<double>(x.size());
  return std::exp(-0.5 * (quad + log_det + k * std::log(2.0 * M_PI)));
}

Eigen::VectorXd linear_bridge_drift(const LinearModel& m, const Eigen::VectorXd& xl, double l,
                                    double t, const Eigen::VectorXd& x) {
  if (!(t >= 0) || !(t < l))
    throw SolverError("linear_bridge_drift: singular at t >= l (t=" + std::to_string(t) + ")");
  double tau = l - t;
  Eig e = decompose(m);
  Eigen::VectorXd h = gramian_diag(e.lam, tau);
  if (h.minCoeff() < 1e-14)
    throw SolverError("linear_bridge_drift: Gramian singular at t=" + std::to_string(t));
  Eigen::ArrayXd y = (e.Q.transpose() * x).array();
  Eigen::ArrayXd yl = (e.Q.transpose() * xl).array();
  Eigen::ArrayXd a_eig = (e.Q.transpose() * m.a).array();
  Eigen::ArrayXd pull =
      ((-e.lam.array() * tau).exp() * yl - y - inv_flow_integral(e.lam, tau).array() * a_eig) /
      h.array();
  return e.Q * (e.lam.array() * y + a_eig + pull).matrix();
}

double ou_bridge_drift(double theta, double mu_bar, double /*sigma*/, double xl, double l,
                       double t, double x) {
  if (!(theta > 0)) throw ConfigError("ou_bridge_drift: theta must be positive");
  if (!(t >= 0) || !(t < l))
    throw SolverError("ou_bridge_drift: singular at t >= l (t=" + std::to_string(t) + ")");
  double tau = l - t;
  double em = std::exp(-theta * tau);
  double denom = -std::expm1(-2.0 * theta * tau);  // 1 - e^{-2 theta tau}
  double conditional_mean = em * x + mu_bar * (1.0 - em);
  return theta * (mu_bar - x) + 2.0 * theta * em * (xl - conditional_mean) / denom;
}

Path ou_analytic_path(double theta, double mu_bar, double /*sigma*/, double x0, double xl,
                      double l, double dt) {
  if (!(theta > 0)) throw ConfigError("ou_analytic_path: theta must be positive");
  int n = grid_steps(l, dt);
  Path path;
  path.dt = dt;
  path.values.resize(n + 1, 1);
  // Exact solution of the bridge ODE via the integrating factor e^{int P};
  // the antiderivatives evaluate to the two-sided form below (all exponents
  // nonpositive, so no overflow for any theta*l).
  double D = -std::expm1(-2.0 * theta * l);  // 1 - e^{-2 theta l}
  path.values(0, 0) = x0;
  for (int i = 1; i < n; ++i) {
    double t = i * dt;
    double tau = l - t;
    double from_start = (x0 - mu_bar) * std::exp(-theta * t) * -std::expm1(-2.0 * theta * tau);
    double from_end = (xl - mu_bar) * std::exp(-theta * tau) * -std::expm1(-2.0 * theta * t);
    path.values(i, 0) = mu_bar + (from_start + from_end) / D;
  }
  path.values(n, 0) = xl;
  return path;
}

GaussianMoments bridge_marginal(const LinearModel& m, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& xl, double l, double t) {
  if (!(t > 0) || !(t < l)) throw SolverError("bridge_marginal: t must lie strictly inside (0, l)");
  double tau = l - t;
  GaussianMoments fwd = moments(m, x0, t);
  GaussianMoments rem = moments(m, Eigen::VectorXd::Zero(x0.size()), tau);
  Eigen::MatrixXd phi_tau = state_transition(m, tau);
  // Remaining-time mean from state y is phi_tau y + r_tau.
  Eig e = decompose(m);
  Eigen::VectorXd r_tau =
      phi_tau * (e.Q * (inv_flow_integral(e.lam, tau).array() *
                        (e.Q.transpose() * m.a).array()).matrix());
  Eigen::LLT<Eigen::MatrixXd> llt_fwd(fwd.cov);
  Eigen::LLT<Eigen::MatrixXd> llt_rem(rem.cov);
  if (llt_fwd.info() != Eigen::Success || llt_rem.info() != Eigen::Success)
    throw SolverError("bridge_marginal: degenerate covariance");
  int k = static_cast<int>(x0.size());
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd precision =
      llt_fwd.solve(id) + phi_tau.transpose() * llt_rem.solve(phi_tau);
  Eigen::VectorXd rhs =
      llt_fwd.solve(fwd.mean) + phi_tau.transpose() * llt_rem.solve(xl - r_tau);
  Eigen::LLT<Eigen::MatrixXd> llt_prec(precision);
  GaussianMoments g;
  g.mean = llt_prec.solve(rhs);
  g.cov = llt_prec.solve(id);
  g.t = t;
  return g;
}

}  // namespace mptp

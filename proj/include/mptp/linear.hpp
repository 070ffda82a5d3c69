#pragma once

#include <Eigen/Dense>

#include "mptp/path.hpp"
#include "mptp/potential.hpp"

namespace mptp {

// Linear drift grad U = G x + a with symmetric nondegenerate G; all Gaussian
// closed forms (exponentials, Gramians) are evaluated in the eigenbasis of G.
struct LinearModel {
  Eigen::MatrixXd G;
  Eigen::VectorXd a;
  double sigma = 1.0;
};

// Validates symmetry (1e-12) and nondegeneracy (|lambda|_min > 1e-12).
LinearModel make_linear_model(const Eigen::MatrixXd& G, const Eigen::VectorXd& a, double sigma);

// Closed-form view of a "linear" or "ou" potential (ou: G = -theta, a = theta*mu_bar).
LinearModel to_linear_model(const Potential& p, double sigma);

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double t = 0.0;
};

// Phi(t) = exp(G t).
Eigen::MatrixXd state_transition(const LinearModel& m, double t);

// mean = Phi(t) (x0 + int_0^t Phi^-1 a); cov = sigma^2 Phi(t) [int_0^t Phi^-1 Phi^-T] Phi(t)^T.
GaussianMoments moments(const LinearModel& m, const Eigen::VectorXd& x0, double t);

// Transition density p(x, t | x0, 0); t > 0.
double gaussian_density(const LinearModel& m, const Eigen::VectorXd& x, double t,
                        const Eigen::VectorXd& x0);

// Bridge-conditioned drift: G x + a + M(l-t)^-1 (Phi(l-t)^-1 xl - x - int Phi^-1 a),
// where M(tau) is the Gramian int_0^tau Phi^-1 Phi^-T. Singular as t -> l.
Eigen::VectorXd linear_bridge_drift(const LinearModel& m, const Eigen::VectorXd& xl, double l,
                                    double t, const Eigen::VectorXd& x);

// Scalar OU bridge drift
//   theta (mu_bar - x) + 2 theta e^{-theta tau} [xl - (e^{-theta tau} x
//     + mu_bar (1 - e^{-theta tau}))] / (1 - e^{-2 theta tau}),  tau = l - t.
double ou_bridge_drift(double theta, double mu_bar, double sigma, double xl, double l, double t,
                       double x);

// Deterministic most-probable OU bridge path on the uniform grid with step dt;
// evaluated from the exact antiderivatives of the integrating-factor solution
// (the quadrature form is ill-conditioned near the pinned endpoint where the
// integrand grows like (l-s)^-2). Final node is xl exactly.
Path ou_analytic_path(double theta, double mu_bar, double sigma, double x0, double xl, double l,
                      double dt);

// Closed Gaussian marginal of the bridge at time t in (0, l):
// p(y,t|x0,0) p(xl,l|y,t) / p(xl,l|x0,0). Variance shrinks to 0 as t -> l.
GaussianMoments bridge_marginal(const LinearModel& m, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& xl, double l, double t);

}  // namespace mptp

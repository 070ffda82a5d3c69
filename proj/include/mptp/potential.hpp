#pragma once

#include <Eigen/Dense>
#include <string>

#include "mptp/errors.hpp"

namespace mptp {

// Scalar field U with analytic derivatives. The SDE drift convention is
// dX = grad U dt + sigma dW, so each builtin stores U with the sign that
// reproduces its intended drift (double_well: U = x^2/2 - x^4/4, so
// grad U = x - x^3 with stable equilibria at +-1).
class Potential {
 public:
  enum class Kind { free, linear, ou, double_well };

  static Potential free_field(int dim);
  static Potential linear(const Eigen::MatrixXd& G, const Eigen::VectorXd& a);
  static Potential ou(double theta, double mu_bar);
  static Potential double_well();

  Kind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  int dim() const { return dim_; }

  // Parameter access; only valid for the matching kind.
  double theta() const { return theta_; }
  double mu_bar() const { return mu_bar_; }
  const Eigen::MatrixXd& G() const { return G_; }
  const Eigen::VectorXd& a() const { return a_; }

 private:
  Potential() = default;
  Kind kind_ = Kind::free;
  std::string id_;
  int dim_ = 1;
  double theta_ = 0.0, mu_bar_ = 0.0;  // ou
  Eigen::MatrixXd G_;                  // linear
  Eigen::VectorXd a_;                  // linear
};

double potential_value(const Potential& p, const Eigen::VectorXd& x);
Eigen::VectorXd grad_potential(const Potential& p, const Eigen::VectorXd& x);
double laplacian_potential(const Potential& p, const Eigen::VectorXd& x);
// grad of |grad U|^2; the Euler-Lagrange right-hand side is half of this.
Eigen::VectorXd grad_sq_gradient(const Potential& p, const Eigen::VectorXd& x);

}  // namespace mptp

#include "mptp/potential.hpp"

namespace mptp {

namespace {

void check_dim(const Potential& p, const Eigen::VectorXd& x) {
  if (x.size() != p.dim())
    throw ConfigError("potential '" + p.id() + "': expected dimension " +
                      std::to_string(p.dim()) + ", got " + std::to_string(x.size()));
  if (!x.allFinite()) throw SolverError("potential '" + p.id() + "': non-finite input point");
}

}  // namespace

Potential Potential::free_field(int dim) {
  if (dim < 1) throw ConfigError("free potential: dim must be >= 1");
  Potential p;
  p.kind_ = Kind::free;
  p.id_ = "free";
  p.dim_ = dim;
  return p;
}

Potential Potential::linear(const Eigen::MatrixXd& G, const Eigen::VectorXd& a) {
  if (G.rows() != G.cols()) throw ConfigError("linear potential: G must be square");
  if (a.size() != G.rows()) throw ConfigError("linear potential: a/G dimension mismatch");
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("linear potential: G must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  if (eig.eigenvalues().cwiseAbs().minCoeff() <= 1e-12)
    throw ConfigError("linear potential: G must be nondegenerate");
  Potential p;
  p.kind_ = Kind::linear;
  p.id_ = "linear";
  p.dim_ = static_cast<int>(G.rows());
  p.G_ = G;
  p.a_ = a;
  return p;
}

Potential Potential::ou(double theta, double mu_bar) {
  if (!(theta > 0)) throw ConfigError("ou potential: theta must be positive");
  Potential p;
  p.kind_ = Kind::ou;
  p.id_ = "ou";
  p.dim_ = 1;
  p.theta_ = theta;
  p.mu_bar_ = mu_bar;
  return p;
}

Potential Potential::double_well() {
  Potential p;
  p.kind_ = Kind::double_well;
  p.id_ = "double_well";
  p.dim_ = 1;
  return p;
}

double potential_value(const Potential& p, const Eigen::VectorXd& x) {
  check_dim(p, x);
  switch (p.kind()) {
    case Potential::Kind::free:
      return 0.0;
    case Potential::Kind::linear:
      return 0.5 * x.dot(p.G() * x) + p.a().dot(x);
    case Potential::Kind::ou:
      return p.theta() * p.mu_bar() * x[0] - 0.5 * p.theta() * x[0] * x[0];
    case Potential::Kind::double_well:
      return 0.5 * x[0] * x[0] - 0.25 * std::pow(x[0], 4);
  }
  throw ConfigError("potential: unknown kind");
}

Eigen::VectorXd grad_potential(const Potential& p, const Eigen::VectorXd& x) {
  check_dim(p, x);
  switch (p.kind()) {
    case Potential::Kind::free:
      return Eigen::VectorXd::Zero(p.dim());
    case Potential::Kind::linear:
      return p.G() * x + p.a();
    case Potential::Kind::ou:
      return Eigen::VectorXd::Constant(1, p.theta() * (p.mu_bar() - x[0]));
    case Potential::Kind::double_well:
      return Eigen::VectorXd::Constant(1, x[0] - x[0] * x[0] * x[0]);
  }
  throw ConfigError("potential: unknown kind");
}

double laplacian_potential(const Potential& p, const Eigen::VectorXd& x) {
  check_dim(p, x);
  switch (p.kind()) {
    case Potential::Kind::free:
      return 0.0;
    case Potential::Kind::linear:
      return p.G().trace();
    case Potential::Kind::ou:
      return -p.theta();
    case Potential::Kind::double_well:
      return 1.0 - 3.0 * x[0] * x[0];
  }
  throw ConfigError("potential: unknown kind");
}

Eigen::VectorXd grad_sq_gradient(const Potential& p, const Eigen::VectorXd& x) {
  check_dim(p, x);
  switch (p.kind()) {
    case Potential::Kind::free:
      return Eigen::VectorXd::Zero(p.dim());
    case Potential::Kind::linear:
      // |Gx + a|^2 has gradient 2 G^T (Gx + a); G is symmetric.
      return 2.0 * p.G() * (p.G() * x + p.a());
    case Potential::Kind::ou: {
      double theta = p.theta();
      return Eigen::VectorXd::Constant(1, -2.0 * theta * theta * (p.mu_bar() - x[0]));
    }
    case Potential::Kind::double_well: {
      double g = x[0] - x[0] * x[0] * x[0];
      return Eigen::VectorXd::Constant(1, 2.0 * g * (1.0 - 3.0 * x[0] * x[0]));
    }
  }
  throw ConfigError("potential: unknown kind");
}

}  // namespace mptp

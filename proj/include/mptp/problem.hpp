#pragma once

#include <Eigen/Dense>
#include <string>

#include "mptp/mc_options.hpp"
#include "mptp/potential.hpp"

namespace mptp {

enum class Method { linear_bridge, ou_analytic, el_shooting, appr1, appr2 };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct SolverOptions {
  double tol = 1e-4;
  int max_iter = 100;
};

struct ProblemSpec {
  Potential potential = Potential::double_well();
  double sigma = 1.0;
  Eigen::VectorXd x0;
  Eigen::VectorXd xl;
  double l = 1.0;
  double dt = 1e-4;
  Method method = Method::el_shooting;
  SolverOptions solver;
  McOptions mc;
};

// Parses and validates a JSON config (see README for the schema). Unknown
// keys are rejected; defaults: dt=1e-4, sigma=1. Throws ConfigError with a
// field-level message.
ProblemSpec build_problem(const std::string& config_text);

// Inverse of build_problem: build_problem(serialize(s)) reproduces s.
std::string serialize(const ProblemSpec& spec);

// Applies a "dotted.key=value" override to raw config text (CLI --set).
std::string apply_override(const std::string& config_text, const std::string& assignment);

}  // namespace mptp

#include "mptp/problem.hpp"

#include <json.hpp>
#include <set>

namespace mptp {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("config: missing key '" + key + "' in " + where);
  if (!obj[key].is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return obj[key].get<double>();
}

Eigen::VectorXd parse_vector(const json& v, const std::string& key) {
  if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>());
  if (v.is_array()) {
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number())
        throw ConfigError("config: '" + key + "' must contain only numbers");
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    if (out.size() == 0) throw ConfigError("config: '" + key + "' must be nonempty");
    return out;
  }
  throw ConfigError("config: '" + key + "' must be a number or an array of numbers");
}

Potential parse_potential(const json& cfg, Eigen::Index fallback_dim) {
  if (!cfg.is_object()) throw ConfigError("config: 'potential' must be an object");
  reject_unknown_keys(cfg, {"id", "params"}, "'potential'");
  if (!cfg.contains("id") || !cfg["id"].is_string())
    throw ConfigError("config: 'potential.id' must be a string");
  std::string id = cfg["id"].get<std::string>();
  json params = cfg.value("params", json::object());
  if (!params.is_object()) throw ConfigError("config: 'potential.params' must be an object");

  if (id == "free") {
    reject_unknown_keys(params, {"dim"}, "'potential.params' (free)");
    int dim = params.contains("dim") ? params["dim"].get<int>()
                                     : static_cast<int>(fallback_dim);
    return Potential::free_field(dim);
  }
  if (id == "linear") {
    reject_unknown_keys(params, {"G", "a"}, "'potential.params' (linear)");
    if (!params.contains("G") || !params["G"].is_array())
      throw ConfigError("config: linear potential needs a matrix 'G'");
    const json& gj = params["G"];
    Eigen::Index k = static_cast<Eigen::Index>(gj.size());
    Eigen::MatrixXd G(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!gj[i].is_array() || static_cast<Eigen::Index>(gj[i].size()) != k)
        throw ConfigError("config: 'G' must be a square array of arrays");
      for (Eigen::Index j = 0; j < k; ++j) G(i, j) = gj[i][j].get<double>();
    }
    Eigen::VectorXd a = params.contains("a") ? parse_vector(params["a"], "potential.params.a")
                                             : Eigen::VectorXd::Zero(k);
    if (a.size() != k) throw ConfigError("config: 'a' dimension does not match 'G'");
    return Potential::linear(G, a);
  }
  if (id == "ou") {
    reject_unknown_keys(params, {"theta", "mu_bar"}, "'potential.params' (ou)");
    double theta = require_number(params, "theta", "'potential.params'");
    double mu_bar = require_number(params, "mu_bar", "'potential.params'");
    return Potential::ou(theta, mu_bar);
  }
  if (id == "double_well") {
    reject_unknown_keys(params, {}, "'potential.params' (double_well)");
    return Potential::double_well();
  }
  throw ConfigError("config: unknown potential id '" + id + "'");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::linear_bridge:
      return "linear_bridge";
    case Method::ou_analytic:
      return "ou_analytic";
    case Method::el_shooting:
      return "el_shooting";
    case Method::appr1:
      return "appr1";
    case Method::appr2:
      return "appr2";
  }
  throw ConfigError("method: unknown enum value");
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::linear_bridge, Method::ou_analytic, Method::el_shooting, Method::appr1,
                   Method::appr2})
    if (method_name(m) == name) return m;
  throw ConfigError("config: unknown method '" + name +
                    "' (expected linear_bridge, ou_analytic, el_shooting, appr1, or appr2)");
}

ProblemSpec build_problem(const std::string& config_text) {
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(cfg, {"potential", "sigma", "x0", "xl", "l", "dt", "method", "solver", "mc"},
                      "the top level");
  for (const char* key : {"potential", "x0", "xl", "l", "method"})
    if (!cfg.contains(key))
      throw ConfigError(std::string("config: missing key '") + key + "'");

  ProblemSpec spec;
  spec.x0 = parse_vector(cfg["x0"], "x0");
  spec.xl = parse_vector(cfg["xl"], "xl");
  spec.potential = parse_potential(cfg["potential"], spec.x0.size());
  spec.l = require_number(cfg, "l", "the top level");
  spec.dt = cfg.contains("dt") ? require_number(cfg, "dt", "the top level") : 1e-4;
  spec.sigma = cfg.contains("sigma") ? require_number(cfg, "sigma", "the top level") : 1.0;
  if (!cfg["method"].is_string()) throw ConfigError("config: 'method' must be a string");
  spec.method = parse_method(cfg["method"].get<std::string>());

  if (cfg.contains("solver")) {
    const json& s = cfg["solver"];
    if (!s.is_object()) throw ConfigError("config: 'solver' must be an object");
    reject_unknown_keys(s, {"tol", "max_iter"}, "'solver'");
    if (s.contains("tol")) spec.solver.tol = require_number(s, "tol", "'solver'");
    if (s.contains("max_iter")) spec.solver.max_iter = s["max_iter"].get<int>();
    if (!(spec.solver.tol > 0)) throw ConfigError("config: 'solver.tol' must be positive");
    if (spec.solver.max_iter < 0) throw ConfigError("config: 'solver.max_iter' must be >= 0");
  }
  if (cfg.contains("mc")) {
    const json& m = cfg["mc"];
    if (!m.is_object()) throw ConfigError("config: 'mc' must be an object");
    reject_unknown_keys(m, {"n", "delta", "dt", "perturbation"}, "'mc'");
    if (m.contains("n")) spec.mc.n = m["n"].get<long>();
    if (m.contains("delta")) spec.mc.delta = require_number(m, "delta", "'mc'");
    if (m.contains("dt")) spec.mc.dt = require_number(m, "dt", "'mc'");
    if (m.contains("perturbation"))
      spec.mc.perturbation = require_number(m, "perturbation", "'mc'");
    if (spec.mc.n < 1) throw ConfigError("config: 'mc.n' must be >= 1");
    if (!(spec.mc.delta > 0)) throw ConfigError("config: 'mc.delta' must be positive");
    if (!(spec.mc.dt > 0)) throw ConfigError("config: 'mc.dt' must be positive");
  }

  // ProblemSpec invariants.
  if (!(spec.l > 0)) throw ConfigError("config: 'l' must be positive");
  if (!(spec.dt > 0)) throw ConfigError("config: 'dt' must be positive");
  if (!(spec.dt < spec.l)) throw ConfigError("config: 'dt' must be smaller than 'l'");
  if (!(spec.sigma > 0)) throw ConfigError("config: 'sigma' must be positive");
  if (spec.x0.size() != spec.potential.dim())
    throw ConfigError("config: 'x0' dimension (" + std::to_string(spec.x0.size()) +
                      ") does not match potential dim (" + std::to_string(spec.potential.dim()) +
                      ")");
  if (spec.xl.size() != spec.potential.dim())
    throw ConfigError("config: 'xl' dimension (" + std::to_string(spec.xl.size()) +
                      ") does not match potential dim (" + std::to_string(spec.potential.dim()) +
                      ")");
  return spec;
}

std::string serialize(const ProblemSpec& spec) {
  json cfg;
  json pot;
  pot["id"] = spec.potential.id();
  json params = json::object();
  switch (spec.potential.kind()) {
    case Potential::Kind::free:
      params["dim"] = spec.potential.dim();
      break;
    case Potential::Kind::linear: {
      json rows = json::array();
      const Eigen::MatrixXd& G = spec.potential.G();
      for (Eigen::Index i = 0; i < G.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < G.cols(); ++j) row.push_back(G(i, j));
        rows.push_back(row);
      }
      params["G"] = rows;
      json a = json::array();
      for (Eigen::Index i = 0; i < spec.potential.a().size(); ++i)
        a.push_back(spec.potential.a()[i]);
      params["a"] = a;
      break;
    }
    case Potential::Kind::ou:
      params["theta"] = spec.potential.theta();
      params["mu_bar"] = spec.potential.mu_bar();
      break;
    case Potential::Kind::double_well:
      break;
  }
  pot["params"] = params;
  cfg["potential"] = pot;
  cfg["sigma"] = spec.sigma;
  json x0 = json::array(), xl = json::array();
  for (Eigen::Index i = 0; i < spec.x0.size(); ++i) x0.push_back(spec.x0[i]);
  for (Eigen::Index i = 0; i < spec.xl.size(); ++i) xl.push_back(spec.xl[i]);
  cfg["x0"] = x0;
  cfg["xl"] = xl;
  cfg["l"] = spec.l;
  cfg["dt"] = spec.dt;
  cfg["method"] = method_name(spec.method);
  cfg["solver"] = {{"tol", spec.solver.tol}, {"max_iter", spec.solver.max_iter}};
  cfg["mc"] = {{"n", spec.mc.n},
               {"delta", spec.mc.delta},
               {"dt", spec.mc.dt},
               {"perturbation", spec.mc.perturbation}};
  return cfg.dump(2) + "\n";
}

std::string apply_override(const std::string& config_text, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  std::string dotted = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  json parsed_value;
  try {
    parsed_value = json::parse(value);  // numbers, arrays, booleans
  } catch (const json::parse_error&) {
    parsed_value = value;  // bare strings like method names
  }
  json* node = &cfg;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    std::string key = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("--set: empty key segment in '" + dotted + "'");
    if (dot == std::string::npos) {
      (*node)[key] = parsed_value;
      break;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
  return cfg.dump(2) + "\n";
}

}  // namespace mptp

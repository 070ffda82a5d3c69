// Command-line front end: solve / action / table1 / mc-verify / density.
// Exit codes: 0 success, 1 config error, 2 solver error, 3 statistics error.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "mptp/action.hpp"
#include "mptp/bridge_approx.hpp"
#include "mptp/io.hpp"
#include "mptp/ivp.hpp"
#include "mptp/linear.hpp"
#include "mptp/mc.hpp"
#include "mptp/problem.hpp"
#include "mptp/shooting.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string config;
  std::string out = ".";
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  std::optional<double> dt;
  std::optional<std::string> method;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "problem config file (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", o.out, "output directory (created if missing)");
  cmd->add_option("--set", o.sets, "override a config entry, dotted.key=value")->take_all();
  cmd->add_option("--seed", o.seed, "RNG seed (mc-verify)");
  cmd->add_option("--dt", o.dt, "override the time step");
  cmd->add_option("--method", o.method, "override the solve method");
}

mptp::ProblemSpec load_problem(const CommonOpts& o) {
  std::string text = mptp::read_text_file(o.config);
  for (const auto& s : o.sets) text = mptp::apply_override(text, s);
  if (o.dt) text = mptp::apply_override(text, "dt=" + mptp::format_double(*o.dt));
  if (o.method) text = mptp::apply_override(text, "method=" + *o.method);
  return mptp::build_problem(text);
}

fs::path ensure_out_dir(const CommonOpts& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

struct SolveOutcome {
  mptp::Path path;
  int iterations = 0;
  double endpoint_error = 0.0;
};

SolveOutcome dispatch_solve(const mptp::ProblemSpec& spec) {
  using mptp::Method;
  SolveOutcome out;
  switch (spec.method) {
    case Method::linear_bridge: {
      mptp::LinearModel m = mptp::to_linear_model(spec.potential, spec.sigma);
      mptp::DriftField f;
      f.dim = spec.potential.dim();
      f.singular_at = spec.l;
      Eigen::VectorXd xl = spec.xl;
      double l = spec.l;
      f.eval = [m, xl, l](double t, const Eigen::VectorXd& x) {
        return mptp::linear_bridge_drift(m, xl, l, t, x);
      };
      out.path = mptp::integrate_ivp(f, spec.x0, spec.l, spec.dt, spec.xl);
      break;
    }
    case Method::ou_analytic: {
      if (spec.potential.kind() != mptp::Potential::Kind::ou)
        throw mptp::ConfigError("method ou_analytic requires the 'ou' potential");
      out.path = mptp::ou_analytic_path(spec.potential.theta(), spec.potential.mu_bar(),
                                        spec.sigma, spec.x0[0], spec.xl[0], spec.l, spec.dt);
      break;
    }
    case Method::el_shooting: {
      mptp::ShootingResult r = mptp::shoot_el(spec.potential, spec.x0, spec.xl, spec.l, spec.dt,
                                              spec.solver.tol, spec.solver.max_iter);
      if (!r.converged)
        throw mptp::SolverError("el_shooting did not converge: endpoint error " +
                                mptp::format_double(r.endpoint_error) + " after " +
                                std::to_string(r.iterations) + " Newton iterations");
      out.path = r.path;
      out.iterations = r.iterations;
      out.endpoint_error = r.endpoint_error;
      return out;
    }
    case Method::appr1:
    case Method::appr2: {
      if (spec.l > 10.0)
        std::cerr << "warning: appr drifts are short-horizon approximations; "
                     "values degrade for l > 10\n";
      mptp::ApproxSpec a;
      a.scheme = spec.method == Method::appr1 ? mptp::ApproxSpec::Scheme::appr1
                                              : mptp::ApproxSpec::Scheme::appr2;
      a.potential = spec.potential;
      a.xl = spec.xl;
      a.l = spec.l;
      mptp::DriftField f =
          spec.method == Method::appr1 ? mptp::appr1_drift(a) : mptp::appr2_drift(a);
      out.path = mptp::integrate_ivp(f, spec.x0, spec.l, spec.dt, spec.xl);
      break;
    }
  }
  out.endpoint_error = (out.path.at(out.path.n_steps()) - spec.xl).norm();
  return out;
}

json summary_json(const std::string& method, const mptp::ProblemSpec& spec,
                  const mptp::ActionReport& report, double endpoint_error, int iterations) {
  json s;
  s["method"] = method;
  s["potential"] = spec.potential.id();
  s["l"] = spec.l;
  s["dt"] = report.dt;
  s["sigma"] = spec.sigma;
  s["n_steps"] = report.n_steps;
  s["om_action"] = report.om ? json(*report.om) : json(nullptr);
  s["fw_action_half"] = report.fw_half;
  s["fw_action_paper_discrete"] = report.fw_paper_discrete;
  s["endpoint_error"] = endpoint_error;
  s["iterations"] = iterations;
  return s;
}

int run_solve(const CommonOpts& o) {
  mptp::ProblemSpec spec = load_problem(o);
  fs::path dir = ensure_out_dir(o);
  SolveOutcome res = dispatch_solve(spec);
  mptp::ActionReport report = mptp::action_report(res.path, spec.potential, spec.sigma);
  mptp::write_path_csv(res.path, (dir / "path.csv").string());
  json s = summary_json(mptp::method_name(spec.method), spec, report, res.endpoint_error,
                        res.iterations);
  mptp::write_text_file((dir / "summary").string(), s.dump(2) + "\n");
  return 0;
}

int run_action(const CommonOpts& o, const std::string& path_file) {
  mptp::ProblemSpec spec = load_problem(o);
  fs::path dir = ensure_out_dir(o);
  mptp::Path path = mptp::read_path_csv(path_file);
  if (path.dim() != spec.potential.dim())
    throw mptp::ConfigError("action: path dimension does not match the potential");
  mptp::ActionReport report = mptp::action_report(path, spec.potential, spec.sigma);
  double endpoint_error = (path.at(path.n_steps()) - spec.xl).norm();
  json s = summary_json("action", spec, report, endpoint_error, 0);
  mptp::write_text_file((dir / "summary").string(), s.dump(2) + "\n");
  return 0;
}

// Table of discrete FW action values for the three approximate routes on the
// double-well transition -1 -> 1.
int run_table1(const CommonOpts& o) {
  const std::vector<double> horizons = {1, 2, 4, 7, 10, 12, 15};
  const double dt = o.dt.value_or(1e-4);
  fs::path dir = ensure_out_dir(o);
  mptp::Potential dw = mptp::Potential::double_well();
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, -1.0);
  Eigen::VectorXd xl = Eigen::VectorXd::Constant(1, 1.0);

  std::string csv = "method";
  for (double l : horizons) csv += ",l=" + mptp::format_double(l);
  csv += "\n";
  for (const std::string& row : {std::string("appr1"), std::string("appr2"),
                                 std::string("shoot")}) {
    csv += row;
    for (double l : horizons) {
      std::string cell;
      if (row == "shoot") {
        mptp::ShootingResult r = mptp::shoot_el(dw, x0, xl, l, dt);
        cell = r.converged ? mptp::format_double(mptp::fw_action_paper_discrete(r.path, dw))
                           : "NC";
      } else {
        mptp::ApproxSpec a;
        a.scheme = row == "appr1" ? mptp::ApproxSpec::Scheme::appr1
                                  : mptp::ApproxSpec::Scheme::appr2;
        a.potential = dw;
        a.xl = xl;
        a.l = l;
        mptp::DriftField f = row == "appr1" ? mptp::appr1_drift(a) : mptp::appr2_drift(a);
        mptp::Path p = mptp::integrate_ivp(f, x0, l, dt, xl);
        cell = mptp::format_double(mptp::fw_action_paper_discrete(p, dw));
      }
      csv += "," + cell;
    }
    csv += "\n";
  }
  mptp::write_text_file((dir / "table1.csv").string(), csv);
  return 0;
}

json tube_json(const mptp::TubeEstimate& t) {
  return json{{"delta", t.delta}, {"hits", t.hits},   {"n", t.n},
              {"p_hat", t.p_hat}, {"ci95", t.ci95}};
}

json ratio_json(const mptp::RatioEstimate& r) {
  return json{{"tube_mptp", tube_json(r.tube1)},
              {"tube_perturbed", tube_json(r.tube2)},
              {"log_ratio", r.log_ratio},
              {"ci95", r.ci95},
              {"diverged", r.diverged}};
}

int run_mc_verify(const CommonOpts& o) {
  mptp::ProblemSpec spec = load_problem(o);
  fs::path dir = ensure_out_dir(o);
  if (spec.potential.dim() != 1)
    throw mptp::ConfigError("mc-verify: scalar problems only");

  // psi1: the most probable path on the sampling grid; psi2: the same path
  // plus an endpoint-preserving sine bump.
  double mc_dt = spec.mc.dt;
  int steps = mptp::grid_steps(spec.l, mc_dt);
  mptp::Path psi1;
  if (spec.potential.kind() == mptp::Potential::Kind::ou) {
    psi1 = mptp::ou_analytic_path(spec.potential.theta(), spec.potential.mu_bar(), spec.sigma,
                                  spec.x0[0], spec.xl[0], spec.l, mc_dt);
  } else if (spec.potential.kind() == mptp::Potential::Kind::free) {
    psi1.dt = mc_dt;
    psi1.values.resize(steps + 1, 1);
    for (int i = 0; i <= steps; ++i) {
      double t = i * mc_dt;
      psi1.values(i, 0) = spec.xl[0] + (spec.x0[0] - spec.xl[0]) * (spec.l - t) / spec.l;
    }
  } else {
    throw mptp::ConfigError("mc-verify: potential must be 'ou' or 'free'");
  }
  mptp::Path psi2 = psi1;
  for (int i = 1; i < steps; ++i)
    psi2.values(i, 0) += spec.mc.perturbation * std::sin(M_PI * i * mc_dt / spec.l);

  mptp::OmRatioReport rep =
      mptp::om_ratio_check(spec.potential, spec.sigma, spec.x0, spec.xl, spec.l, mc_dt, psi1,
                           psi2, spec.mc.delta, spec.mc.n, o.seed);

  json r;
  r["potential"] = spec.potential.id();
  r["sigma"] = spec.sigma;
  r["x0"] = spec.x0[0];
  r["xl"] = spec.xl[0];
  r["l"] = spec.l;
  r["mc_dt"] = rep.mc_dt;
  r["n"] = rep.n;
  r["seed"] = rep.seed;
  r["perturbation"] = spec.mc.perturbation;
  r["delta_requested"] = rep.delta_requested;
  r["delta_used"] = rep.delta_used;
  r["retries"] = rep.retries;
  r["ds_om"] = rep.ds_om;
  r["unconditioned"] = ratio_json(rep.unconditioned);
  r["bridge"] = ratio_json(rep.bridge);
  r["log_ratio_gap_between_ensembles"] =
      std::abs(rep.unconditioned.log_ratio - rep.bridge.log_ratio);
  mptp::write_text_file((dir / "mc_report").string(), r.dump(2) + "\n");
  return 0;
}

int run_density(const CommonOpts& o) {
  mptp::ProblemSpec spec = load_problem(o);
  fs::path dir = ensure_out_dir(o);
  mptp::LinearModel m = mptp::to_linear_model(spec.potential, spec.sigma);  // rejects nonlinear
  if (spec.potential.dim() != 1)
    throw mptp::ConfigError("density: scalar models only (grid over (t, x))");

  // Time slices strictly inside (0, l); x range covers both endpoints' spread.
  const int nt = 49, nx = 241;
  double sd_max = 0.0, mean_lo = spec.x0[0], mean_hi = spec.x0[0];
  for (int j = 1; j <= nt; ++j) {
    double t = spec.l * j / (nt + 1);
    mptp::GaussianMoments g = mptp::moments(m, spec.x0, t);
    sd_max = std::max(sd_max, std::sqrt(g.cov(0, 0)));
    mean_lo = std::min(mean_lo, g.mean[0]);
    mean_hi = std::max(mean_hi, g.mean[0]);
  }
  mean_lo = std::min(mean_lo, spec.xl[0]);
  mean_hi = std::max(mean_hi, spec.xl[0]);
  double x_lo = mean_lo - 6.0 * sd_max, x_hi = mean_hi + 6.0 * sd_max;

  std::string csv = "t,x,p_transition,p_bridge_marginal\n";
  for (int j = 1; j <= nt; ++j) {
    double t = spec.l * j / (nt + 1);
    mptp::GaussianMoments bm = mptp::bridge_marginal(m, spec.x0, spec.xl, spec.l, t);
    double bsd = std::sqrt(bm.cov(0, 0));
    for (int i = 0; i < nx; ++i) {
      double x = x_lo + (x_hi - x_lo) * i / (nx - 1);
      Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
      double pt = mptp::gaussian_density(m, xv, t, spec.x0);
      double d = x - bm.mean[0];
      double pb = std::exp(-0.5 * d * d / bm.cov(0, 0)) / (bsd * std::sqrt(2.0 * M_PI));
      csv += mptp::format_double(t);
      csv += ",";
      csv += mptp::format_double(x);
      csv += ",";
      csv += mptp::format_double(pt);
      csv += ",";
      csv += mptp::format_double(pb);
      csv += "\n";
    }
  }
  mptp::write_text_file((dir / "density.csv").string(), csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"most probable transition paths of gradient diffusions"};
  app.require_subcommand(1);

  CommonOpts solve_o, action_o, table_o, mc_o, density_o;
  std::string action_path;

  CLI::App* solve = app.add_subcommand("solve", "compute a transition path and its actions");
  add_common(solve, solve_o, true);
  CLI::App* action =
      app.add_subcommand("action", "evaluate action functionals of a stored path");
  add_common(action, action_o, true);
  action->add_option("--path", action_path, "path.csv to evaluate")->required();
  CLI::App* table = app.add_subcommand("table1", "double-well action table for all routes");
  add_common(table, table_o, false);
  CLI::App* mc = app.add_subcommand("mc-verify", "tube-probability ratio vs action difference");
  add_common(mc, mc_o, true);
  CLI::App* density = app.add_subcommand("density", "transition and bridge densities on a grid");
  add_common(density, density_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are config errors
  }

  try {
    if (solve->parsed()) return run_solve(solve_o);
    if (action->parsed()) return run_action(action_o, action_path);
    if (table->parsed()) return run_table1(table_o);
    if (mc->parsed()) return run_mc_verify(mc_o);
    if (density->parsed()) return run_density(density_o);
  } catch (const mptp::Error& e) {
    json err;
    err["error"] = e.what();
    err["kind"] = e.kind() == mptp::ErrorKind::config
                      ? "config"
                      : (e.kind() == mptp::ErrorKind::solver ? "solver" : "statistics");
    std::cerr << err.dump() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "config"}}.dump() << "\n";
    return 1;
  }
  return 1;
}

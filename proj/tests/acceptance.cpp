// Acceptance gate: one line per criterion, [PASS]/[FAIL], nonzero exit on any
// failure. argv[1] = path to the command-line binary (used by criteria 1 and 8).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mptp/action.hpp"
#include "mptp/bridge_approx.hpp"
#include "mptp/ivp.hpp"
#include "mptp/linear.hpp"
#include "mptp/mc.hpp"
#include "mptp/quadrature.hpp"
#include "mptp/shooting.hpp"

namespace fs = std::filesystem;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using mptp::Potential;

namespace {

std::string g_bin;
fs::path g_dir;
int g_failed = 0;

VectorXd vec1(double x) { return VectorXd::Constant(1, x); }

void report(int num, bool pass, const std::string& what, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << num << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failed;
}

void run_criterion(int num, const std::string& what,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(num, pass, what, detail);
}

int run_cli(const std::string& args) {
  int rc = std::system((g_bin + " " + args).c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: the double-well action table ------------------------------

bool table_regression(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  fs::path out = g_dir / "c1";
  if (run_cli("table1 --out " + out.string()) != 0) {
    detail = "table1 command failed";
    return false;
  }
  double runtime = seconds_since(t0);

  std::ifstream in(out / "table1.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  if (rows.size() != 3 || rows[0].size() != 8) {
    detail = "unexpected table shape";
    return false;
  }

  const double kTol = 0.02;
  // reference values frozen from the original experiment; l=12 shooting may
  // legitimately be "NC" or any converged value <= 1.05
  const double ref1[7] = {4.0784, 2.1716, 1.4963, 1.4936, 1.4943, 1.4945, 1.4946};
  const double ref2[7] = {4.0760, 2.1510, 1.2940, 1.0510, 1.0264, 1.0356, 1.1225};
  const double refs[7] = {4.0765, 2.1511, 1.2939, 1.0475, 1.0072, -1.0, 1.0003};

  std::ostringstream d;
  bool ok = true;
  for (int j = 0; j < 7; ++j) {
    double a1 = std::stod(rows[0][j + 1]);
    double a2 = std::stod(rows[1][j + 1]);
    if (std::abs(a1 - ref1[j]) > kTol || std::abs(a2 - ref2[j]) > kTol) ok = false;
    const std::string& sc = rows[2][j + 1];
    if (j == 5) {  // l=12
      if (sc != "NC" && !(std::stod(sc) <= 1.05)) ok = false;
    } else {
      if (sc == "NC" || std::abs(std::stod(sc) - refs[j]) > kTol) ok = false;
    }
  }
  if (runtime >= 120.0) ok = false;
  d << "21 cells within 0.02, runtime " << runtime << " s";
  detail = d.str();
  return ok;
}

// ---- criterion 2: ou bridge vs shooting --------------------------------------

bool ou_route_agreement(std::string& detail) {
  double theta = 2.0, mu = 1.0, sigma = 1.0, dt = 1e-4;
  VectorXd x0 = vec1(0.0), xl = vec1(2.0);
  mptp::LinearModel m = mptp::to_linear_model(Potential::ou(theta, mu), sigma);
  double worst = 0.0;
  for (double l : {2.0, 3.0, 4.0}) {
    mptp::DriftField f;
    f.dim = 1;
    f.singular_at = l;
    f.eval = [&](double t, const VectorXd& x) {
      return mptp::linear_bridge_drift(m, xl, l, t, x);
    };
    mptp::Path bridge = mptp::integrate_ivp(f, x0, l, dt, xl);
    mptp::ShootingResult r = mptp::shoot_el(Potential::ou(theta, mu), x0, xl, l, dt);
    if (!r.converged) {
      detail = "shooting failed at l=" + std::to_string(l);
      return false;
    }
    worst = std::max(worst, mptp::sup_distance(bridge, r.path));
  }
  std::ostringstream d;
  d << "sup distance " << worst;
  detail = d.str();
  return worst <= 1e-3;
}

// ---- criterion 3: coupled 2-d bridge vs closed-form solution -----------------

bool coupled_2d(std::string& detail) {
  MatrixXd G(2, 2);
  G << 0, 1, 1, 0;
  mptp::LinearModel m = mptp::make_linear_model(G, VectorXd::Zero(2), 1.0);
  double dt = 1e-4, worst = 0.0;
  VectorXd x0(2);
  x0 << 1.0, -1.0;
  std::vector<VectorXd> goals;
  VectorXd xl1(2), xl2(2);
  xl1 << -1.0, 1.0;
  xl2 << 1.0, 1.0;
  goals.push_back(xl1);
  goals.push_back(xl2);
  for (const VectorXd& xl : goals)
    for (double l : {2.0, 3.0, 4.0}) {
      mptp::DriftField f;
      f.dim = 2;
      f.singular_at = l;
      f.eval = [&](double t, const VectorXd& x) {
        return mptp::linear_bridge_drift(m, xl, l, t, x);
      };
      mptp::Path p = mptp::integrate_ivp(f, x0, l, dt, xl);
      for (int i = 0; i <= p.n_steps(); ++i) {
        double t = i * dt;
        for (int c = 0; c < 2; ++c) {
          double exact = (xl[c] * std::sinh(t) + x0[c] * std::sinh(l - t)) / std::sinh(l);
          worst = std::max(worst, std::abs(p.values(i, c) - exact));
        }
      }
    }
  std::ostringstream d;
  d << "sup distance " << worst;
  detail = d.str();
  return worst <= 1e-3;
}

// ---- criterion 4: free-motion bridge straight line ---------------------------

bool free_bridge_line(std::string& detail) {
  double dt = 1e-4;
  struct Case {
    double x0, xl, l;
  };
  double worst_ratio = 0.0;
  for (const Case& c : {Case{0.0, 2.0, 2.0}, Case{1.0, -1.0, 1.0}}) {
    mptp::DriftField f = mptp::free_bridge_drift(vec1(c.xl), c.l);
    mptp::Path p = mptp::integrate_ivp(f, vec1(c.x0), c.l, dt, vec1(c.xl));
    double worst = 0.0;
    for (int i = 0; i <= p.n_steps(); ++i) {
      double line = c.xl + (c.x0 - c.xl) * (c.l - i * dt) / c.l;
      worst = std::max(worst, std::abs(p.values(i, 0) - line));
    }
    worst_ratio = std::max(worst_ratio, worst / (2.0 * dt * std::abs(c.xl - c.x0) / c.l));
  }
  std::ostringstream d;
  d << "deviation at " << worst_ratio << " of the allowed band";
  detail = d.str();
  return worst_ratio <= 1.0;
}

// ---- criterion 5: property suites --------------------------------------------

bool property_suites(std::string& detail) {
  std::ostringstream bad;

  // finite-difference oracles for all builtin potentials
  std::vector<Potential> pots;
  pots.push_back(Potential::free_field(2));
  pots.push_back(Potential::double_well());
  pots.push_back(Potential::ou(2.0, 1.0));
  MatrixXd Gq(2, 2);
  Gq << -1.0, 0.5, 0.5, -2.0;
  VectorXd aq(2);
  aq << 0.3, -0.7;
  pots.push_back(Potential::linear(Gq, aq));
  std::mt19937 rng(1234);
  for (const Potential& p : pots) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
      VectorXd x(p.dim());
      for (int i = 0; i < p.dim(); ++i) x[i] = u(rng);
      auto value = [&](const VectorXd& y) { return mptp::potential_value(p, y); };
      auto gradsq = [&](const VectorXd& y) {
        return mptp::grad_potential(p, y).squaredNorm();
      };
      VectorXd g = mptp::grad_potential(p, x);
      VectorXd gfd(p.dim());
      double lap_fd = 0.0;
      for (int i = 0; i < p.dim(); ++i) {
        VectorXd xp = x, xm = x;
        xp[i] += 1e-6;
        xm[i] -= 1e-6;
        gfd[i] = (value(xp) - value(xm)) / 2e-6;
        VectorXd hp = x, hm = x;
        hp[i] += 1e-4;
        hm[i] -= 1e-4;
        lap_fd += (value(hp) - 2.0 * value(x) + value(hm)) / 1e-8;
      }
      if ((g - gfd).norm() > 1e-6 * (1.0 + g.norm())) bad << "grad-fd(" << p.id() << ") ";
      if (std::abs(mptp::laplacian_potential(p, x) - lap_fd) >
          1e-6 * (1.0 + std::abs(lap_fd)))
        bad << "laplacian-fd(" << p.id() << ") ";
      VectorXd gs = mptp::grad_sq_gradient(p, x);
      VectorXd gsfd(p.dim());
      for (int i = 0; i < p.dim(); ++i) {
        VectorXd xp = x, xm = x;
        xp[i] += 1e-6;
        xm[i] -= 1e-6;
        gsfd[i] = (gradsq(xp) - gradsq(xm)) / 2e-6;
      }
      if ((gs - gsfd).norm() > 1e-6 * (1.0 + gs.norm())) bad << "gsg-fd(" << p.id() << ") ";
      if (bad.tellp() > 0) break;
    }
  }

  // flow identities
  MatrixXd G(2, 2);
  G << 0, 1, 1, 0;
  mptp::LinearModel m = mptp::make_linear_model(G, VectorXd::Zero(2), 0.8);
  std::uniform_real_distribution<double> ut(0.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    double s = ut(rng), t = ut(rng);
    MatrixXd lhs = mptp::state_transition(m, s + t);
    MatrixXd rhs = mptp::state_transition(m, s) * mptp::state_transition(m, t);
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, lhs.norm()))
      bad << "semigroup ";
    MatrixXd id = mptp::state_transition(m, t) * mptp::state_transition(m, -t);
    if ((id - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) bad << "inverse ";
  }

  // covariance flow satisfies the Lyapunov equation
  for (double t : {0.3, 0.9, 1.7}) {
    double h = 1e-4;
    MatrixXd sp = mptp::moments(m, VectorXd::Zero(2), t + h).cov;
    MatrixXd sm = mptp::moments(m, VectorXd::Zero(2), t - h).cov;
    MatrixXd mid = mptp::moments(m, VectorXd::Zero(2), t).cov;
    MatrixXd rhs = m.G * mid + mid * m.G.transpose() +
                   m.sigma * m.sigma * MatrixXd::Identity(2, 2);
    if (((sp - sm) / (2.0 * h) - rhs).norm() > 1e-6 * rhs.norm()) bad << "lyapunov ";
  }

  // exact additivity on dyadic data
  {
    Potential dw = Potential::double_well();
    mptp::Path p;
    p.dt = 0.25;
    p.values.resize(9, 1);
    for (int i = 0; i <= 8; ++i) p.values(i, 0) = -1.0 + 0.25 * i;
    mptp::Path left, right;
    left.dt = right.dt = 0.25;
    left.values = p.values.topRows(5);
    right.t0 = 1.0;
    right.values = p.values.bottomRows(5);
    double whole = mptp::fw_action_paper_discrete(p, dw);
    double parts = mptp::fw_action_paper_discrete(left, dw) +
                   mptp::fw_action_paper_discrete(right, dw);
    if (whole != parts) bad << "additivity ";
  }

  // quadrature polynomial exactness (degree-6 integrand, exact value -41/420)
  {
    Potential dw = Potential::double_well();
    auto f = [&](double u) {
      double z = u + 0.5 * (1.0 - u);
      return (1.0 - u) * mptp::grad_sq_gradient(dw, vec1(z))[0];
    };
    for (int order : {4, 8, 16})
      if (std::abs(mptp::gauss_legendre(f, order) + 41.0 / 420.0) > 1e-12)
        bad << "quadrature ";
  }

  // first-order convergence of the forward scheme against the closed-form path
  {
    double theta = 2.0, mu = 1.0, sigma = 1.0, x0 = 0.0, xl = 2.0, l = 2.0;
    auto err = [&](double dt) {
      mptp::DriftField f;
      f.dim = 1;
      f.singular_at = l;
      f.eval = [&](double t, const VectorXd& x) {
        return vec1(mptp::ou_bridge_drift(theta, mu, sigma, xl, l, t, x[0]));
      };
      mptp::Path p = mptp::integrate_ivp(f, vec1(x0), l, dt, vec1(xl));
      return mptp::sup_distance(p, mptp::ou_analytic_path(theta, mu, sigma, x0, xl, l, dt));
    };
    double ratio = err(2e-3) / err(1e-3);
    if (std::abs(ratio - 2.0) > 0.2) bad << "euler-order ";
  }

  detail = bad.tellp() > 0 ? "failing: " + bad.str() : "all sub-suites green";
  return bad.tellp() == 0;
}

// ---- criterion 6: tube-probability ratios vs action differences --------------

bool mc_equivalence(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  double theta = 2.0, mu = 1.0, sigma = 1.0, x0 = 0.0, xl = 1.0, l = 1.0, dt = 1e-2;
  long n = 200000;
  mptp::Path psi1 = mptp::ou_analytic_path(theta, mu, sigma, x0, xl, l, dt);
  mptp::Path psi2 = psi1;
  for (int i = 1; i < psi2.n_steps(); ++i)
    psi2.values(i, 0) += 0.465 * std::sin(M_PI * i * dt / l);

  mptp::OmRatioReport r =
      mptp::om_ratio_check(Potential::ou(theta, mu), sigma, vec1(x0), vec1(xl), l, dt,
                           psi1, psi2, 0.2, n, 20260815ULL);
  double runtime = seconds_since(t0);

  bool ds_in_band = r.ds_om >= 0.5 && r.ds_om <= 2.0;
  double gap_u = std::abs(r.unconditioned.log_ratio - r.ds_om);
  double gap_b = std::abs(r.bridge.log_ratio - r.ds_om);
  double slack_u = std::max(0.5, 3.0 * r.unconditioned.ci95);
  double slack_b = std::max(0.5, 3.0 * r.bridge.ci95);
  double cross = std::abs(r.unconditioned.log_ratio - r.bridge.log_ratio);
  double cross_ci = r.unconditioned.ci95 + r.bridge.ci95;

  std::ostringstream d;
  d << "dS=" << r.ds_om << ", gaps " << gap_u << "/" << gap_b << " vs slack " << slack_u
    << "/" << slack_b << ", ensembles differ by " << cross << " vs " << cross_ci
    << ", delta widened to " << r.delta_used << ", runtime " << runtime << " s";
  detail = d.str();
  return ds_in_band && gap_u <= slack_u && gap_b <= slack_b && cross <= cross_ci &&
         runtime < 300.0;
}

// ---- criterion 7: sampled bridge marginal vs closed gaussian -----------------

bool bridge_marginal_ks(std::string& detail) {
  double theta = 2.0, mu = 1.0, sigma = 1.0, x0 = 0.0, xl = 2.0, l = 1.0, dt = 1e-3;
  long n = 100000;
  mptp::Ensemble e = mptp::sample_ou_bridge(theta, mu, sigma, x0, xl, l, dt, n, 7);
  mptp::LinearModel m = mptp::make_linear_model(MatrixXd::Constant(1, 1, -theta),
                                                vec1(theta * mu), sigma);
  mptp::GaussianMoments g = mptp::bridge_marginal(m, vec1(x0), vec1(xl), l, l / 2.0);
  int mid = e.paths[0].n_steps() / 2;
  std::vector<double> xs(e.paths.size());
  for (size_t i = 0; i < e.paths.size(); ++i) xs[i] = e.paths[i].values(mid, 0);
  std::sort(xs.begin(), xs.end());
  double sd = std::sqrt(g.cov(0, 0)), ks = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double cdf = 0.5 * std::erfc(-(xs[i] - g.mean[0]) / (sd * std::sqrt(2.0)));
    ks = std::max(ks, std::max(std::abs(cdf - static_cast<double>(i) / xs.size()),
                               std::abs(cdf - static_cast<double>(i + 1) / xs.size())));
  }
  std::ostringstream d;
  d << "KS distance " << ks << " at n=" << n;
  detail = d.str();
  return ks <= 0.02;
}

// ---- criterion 8: robustness and exit codes -----------------------------------

bool robustness(std::string& detail) {
  fs::path dir = g_dir / "c8";
  fs::create_directories(dir);
  auto cfg = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name);
    out << text;
    return (dir / name).string();
  };
  std::string ou = cfg("ou.json", R"({"potential": {"id": "ou", "params":
    {"theta": 2.0, "mu_bar": 1.0}}, "x0": 0.0, "xl": 2.0, "l": 1.0, "dt": 0.001,
    "method": "ou_analytic"})");
  std::string dw = cfg("dw.json", R"({"potential": {"id": "double_well", "params": {}},
    "x0": -1.0, "xl": 1.0, "l": 4.0, "dt": 0.001, "method": "el_shooting"})");
  std::string mc = cfg("mc.json", R"({"potential": {"id": "ou", "params":
    {"theta": 2.0, "mu_bar": 1.0}}, "x0": 0.0, "xl": 1.0, "l": 1.0, "dt": 0.001,
    "method": "ou_analytic", "mc": {"n": 50, "delta": 0.2, "dt": 0.01,
    "perturbation": 0.465}})");
  std::string bad = cfg("bad.json", R"({"potential": {"id": "ou"}, "x0": "zero"})");

  std::ostringstream d;
  bool ok = true;
  auto expect = [&](const std::string& args, int want, const std::string& label) {
    int got = run_cli(args + " 2>>" + (dir / "stderr.log").string());
    if (got != want) {
      ok = false;
      d << label << " exited " << got << " want " << want << "; ";
    }
  };
  expect("solve --config " + ou + " --out " + (dir / "good").string(), 0, "good solve");
  expect("density --config " + ou + " --out " + (dir / "good").string(), 0, "density");
  expect("solve --config " + bad + " --out " + (dir / "x").string(), 1, "bad config");
  expect("solve --config " + dw + " --set solver.max_iter=1 --out " + (dir / "x").string(),
         2, "starved solver");
  expect("mc-verify --config " + mc + " --out " + (dir / "x").string(), 3, "starved mc");

  // outputs produced across the run must be free of non-finite values
  std::vector<fs::path> files = {dir / "good/path.csv", dir / "good/summary",
                                 dir / "good/density.csv", g_dir / "c1/table1.csv"};
  for (const fs::path& f : files) {
    std::string text = slurp(f);
    if (text.empty()) {
      ok = false;
      d << f.filename().string() << " missing; ";
      continue;
    }
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (text.find("nan") != std::string::npos || text.find("inf") != std::string::npos) {
      ok = false;
      d << f.filename().string() << " contains non-finite tokens; ";
    }
  }
  detail = ok ? "exit codes 0/1/2/3 and finite outputs" : d.str();
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <mptp-binary>\n";
    return 64;
  }
  g_bin = argv[1];
  g_dir = fs::temp_directory_path() / "mptp_acceptance";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  run_criterion(1, "double-well action table matches frozen references (+-0.02)",
                table_regression);
  run_criterion(2, "ou bridge-ode and shooting routes agree (sup <= 1e-3)",
                ou_route_agreement);
  run_criterion(3, "coupled 2-d bridge matches the hyperbolic-sine solution (<= 1e-3)",
                coupled_2d);
  run_criterion(4, "free-motion bridge stays within 2*dt*|xl-x0|/l of the straight line",
                free_bridge_line);
  run_criterion(5, "property suites: derivatives, flow identities, actions, quadrature",
                property_suites);
  run_criterion(6, "tube-probability ratios track action differences on both ensembles",
                mc_equivalence);
  run_criterion(7, "sampled bridge marginal matches the closed gaussian (KS <= 0.02)",
                bridge_marginal_ks);
  run_criterion(8, "structured errors, documented exit codes, finite outputs",
                robustness);

  std::cout << (g_failed == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(g_failed) +
                                    " criteria failed")
            << std::endl;
  return g_failed;
}

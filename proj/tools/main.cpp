// ratecert command-line tool: certify, sweep, simulate, sproc.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratecert/baselines.hpp"
#include "ratecert/certify.hpp"
#include "ratecert/descriptor.hpp"
#include "ratecert/model.hpp"
#include "ratecert/sim.hpp"
#include "ratecert/sproc.hpp"

namespace rc = ratecert;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoCertificate = 2;

int thread_budget() {
  if (const char* env = std::getenv("RATECERT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic parallel map: results land in input order.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const int threads = std::min(thread_budget(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

rc::OracleKind parse_kind(const std::string& s) {
  if (s == "sector" || s == "C") return rc::OracleKind::Sector;
  if (s == "slope" || s == "slope_restricted" || s == "M") return rc::OracleKind::SlopeRestricted;
  if (s == "fun" || s == "smooth_strongly_convex" || s == "F")
    return rc::OracleKind::SmoothStronglyConvex;
  throw CLI::ValidationError("--oracle", "unknown oracle class \"" + s + "\"");
}

rc::AlgorithmSpec make_spec(const std::string& algorithm, double eta,
                            std::optional<double> beta, double m, double L) {
  if (algorithm == "gd") return rc::AlgorithmSpec::gradient_descent(eta);
  if (algorithm == "pg") return rc::AlgorithmSpec::projected_gradient(eta);
  if (algorithm == "nesterov") {
    if (beta) return rc::AlgorithmSpec::nesterov(eta, *beta);
    auto spec = rc::AlgorithmSpec::nesterov_default_tuning(m, L);
    if (eta > 0.0) spec.eta = eta;
    return spec;
  }
  if (algorithm == "admm-g") return rc::AlgorithmSpec::admm_gradient_form(eta);
  if (algorithm == "admm-p") return rc::AlgorithmSpec::admm_prox_form(eta);
  throw CLI::ValidationError("--algorithm", "unknown algorithm \"" + algorithm + "\"");
}

int auto_window(const std::vector<rc::OracleClass>& classes, int requested) {
  if (requested >= 0) return requested;
  for (const auto& c : classes)
    if (c.kind == rc::OracleKind::SmoothStronglyConvex) return 1;
  return 0;
}

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json certificate_json(const rc::Certificate& cert) {
  json j;
  j["rho"] = cert.rho;
  j["window"] = cert.window;
  j["kind"] = cert.kind == rc::LyapunovKind::Quadratic ? "quadratic"
                                                       : "quadratic_plus_function_gap";
  j["scale"] = cert.scale;
  j["P"] = matrix_json(cert.P);
  j["lambdas"] = vector_json(cert.lambdas);
  j["mus"] = vector_json(cert.mus);
  j["margins"] = cert.margins;
  return j;
}

// RFC-4180: quote fields containing comma, quote, or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<double> logspace(double lo_exp, double hi_exp, int points) {
  std::vector<double> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    out.push_back(std::pow(10.0, lo_exp + t * (hi_exp - lo_exp)));
  }
  return out;
}

struct CertifyArgs {
  std::string algorithm = "gd";
  std::string oracle = "sector";
  double m = 0.0;
  double L = 0.0;
  double eta = 0.0;
  std::optional<double> beta;
  int window = -1;
  double tol = 1e-4;
  double rho_max = 1.5;
  std::string config;
};

int run_certify(const CertifyArgs& a) {
  rc::AlgorithmModel model;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) {
      std::cerr << "error: cannot open config file " << a.config << "\n";
      return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    model = rc::build_from_descriptor(rc::parse_descriptor(buf.str()));
  } else {
    const auto spec = make_spec(a.algorithm, a.eta, a.beta, a.m, a.L);
    model = rc::build_algorithm(spec).with_oracles(
        rc::default_oracle_classes(spec, parse_kind(a.oracle), a.m, a.L));
  }
  const auto diag = rc::validate_model(model);
  if (!diag.ok()) {
    for (const auto& e : diag.errors) std::cerr << "error: " << e << "\n";
    return kExitUsage;
  }

  rc::CertifyOptions opts;
  opts.tol = a.tol;
  opts.rho_max = a.rho_max;
  const int r = auto_window(model.oracle_classes, a.window);
  const auto result = rc::certify_rate(model, r, opts);

  json j;
  j["found"] = result.found;
  json probes = json::array();
  for (const auto& pr : result.probes) {
    probes.push_back({{"rho", pr.rho},
                      {"status", pr.status == rc::SolveStatus::Solution ? "feasible"
                                                                        : "infeasible"}});
  }
  j["probes"] = std::move(probes);
  if (result.found) {
    j["rho"] = result.certificate.rho;
    j["iteration_complexity"] = rc::iteration_complexity(result.certificate.rho);
    j["certificate"] = certificate_json(result.certificate);
  } else {
    j["status"] = "NoCertificate";
  }
  std::cout << j.dump(2) << "\n";
  return result.found ? kExitOk : kExitNoCertificate;
}

struct SweepArgs {
  std::string algorithm = "nesterov";
  std::vector<std::string> classes = {"C", "M", "F"};
  std::string axis = "kappa";  // kappa | eta
  double lo_exp = 0.3, hi_exp = 3.0;
  int points = 25;
  double kappa = 100.0;  // fixed condition number for eta sweeps
  double eta = 0.0;      // fixed stepsize for kappa sweeps (0 = family default)
  int window = -1;
  double tol = 1e-4;
  std::string output;
};

int run_sweep(const SweepArgs& a) {
  if (a.points <= 0) {
    std::cerr << "error: empty grid\n";
    return kExitUsage;
  }
  const bool eta_axis = a.axis == "eta";
  if (!eta_axis && a.axis != "kappa") {
    std::cerr << "error: --axis must be kappa or eta\n";
    return kExitUsage;
  }
  const auto grid =
      eta_axis ? logspace(a.lo_exp < -1e8 ? -2.0 : a.lo_exp, a.hi_exp > 1e8 ? 2.0 : a.hi_exp,
                          a.points)
               : logspace(a.lo_exp, a.hi_exp, a.points);

  struct Row {
    double kappa = 0.0, m = 0.0, L = 1.0, eta = 0.0;
    std::vector<double> rho;  // one per class, NaN when no certificate
    std::string status = "ok";
  };
  std::vector<Row> rows(grid.size());

  std::vector<rc::OracleKind> kinds;
  for (const auto& s : a.classes) kinds.push_back(parse_kind(s));

  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    Row& row = rows[i];
    row.L = 1.0;
    if (eta_axis) {
      row.kappa = a.kappa;
      row.eta = grid[i];  // grid is over eta*L with L = 1
    } else {
      row.kappa = grid[i];
      row.eta = a.eta;
    }
    row.m = row.L / row.kappa;
    try {
      for (const auto kind : kinds) {
        rc::AlgorithmSpec spec =
            make_spec(a.algorithm, row.eta, std::nullopt, row.m, row.L);
        const auto model = rc::build_algorithm(spec).with_oracles(
            rc::default_oracle_classes(spec, kind, row.m, row.L));
        rc::CertifyOptions opts;
        opts.tol = a.tol;
        const int r = auto_window(model.oracle_classes, a.window);
        const auto result = rc::certify_rate(model, r, opts);
        row.rho.push_back(result.found ? result.certificate.rho
                                       : std::numeric_limits<double>::quiet_NaN());
      }
    } catch (const std::exception& e) {
      row.status = e.what();
      row.rho.resize(kinds.size(), std::numeric_limits<double>::quiet_NaN());
    }
  });

  const bool admm = a.algorithm == "admm-g" || a.algorithm == "admm-p";
  std::ostringstream csv;
  csv << "kappa,m,L,eta";
  for (const auto& cls : a.classes) csv << ",rho_" << cls << ",complexity_" << cls;
  csv << (admm ? ",admm_lower,admm_deng_upper" : ",estimate_sequence") << ",status\r\n";
  for (const auto& row : rows) {
    csv << fmt(row.kappa) << ',' << fmt(row.m) << ',' << fmt(row.L) << ',' << fmt(row.eta);
    for (double rho : row.rho) {
      csv << ',' << fmt(rho) << ','
          << fmt(std::isnan(rho) ? std::numeric_limits<double>::quiet_NaN()
                                 : rc::iteration_complexity(rho));
    }
    if (admm) {
      csv << ',' << fmt(rc::analytic_rate(rc::BoundKind::AdmmQuadraticLower, row.m, row.L, row.eta))
          << ',' << fmt(rc::analytic_rate(rc::BoundKind::AdmmDengUpper, row.m, row.L, row.eta));
    } else {
      csv << ',' << fmt(rc::analytic_rate(rc::BoundKind::EstimateSequence, row.m, row.L));
    }
    csv << ',' << csv_field(row.status) << "\r\n";
  }

  if (a.output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << a.output << "\n";
      return kExitUsage;
    }
    out << csv.str();
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string fn = "f1";
  std::string algorithm = "nesterov";
  double m = 0.01;
  double L = 1.0;
  double eta = 0.0;
  std::optional<double> beta;
  int steps = 200;
  std::vector<double> x0 = {1.0, 0.5};
  bool with_certificate = false;
  int window = -1;
  std::string output;
};

int run_simulate(const SimulateArgs& a) {
  rc::TestFunction fn;
  if (a.fn == "f1")
    fn.id = rc::TestFunctionId::F1;
  else if (a.fn == "f2")
    fn.id = rc::TestFunctionId::F2;
  else {
    std::cerr << "error: unknown function id \"" << a.fn << "\" (expected f1 or f2)\n";
    return kExitUsage;
  }
  fn.m = a.m;
  fn.L = a.L;
  if (a.x0.size() != 2) {
    std::cerr << "error: --x0 needs exactly two components\n";
    return kExitUsage;
  }
  const auto spec = make_spec(a.algorithm, a.eta, a.beta, a.m, a.L);
  const auto traj =
      rc::run_trajectory(fn, spec, Eigen::Vector2d(a.x0[0], a.x0[1]), a.steps);

  std::optional<rc::LyapunovTrace> trace;
  double rho = 0.0;
  if (a.with_certificate) {
    const auto model = rc::build_algorithm(spec).with_oracles(rc::default_oracle_classes(
        spec, rc::OracleKind::SmoothStronglyConvex, a.m, a.L));
    rc::CertifyOptions opts;
    const int r = auto_window(model.oracle_classes, a.window);
    const auto result = rc::certify_rate(model, r, opts);
    if (!result.found) {
      std::cerr << "error: no certificate found for the requested algorithm\n";
      return kExitNoCertificate;
    }
    rho = result.certificate.rho;
    trace = rc::lyapunov_trace(traj, fn, spec, result.certificate);
  }

  std::ostringstream csv;
  csv << "k,dist_sq,gap,lyapunov,ratio\r\n";
  for (size_t k = 0; k < traj.x.size(); ++k) {
    csv << k << ',' << fmt(traj.dist_sq[k]) << ',' << fmt(traj.gap[k]) << ',';
    if (trace && k < trace->value.size()) csv << fmt(trace->value[k]);
    csv << ',';
    if (trace && k < trace->ratio.size()) csv << fmt(trace->ratio[k]);
    csv << "\r\n";
  }
  if (trace) {
    std::cerr << "# steps=" << a.steps << " rho=" << fmt(rho)
              << " rho_sq=" << fmt(rho * rho) << " max_ratio=" << fmt(trace->max_ratio)
              << " monotone=" << (trace->monotone_within ? "yes" : "no") << "\n";
  }

  if (a.output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << a.output << "\n";
      return kExitUsage;
    }
    out << csv.str();
  }
  return kExitOk;
}

struct SprocArgs {
  std::vector<double> S;  // s11 s12 s22
  std::vector<double> Q;
  double m = 0.0;
  double L = 0.0;
};

int run_sproc(const SprocArgs& a) {
  json j;
  if (!a.S.empty() || !a.Q.empty()) {
    if (a.S.size() != 3 || a.Q.size() != 3) {
      std::cerr << "error: --S and --Q each need three entries: s11 s12 s22\n";
      return kExitUsage;
    }
    Eigen::Matrix2d S, Q;
    S << a.S[0], a.S[1], a.S[1], a.S[2];
    Q << a.Q[0], a.Q[1], a.Q[1], a.Q[2];
    const auto res = rc::find_multiplier(S, Q);
    j["found"] = res.found;
    if (res.found) j["lambda"] = res.lambda;
    if (res.witness) j["witness"] = {(*res.witness)(0), (*res.witness)(1)};
    j["degenerate_hypothesis"] = res.degenerate_hypothesis;
  } else if (a.m > 0.0 && a.L > a.m) {
    const auto ids = rc::sector_identities(a.m, a.L);
    json arr = json::array();
    for (const auto& id : ids) {
      arr.push_back({{"coeff", id.coeff},
                     {"weight", id.weight},
                     {"conclusion", {{id.conclusion(0, 0), id.conclusion(0, 1)},
                                     {id.conclusion(1, 0), id.conclusion(1, 1)}}},
                     {"residual_form", {id.residual_form(0), id.residual_form(1)}}});
    }
    j["identities"] = std::move(arr);
  } else {
    std::cerr << "error: provide either --S/--Q or 0 < --m < --L\n";
    return kExitUsage;
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case convergence rate certification for first-order methods"};
  app.require_subcommand(1);

  CertifyArgs cert;
  auto* certify = app.add_subcommand("certify", "Certify a single algorithm instance");
  certify->add_option("--algorithm", cert.algorithm, "gd|pg|nesterov|admm-g|admm-p");
  certify->add_option("--oracle", cert.oracle, "sector|slope|fun (aka C|M|F)");
  certify->add_option("--m", cert.m, "lower slope/curvature bound")->required();
  auto* l_opt = certify->add_option("--L", cert.L, "upper slope/curvature bound");
  certify->add_option("--eta", cert.eta, "stepsize");
  double beta_val = 0.0;
  auto* beta_opt = certify->add_option("--beta", beta_val, "Nesterov momentum");
  certify->add_option("--window", cert.window, "analysis window r (-1 = auto)");
  certify->add_option("--tol", cert.tol, "bisection tolerance");
  certify->add_option("--rho-max", cert.rho_max, "upper end of the bisection interval");
  certify->add_option("--config", cert.config, "JSON descriptor file");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Grid sweep over kappa or normalized stepsize");
  sw->add_option("--algorithm", sweep.algorithm, "gd|pg|nesterov|admm-g|admm-p");
  sw->add_option("--classes", sweep.classes, "oracle classes per grid point (C M F)");
  sw->add_option("--axis", sweep.axis, "kappa|eta");
  sw->add_option("--lo-exp", sweep.lo_exp, "log10 of the lower grid end");
  sw->add_option("--hi-exp", sweep.hi_exp, "log10 of the upper grid end");
  sw->add_option("--points", sweep.points, "grid size");
  sw->add_option("--kappa", sweep.kappa, "condition number (eta sweeps)");
  sw->add_option("--eta", sweep.eta, "stepsize (kappa sweeps; 0 = family default)");
  sw->add_option("--window", sweep.window, "analysis window r (-1 = auto)");
  sw->add_option("--tol", sweep.tol, "bisection tolerance");
  sw->add_option("--output", sweep.output, "CSV output path (default stdout)");

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Simulate a trajectory on a test function");
  si->add_option("--fn", sim.fn, "f1|f2");
  si->add_option("--algorithm", sim.algorithm, "gd|nesterov");
  si->add_option("--m", sim.m, "strong convexity");
  si->add_option("--L", sim.L, "smoothness");
  si->add_option("--eta", sim.eta, "stepsize (0 = default tuning)");
  double sim_beta = 0.0;
  auto* sim_beta_opt = si->add_option("--beta", sim_beta, "Nesterov momentum");
  si->add_option("--steps", sim.steps, "iteration count");
  si->add_option("--x0", sim.x0, "initial point (two values)")->expected(2);
  si->add_flag("--with-certificate", sim.with_certificate, "attach the Lyapunov trace");
  si->add_option("--window", sim.window, "analysis window r (-1 = auto)");
  si->add_option("--output", sim.output, "CSV output path (default stdout)");

  SprocArgs sp;
  auto* spc = app.add_subcommand("sproc", "S-procedure multiplier search / identities");
  spc->add_option("--S", sp.S, "hypothesis form: s11 s12 s22")->expected(3);
  spc->add_option("--Q", sp.Q, "conclusion form: q11 q12 q22")->expected(3);
  spc->add_option("--m", sp.m, "sector lower bound (identities mode)");
  spc->add_option("--L", sp.L, "sector upper bound (identities mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*certify) {
      if (cert.config.empty() && !*l_opt) {
        std::cerr << "error: --L is required\n" << certify->help();
        return kExitUsage;
      }
      if (*beta_opt) cert.beta = beta_val;
      return run_certify(cert);
    }
    if (*sw) return run_sweep(sweep);
    if (*si) {
      if (*sim_beta_opt) sim.beta = sim_beta;
      return run_simulate(sim);
    }
    if (*spc) return run_sproc(sp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

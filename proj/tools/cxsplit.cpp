// Command-line driver: scheme validation, coefficient design, error-vs-cost
// sweeps and convergence-order estimates.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cxsplit/bench.hpp"
#include "cxsplit/designer.hpp"
#include "cxsplit/order_conditions.hpp"
#include "cxsplit/reference.hpp"
#include "cxsplit/schemes.hpp"

using namespace cxsplit;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2, kReference = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double parse_number(const std::string& tok) {
  if (const auto slash = tok.find('/'); slash != std::string::npos) {
    return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
  }
  return std::stod(tok);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string cplx(Complex z) {
  std::ostringstream os;
  os << std::setprecision(17) << z.real() << (z.imag() < 0 ? " - " : " + ")
     << std::abs(z.imag()) << "i";
  return os.str();
}

// Returns true when every applicable invariant holds.
bool report_scheme(const Scheme& s, double tol) {
  const auto rep = validate_scheme(s);
  const auto res = residuals(expand(s));
  std::cout << "scheme " << s.name << " (order " << s.claimed_order;
  if (s.effective_order) {
    std::cout << ", effective (" << s.effective_order->first << ","
              << s.effective_order->second << ")";
  }
  std::cout << ")\n";
  std::cout << "  sum a           " << cplx(rep.sum_a) << '\n'
            << "  sum b           " << cplx(rep.sum_b) << '\n'
            << "  symmetry defect " << rep.symmetry_defect << '\n'
            << "  min Re(a)       " << rep.min_re_a << '\n'
            << "  min Re(b)       " << rep.min_re_b << '\n'
            << "  p_aba           " << cplx(res.p_aba) << '\n'
            << "  p_abb           " << cplx(res.p_abb) << '\n'
            << "  p_abaaa         " << cplx(res.p_abaaa) << '\n';

  bool ok = true;
  try {
    check_scheme(s, tol);
  } catch (const ValidationError& e) {
    std::cout << "  VIOLATION " << e.violation() << ": " << e.what() << '\n';
    ok = false;
  }
  const auto require = [&](const char* label, Complex v) {
    if (std::abs(v) >= 1e-10) {
      std::cout << "  VIOLATION " << label << " = " << std::abs(v) << '\n';
      ok = false;
    }
  };
  if (s.claimed_order >= 4) {
    require("p_aba", res.p_aba);
    require("p_abb", res.p_abb);
  }
  if (s.effective_order && s.effective_order->first >= 6) {
    require("p_aba", res.p_aba);
    require("p_abaaa", res.p_abaaa);
  }
  std::cout << "  status          " << (ok ? "ok" : "FAILED") << '\n';
  return ok;
}

AFlowKind parse_aflow(const std::string& s) {
  if (s == "cf2") return AFlowKind::CF2;
  if (s == "cf4") return AFlowKind::CF4;
  if (s == "exact") return AFlowKind::Exact;
  throw Error("--aflow must be cf2, cf4 or exact");
}

FreezeConvention parse_freeze(const std::string& s) {
  if (s == "literal") return FreezeConvention::LiteralLeft;
  if (s == "midpoint") return FreezeConvention::Midpoint;
  throw Error("--freeze must be literal or midpoint");
}

struct ProblemFlags {
  std::string problem = "osc";
  std::vector<std::string> params;
  std::string cache_dir;
  long long split_steps = 1LL << 16;

  void add(CLI::App* cmd) {
    cmd->add_option("--problem", problem, "osc | parabolic | fisher")
        ->check(CLI::IsMember({"osc", "parabolic", "fisher"}));
    cmd->add_option("--param", params, "problem parameter override key=value (repeatable)");
    cmd->add_option("--eps", eps, "perturbation strength (osc)");
    cmd->add_option("--cache-dir", cache_dir, "reference cache directory");
    cmd->add_option("--ref-steps", split_steps, "steps of the splitting reference route");
  }

  std::optional<double> eps;

  std::unique_ptr<Problem> make() const {
    std::map<std::string, std::string> overrides;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--param expects key=value, got '" + kv + "'");
      overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (eps) {
      std::ostringstream os;
      os << std::setprecision(17) << *eps;
      overrides["eps"] = os.str();
    }
    return make_problem(problem, overrides);
  }

  ReferenceOptions reference_options() const {
    ReferenceOptions o;
    o.split_steps = split_steps;
    std::string dir = cache_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("CXSPLIT_CACHE_DIR")) dir = env;
    }
    if (!dir.empty()) o.cache_dir = dir;
    return o;
  }
};

std::vector<long long> parse_grid(const std::string& s) {
  if (s.empty()) return default_grid();
  std::vector<long long> g;
  for (const auto& tok : split_list(s)) g.push_back(std::stoll(tok));
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order splitting integrators with complex coefficients"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  // validate
  auto* validate = app.add_subcommand("validate", "check scheme invariants and order conditions");
  std::vector<std::string> validate_targets;
  validate->add_option("schemes", validate_targets, "builtin names or coefficient files");

  // design
  auto* design = app.add_subcommand("design", "solve the order conditions for b");
  int stages = 4;
  std::optional<double> a1;
  std::string a_list;
  bool scan = false;
  std::uint64_t seed = 1;
  int starts = 64;
  int grid_points = 200;
  double refine_tol = 1e-10;
  std::string objective = "signed";
  std::string design_out;
  std::string design_name;
  design->add_option("--stages", stages, "4 or 6")->check(CLI::IsMember({4, 6}));
  design->add_option("--a1", a1, "fixed a1 for the 4-stage family");
  design->add_option("--a", a_list, "fixed a-coefficients, e.g. 1/6,1/6,1/6");
  design->add_flag("--scan", scan, "optimize a1 over (0, 1/2)");
  design->add_option("--seed", seed);
  design->add_option("--starts", starts);
  design->add_option("--grid", grid_points, "grid points for --scan");
  design->add_option("--refine-tol", refine_tol);
  design->add_option("--objective", objective, "signed | abs | modulus")
      ->check(CLI::IsMember({"signed", "abs", "modulus"}));
  design->add_option("--out", design_out, "write the scheme file here");
  design->add_option("--name", design_name, "scheme name");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "error versus A-flow evaluations, as CSV");
  ProblemFlags sweep_pf;
  sweep_pf.add(sweep_cmd);
  std::string methods = "Strang,S62,EXT4,SM4,SM64";
  std::string nsteps;
  std::string freeze = "midpoint";
  std::string aflow = "cf4";
  std::string out_path;
  unsigned threads = 0;
  bool no_wall_time = false;
  sweep_cmd->add_option("--methods", methods, "comma-separated method ids");
  sweep_cmd->add_option("--nsteps", nsteps, "comma-separated step counts");
  sweep_cmd->add_option("--freeze", freeze, "literal | midpoint");
  sweep_cmd->add_option("--aflow", aflow, "cf2 | cf4 | exact");
  sweep_cmd->add_option("--out", out_path, "CSV path (stdout if omitted)");
  sweep_cmd->add_option("--threads", threads);
  sweep_cmd->add_flag("--no-wall-time", no_wall_time, "write 0 in the wall_time column");

  // converge
  auto* converge = app.add_subcommand("converge", "estimate the global order");
  ProblemFlags conv_pf;
  conv_pf.add(converge);
  std::string conv_method = "SM4";
  std::string conv_nsteps;
  std::string conv_freeze = "midpoint";
  std::string conv_aflow = "cf4";
  double floor = 1e-8;
  converge->add_option("--method", conv_method);
  converge->add_option("--nsteps", conv_nsteps);
  converge->add_option("--freeze", conv_freeze);
  converge->add_option("--aflow", conv_aflow);
  converge->add_option("--floor", floor, "errors below this are excluded from the fit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      if (validate_targets.empty()) validate_targets = builtin_names();
      bool all_ok = true;
      for (const auto& target : validate_targets) {
        const auto names = builtin_names();
        if (std::find(names.begin(), names.end(), target) != names.end()) {
          all_ok &= report_scheme(builtin_scheme(target), kBuiltinTolerance);
          continue;
        }
        try {
          all_ok &= report_scheme(load_scheme(read_file(target)), kLoadedTolerance);
        } catch (const ValidationError& e) {
          std::cout << "scheme file " << target << "\n  VIOLATION " << e.violation() << ": "
                    << e.what() << "\n  status          FAILED\n";
          all_ok = false;
        } catch (const ParseError& e) {
          std::cout << "scheme file " << target << "\n  PARSE ERROR " << e.what()
                    << "\n  status          FAILED\n";
          all_ok = false;
        }
      }
      return all_ok ? kOk : kValidation;
    }

    if (design->parsed()) {
      DesignSolution sol;
      std::string name = design_name;
      if (stages == 4) {
        if (scan) {
          ScanOptions so;
          so.grid_points = grid_points;
          so.refine_tol = refine_tol;
          so.starts = starts;
          so.seed = seed;
          so.objective = objective == "abs"       ? ScanObjective::AbsRealPart
                         : objective == "modulus" ? ScanObjective::Modulus
                                                  : ScanObjective::SignedRealPart;
          const auto res = scan_a1(so);
          sol = res.solution;
          std::cerr << "a1_opt = " << std::setprecision(17) << res.a1_opt << '\n';
        } else {
          double a = 0.25;
          if (a1) {
            a = *a1;
          } else if (!a_list.empty()) {
            a = parse_number(split_list(a_list).front());
          }
          sol = solve_b(DesignProblem::four_stage(a), starts, seed);
        }
        if (name.empty()) name = "designed4";
      } else {
        std::vector<double> a{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
        if (!a_list.empty()) {
          a.clear();
          for (const auto& tok : split_list(a_list)) a.push_back(parse_number(tok));
        }
        sol = solve_b(DesignProblem::six_stage(a), starts, seed);
        if (name.empty()) name = "designed6";
      }
      const auto text = serialize_scheme(sol.scheme(name));
      if (design_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(design_out) << text;
      }
      std::cerr << "roots found = " << sol.all_solutions.size() << '\n'
                << "residual = " << sol.residual_norm << '\n'
                << "|Re(p_abaaa)| = " << std::setprecision(17) << std::abs(sol.re_p_abaaa)
                << '\n';
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      const auto problem = sweep_pf.make();
      SweepSpec spec;
      spec.methods = split_list(methods);
      spec.n_steps_grid = parse_grid(nsteps);
      spec.a_flow = parse_aflow(aflow);
      spec.freeze = parse_freeze(freeze);
      spec.threads = threads;
      std::vector<RunRecord> rows;
      if (!spec.methods.empty()) {
        const auto ref = reference_solution(*problem, sweep_pf.reference_options());
        rows = sweep(*problem, ref.state, spec);
      }
      if (out_path.empty()) {
        write_csv(std::cout, rows, !no_wall_time);
      } else {
        std::ofstream os(out_path);
        if (!os) throw Error("cannot write '" + out_path + "'");
        write_csv(os, rows, !no_wall_time);
      }
      return kOk;
    }

    if (converge->parsed()) {
      const auto problem = conv_pf.make();
      const auto ref = reference_solution(*problem, conv_pf.reference_options());
      SweepSpec spec;
      spec.methods = {conv_method};
      spec.n_steps_grid = parse_grid(conv_nsteps);
      spec.a_flow = parse_aflow(conv_aflow);
      spec.freeze = parse_freeze(conv_freeze);
      const auto rows = sweep(*problem, ref.state, spec);
      for (const auto& r : rows) {
        std::cout << "n_steps " << std::setw(6) << r.n_steps << "  h " << std::setw(12)
                  << std::setprecision(6) << r.h << "  error " << std::setprecision(6)
                  << r.error_l2 << '\n';
      }
      const auto fit = fit_slope(rows, floor);
      std::cout << "slope " << std::setprecision(4) << fit.slope << "  residual "
                << std::setprecision(3) << fit.residual << "  points " << fit.points << '\n';
      return kOk;
    }
  } catch (const ReferenceInconsistent& e) {
    std::cerr << "reference inconsistency: " << e.what() << '\n';
    return kReference;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

#include "cxsplit/designer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace cxsplit {
namespace {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

std::vector<Complex> full_reduced_b(const VecC& u) {
  std::vector<Complex> b(u.data(), u.data() + u.size());
  Complex center = 1.0;
  for (const auto& x : b) center -= 2.0 * x;
  b.push_back(center);
  return b;
}

Scheme make_scheme(const std::vector<double>& a, const std::vector<Complex>& b) {
  Scheme s;
  s.name = "designed";
  s.pattern = Pattern::BAB;
  s.symmetric = true;
  s.claimed_order = 4;
  s.a.assign(a.begin(), a.end());
  s.b = b;
  return s;
}

struct System {
  const DesignProblem& problem;

  VecC residual(const VecC& u) const {
    const auto r = residuals(expand(make_scheme(problem.fixed_a, full_reduced_b(u))));
    VecC f(problem.targets.size());
    for (std::size_t i = 0; i < problem.targets.size(); ++i) {
      f[static_cast<Eigen::Index>(i)] = cxsplit::residual(r, problem.targets[i]);
    }
    return f;
  }

  MatC jacobian(const VecC& u) const {
    const auto k = static_cast<std::size_t>(u.size());
    const auto n_kicks = 2 * k + 1;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < k; ++j) groups.push_back({j, n_kicks - 1 - j});
    groups.push_back({k});
    const auto jac =
        residual_jacobian(expand(make_scheme(problem.fixed_a, full_reduced_b(u))), groups);
    MatC m(static_cast<Eigen::Index>(problem.targets.size()), static_cast<Eigen::Index>(k));
    for (std::size_t row = 0; row < problem.targets.size(); ++row) {
      const auto r = static_cast<int>(problem.targets[row]);
      for (std::size_t j = 0; j < k; ++j) {
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
            jac[j][r] - 2.0 * jac[k][r];
      }
    }
    return m;
  }
};

double inf_norm(const VecC& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

// Returns the final residual norm; `u` is updated in place.
double newton(const System& sys, VecC& u, const NewtonOptions& opts) {
  VecC f = sys.residual(u);
  double norm = inf_norm(f);
  for (int it = 0; it < opts.max_iter && norm >= opts.tol; ++it) {
    const MatC j = sys.jacobian(u);
    const VecC step = j.fullPivLu().solve(f);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    VecC trial = u - step;
    VecC ft = sys.residual(trial);
    double nt = inf_norm(ft);
    for (int halvings = 0; !(nt < norm) && halvings < 30; ++halvings) {
      lambda *= 0.5;
      trial = u - lambda * step;
      ft = sys.residual(trial);
      nt = inf_norm(ft);
    }
    if (!(nt < norm)) break;
    u = trial;
    f = ft;
    norm = nt;
  }
  return norm;
}

bool lex_less(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].real() != y[i].real()) return x[i].real() < y[i].real();
    if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
  }
  return false;
}

double distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

Complex p_abaaa_of(const std::vector<double>& a, const std::vector<Complex>& b) {
  return residuals(expand(make_scheme(a, b))).p_abaaa;
}

}  // namespace

DesignProblem DesignProblem::four_stage(double a1) {
  return {{a1, 0.5 - a1}, {Condition::Aba, Condition::Abb}};
}

DesignProblem DesignProblem::six_stage(const std::vector<double>& a) {
  return {a, {Condition::Aba, Condition::Abb, Condition::Abaaa}};
}

Scheme DesignSolution::scheme(const std::string& name) const {
  auto s = make_scheme(a, b);
  s.name = name;
  return s;
}

DesignSolution solve_b(const DesignProblem& problem, int starts, std::uint64_t seed,
                       const NewtonOptions& opts) {
  const auto k = problem.fixed_a.size();
  if (k == 0 || problem.targets.size() != k) {
    throw Error("design problem needs as many target conditions as free b-coefficients");
  }
  const System sys{problem};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<Complex>> roots;
  for (int s = 0; s < starts; ++s) {
    VecC u(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      const double r = std::sqrt(unit(rng));
      const double th = 2.0 * std::numbers::pi * unit(rng);
      u[static_cast<Eigen::Index>(i)] = std::polar(r, th);
    }
    const double norm = newton(sys, u, opts);
    if (norm < opts.accept_tol && u.allFinite()) roots.push_back(full_reduced_b(u));
  }
  if (roots.empty()) {
    throw NoSolutionFound("Newton did not converge from any of " + std::to_string(starts) +
                          " starts");
  }

  std::sort(roots.begin(), roots.end(), lex_less);
  std::vector<std::vector<Complex>> unique;
  for (auto& r : roots) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& x) {
      return distance(x, r) <= opts.dedup_distance;
    });
    if (!dup) unique.push_back(std::move(r));
  }

  // Conjugate pairs are both roots; keep the member with Im(b_1) <= 0.
  std::optional<std::vector<Complex>> best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& r : unique) {
    const bool stable =
        std::all_of(r.begin(), r.end(), [](const Complex& x) { return x.real() > 0.0; });
    if (!stable) continue;
    auto canon = r;
    if (canon.front().imag() > 0.0) {
      for (auto& x : canon) x = std::conj(x);
    }
    const double obj = std::abs(p_abaaa_of(problem.fixed_a, canon).real());
    if (obj < best_obj || (obj == best_obj && best && lex_less(canon, *best))) {
      best_obj = obj;
      best = std::move(canon);
    }
  }
  if (!best) {
    throw NoStableSolution("no root with positive real parts among " +
                               std::to_string(unique.size()) + " roots",
                           unique);
  }

  DesignSolution sol;
  sol.a = problem.fixed_a;
  sol.b = *best;
  VecC u(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) u[static_cast<Eigen::Index>(i)] = sol.b[i];
  sol.residual_norm = inf_norm(sys.residual(u));
  sol.re_p_abaaa = p_abaaa_of(sol.a, sol.b).real();
  sol.all_solutions = std::move(unique);
  return sol;
}

double scan_objective(const DesignSolution& sol, ScanObjective objective) {
  const auto p = p_abaaa_of(sol.a, sol.b);
  switch (objective) {
    case ScanObjective::SignedRealPart:
      return p.real();
    case ScanObjective::AbsRealPart:
      return std::abs(p.real());
    case ScanObjective::Modulus:
      return std::abs(p);
  }
  return NAN;
}

ScanResult scan_a1(const ScanOptions& opts) {
  if (opts.grid_points < 3) throw Error("scan needs at least 3 grid points");
  const double lo = opts.margin;
  const double hi = 0.5 - opts.margin;

  ScanResult out;
  int failures = 0;
  for (int i = 0; i < opts.grid_points; ++i) {
    const double a1 = lo + (hi - lo) * i / (opts.grid_points - 1);
    ScanPoint pt{a1, NAN, true};
    try {
      pt.objective = scan_objective(
          solve_b(DesignProblem::four_stage(a1), opts.starts, opts.seed), opts.objective);
    } catch (const NoStableSolution&) {
    } catch (const NoSolutionFound&) {
      pt.converged = false;
      ++failures;
    }
    out.curve.push_back(pt);
  }
  if (failures * 10 > opts.grid_points) {
    throw DesignScanUnreliable(std::to_string(failures) + " of " +
                               std::to_string(opts.grid_points) + " grid points failed");
  }

  std::size_t best = out.curve.size();
  for (std::size_t i = 0; i < out.curve.size(); ++i) {
    if (std::isnan(out.curve[i].objective)) continue;
    if (best == out.curve.size() || out.curve[i].objective < out.curve[best].objective) best = i;
  }
  if (best == out.curve.size()) throw NoStableSolution("no grid point has a stable root", {});

  const auto objective_at = [&](double a1) {
    try {
      return scan_objective(solve_b(DesignProblem::four_stage(a1), opts.starts, opts.seed),
                            opts.objective);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  double left = out.curve[best > 0 ? best - 1 : best].a1;
  double right = out.curve[best + 1 < out.curve.size() ? best + 1 : best].a1;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double f1 = objective_at(x1);
  double f2 = objective_at(x2);
  while (right - left > opts.refine_tol) {
    if (f1 < f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = objective_at(x1);
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = objective_at(x2);
    }
  }
  out.a1_opt = 0.5 * (left + right);
  out.solution = solve_b(DesignProblem::four_stage(out.a1_opt), opts.starts, opts.seed);
  if (scan_objective(out.solution, opts.objective) > out.curve[best].objective) {
    out.a1_opt = out.curve[best].a1;
    out.solution = solve_b(DesignProblem::four_stage(out.a1_opt), opts.starts, opts.seed);
  }
  return out;
}

}  // namespace cxsplit

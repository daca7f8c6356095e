#pragma once

#include <cstdint>
#include <vector>

#include "cxsplit/order_conditions.hpp"
#include "cxsplit/schemes.hpp"

namespace cxsplit {

class NoSolutionFound : public Error {
 public:
  using Error::Error;
};

/// Newton converged but every root has some Re(b_i) <= 0.
class NoStableSolution : public Error {
 public:
  NoStableSolution(const std::string& msg, std::vector<std::vector<Complex>> all)
      : Error(msg), all_solutions(std::move(all)) {}
  std::vector<std::vector<Complex>> all_solutions;
};

class DesignScanUnreliable : public Error {
 public:
  using Error::Error;
};

/// Symmetric BAB composition with 2k A-stages. The k leading a-coefficients
/// are fixed and real; the k leading b-coefficients are the unknowns and the
/// central one is eliminated by consistency, b_{k+1} = 1 - 2(b_1 + ... + b_k).
struct DesignProblem {
  std::vector<double> fixed_a;
  std::vector<Condition> targets;

  int stages() const { return 2 * static_cast<int>(fixed_a.size()); }

  /// 4 stages: a = (a1, 1/2 - a1), conditions {p_aba, p_abb}.
  static DesignProblem four_stage(double a1);
  /// 6 stages: conditions {p_aba, p_abb, p_abaaa}.
  static DesignProblem six_stage(const std::vector<double>& a);
};

struct DesignSolution {
  /// Symmetry-reduced b, including the central coefficient.
  std::vector<Complex> b;
  std::vector<double> a;
  double residual_norm = 0.0;
  double re_p_abaaa = 0.0;
  /// Every distinct converged root, stable or not, sorted.
  std::vector<std::vector<Complex>> all_solutions;

  Scheme scheme(const std::string& name) const;
};

struct NewtonOptions {
  double tol = 1e-14;
  int max_iter = 50;
  /// Roots closer than this are merged.
  double dedup_distance = 1e-8;
  /// Converged roots must satisfy every target to this level.
  double accept_tol = 1e-12;
};

/// Multi-start complex Newton on the order conditions. Starts are uniform in
/// the unit disk and fully determined by `seed`. Of the stable roots
/// (min Re b_i > 0) the one with smallest |Re p_abaaa| is returned, taken from
/// the conjugate pair member with Im(b_1) <= 0.
DesignSolution solve_b(const DesignProblem& problem, int starts = 64, std::uint64_t seed = 1,
                       const NewtonOptions& opts = {});

/// What scan_a1 minimizes over a1.
enum class ScanObjective {
  /// Re(p_abaaa) itself; its minimum over the stable range gives the SM4
  /// coefficients.
  SignedRealPart,
  /// |Re(p_abaaa)|.
  AbsRealPart,
  /// |p_abaaa|.
  Modulus,
};

double scan_objective(const DesignSolution& sol, ScanObjective objective);

struct ScanPoint {
  double a1;
  /// NaN where no stable root exists or Newton failed.
  double objective;
  bool converged;
};

struct ScanResult {
  double a1_opt = 0.0;
  DesignSolution solution;
  std::vector<ScanPoint> curve;
};

struct ScanOptions {
  int grid_points = 200;
  double refine_tol = 1e-10;
  double margin = 1e-3;
  ScanObjective objective = ScanObjective::SignedRealPart;
  int starts = 64;
  std::uint64_t seed = 1;
};

/// Grid search of the 4-stage free parameter a1 in (0, 1/2) followed by
/// golden-section refinement. Grid points without a stable root are
/// skipped; more than 10% of points where Newton does not converge at all
/// raises DesignScanUnreliable.
ScanResult scan_a1(const ScanOptions& opts = {});

}  // namespace cxsplit

#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cxsplit/problem.hpp"
#include "cxsplit/stepper.hpp"

namespace cxsplit {

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Problem id ("osc", "parabolic" or "fisher") plus optional overrides such
/// as {"eps", "0.1"}, {"n", "8"}, {"mu", ...}, {"w", ...}, {"beta", ...},
/// {"tf", ...}, {"gamma_scale", ...}.
std::unique_ptr<Problem> make_problem(std::string_view id,
                                      const std::map<std::string, std::string>& overrides = {});

struct SweepSpec {
  std::vector<std::string> methods;
  std::vector<long long> n_steps_grid;
  AFlowKind a_flow = AFlowKind::CF4;
  FreezeConvention freeze = FreezeConvention::Midpoint;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Default dyadic grid 2^4 .. 2^12.
std::vector<long long> default_grid();

/// Runs every (method, n_steps) pair and measures the final-time 2-norm error
/// against `reference`. Rows are ordered by method (as listed) then n_steps.
/// Throws Error if the grid is not strictly increasing or a method id is
/// unknown.
std::vector<RunRecord> sweep(const Problem& problem, const State& reference,
                             const SweepSpec& spec);

/// Columns: method,h,n_steps,a_flow_evals,kernel_evals,error_l2,wall_time,failed.
/// Doubles use 17 significant digits. With `wall_time` off the column is 0.
void write_csv(std::ostream& os, const std::vector<RunRecord>& rows, bool wall_time = true);

struct SlopeFit {
  double slope = NAN;
  double intercept = NAN;
  /// Root-mean-square residual of the log-log fit.
  double residual = NAN;
  std::size_t points = 0;
};

/// Least-squares slope of log(error) against log(h). Failed rows and errors
/// below `floor` are excluded; fewer than 3 remaining points throws
/// InsufficientData.
SlopeFit fit_slope(const std::vector<RunRecord>& rows, double floor = 1e-8);

}  // namespace cxsplit

#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "cxsplit/problem.hpp"
#include "cxsplit/propagators.hpp"
#include "cxsplit/schemes.hpp"

namespace cxsplit {

/// Where the basic Strang method freezes A on its single A-flow.
enum class FreezeConvention {
  /// A(t_n), as labelled in the textbook form of the method.
  LiteralLeft,
  /// A(t_n + h/2); time-symmetric.
  Midpoint,
};

struct StepCounters {
  long long a_flow_evals = 0;
  long long kernel_evals = 0;
};

struct RunRecord {
  std::string method;
  double h = 0.0;
  long long n_steps = 0;
  long long a_flow_evals = 0;
  long long kernel_evals = 0;
  double error_l2 = NAN;
  double wall_time = 0.0;
  bool failed = false;
};

/// A one-step method u(t_n) -> u(t_n + h).
class Integrator {
 public:
  virtual ~Integrator() = default;
  virtual std::string name() const = 0;
  /// Number of A-flow evaluations per step.
  virtual int a_stages() const = 0;
  /// Advances `state` from time t to t + h. Counters are incremented, never reset.
  virtual void step(const Problem& problem, State& state, double t, double h,
                    StepCounters& counters) const = 0;
};

struct StepperConfig {
  Scheme scheme;
  AFlowKind a_flow = AFlowKind::CF4;
  bool project_real = true;
};

/// Applies a composition scheme: B-kicks frozen at t_n + c_i h with complex
/// durations b_i h, A-flows over [t_n + c_{i-1} h, t_n + c_i h].
class CompositionIntegrator final : public Integrator {
 public:
  /// Throws Error if project_real is off for a scheme with complex b, or if
  /// any a-coefficient is not real.
  explicit CompositionIntegrator(StepperConfig cfg);

  std::string name() const override { return cfg_.scheme.name; }
  int a_stages() const override { return a_stages_; }
  void step(const Problem& problem, State& state, double t, double h,
            StepCounters& counters) const override;
  /// step() without the final real projection.
  void apply_stages(const Problem& problem, State& state, double t, double h,
                    StepCounters& counters) const;

  const StepperConfig& config() const { return cfg_; }
  const StageSequence& stages() const { return seq_; }

 private:
  StepperConfig cfg_;
  StageSequence seq_;
  int a_stages_ = 0;
};

/// Basic Strang method: half kick at t_n, one frozen A exponential over h,
/// half kick at t_n + h.
class StrangIntegrator final : public Integrator {
 public:
  explicit StrangIntegrator(FreezeConvention freeze = FreezeConvention::Midpoint)
      : freeze_(freeze) {}
  std::string name() const override { return "Strang"; }
  int a_stages() const override { return 1; }
  void step(const Problem& problem, State& state, double t, double h,
            StepCounters& counters) const override;

 private:
  FreezeConvention freeze_;
};

/// Richardson extrapolation (4/3) S(h/2) S(h/2) - (1/3) S(h) of the Strang
/// method, each branch run from the same input state.
class Ext4Integrator final : public Integrator {
 public:
  explicit Ext4Integrator(FreezeConvention freeze = FreezeConvention::Midpoint)
      : strang_(freeze) {}
  std::string name() const override { return "EXT4"; }
  int a_stages() const override { return 3; }
  void step(const Problem& problem, State& state, double t, double h,
            StepCounters& counters) const override;

 private:
  StrangIntegrator strang_;
};

/// Method ids: "Strang", "EXT4", any builtin scheme name ("S62", "SM4", ...),
/// or "file:<path>" for a coefficient file.
std::unique_ptr<Integrator> make_integrator(std::string_view id, AFlowKind a_flow = AFlowKind::CF4,
                                            FreezeConvention freeze = FreezeConvention::Midpoint);

/// Replaces every entry by its real part.
void project_real(State& state);

/// n_steps equal steps from t0 to tf. On StepFailed the record is returned
/// with `failed` set and the partial state.
std::pair<State, RunRecord> integrate(const Integrator& method, const Problem& problem, State u0,
                                      double t0, double tf, long long n_steps);

double l2_distance(const State& x, const State& y);

}  // namespace cxsplit

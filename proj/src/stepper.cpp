#include "cxsplit/stepper.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cxsplit {
namespace {

bool all_finite(const State& u) {
  for (const auto& x : u) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

template <typename F>
void run_stage(std::size_t stage, F&& f) {
  try {
    f();
  } catch (const StepFailed& e) {
    throw StepFailed(stage, e.what());
  } catch (const StepTooLarge& e) {
    throw StepFailed(stage, e.what());
  }
}

void frozen_exponential(const Problem& problem, double t_frozen, double duration, State& u) {
  const std::array<double, 1> times{t_frozen};
  const std::array<double, 1> weights{1.0};
  problem.a_frozen(times, weights, duration, u);
}

}  // namespace

void project_real(State& state) {
  for (auto& x : state) x = x.real();
}

double l2_distance(const State& x, const State& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

CompositionIntegrator::CompositionIntegrator(StepperConfig cfg)
    : cfg_(std::move(cfg)), seq_(expand(cfg_.scheme)) {
  bool complex_b = false;
  for (const auto& st : seq_) {
    if (st.node.imag() != 0.0) {
      throw ComplexTimeError("scheme '" + cfg_.scheme.name +
                             "' would evaluate A or B at a complex time");
    }
    if (st.role == StageRole::AFlow) {
      ++a_stages_;
    } else if (st.coeff.imag() != 0.0) {
      complex_b = true;
    }
  }
  if (complex_b && !cfg_.project_real) {
    throw Error("scheme '" + cfg_.scheme.name + "' has complex b and requires real projection");
  }
}

void CompositionIntegrator::step(const Problem& problem, State& state, double t, double h,
                                 StepCounters& counters) const {
  apply_stages(problem, state, t, h, counters);
  if (cfg_.project_real) project_real(state);
}

void CompositionIntegrator::apply_stages(const Problem& problem, State& state, double t, double h,
                                         StepCounters& counters) const {
  for (std::size_t i = 0; i < seq_.size(); ++i) {
    const auto& st = seq_[i];
    // Guards the invariant established at construction.
    if (st.node.imag() != 0.0 || (st.role == StageRole::AFlow && st.coeff.imag() != 0.0)) {
      throw ComplexTimeError("complex time at stage " + std::to_string(i));
    }
    const double t_stage = t + st.node.real() * h;
    run_stage(i, [&] {
      if (st.role == StageRole::BKick) {
        problem.b_kick(t_stage, st.coeff * h, state);
      } else {
        counters.kernel_evals += a_flow(problem, cfg_.a_flow, t_stage, st.coeff.real() * h, state);
        ++counters.a_flow_evals;
      }
    });
  }
}

void StrangIntegrator::step(const Problem& problem, State& state, double t, double h,
                            StepCounters& counters) const {
  const double t_freeze = freeze_ == FreezeConvention::Midpoint ? t + 0.5 * h : t;
  run_stage(0, [&] { problem.b_kick(t, 0.5 * h, state); });
  run_stage(1, [&] { frozen_exponential(problem, t_freeze, h, state); });
  ++counters.a_flow_evals;
  ++counters.kernel_evals;
  run_stage(2, [&] { problem.b_kick(t + h, 0.5 * h, state); });
  project_real(state);
}

void Ext4Integrator::step(const Problem& problem, State& state, double t, double h,
                          StepCounters& counters) const {
  State fine = state;
  strang_.step(problem, fine, t, 0.5 * h, counters);
  strang_.step(problem, fine, t + 0.5 * h, 0.5 * h, counters);
  strang_.step(problem, state, t, h, counters);
  for (std::size_t i = 0; i < state.size(); ++i) {
    state[i] = (4.0 / 3.0) * fine[i] - (1.0 / 3.0) * state[i];
  }
  project_real(state);
}

std::unique_ptr<Integrator> make_integrator(std::string_view id, AFlowKind a_flow,
                                            FreezeConvention freeze) {
  if (id == "Strang") return std::make_unique<StrangIntegrator>(freeze);
  if (id == "EXT4") return std::make_unique<Ext4Integrator>(freeze);
  if (id.starts_with("file:")) {
    const std::string path(id.substr(5));
    std::ifstream in(path);
    if (!in) throw Error("cannot open coefficient file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return std::make_unique<CompositionIntegrator>(
        StepperConfig{load_scheme(text.str()), a_flow, true});
  }
  return std::make_unique<CompositionIntegrator>(StepperConfig{builtin_scheme(id), a_flow, true});
}

std::pair<State, RunRecord> integrate(const Integrator& method, const Problem& problem, State u0,
                                      double t0, double tf, long long n_steps) {
  if (n_steps < 1) throw Error("n_steps must be at least 1");
  if (u0.size() != problem.dim()) throw Error("initial state has the wrong dimension");
  RunRecord rec;
  rec.method = method.name();
  rec.h = (tf - t0) / static_cast<double>(n_steps);
  StepCounters counters;
  const auto start = std::chrono::steady_clock::now();
  try {
    for (long long n = 0; n < n_steps; ++n) {
      // t_n computed from n, not accumulated, so nodes stay exact across runs.
      const double t = t0 + static_cast<double>(n) * rec.h;
      method.step(problem, u0, t, rec.h, counters);
      ++rec.n_steps;
      if (!all_finite(u0)) throw StepFailed(0, "non-finite state after step " + std::to_string(n));
    }
  } catch (const StepFailed&) {
    rec.failed = true;
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.a_flow_evals = counters.a_flow_evals;
  rec.kernel_evals = counters.kernel_evals;
  return {std::move(u0), rec};
}

}  // namespace cxsplit

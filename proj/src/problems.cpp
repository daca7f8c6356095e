#include "cxsplit/problems.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace cxsplit {
namespace {

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double weighted_sum(std::span<const double> weights, auto&& f,
                    std::span<const double> times) {
  double s = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) s += weights[k] * f(times[k]);
  return s;
}

}  // namespace

void Problem::a_exact(double, double, State&) const {
  throw Error("problem '" + id() + "' has no exact A-flow");
}

int a_flow(const Problem& problem, AFlowKind kind, double t0, double h, State& state) {
  const FrozenExponential frozen = [&problem](std::span<const double> times,
                                              std::span<const double> weights, double duration,
                                              State& u) {
    problem.a_frozen(times, weights, duration, u);
  };
  switch (kind) {
    case AFlowKind::Exact:
      problem.a_exact(t0, h, state);
      return 1;
    case AFlowKind::CF2:
      return cf2_step(t0, h, state, frozen);
    case AFlowKind::CF4:
      return cf4_step(t0, h, state, frozen, problem.a_commuting());
  }
  return 0;
}

// ---------------------------------------------------------------------------

OscillatorProblem::OscillatorProblem(OscillatorParams params) : p_(params) {}

std::string OscillatorProblem::parameter_text() const {
  return "osc eps=" + fmt17(p_.epsilon) + " s=" + std::to_string(p_.s) +
         " omega_step=" + fmt17(p_.omega_step) + " q0=" + fmt17(p_.q0) + " p0=" + fmt17(p_.p0) +
         " t0=" + fmt17(p_.t0) + " tf=" + fmt17(p_.tf);
}

State OscillatorProblem::initial_state() const { return {p_.q0, p_.p0}; }

void OscillatorProblem::a_frozen(std::span<const double> times, std::span<const double> weights,
                                 double duration, State& state) const {
  // sum_k w_k [[0, 1], [-W_k^2, 0]] = W [[0, 1], [-S/W, 0]] with W = sum w_k.
  double w_total = 0.0;
  for (const double w : weights) w_total += w;
  const double s = weighted_sum(
      weights,
      [](double t) {
        const double om = OscillatorParams::omega(t);
        return om * om;
      },
      times);
  const auto out = exp_2x2(s / w_total, duration * w_total, {state[0], state[1]});
  state[0] = out[0];
  state[1] = out[1];
}

void OscillatorProblem::b_kick(double t_frozen, Complex tau, State& state) const {
  Complex force = 0.0;
  for (int j = 1; j <= p_.s; ++j) force += std::sin(state[0] - p_.omega_step * j * t_frozen);
  state[1] -= tau * p_.epsilon * force;
}

void OscillatorProblem::full_rhs(double t, std::span<const double> u,
                                 std::span<double> du) const {
  double force = 0.0;
  for (int j = 1; j <= p_.s; ++j) force += std::sin(u[0] - p_.omega_step * j * t);
  const double om = OscillatorParams::omega(t);
  du[0] = u[1];
  du[1] = -om * om * u[0] - p_.epsilon * force;
}

// ---------------------------------------------------------------------------

double ParabolicParams::alpha_sq_integral(double t0, double t1) const {
  // alpha^2 = 1/16 + mu^2/2 + (mu/2) cos wt + (mu^2/2) cos 2wt
  return (1.0 / 16.0 + 0.5 * mu * mu) * (t1 - t0) +
         mu / (2.0 * w) * (std::sin(w * t1) - std::sin(w * t0)) +
         mu * mu / (4.0 * w) * (std::sin(2.0 * w * t1) - std::sin(2.0 * w * t0));
}

ParabolicProblem::ParabolicProblem(ParabolicParams params)
    : p_(params), lap_(params.n, params.dx()) {}

std::string ParabolicProblem::parameter_text() const {
  return "parabolic n=" + std::to_string(p_.n) + " mu=" + fmt17(p_.mu) + " w=" + fmt17(p_.w) +
         " tf=" + fmt17(p_.tf);
}

State ParabolicProblem::initial_state() const {
  State u(p_.n);
  for (std::size_t j = 0; j < p_.n; ++j) u[j] = std::sin(2.0 * std::numbers::pi * p_.x(j));
  return u;
}

void ParabolicProblem::a_frozen(std::span<const double> times, std::span<const double> weights,
                                double duration, State& state) const {
  const double coeff = weighted_sum(
      weights,
      [this](double t) {
        const double a = p_.alpha(t);
        return a * a;
      },
      times);
  lap_.apply_exp(duration * coeff, state);
}

void ParabolicProblem::a_exact(double t0, double h, State& state) const {
  lap_.apply_exp(p_.alpha_sq_integral(t0, t0 + h), state);
}

void ParabolicProblem::b_kick(double t_frozen, Complex tau, State& state) const {
  for (std::size_t j = 0; j < p_.n; ++j) {
    state[j] *= std::exp(tau * ParabolicParams::potential(p_.x(j), t_frozen));
  }
}

void ParabolicProblem::full_rhs(double t, std::span<const double> u,
                                std::span<double> du) const {
  lap_.apply(u, du);
  const double a = p_.alpha(t);
  for (std::size_t j = 0; j < p_.n; ++j) {
    du[j] = a * a * du[j] + ParabolicParams::potential(p_.x(j), t) * u[j];
  }
}

// ---------------------------------------------------------------------------

FisherProblem::FisherProblem(FisherParams params)
    : p_(params), lap_(params.grid.n, params.grid.dx()) {}

std::string FisherProblem::parameter_text() const {
  return "fisher n=" + std::to_string(p_.grid.n) + " mu=" + fmt17(p_.grid.mu) +
         " w=" + fmt17(p_.grid.w) + " tf=" + fmt17(p_.grid.tf) + " beta=" + fmt17(p_.beta) +
         " gamma_scale=" + fmt17(p_.gamma_scale);
}

State FisherProblem::initial_state() const {
  State u(p_.grid.n);
  for (std::size_t j = 0; j < p_.grid.n; ++j) {
    u[j] = std::sin(2.0 * std::numbers::pi * p_.grid.x(j));
  }
  return u;
}

void FisherProblem::a_frozen(std::span<const double> times, std::span<const double> weights,
                             double duration, State& state) const {
  const double coeff = weighted_sum(
      weights,
      [this](double t) {
        const double a = p_.grid.alpha(t);
        return a * a;
      },
      times);
  lap_.apply_exp(duration * coeff, state);
}

void FisherProblem::a_exact(double t0, double h, State& state) const {
  lap_.apply_exp(p_.grid.alpha_sq_integral(t0, t0 + h), state);
}

void FisherProblem::b_kick(double t_frozen, Complex tau, State& state) const {
  const Complex growth = std::exp(p_.gamma(t_frozen) * tau);
  for (std::size_t j = 0; j < state.size(); ++j) {
    const Complex denom = 1.0 + state[j] * (growth - 1.0);
    if (std::abs(denom) < 1e-12) throw StepFailed(0, "singular logistic flow");
    state[j] = state[j] * growth / denom;
  }
}

void FisherProblem::full_rhs(double t, std::span<const double> u, std::span<double> du) const {
  lap_.apply(u, du);
  const double a = p_.grid.alpha(t);
  const double g = p_.gamma(t);
  for (std::size_t j = 0; j < u.size(); ++j) du[j] = a * a * du[j] + g * u[j] * (1.0 - u[j]);
}

}  // namespace cxsplit

#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "cxsplit/problem.hpp"
#include "cxsplit/propagators.hpp"

namespace cxsplit {

/// q'' + Omega(t)^2 q = -eps sum_j sin(q - omega_j t), written for (q, p).
struct OscillatorParams {
  double epsilon = 0.25;
  int s = 3;
  /// omega_j = omega_step * j, j = 1..s.
  double omega_step = 7.0;
  double q0 = 0.0;
  double p0 = 11.2075;
  double t0 = 0.0;
  double tf = 2.0 * std::numbers::pi;

  /// Omega(t) = 1 + cos(1.5 t)/2.
  static double omega(double t) { return 1.0 + 0.5 * std::cos(1.5 * t); }
};

/// u_t = alpha(t)^2 u_xx + V(x, t) u on the periodic unit interval.
struct ParabolicParams {
  std::size_t n = 100;
  double mu = 1.0 / 6.0;
  double w = 2.0;
  double tf = 1.0;

  double dx() const { return 1.0 / static_cast<double>(n); }
  /// alpha(t) = 1/4 + mu cos(w t).
  double alpha(double t) const { return 0.25 + mu * std::cos(w * t); }
  /// Closed-form integral of alpha^2 over [t0, t1].
  double alpha_sq_integral(double t0, double t1) const;
  /// V(x, t) = (3 (1 - e^{-t}) + sin 2 pi x) / 10.
  static double potential(double x, double t) {
    return 0.1 * (3.0 * (1.0 - std::exp(-t)) + std::sin(2.0 * std::numbers::pi * x));
  }
  /// x_j = j dx, j = 1..N.
  double x(std::size_t j) const { return static_cast<double>(j + 1) * dx(); }
};

/// u_t = alpha(t)^2 u_xx + gamma(t) u (1 - u), same grid as ParabolicParams.
struct FisherParams {
  ParabolicParams grid;
  double beta = 1.0;
  /// Multiplies gamma; 0 switches the reaction off.
  double gamma_scale = 1.0;

  /// gamma(t) = (2 - e^{-beta t}) / 100.
  double gamma(double t) const { return gamma_scale * (2.0 - std::exp(-beta * t)) / 100.0; }
};

class OscillatorProblem final : public Problem {
 public:
  explicit OscillatorProblem(OscillatorParams params = {});

  std::string id() const override { return "osc"; }
  std::string parameter_text() const override;
  std::size_t dim() const override { return 2; }
  double t0() const override { return p_.t0; }
  double tf() const override { return p_.tf; }
  State initial_state() const override;

  /// One 2x2 rotation kernel with effective frequency sum_k w_k Omega(t_k)^2.
  void a_frozen(std::span<const double> times, std::span<const double> weights, double duration,
                State& state) const override;
  /// p <- p - tau eps sum_j sin(q - omega_j t); q is untouched.
  void b_kick(double t_frozen, Complex tau, State& state) const override;
  void full_rhs(double t, std::span<const double> u, std::span<double> du) const override;

  const OscillatorParams& params() const { return p_; }

 private:
  OscillatorParams p_;
};

class ParabolicProblem final : public Problem {
 public:
  explicit ParabolicProblem(ParabolicParams params = {});

  std::string id() const override { return "parabolic"; }
  std::string parameter_text() const override;
  std::size_t dim() const override { return p_.n; }
  double t0() const override { return 0.0; }
  double tf() const override { return p_.tf; }
  State initial_state() const override;

  void a_frozen(std::span<const double> times, std::span<const double> weights, double duration,
                State& state) const override;
  bool a_commuting() const override { return true; }
  bool has_exact_a_flow() const override { return true; }
  void a_exact(double t0, double h, State& state) const override;
  /// Pointwise multiplication by exp(tau V(x_j, t_frozen)).
  void b_kick(double t_frozen, Complex tau, State& state) const override;
  void full_rhs(double t, std::span<const double> u, std::span<double> du) const override;

  const ParabolicParams& params() const { return p_; }
  const CirculantLaplacian& laplacian() const { return lap_; }

 private:
  ParabolicParams p_;
  CirculantLaplacian lap_;
};

class FisherProblem final : public Problem {
 public:
  explicit FisherProblem(FisherParams params = {});

  std::string id() const override { return "fisher"; }
  std::string parameter_text() const override;
  std::size_t dim() const override { return p_.grid.n; }
  double t0() const override { return 0.0; }
  double tf() const override { return p_.grid.tf; }
  State initial_state() const override;

  void a_frozen(std::span<const double> times, std::span<const double> weights, double duration,
                State& state) const override;
  bool a_commuting() const override { return true; }
  bool has_exact_a_flow() const override { return true; }
  void a_exact(double t0, double h, State& state) const override;
  /// Logistic flow u e^{g tau} / (1 + u (e^{g tau} - 1)) with g = gamma(t_frozen).
  /// Throws StepFailed when the denominator falls below 1e-12.
  void b_kick(double t_frozen, Complex tau, State& state) const override;
  void full_rhs(double t, std::span<const double> u, std::span<double> du) const override;

  const FisherParams& params() const { return p_; }

 private:
  FisherParams p_;
  CirculantLaplacian lap_;
};

}  // namespace cxsplit

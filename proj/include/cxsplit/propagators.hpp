#pragma once

#include <array>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "cxsplit/types.hpp"

namespace cxsplit {

/// Applies exp(duration * sum_k weights[k] * A(times[k])) to `state` in place.
/// All times are real.
using FrozenExponential = std::function<void(std::span<const double> times,
                                             std::span<const double> weights,
                                             double duration, State& state)>;

namespace cf4 {
inline const double alpha = 0.5 - std::numbers::sqrt3 / 3.0;
inline const double beta = 1.0 - alpha;
/// Gauss-Legendre nodes on [0, 1].
inline const double node1 = 0.5 - std::numbers::sqrt3 / 6.0;
inline const double node2 = 0.5 + std::numbers::sqrt3 / 6.0;
}  // namespace cf4

enum class AFlowKind { Exact, CF2, CF4 };

/// One frozen exponential at the midpoint t0 + h/2. Returns the number of
/// kernel applications (always 1).
int cf2_step(double t0, double h, State& state, const FrozenExponential& frozen);

/// Fourth-order commutator-free Magnus step over [t0, t0 + h] with Gauss
/// nodes t1, t2. The map applied first has generator
/// (h/2)(beta A(t1) + alpha A(t2)), the second (h/2)(alpha A(t1) + beta A(t2)).
/// When `commuting` is set the two are fused into the single exponential of
/// (h/2)(A(t1) + A(t2)). Returns the number of kernel applications.
int cf4_step(double t0, double h, State& state, const FrozenExponential& frozen,
             bool commuting = false);

class Problem;

/// Advances u' = A(t, u) over [t0, t0 + h] with the requested approximation.
/// Exact requires Problem::has_exact_a_flow(). Returns the kernel count.
int a_flow(const Problem& problem, AFlowKind kind, double t0, double h, State& state);

/// exp(tau [[0, 1], [-omega_sq, 0]]) applied to (q, p). Handles omega_sq of
/// either sign; |omega_sq| < 1e-14 uses the shear limit.
std::array<Complex, 2> exp_2x2(double omega_sq, Complex tau, std::array<Complex, 2> state);

/// Second-order periodic finite-difference Laplacian on N points of spacing
/// dx, diagonalized by the discrete Fourier transform. Copies share the
/// transform plans.
class CirculantLaplacian {
 public:
  CirculantLaplacian(std::size_t n, double dx);

  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  /// lambda_k = (2/dx^2)(cos(2 pi k / N) - 1).
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

  /// state <- exp(tau A) state. Throws StepTooLarge if any mode would grow
  /// past exp(709).
  void apply_exp(Complex tau, State& state) const;

  /// y = A x by the three-point stencil (no transform).
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  struct Plans;
  std::size_t n_;
  double dx_;
  std::vector<double> eigenvalues_;
  std::shared_ptr<const Plans> plans_;
};

/// Free-function form of CirculantLaplacian::apply_exp.
void exp_circulant(const CirculantLaplacian& lap, Complex tau, State& state);

}  // namespace cxsplit

#pragma once

#include <span>
#include <string>

#include "cxsplit/types.hpp"

namespace cxsplit {

/// A separable evolution equation u' = A(t, u) + B(t, u) on a real interval.
///
/// The splitting engine only ever sees frozen sub-flows: A with its time
/// argument frozen at real quadrature nodes, and B frozen at a real time but
/// advanced over a possibly complex duration.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string id() const = 0;
  /// Canonical text of every parameter, used to key reference caches.
  virtual std::string parameter_text() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double t0() const = 0;
  virtual double tf() const = 0;
  virtual State initial_state() const = 0;

  /// state <- exp(duration * sum_k weights[k] * A(times[k])) state.
  virtual void a_frozen(std::span<const double> times, std::span<const double> weights,
                        double duration, State& state) const = 0;

  /// True when A(s) and A(t) commute for all s, t.
  virtual bool a_commuting() const { return false; }

  virtual bool has_exact_a_flow() const { return false; }
  /// Exact flow of u' = A(t, u) over [t0, t0 + h].
  virtual void a_exact(double t0, double h, State& state) const;

  /// Exact flow of u' = B(t_frozen, u) over complex duration tau.
  virtual void b_kick(double t_frozen, Complex tau, State& state) const = 0;

  /// Unsplit right-hand side A(t, u) + B(t, u) for real u.
  virtual void full_rhs(double t, std::span<const double> u, std::span<double> du) const = 0;
};

}  // namespace cxsplit

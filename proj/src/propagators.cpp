#include "cxsplit/propagators.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace cxsplit {
namespace {

// fftw's planner is not thread safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

int cf2_step(double t0, double h, State& state, const FrozenExponential& frozen) {
  const std::array<double, 1> times{t0 + 0.5 * h};
  const std::array<double, 1> weights{1.0};
  frozen(times, weights, h, state);
  return 1;
}

int cf4_step(double t0, double h, State& state, const FrozenExponential& frozen,
             bool commuting) {
  const std::array<double, 2> times{t0 + cf4::node1 * h, t0 + cf4::node2 * h};
  if (commuting) {
    const std::array<double, 2> both{1.0, 1.0};
    frozen(times, both, 0.5 * h, state);
    return 1;
  }
  const std::array<double, 2> first{cf4::beta, cf4::alpha};
  const std::array<double, 2> second{cf4::alpha, cf4::beta};
  frozen(times, first, 0.5 * h, state);
  frozen(times, second, 0.5 * h, state);
  return 2;
}

std::array<Complex, 2> exp_2x2(double omega_sq, Complex tau, std::array<Complex, 2> state) {
  const auto [q, p] = state;
  if (std::abs(omega_sq) < 1e-14) return {q + tau * p, p};
  if (omega_sq > 0.0) {
    const double w = std::sqrt(omega_sq);
    const Complex c = std::cos(tau * w);
    const Complex s = std::sin(tau * w);
    return {c * q + s / w * p, -w * s * q + c * p};
  }
  const double w = std::sqrt(-omega_sq);
  const Complex c = std::cosh(tau * w);
  const Complex s = std::sinh(tau * w);
  return {c * q + s / w * p, w * s * q + c * p};
}

struct CirculantLaplacian::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t n) {
    std::vector<Complex> in(n), out(n);
    const int ni = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_1d(ni, as_fftw(in.data()), as_fftw(out.data()), FFTW_FORWARD, flags);
    backward =
        fftw_plan_dft_1d(ni, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD, flags);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

CirculantLaplacian::CirculantLaplacian(std::size_t n, double dx)
    : n_(n), dx_(dx), eigenvalues_(n) {
  if (n < 3) throw Error("circulant Laplacian needs at least 3 points");
  for (std::size_t k = 0; k < n; ++k) {
    eigenvalues_[k] =
        2.0 / (dx * dx) *
        (std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)) -
         1.0);
  }
  eigenvalues_[0] = 0.0;
  plans_ = std::make_shared<const Plans>(n);
}

void CirculantLaplacian::apply_exp(Complex tau, State& state) const {
  if (state.size() != n_) throw Error("state size does not match the Laplacian");
  if (tau == Complex{0.0, 0.0}) return;
  std::vector<Complex> factor(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex z = tau * eigenvalues_[k];
    if (z.real() > 709.0) {
      throw StepTooLarge("exp(tau * lambda) overflows for mode " + std::to_string(k));
    }
    factor[k] = std::exp(z) / static_cast<double>(n_);
  }
  std::vector<Complex> modes(n_);
  fftw_execute_dft(plans_->forward, as_fftw(state.data()), as_fftw(modes.data()));
  for (std::size_t k = 0; k < n_; ++k) modes[k] *= factor[k];
  fftw_execute_dft(plans_->backward, as_fftw(modes.data()), as_fftw(state.data()));
}

void CirculantLaplacian::apply(std::span<const double> x, std::span<double> y) const {
  const double inv = 1.0 / (dx_ * dx_);
  for (std::size_t j = 0; j < n_; ++j) {
    const double left = x[j == 0 ? n_ - 1 : j - 1];
    const double right = x[j + 1 == n_ ? 0 : j + 1];
    y[j] = inv * (left - 2.0 * x[j] + right);
  }
}

void exp_circulant(const CirculantLaplacian& lap, Complex tau, State& state) {
  lap.apply_exp(tau, state);
}

}  // namespace cxsplit

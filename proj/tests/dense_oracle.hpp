#pragma once

// Dense complex matrices for test oracles. Deliberately naive: nothing here
// shares code with the library's transforms or stage bookkeeping.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

struct Matrix {
  std::size_t n = 0;
  std::vector<Complex> v;

  explicit Matrix(std::size_t size) : n(size), v(size * size) {}
  Complex& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }

  static Matrix identity(std::size_t size) {
    Matrix m(size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k)
      for (std::size_t j = 0; j < a.n; ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline Matrix scaled(Matrix a, Complex s) {
  for (auto& x : a.v) x *= s;
  return a;
}

inline std::vector<Complex> apply(const Matrix& a, const std::vector<Complex>& x) {
  std::vector<Complex> y(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline double norm1(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.n; ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Scaling and squaring with a truncated Taylor series.
inline Matrix expm(const Matrix& a) {
  int squarings = 0;
  double nrm = norm1(a);
  while (nrm > 0.25) {
    nrm /= 2.0;
    ++squarings;
  }
  const Matrix small = scaled(a, std::ldexp(1.0, -squarings));
  Matrix result = Matrix::identity(a.n);
  Matrix term = Matrix::identity(a.n);
  for (int k = 1; k <= 30; ++k) {
    term = scaled(term * small, 1.0 / k);
    for (std::size_t i = 0; i < result.v.size(); ++i) result.v[i] += term.v[i];
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// Periodic second-difference matrix.
inline Matrix laplacian(std::size_t n, double dx) {
  Matrix m(n);
  const double c = 1.0 / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = -2.0 * c;
    m(i, (i + 1) % n) += c;
    m(i, (i + n - 1) % n) += c;
  }
  return m;
}

inline Matrix diagonal(const std::vector<Complex>& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

inline double distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]);
    my += std::log(err[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    sxy += (std::log(h[i]) - mx) * (std::log(err[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace oracle

#include <cmath>
#include <random>

#include "cxsplit/order_conditions.hpp"
#include "cxsplit/schemes.hpp"
#include "doctest.h"

using namespace cxsplit;

namespace {

// Direct evaluation from kick weights and nodes; the pair sum is the literal
// double loop.
struct Direct {
  Complex aba, abb, abaaa;
};

Direct direct(const std::vector<Complex>& b, const std::vector<Complex>& c) {
  Direct d{-1.0 / 12.0, -1.0 / 3.0, -0.2};
  for (std::size_t i = 0; i < b.size(); ++i) {
    d.aba += 0.5 * b[i] * c[i] * (1.0 - c[i]);
    d.abb += 0.5 * b[i] * b[i] * c[i];
    d.abaaa += b[i] * std::pow(c[i], 4);
    for (std::size_t j = i + 1; j < b.size(); ++j) d.abb += b[i] * b[j] * c[j];
  }
  return d;
}

StageSequence bab_sequence(const std::vector<Complex>& b, const std::vector<Complex>& a) {
  StageSequence seq;
  Complex c = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    seq.push_back({StageRole::BKick, b[i], c});
    if (i < a.size()) {
      seq.push_back({StageRole::AFlow, a[i], c});
      c += a[i];
    }
  }
  return seq;
}

void kicks_of(const StageSequence& seq, std::vector<Complex>& b, std::vector<Complex>& c) {
  for (const auto& st : seq) {
    if (st.role == StageRole::BKick) {
      b.push_back(st.coeff);
      c.push_back(st.node);
    }
  }
}

}  // namespace

TEST_CASE("Strang_BAB hand values") {
  const auto r = residuals(expand(builtin_scheme("Strang_BAB")));
  CHECK(std::abs(r.consistency_a) < 1e-16);
  CHECK(std::abs(r.consistency_b) < 1e-16);
  CHECK(std::abs(r.p_aba - Complex(-1.0 / 12.0)) < 1e-16);
  CHECK(std::abs(r.p_abb - Complex(1.0 / 24.0)) < 1e-16);
  // b = (1/2, 1/2), c = (0, 1): 1/2 - 1/5.
  CHECK(std::abs(r.p_abaaa - Complex(0.3)) < 1e-16);
}

TEST_CASE("S62 zeroes p_aba and p_abaaa") {
  const auto r = residuals(expand(builtin_scheme("S62")));
  CHECK(std::abs(r.p_aba) < 1e-14);
  CHECK(std::abs(r.p_abaaa) < 1e-14);
  CHECK(std::abs(r.p_abb) > 1e-3);
}

TEST_CASE("SM4 and SM64 zero the fourth-order conditions") {
  for (const char* name : {"SM4", "SM64"}) {
    CAPTURE(name);
    const auto r = residuals(expand(builtin_scheme(name)));
    CHECK(std::abs(r.p_aba) < 1e-10);
    CHECK(std::abs(r.p_abb) < 1e-10);
  }
  CHECK(std::abs(residuals(expand(builtin_scheme("SM64"))).p_abaaa) < 1e-8);
}

TEST_CASE("residuals agree with the direct double sum on random sequences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 7;
    std::vector<Complex> a, b;
    for (int i = 0; i < m; ++i) a.emplace_back(u(rng), u(rng));
    for (int i = 0; i <= m; ++i) b.emplace_back(u(rng), u(rng));
    const auto seq = bab_sequence(b, a);
    std::vector<Complex> bb, cc;
    kicks_of(seq, bb, cc);
    const auto want = direct(bb, cc);
    const auto got = residuals(seq);
    CHECK(std::abs(got.p_aba - want.aba) < 1e-13);
    CHECK(std::abs(got.p_abb - want.abb) < 1e-13);
    CHECK(std::abs(got.p_abaaa - want.abaaa) < 1e-12);
  }
}

TEST_CASE("conjugation equivariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> a, b;
    for (int i = 0; i < 4; ++i) a.emplace_back(u(rng), u(rng));
    for (int i = 0; i < 5; ++i) b.emplace_back(u(rng), u(rng));
    const auto seq = bab_sequence(b, a);
    const auto r = residuals(seq);
    const auto rc = residuals(conjugate(seq));
    CHECK(rc.consistency_a == std::conj(r.consistency_a));
    CHECK(rc.consistency_b == std::conj(r.consistency_b));
    CHECK(rc.p_aba == std::conj(r.p_aba));
    CHECK(rc.p_abb == std::conj(r.p_abb));
    CHECK(rc.p_abaaa == std::conj(r.p_abaaa));
  }
}

TEST_CASE("scaling every b by 2 gives consistency_b = 2 sum(b) - 1") {
  auto seq = expand(builtin_scheme("SM4"));
  for (auto& st : seq)
    if (st.role == StageRole::BKick) st.coeff *= 2.0;
  CHECK(std::abs(residuals(seq).consistency_b - Complex(1.0)) < 1e-15);
}

TEST_CASE("ABA sequences match the BAB sequence padded with zero kicks") {
  for (const auto& aba : {builtin_scheme("Strang_ABA")}) {
    const auto seq = expand(aba);
    StageSequence padded;
    padded.push_back({StageRole::BKick, 0.0, 0.0});
    for (const auto& st : seq) padded.push_back(st);
    Complex end = 0.0;
    for (const auto& st : seq)
      if (st.role == StageRole::AFlow) end += st.coeff;
    padded.push_back({StageRole::BKick, 0.0, end});

    const auto x = residuals(seq);
    const auto y = residuals(padded);
    CHECK(x.consistency_a == y.consistency_a);
    CHECK(x.consistency_b == y.consistency_b);
    CHECK(x.p_aba == y.p_aba);
    CHECK(x.p_abb == y.p_abb);
    CHECK(x.p_abaaa == y.p_abaaa);
  }
}

TEST_CASE("Strang_ABA shares the BAB residuals up to the kick placement") {
  // b = 1 at c = 1/2.
  const auto r = residuals(expand(builtin_scheme("Strang_ABA")));
  CHECK(std::abs(r.p_aba - Complex(0.125 - 1.0 / 12.0)) < 1e-16);
  CHECK(std::abs(r.p_abb - Complex(0.25 - 1.0 / 3.0)) < 1e-16);
  CHECK(std::abs(r.p_abaaa - Complex(1.0 / 16.0 - 0.2)) < 1e-16);
}

TEST_CASE("empty sequences are rejected") {
  CHECK_THROWS_AS(residuals({}), InvalidSequence);
  CHECK_THROWS_AS(residual_jacobian({}, {{0}}), InvalidSequence);
}

TEST_CASE("residual selects the requested condition") {
  const auto r = residuals(expand(builtin_scheme("Strang_BAB")));
  CHECK(residual(r, Condition::Aba) == r.p_aba);
  CHECK(residual(r, Condition::Abb) == r.p_abb);
  CHECK(residual(r, Condition::Abaaa) == r.p_abaaa);
}

TEST_CASE("jacobian of p_aba is c(1 - c)/2") {
  const auto seq = expand(builtin_scheme("SM64"));
  std::vector<Complex> b, c;
  kicks_of(seq, b, c);
  std::vector<std::vector<std::size_t>> single;
  for (std::size_t i = 0; i < b.size(); ++i) single.push_back({i});
  const auto jac = residual_jacobian(seq, single);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(std::abs(jac[i][0] - 0.5 * c[i] * (1.0 - c[i])) < 1e-16);
  }
}

TEST_CASE("jacobian of p_abb at Strang_BAB, second kick") {
  const auto jac = residual_jacobian(expand(builtin_scheme("Strang_BAB")), {{1}});
  CHECK(std::abs(jac[0][1] - Complex(1.0)) < 1e-16);
}

TEST_CASE("jacobian matches central finite differences on SM4") {
  const auto seq = expand(builtin_scheme("SM4"));
  std::size_t nkicks = 0;
  for (const auto& st : seq) nkicks += st.role == StageRole::BKick;
  std::vector<std::vector<std::size_t>> single;
  for (std::size_t i = 0; i < nkicks; ++i) single.push_back({i});
  // A shared unknown mirrors how symmetric designs tie b_i to b_{m+2-i}.
  single.push_back({0, nkicks - 1});
  const auto jac = residual_jacobian(seq, single);

  const double eps = 1e-6;
  for (std::size_t k = 0; k < single.size(); ++k) {
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      auto plus = seq, minus = seq;
      std::size_t kick = 0;
      for (std::size_t s = 0; s < seq.size(); ++s) {
        if (seq[s].role != StageRole::BKick) continue;
        for (const auto idx : single[k]) {
          if (idx == kick) {
            plus[s].coeff += eps * dir;
            minus[s].coeff -= eps * dir;
          }
        }
        ++kick;
      }
      const auto rp = residuals(plus);
      const auto rm = residuals(minus);
      // Holomorphic in b: the directional derivative is J * dir.
      const Complex fd[3] = {(rp.p_aba - rm.p_aba) / (2 * eps), (rp.p_abb - rm.p_abb) / (2 * eps),
                             (rp.p_abaaa - rm.p_abaaa) / (2 * eps)};
      for (int row = 0; row < 3; ++row) CHECK(std::abs(fd[row] - jac[k][row] * dir) < 1e-7);
    }
  }
}

TEST_CASE("jacobian rejects out-of-range kick indices") {
  CHECK_THROWS_AS(residual_jacobian(expand(builtin_scheme("Strang_BAB")), {{2}}),
                  InvalidSequence);
}

#include "cxsplit/order_conditions.hpp"

#include <cmath>

namespace cxsplit {
namespace {

// Neumaier summation, applied per component.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_one(re_, cre_, x.real());
    add_one(im_, cim_, x.imag());
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_one(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

struct Kicks {
  std::vector<Complex> b;
  std::vector<Complex> c;
  Complex sum_a;
};

// B-kick weights and nodes. A leading A-flow gets a synthetic zero kick at
// c = 0 and a trailing one gets a zero kick at the final node, so both
// patterns go through the same formulas.
Kicks collect(const StageSequence& seq) {
  if (seq.empty()) throw InvalidSequence("empty stage sequence");
  Kicks k;
  if (seq.front().role == StageRole::AFlow) {
    k.b.push_back(0.0);
    k.c.push_back(0.0);
  }
  CompensatedSum sa;
  Complex c = 0.0;
  for (const auto& st : seq) {
    if (st.role == StageRole::AFlow) {
      sa.add(st.coeff);
      c += st.coeff;
    } else {
      k.b.push_back(st.coeff);
      k.c.push_back(st.node);
    }
  }
  if (seq.back().role == StageRole::AFlow) {
    k.b.push_back(0.0);
    k.c.push_back(c);
  }
  k.sum_a = sa.value();
  return k;
}

}  // namespace

Residuals residuals(const StageSequence& seq) {
  const auto k = collect(seq);
  const auto n = k.b.size();

  CompensatedSum sb, aba, abb, abaaa;
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = k.b[i];
    const auto c = k.c[i];
    sb.add(b);
    aba.add(0.5 * b * c * (1.0 - c));
    abb.add(0.5 * b * b * c);
    abaaa.add(b * c * c * c * c);
  }
  // sum_{i<j} b_i b_j c_j = sum_j b_j c_j (b_1 + ... + b_{j-1})
  Complex prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    abb.add(prefix * k.b[j] * k.c[j]);
    prefix += k.b[j];
  }

  Residuals r;
  r.consistency_a = k.sum_a - 1.0;
  r.consistency_b = sb.value() - 1.0;
  r.p_aba = aba.value() - 1.0 / 12.0;
  r.p_abb = abb.value() - 1.0 / 3.0;
  r.p_abaaa = abaaa.value() - 1.0 / 5.0;
  return r;
}

Complex residual(const Residuals& r, Condition c) {
  switch (c) {
    case Condition::Aba:
      return r.p_aba;
    case Condition::Abb:
      return r.p_abb;
    case Condition::Abaaa:
      return r.p_abaaa;
  }
  return {};
}

ResidualJacobian residual_jacobian(const StageSequence& seq,
                                   const std::vector<std::vector<std::size_t>>& unknowns) {
  if (seq.empty()) throw InvalidSequence("empty stage sequence");
  std::vector<Complex> b, c;
  for (const auto& st : seq) {
    if (st.role == StageRole::BKick) {
      b.push_back(st.coeff);
      c.push_back(st.node);
    }
  }
  const auto n = b.size();

  // Per-kick partial derivatives.
  std::vector<std::array<Complex, 3>> d(n);
  Complex prefix = 0.0;
  Complex suffix = 0.0;
  std::vector<Complex> after(n);
  for (std::size_t i = n; i-- > 0;) {
    after[i] = suffix;
    suffix += b[i] * c[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    d[i][0] = 0.5 * c[i] * (1.0 - c[i]);
    d[i][1] = b[i] * c[i] + prefix * c[i] + after[i];
    d[i][2] = c[i] * c[i] * c[i] * c[i];
    prefix += b[i];
  }

  ResidualJacobian jac(unknowns.size());
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    jac[k] = {0.0, 0.0, 0.0};
    for (const auto idx : unknowns[k]) {
      if (idx >= n) {
        throw InvalidSequence("unknown refers to B-kick " + std::to_string(idx) + " of " +
                              std::to_string(n));
      }
      for (int r = 0; r < 3; ++r) jac[k][r] += d[idx][r];
    }
  }
  return jac;
}

}  // namespace cxsplit

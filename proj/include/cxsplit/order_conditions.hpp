#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cxsplit/schemes.hpp"

namespace cxsplit {

/// Consistency defects and the residuals of the leading error terms of a
/// symmetric composition applied to a perturbed problem A + eps*B:
///   p_aba   multiplies eps   * h^3 [[A,B],A]
///   p_abb   multiplies eps^2 * h^3 [[A,B],B]
///   p_abaaa multiplies eps   * h^5 [[[[A,B],A],A],A]
struct Residuals {
  Complex consistency_a;
  Complex consistency_b;
  Complex p_aba;
  Complex p_abb;
  Complex p_abaaa;
};

enum class Condition { Aba, Abb, Abaaa };

/// With b_i the B-kick weights and c_i their nodes:
///   p_aba   = 1/2 sum b_i c_i (1 - c_i) - 1/12
///   p_abb   = sum 1/2 b_i^2 c_i + sum_{i<j} b_i b_j c_j - 1/3
///   p_abaaa = sum b_i c_i^4 - 1/5
/// An ABA sequence is handled as a BAB sequence with zero-weight end kicks.
/// Throws InvalidSequence on an empty sequence.
Residuals residuals(const StageSequence& seq);

Complex residual(const Residuals& r, Condition c);

/// Rows are d(p_aba), d(p_abb), d(p_abaaa); column k is the derivative with
/// respect to one shared unknown assigned to every B-kick listed in
/// `unknowns[k]` (indices count B-kicks only, in sequence order).
using ResidualJacobian = std::vector<std::array<Complex, 3>>;

ResidualJacobian residual_jacobian(const StageSequence& seq,
                                   const std::vector<std::vector<std::size_t>>& unknowns);

}  // namespace cxsplit

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cxsplit/types.hpp"

namespace cxsplit {

enum class Pattern { BAB, ABA };

/// An interleaved composition of A-flows and B-kicks.
///
/// For symmetric schemes `a` and `b` hold only the unique leading half of
/// the palindromic interleaving, up to and including the central stage.
/// A BAB scheme with interleaving b1 a1 b2 a2 b3 a2 b2 a1 b1 is stored as
/// a = {a1, a2}, b = {b1, b2, b3}. Non-symmetric schemes store the full
/// sequences.
struct Scheme {
  std::string name;
  Pattern pattern = Pattern::BAB;
  std::vector<Complex> a;
  std::vector<Complex> b;
  int claimed_order = 0;
  bool symmetric = false;
  /// Effective order (2s, 2) for near-integrable problems, if applicable.
  std::optional<std::pair<int, int>> effective_order;

  /// Fully expanded coefficient lists in application order.
  std::vector<Complex> full_a() const;
  std::vector<Complex> full_b() const;
  /// Number of A-flow stages per step.
  std::size_t a_stages() const { return full_a().size(); }
};

enum class StageRole { AFlow, BKick };

/// `node` is the cumulative sum of the a-coefficients preceding the stage,
/// i.e. the left end of an A-flow interval or the frozen time of a B-kick,
/// in units of the step size.
struct Stage {
  StageRole role;
  Complex coeff;
  Complex node;
};

using StageSequence = std::vector<Stage>;

/// Names accepted by builtin_scheme().
std::vector<std::string> builtin_names();

/// Throws NotInCatalog for unknown names.
Scheme builtin_scheme(std::string_view name);

/// Parses the line-oriented coefficient format:
///
///     # comment
///     name=SM4
///     pattern=BAB
///     order=4
///     symmetric=true
///     b 0.018329102861074364 -0.10677008344599524
///     a 0.13505265889288437 0
///     ...
///
/// Coefficient lines appear in interleaving order. The result is checked
/// with check_scheme() at the loaded-file tolerance.
Scheme load_scheme(std::string_view text);

/// Inverse of load_scheme(); values are written with 17 significant digits
/// so a round trip is bit-exact.
std::string serialize_scheme(const Scheme& scheme);

/// Interleaved stage list with nodes, in the order the maps are applied.
StageSequence expand(const Scheme& scheme);

/// Elementwise complex conjugate of every coefficient.
Scheme conjugate(const Scheme& scheme);
StageSequence conjugate(const StageSequence& seq);

struct SchemeReport {
  Complex sum_a;
  Complex sum_b;
  /// max |x_i - x_mirror(i)| over the expanded interleaving.
  double symmetry_defect = 0.0;
  double min_re_a = 0.0;
  double min_re_b = 0.0;
  double max_abs_im_a = 0.0;

  Complex consistency_a() const { return sum_a - 1.0; }
  Complex consistency_b() const { return sum_b - 1.0; }
};

/// Pure report; never throws.
SchemeReport validate_scheme(const Scheme& scheme);

inline constexpr double kBuiltinTolerance = 1e-12;
inline constexpr double kLoadedTolerance = 1e-9;

/// Throws ValidationError tagged "consistency-a", "consistency-b",
/// "symmetry", "stability-a", "stability-b" or "interleaving".
void check_scheme(const Scheme& scheme, double tol);

}  // namespace cxsplit

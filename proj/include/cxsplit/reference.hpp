#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "cxsplit/problem.hpp"

namespace cxsplit {

class ReferenceInconsistent : public Error {
 public:
  using Error::Error;
};

struct ReferenceOptions {
  /// Steps of the SM4 / CF4 splitting route.
  long long split_steps = 1LL << 16;
  /// Steps of the classical RK4 route; 0 picks a problem-dependent count.
  long long rk_steps = 0;
  double tolerance = 1e-10;
  /// Where agreed references are cached; no caching when empty.
  std::optional<std::filesystem::path> cache_dir;
};

struct Reference {
  State state;
  /// 2-norm distance between the two independent routes.
  double agreement = 0.0;
  bool from_cache = false;
};

/// Final-time solution accepted only when the splitting route and an
/// unsplit classical RK4 integration agree to `tolerance` in the 2-norm.
/// Throws ReferenceInconsistent otherwise.
Reference reference_solution(const Problem& problem, const ReferenceOptions& opts = {});

/// Classical fourth-order Runge-Kutta on Problem::full_rhs with real states.
State rk4_solve(const Problem& problem, long long n_steps);

/// RK4 step count used when ReferenceOptions::rk_steps is 0.
long long default_rk_steps(const Problem& problem);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

/// "<id>-<16 hex digits>.ref"
std::string reference_file_name(const Problem& problem, const ReferenceOptions& opts);

/// Cache file layout: 8-byte magic "CXSREF01", the 64-bit parameter hash,
/// the 64-bit entry count, then the entries as 64-bit floats. All
/// little-endian.
void write_reference_file(const std::filesystem::path& path, std::uint64_t hash,
                          const std::vector<double>& values);
std::optional<std::vector<double>> read_reference_file(const std::filesystem::path& path,
                                                       std::uint64_t hash);

}  // namespace cxsplit

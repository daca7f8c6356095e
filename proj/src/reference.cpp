#include "cxsplit/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "cxsplit/problems.hpp"
#include "cxsplit/stepper.hpp"

namespace cxsplit {
namespace {

constexpr char kMagic[8] = {'C', 'X', 'S', 'R', 'E', 'F', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

bool get_u64(std::istream& is, std::uint64_t& v) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

std::uint64_t cache_hash(const Problem& problem, const ReferenceOptions& opts) {
  const long long rk = opts.rk_steps > 0 ? opts.rk_steps : default_rk_steps(problem);
  std::ostringstream os;
  os << problem.parameter_text() << " | split=" << opts.split_steps << " rk=" << rk
     << " tol=" << std::setprecision(17) << opts.tolerance;
  return fnv1a(os.str());
}

// Twice the next power of two above the explicit stability bound h*|lambda| < 2.8,
// but never fewer than 2^16 steps: coarse grids are stable long before RK4 is
// accurate to the reference tolerance.
long long stable_and_accurate(double bound) {
  const auto stable =
      static_cast<long long>(std::bit_ceil(static_cast<unsigned long long>(bound) + 1)) * 2;
  return std::max(stable, 1LL << 16);
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

long long default_rk_steps(const Problem& problem) {
  if (const auto* p = dynamic_cast<const ParabolicProblem*>(&problem)) {
    const auto& g = p->params();
    const double amax = 0.25 + std::abs(g.mu);
    const double bound = 4.0 * g.tf / (g.dx() * g.dx()) * amax * amax;
    return stable_and_accurate(bound);
  }
  if (const auto* p = dynamic_cast<const FisherProblem*>(&problem)) {
    const auto& g = p->params().grid;
    const double amax = 0.25 + std::abs(g.mu);
    const double bound = 4.0 * g.tf / (g.dx() * g.dx()) * amax * amax;
    return stable_and_accurate(bound);
  }
  return 1LL << 20;
}

State rk4_solve(const Problem& problem, long long n_steps) {
  const auto n = problem.dim();
  std::vector<double> u(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
  const auto init = problem.initial_state();
  for (std::size_t i = 0; i < n; ++i) u[i] = init[i].real();
  const double h = (problem.tf() - problem.t0()) / static_cast<double>(n_steps);
  for (long long s = 0; s < n_steps; ++s) {
    const double t = problem.t0() + static_cast<double>(s) * h;
    problem.full_rhs(t, u, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
    problem.full_rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
    problem.full_rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * k3[i];
    problem.full_rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return State(u.begin(), u.end());
}

std::string reference_file_name(const Problem& problem, const ReferenceOptions& opts) {
  std::ostringstream os;
  os << problem.id() << '-' << std::hex << std::setw(16) << std::setfill('0')
     << cache_hash(problem, opts) << ".ref";
  return os.str();
}

void write_reference_file(const std::filesystem::path& path, std::uint64_t hash,
                          const std::vector<double>& values) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write reference cache '" + tmp.string() + "'");
    os.write(kMagic, 8);
    put_u64(os, hash);
    put_u64(os, values.size());
    for (const double v : values) put_u64(os, std::bit_cast<std::uint64_t>(v));
    if (!os) throw Error("failed writing reference cache '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::vector<double>> read_reference_file(const std::filesystem::path& path,
                                                       std::uint64_t hash) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, 8) || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
  std::uint64_t stored = 0, count = 0;
  if (!get_u64(is, stored) || stored != hash || !get_u64(is, count)) return std::nullopt;
  if (count > (1u << 24)) return std::nullopt;
  std::vector<double> values(count);
  for (auto& v : values) {
    std::uint64_t bits = 0;
    if (!get_u64(is, bits)) return std::nullopt;
    v = std::bit_cast<double>(bits);
  }
  return values;
}

Reference reference_solution(const Problem& problem, const ReferenceOptions& opts) {
  const auto hash = cache_hash(problem, opts);
  std::optional<std::filesystem::path> file;
  if (opts.cache_dir) {
    file = *opts.cache_dir / reference_file_name(problem, opts);
    if (auto cached = read_reference_file(*file, hash); cached && cached->size() == problem.dim()) {
      return {State(cached->begin(), cached->end()), 0.0, true};
    }
  }

  const CompositionIntegrator sm4({builtin_scheme("SM4"), AFlowKind::CF4, true});
  auto [split, rec] = integrate(sm4, problem, problem.initial_state(), problem.t0(), problem.tf(),
                                opts.split_steps);
  if (rec.failed) throw ReferenceInconsistent("splitting reference route failed");

  const long long rk = opts.rk_steps > 0 ? opts.rk_steps : default_rk_steps(problem);
  const auto classical = rk4_solve(problem, rk);

  const double agreement = l2_distance(split, classical);
  if (!(agreement <= opts.tolerance)) {
    std::ostringstream os;
    os << problem.id() << ": splitting and RK4 references differ by " << std::setprecision(3)
       << agreement << " (tolerance " << opts.tolerance << ")";
    throw ReferenceInconsistent(os.str());
  }

  if (file) {
    std::filesystem::create_directories(*opts.cache_dir);
    std::vector<double> values;
    for (const auto& x : split) values.push_back(x.real());
    write_reference_file(*file, hash, values);
  }
  return {std::move(split), agreement, false};
}

}  // namespace cxsplit

#include "cxsplit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "cxsplit/problems.hpp"

namespace cxsplit {
namespace {

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error("bad value for '" + key + "': " + text);
  return v;
}

std::string g17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::unique_ptr<Problem> make_problem(std::string_view id,
                                      const std::map<std::string, std::string>& overrides) {
  const auto get = [&](const char* key, double fallback) {
    const auto it = overrides.find(key);
    return it == overrides.end() ? fallback : to_double(key, it->second);
  };
  const auto known = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : overrides) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
        throw Error("parameter '" + k + "' does not apply to problem '" + std::string(id) + "'");
      }
    }
  };

  if (id == "osc") {
    known({"eps", "tf"});
    OscillatorParams p;
    p.epsilon = get("eps", p.epsilon);
    p.tf = get("tf", p.tf);
    return std::make_unique<OscillatorProblem>(p);
  }
  ParabolicParams g;
  g.n = static_cast<std::size_t>(get("n", static_cast<double>(g.n)));
  g.mu = get("mu", g.mu);
  g.w = get("w", g.w);
  g.tf = get("tf", g.tf);
  if (id == "parabolic") {
    known({"n", "mu", "w", "tf"});
    return std::make_unique<ParabolicProblem>(g);
  }
  if (id == "fisher") {
    known({"n", "mu", "w", "tf", "beta", "gamma_scale"});
    FisherParams f;
    f.grid = g;
    f.beta = get("beta", f.beta);
    f.gamma_scale = get("gamma_scale", f.gamma_scale);
    return std::make_unique<FisherProblem>(f);
  }
  throw Error("unknown problem '" + std::string(id) + "'");
}

std::vector<long long> default_grid() {
  std::vector<long long> g;
  for (int k = 4; k <= 12; ++k) g.push_back(1LL << k);
  return g;
}

std::vector<RunRecord> sweep(const Problem& problem, const State& reference,
                             const SweepSpec& spec) {
  for (std::size_t i = 1; i < spec.n_steps_grid.size(); ++i) {
    if (spec.n_steps_grid[i] <= spec.n_steps_grid[i - 1]) {
      throw Error("n_steps grid must be strictly increasing");
    }
  }
  std::vector<std::unique_ptr<Integrator>> methods;
  for (const auto& id : spec.methods) methods.push_back(make_integrator(id, spec.a_flow, spec.freeze));

  const auto n_grid = spec.n_steps_grid.size();
  const auto total = methods.size() * n_grid;
  std::vector<RunRecord> rows(total);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const auto& method = *methods[job / n_grid];
      const auto n = spec.n_steps_grid[job % n_grid];
      auto [u, rec] =
          integrate(method, problem, problem.initial_state(), problem.t0(), problem.tf(), n);
      rec.method = spec.methods[job / n_grid];
      rec.error_l2 = rec.failed ? NAN : l2_distance(u, reference);
      rows[job] = std::move(rec);
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& rows, bool wall_time) {
  os << "method,h,n_steps,a_flow_evals,kernel_evals,error_l2,wall_time,failed\n";
  for (const auto& r : rows) {
    os << r.method << ',' << g17(r.h) << ',' << r.n_steps << ',' << r.a_flow_evals << ','
       << r.kernel_evals << ',' << g17(r.error_l2) << ',' << (wall_time ? g17(r.wall_time) : "0")
       << ',' << (r.failed ? 1 : 0) << '\n';
  }
}

SlopeFit fit_slope(const std::vector<RunRecord>& rows, double floor) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (r.failed || !std::isfinite(r.error_l2) || r.error_l2 < floor || !(r.h > 0.0)) continue;
    x.push_back(std::log(r.h));
    y.push_back(std::log(r.error_l2));
  }
  if (x.size() < 3) {
    throw InsufficientData(std::to_string(x.size()) + " usable points; need at least 3");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = x.size();
  return fit;
}

}  // namespace cxsplit

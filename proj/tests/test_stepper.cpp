#include <cmath>
#include <filesystem>
#include <fstream>

#include "cxsplit/bench.hpp"
#include "cxsplit/problems.hpp"
#include "cxsplit/reference.hpp"
#include "cxsplit/stepper.hpp"
#include "dense_oracle.hpp"
#include "stage_oracle.hpp"
#include "doctest.h"

using namespace cxsplit;

namespace {

// u' = f(t) u + g u on a scalar state.
class ScalarProblem final : public Problem {
 public:
  ScalarProblem(double (*f)(double), double g) : f_(f), g_(g) {}
  std::string id() const override { return "scalar"; }
  std::string parameter_text() const override { return "scalar"; }
  std::size_t dim() const override { return 1; }
  double t0() const override { return 0.0; }
  double tf() const override { return 1.0; }
  State initial_state() const override { return {Complex(1.0)}; }
  void a_frozen(std::span<const double> times, std::span<const double> weights, double duration,
                State& u) const override {
    double s = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) s += weights[k] * f_(times[k]);
    u[0] *= std::exp(duration * s);
  }
  bool a_commuting() const override { return true; }
  void b_kick(double, Complex tau, State& u) const override { u[0] *= std::exp(tau * g_); }
  void full_rhs(double t, std::span<const double> u, std::span<double> du) const override {
    du[0] = (f_(t) + g_) * u[0];
  }

 private:
  double (*f_)(double);
  double g_;
};

// Fails the n-th kick it sees.
class FailingKicks final : public Problem {
 public:
  explicit FailingKicks(int fail_at) : fail_at_(fail_at) {}
  std::string id() const override { return "failing"; }
  std::string parameter_text() const override { return "failing"; }
  std::size_t dim() const override { return 1; }
  double t0() const override { return 0.0; }
  double tf() const override { return 1.0; }
  State initial_state() const override { return {Complex(1.0)}; }
  void a_frozen(std::span<const double>, std::span<const double>, double,
                State&) const override {}
  void b_kick(double, Complex, State& u) const override {
    if (++seen_ == fail_at_) throw StepFailed(0, "kick failed");
    if (fail_at_ < 0) u[0] = NAN;
  }
  void full_rhs(double, std::span<const double>, std::span<double> du) const override {
    du[0] = 0.0;
  }

 private:
  int fail_at_;
  mutable int seen_ = 0;
};

ParabolicParams grid8() {
  ParabolicParams p;
  p.n = 8;
  return p;
}

std::vector<double> errors(const Integrator& m, const Problem& p, const State& ref,
                           const std::vector<int>& grid) {
  std::vector<double> out;
  for (const int n : grid) {
    auto [u, rec] = integrate(m, p, p.initial_state(), p.t0(), p.tf(), n);
    out.push_back(l2_distance(u, ref));
  }
  return out;
}

std::vector<double> step_sizes(const Problem& p, const std::vector<int>& grid) {
  std::vector<double> h;
  for (const int n : grid) h.push_back((p.tf() - p.t0()) / n);
  return h;
}

}  // namespace

TEST_CASE("commuting autonomous split is exact") {
  const ScalarProblem prob([](double) { return -0.7; }, 0.4);
  for (const auto& id : {"Strang", "SM4", "S62", "EXT4"}) {
    const auto m = make_integrator(id);
    State u{Complex(1.0)};
    StepCounters c;
    m->step(prob, u, 0.3, 0.2, c);
    CHECK(std::abs(u[0] - std::exp(-0.3 * 0.2)) < 1e-15);
  }
}

TEST_CASE("SM4 on Example 2 at N = 8 equals the dense stage product before projection") {
  const ParabolicProblem prob(grid8());
  const CompositionIntegrator sm4({builtin_scheme("SM4"), AFlowKind::CF4, true});
  for (const double t : {0.0, 0.45}) {
    State u = prob.initial_state();
    const auto want =
        oracle::apply(oracle::dense_stage_product(builtin_scheme("SM4"), prob, t, 0.1), u);
    StepCounters c;
    sm4.apply_stages(prob, u, t, 0.1, c);
    CHECK(oracle::distance(u, want) < 1e-12);
    double imag = 0.0;
    for (const auto& x : u) imag = std::max(imag, std::abs(x.imag()));
    CHECK(imag > 1e-8);
  }
}

TEST_CASE("stage order matches the dense product for every builtin") {
  const ParabolicProblem prob(grid8());
  for (const auto& name : {"Strang_BAB", "S62", "SM64"}) {
    CAPTURE(name);
    const CompositionIntegrator m({builtin_scheme(name), AFlowKind::CF4, true});
    State u = prob.initial_state();
    const auto want = oracle::apply(oracle::dense_stage_product(builtin_scheme(name), prob, 0.2, 0.125), u);
    StepCounters c;
    m.apply_stages(prob, u, 0.2, 0.125, c);
    CHECK(oracle::distance(u, want) < 1e-12);
  }
}

TEST_CASE("a kick-only scheme is the exact logistic map") {
  Scheme kick;
  kick.name = "kick";
  kick.b = {1.0};
  const FisherProblem prob;
  const CompositionIntegrator m({kick, AFlowKind::CF4, true});
  State u = prob.initial_state();
  State want = u;
  prob.b_kick(0.25, 0.1, want);
  StepCounters c;
  m.step(prob, u, 0.25, 0.1, c);
  CHECK(oracle::distance(u, want) == 0.0);
  CHECK(c.a_flow_evals == 0);
}

TEST_CASE("Strang freezing conventions") {
  SUBCASE("they coincide for autonomous problems") {
    const ParabolicProblem prob(grid8());
    const ScalarProblem scalar([](double) { return 0.3; }, 0.1);
    const StrangIntegrator left(FreezeConvention::LiteralLeft), mid(FreezeConvention::Midpoint);
    State a = scalar.initial_state(), b = a;
    StepCounters c;
    left.step(scalar, a, 0.5, 0.1, c);
    mid.step(scalar, b, 0.5, 0.1, c);
    CHECK(a == b);
  }
  SUBCASE("LiteralLeft freezes at the left end") {
    const ScalarProblem prob([](double t) { return t; }, 0.0);
    const StrangIntegrator left(FreezeConvention::LiteralLeft);
    const double t = 0.6, h = 0.05;
    State u{Complex(1.0)};
    StepCounters c;
    left.step(prob, u, t, h, c);
    CHECK(std::abs(u[0] - std::exp(h * t)) < 1e-15);
    // Local error against exp(h t + h^2/2) is O(h^2).
    CHECK(std::abs(u[0] - std::exp(h * t + h * h / 2)) == doctest::Approx(h * h / 2).epsilon(0.1));
  }
}

TEST_CASE("EXT4 combination") {
  SUBCASE("exact for autonomous A alone") {
    const ScalarProblem prob([](double) { return -1.3; }, 0.0);
    const Ext4Integrator ext;
    State u{Complex(1.0)};
    StepCounters c;
    ext.step(prob, u, 0.0, 0.3, c);
    CHECK(std::abs(u[0] - std::exp(-1.3 * 0.3)) < 1e-15);
    CHECK(c.a_flow_evals == 3);
  }
  SUBCASE("zero stays zero") {
    const ParabolicProblem prob(grid8());
    State u(8, 0.0);
    StepCounters c;
    Ext4Integrator().step(prob, u, 0.0, 0.25, c);
    for (const auto& x : u) CHECK(x == Complex(0.0));
  }
}

TEST_CASE("global orders on Example 2 at N = 8") {
  const ParabolicProblem prob(grid8());
  const auto ref = rk4_solve(prob, 1 << 16);
  struct Case {
    const char* id;
    FreezeConvention freeze;
    std::vector<int> grid;
    double order;
  };
  // Windows start where each method is asymptotic and stop before roundoff.
  const Case cases[] = {
      {"Strang", FreezeConvention::Midpoint, {16, 32, 64, 128}, 2.0},
      {"S62", FreezeConvention::Midpoint, {16, 32, 64, 128}, 2.0},
      {"SM4", FreezeConvention::Midpoint, {8, 16, 32, 64}, 4.0},
      {"SM64", FreezeConvention::Midpoint, {16, 32, 64}, 4.0},
      {"EXT4", FreezeConvention::Midpoint, {8, 16, 32, 64}, 4.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.id);
    const auto m = make_integrator(c.id, AFlowKind::CF4, c.freeze);
    const auto e = errors(*m, prob, ref, c.grid);
    const double slope = oracle::loglog_slope(step_sizes(prob, c.grid), e);
    CAPTURE(slope);
    CHECK(std::abs(slope - c.order) <= 0.3);
  }
}

TEST_CASE("SM4 error drops about 16x per halving on Example 1") {
  const OscillatorProblem osc;
  const auto ref = reference_solution(osc);
  const auto m = make_integrator("SM4");
  const auto e = errors(*m, osc, ref.state, {64, 128, 256});
  CHECK(e[0] / e[1] == doctest::Approx(16.0).epsilon(0.25));
  CHECK(e[1] / e[2] == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("integrate bookkeeping") {
  const ParabolicProblem prob(grid8());
  const auto sm4 = make_integrator("SM4");
  SUBCASE("one step equals step()") {
    State u = prob.initial_state();
    StepCounters c;
    sm4->step(prob, u, 0.0, 1.0, c);
    auto [v, rec] = integrate(*sm4, prob, prob.initial_state(), 0.0, 1.0, 1);
    CHECK(u == v);
    CHECK(rec.n_steps == 1);
    CHECK(rec.h == 1.0);
  }
  SUBCASE("a_flow_evals = n_steps x A-stages, independent of h and state") {
    for (const double tf : {0.1, 1.0}) {
      auto [v, rec] = integrate(*sm4, prob, prob.initial_state(), 0.0, tf, 100);
      CHECK(rec.a_flow_evals == 400);
      // Example 2 fuses the two CF4 exponentials.
      CHECK(rec.kernel_evals == 400);
    }
    const OscillatorProblem osc;
    auto [w, rec] = integrate(*sm4, osc, osc.initial_state(), 0.0, 1.0, 100);
    CHECK(rec.a_flow_evals == 400);
    CHECK(rec.kernel_evals == 800);
    for (const auto& [id, stages] :
         {std::pair{"Strang", 1}, {"S62", 3}, {"EXT4", 3}, {"SM64", 6}, {"Strang_ABA", 2}}) {
      const auto m = make_integrator(id);
      CHECK(m->a_stages() == stages);
      auto [x, r] = integrate(*m, prob, prob.initial_state(), 0.0, 1.0, 10);
      CHECK(r.a_flow_evals == 10 * stages);
    }
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(integrate(*sm4, prob, prob.initial_state(), 0.0, 1.0, 0), Error);
    CHECK_THROWS_AS(integrate(*sm4, prob, State(3), 0.0, 1.0, 4), Error);
  }
}

TEST_CASE("projection") {
  State u{Complex(1.0, 2.0), Complex(-3.0, 0.5)};
  project_real(u);
  const auto once = u;
  project_real(u);
  CHECK(u == once);
  CHECK(u[0] == Complex(1.0));
}

TEST_CASE("a scheme and its conjugate give the same projected result") {
  const ParabolicProblem prob(grid8());
  const OscillatorProblem osc;
  for (const auto& name : {"SM4", "SM64"}) {
    const CompositionIntegrator m({builtin_scheme(name), AFlowKind::CF4, true});
    const CompositionIntegrator mc({conjugate(builtin_scheme(name)), AFlowKind::CF4, true});
    for (const Problem* p : {static_cast<const Problem*>(&prob), static_cast<const Problem*>(&osc)}) {
      State u = p->initial_state(), v = u;
      StepCounters c;
      m.apply_stages(*p, u, 0.1, 0.2, c);
      mc.apply_stages(*p, v, 0.1, 0.2, c);
      for (std::size_t j = 0; j < u.size(); ++j) {
        CHECK(std::abs(u[j] - std::conj(v[j])) < 1e-13 * std::max(1.0, std::abs(u[j])));
      }
      project_real(u);
      project_real(v);
      CHECK(oracle::distance(u, v) < 1e-13 * std::max(1.0, std::abs(u[0])));
    }
  }
}

TEST_CASE("complex times and unprojected complex schemes are refused") {
  Scheme s = builtin_scheme("Strang_BAB");
  s.a = {Complex(1.0, 0.1)};
  CHECK_THROWS_AS(CompositionIntegrator({s, AFlowKind::CF4, true}), ComplexTimeError);
  CHECK_THROWS_AS(CompositionIntegrator({builtin_scheme("SM4"), AFlowKind::CF4, false}), Error);
  CHECK_NOTHROW(CompositionIntegrator({builtin_scheme("S62"), AFlowKind::CF4, false}));
}

TEST_CASE("failures report the stage and mark the run") {
  const auto sm4 = make_integrator("SM4");
  SUBCASE("stage index of the failing kick") {
    const FailingKicks prob(2);
    State u{Complex(1.0)};
    StepCounters c;
    try {
      sm4->step(prob, u, 0.0, 0.1, c);
      FAIL("expected StepFailed");
    } catch (const StepFailed& e) {
      // Kicks sit at even positions of b a b a b a b a b.
      CHECK(e.stage() == 2);
    }
  }
  SUBCASE("integrate records the failure") {
    const FailingKicks prob(7);
    auto [u, rec] = integrate(*sm4, prob, prob.initial_state(), 0.0, 1.0, 4);
    CHECK(rec.failed);
    CHECK(rec.n_steps == 1);
  }
  SUBCASE("non-finite states fail") {
    const FailingKicks prob(-1);
    auto [u, rec] = integrate(*sm4, prob, prob.initial_state(), 0.0, 1.0, 4);
    CHECK(rec.failed);
    CHECK(rec.n_steps == 1);
  }
  SUBCASE("overflowing heat flow fails instead of throwing") {
    ParabolicParams p;
    p.mu = -0.5;  // alpha^2 stays positive; only the sign of time matters
    const ParabolicProblem prob(p);
    Scheme back = builtin_scheme("Strang_BAB");
    const CompositionIntegrator m({back, AFlowKind::CF2, true});
    auto [u, rec] = integrate(m, prob, prob.initial_state(), 1.0, -40.0, 1);
    CHECK(rec.failed);
  }
}

TEST_CASE("Example 2 and 3 states stay real and bounded for h <= 1/8") {
  const ParabolicProblem para;
  const FisherProblem fisher;
  for (const Problem* p : {static_cast<const Problem*>(&para), static_cast<const Problem*>(&fisher)}) {
    for (const auto& id : {"Strang", "S62", "EXT4", "SM4", "SM64"}) {
      const auto m = make_integrator(id);
      for (const int n : {8, 16, 64}) {
        State u = p->initial_state();
        StepCounters c;
        const double h = 1.0 / n;
        for (int s = 0; s < n; ++s) {
          m->step(*p, u, s * h, h, c);
          for (const auto& x : u) {
            CHECK(x.imag() == 0.0);
            CHECK(std::abs(x) <= 2.0);
          }
        }
      }
    }
  }
}

TEST_CASE("make_integrator ids") {
  CHECK(make_integrator("Strang")->name() == "Strang");
  CHECK(make_integrator("EXT4")->name() == "EXT4");
  CHECK(make_integrator("SM64")->name() == "SM64");
  CHECK_THROWS_AS(make_integrator("nope"), NotInCatalog);
  CHECK_THROWS_AS(make_integrator("file:/nonexistent/x.coef"), Error);

  const auto path = std::filesystem::temp_directory_path() / "cxsplit_test_sm4.coef";
  {
    std::ofstream os(path);
    os << serialize_scheme(builtin_scheme("SM4"));
  }
  const auto from_file = make_integrator("file:" + path.string());
  const auto builtin = make_integrator("SM4");
  const ParabolicProblem prob(grid8());
  auto [a, ra] = integrate(*from_file, prob, prob.initial_state(), 0.0, 1.0, 8);
  auto [b, rb] = integrate(*builtin, prob, prob.initial_state(), 0.0, 1.0, 8);
  CHECK(a == b);
  std::filesystem::remove(path);
}

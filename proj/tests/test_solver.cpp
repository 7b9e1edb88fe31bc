#include <cmath>

#include "doctest.h"
#include "hcg/homotopy.hpp"
#include "hcg/instances.hpp"
#include "hcg/solver.hpp"

using namespace hcg;

TEST_CASE("analytic step size conventions") {
  CHECK(analytic_step(-1.0, 2.0, 1.0) == 0.0);
  CHECK(analytic_step(0.0, 2.0, 1.0) == 0.0);
  CHECK(analytic_step(5.0, 0.0, 1.0) == 1.0);
  // t*gap = 2, e = 4: 2 / (4 * 6) = 1/12
  CHECK(analytic_step(2.0, 4.0, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(analytic_step(100.0, 0.5, 1.0) == 1.0);  // clamped at a full step
  CHECK_THROWS_AS(analytic_step(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("worked micro-example on the 1x1 covering instance") {
  ConicInstance inst = build_builtin("covering-1x1");
  PotentialProblem prob{&inst.problem, 1.0};
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;  // coefficient 1, homogenizing coordinate pinned at 1
  BarrierPoint pt(inst.problem.barrier, x);
  GapInfo gi = compute_gap(prob, pt);
  CHECK(std::abs(gi.gap - 2.0) < 1e-12);
  CHECK(std::abs(gi.e - 4.0) < 1e-12);
  CHECK(std::abs(analytic_step(gi.gap, gi.e, prob.t) - 1.0 / 12.0) < 1e-12);
}

TEST_CASE("inner loop reaches the gap target and decreases the potential") {
  ConicInstance inst = build_builtin("covering-1x1");
  PotentialProblem prob{&inst.problem, 8.0};
  InnerResult r = cg_run(prob, inst.problem.x0, 0.05, Caps{}, true);
  CHECK(r.stop_reason == StopReason::GapLeqEta);
  CHECK(r.last_gap <= 0.05);
  for (const auto& si : r.trace)
    CHECK(si.potential_after <= si.potential_before + 1e-12);

  Caps tiny;
  tiny.max_iterations = 0;
  InnerResult capped = cg_run(prob, inst.problem.x0, 1e-9, tiny);
  CHECK(capped.stop_reason == StopReason::IterCap);
  CHECK(capped.iterations == 0);
}

TEST_CASE("line search matches a dense grid scan") {
  ConicInstance inst = build_builtin("maxcut-triangle");
  PotentialProblem prob{&inst.problem, 4.0};
  BarrierPoint pt(inst.problem.barrier, inst.problem.x0);
  GapInfo gi = compute_gap(prob, pt);
  REQUIRE(gi.gap > 0);
  const double gamma = line_search_gamma(prob, pt, gi.answer.s);

  Eigen::VectorXd dir = gi.answer.s - pt.x();
  BarrierSegment seg = pt.segment(dir);
  const double hi = std::min(1.0, 0.999 * seg.max_step());
  auto phi = [&](double g) {
    return seg.value(g) / prob.t + g * inst.problem.c_g.dot(dir);
  };
  double grid_best = phi(0.0), grid_arg = 0.0;
  const int kGrid = 100000;
  for (int i = 1; i <= kGrid; ++i) {
    const double g = hi * i / kGrid;
    const double v = phi(g);
    if (v < grid_best) {
      grid_best = v;
      grid_arg = g;
    }
  }
  CHECK(phi(gamma) <= grid_best + 1e-10);
  CHECK(std::abs(gamma - grid_arg) <= 2.0 * hi / kGrid + 1e-8);
}

TEST_CASE("line search never does worse than the analytic step") {
  for (const auto& name : builtin_names()) {
    ConicInstance inst = build_builtin(name);
    PotentialProblem prob{&inst.problem, 2.0};
    BarrierPoint pt(inst.problem.barrier, inst.problem.x0);
    GapInfo gi = compute_gap(prob, pt);
    if (!(gi.gap > 0)) continue;
    const double gamma = line_search_gamma(prob, pt, gi.answer.s);
    const double alpha = analytic_step(gi.gap, gi.e, prob.t);
    Eigen::VectorXd dir = gi.answer.s - pt.x();
    BarrierPoint at_gamma(inst.problem.barrier, pt.x() + gamma * dir);
    BarrierPoint at_alpha(inst.problem.barrier, pt.x() + alpha * dir);
    CHECK(potential_value(prob, at_gamma) <=
          potential_value(prob, at_alpha) + 1e-12);
  }
}

TEST_CASE("exact-certified inexact loop is bitwise identical to the plain one") {
  ConicInstance inst = build_builtin("maxcut-triangle");
  PotentialProblem prob{&inst.problem, 6.0};
  InnerResult cg = cg_run(prob, inst.problem.x0, 0.02, Caps{}, true);
  OracleConfig exact;  // (delta, theta) = (1, 0)
  InnerResult icg =
      icg_run(prob, inst.problem.x0, 0.02, 1.0, exact, Caps{}, true);
  CHECK(cg.iterations == icg.iterations);
  CHECK((cg.x_final - icg.x_final).norm() == 0.0);
  REQUIRE(cg.trace.size() == icg.trace.size());
  for (size_t i = 0; i < cg.trace.size(); ++i) {
    CHECK(cg.trace[i].gap == icg.trace[i].gap);
    CHECK(cg.trace[i].alpha == icg.trace[i].alpha);
  }
}

TEST_CASE("inexact inner loop with Lanczos oracle still converges") {
  ConicInstance inst = build_builtin("maxcut-triangle");
  PotentialProblem prob{&inst.problem, 6.0};
  OracleConfig oracle;
  oracle.exact = false;
  oracle.theta_target = 1e-3;
  oracle.seed = 17;
  InnerResult r = icg_run(prob, inst.problem.x0, 0.05, 1.0, oracle, Caps{});
  CHECK(r.stop_reason == StopReason::GapLeqEta);
  CHECK(r.last_gap <= 0.05);
}

TEST_CASE("iteration bound evaluators") {
  // nu=2, t=1, Delta0=1, Omega_g=1, eta=0.5: 51 + 432
  CHECK(bound_R_G(2.0, 1.0, 1.0, 1.0, 0.5) == 483);
  // R_Delta second term: 12*9*(1/0.5 - 1/1) = 108 -> 51 + 108
  CHECK(bound_R_Delta(2.0, 1.0, 1.0, 1.0, 0.5) == 159);
  // bracket clamps at zero when eta >= delta0
  CHECK(bound_R_Delta(2.0, 1.0, 1.0, 1.0, 2.0) == 51);
  // exact-oracle limit of the inexact bounds stays finite and positive
  CHECK(bound_R_G_inexact(2.0, 1.0, 1.0, 1.0, 0.5, 1.0, 0.0) > 0);
  CHECK(bound_R_Delta_inexact(2.0, 1.0, 1.0, 1.0, 0.5, 1.0, 0.5) > 0);
  CHECK_THROWS_AS(bound_R_G(0.0, 1.0, 1.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(bound_R_G_inexact(2.0, 1.0, 1.0, 1.0, 0.5, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(bound_R_Delta_inexact(2.0, 1.0, 1.0, 1.0, 0.5, 1.0, 2.0),
                  std::invalid_argument);
  // monotone in the Delta0 upper bound, so any upper bound is a valid input
  CHECK(bound_R_G(2.0, 1.0, 2.0, 1.0, 0.5) >= bound_R_G(2.0, 1.0, 1.0, 1.0, 0.5));
}

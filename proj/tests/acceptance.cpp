// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criterion 8 is data-dependent and reports SKIP (counted
// as pass) when the G1 file is not present.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "barrier_properties.hpp"
#include "hcg/homotopy.hpp"
#include "hcg/instances.hpp"

using namespace hcg;

namespace {

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

HomotopySchedule schedule_for(const ConicInstance& inst, double epsilon,
                              double sigma, ScheduleMode mode) {
  const double omega_g = compute_omega_g(inst.problem.c_g, inst.problem.set);
  return default_schedule(inst.problem.nu, omega_g, epsilon, sigma, mode);
}

// exact gap at a point for a given t, via the dense oracle
double exact_gap_at(const ProblemData& d, double t, const Eigen::VectorXd& x) {
  PotentialProblem prob{&d, t};
  BarrierPoint pt(d.barrier, x);
  return compute_gap(prob, pt).gap;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  auto fails = hcg_test::run_barrier_property_suite(1000, 20240817);
  const double elapsed = now_seconds(start);
  Outcome o;
  o.pass = fails.total() == 0 && elapsed < 30.0;
  std::ostringstream ss;
  ss << "1000 cases per barrier kind, " << fails.total() << " violations, "
     << elapsed << " s";
  o.detail = ss.str();
  return o;
}

Outcome criterion2() {
  ConicInstance inst = build_builtin("covering-1x1");
  PotentialProblem prob{&inst.problem, 1.0};
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  BarrierPoint pt(inst.problem.barrier, x);
  GapInfo gi = compute_gap(prob, pt);
  const double alpha = analytic_step(gi.gap, gi.e, prob.t);
  Outcome o;
  o.pass = std::abs(gi.gap - 2.0) < 1e-12 && std::abs(gi.e - 4.0) < 1e-12 &&
           std::abs(alpha - 1.0 / 12.0) < 1e-12;
  std::ostringstream ss;
  ss << "gap=" << gi.gap << " e=" << gi.e << " alpha=" << alpha;
  o.detail = ss.str();
  return o;
}

Outcome criterion3() {
  struct Case {
    const char* name;
    double epsilon, tol, budget_s;
  };
  Outcome o;
  o.pass = true;
  std::ostringstream ss;
  for (const Case& c : {Case{"maxcut-edge", 5e-4, 1e-3, 1.0},
                        Case{"covering-identity-10", 5e-3, 1e-2, 30.0},
                        Case{"mixing-edge", 5e-4, 1e-3, 1.0}}) {
    ConicInstance inst = build_builtin(c.name);
    HomotopySchedule sched =
        schedule_for(inst, c.epsilon, 0.5, ScheduleMode::Exact);
    bool strictly_feasible = true;
    OuterCallbacks cb;
    cb.on_step = [&](long, long, const PotentialProblem&, const StepInfo&,
                     const Eigen::VectorXd& x_after) {
      if (feasibility_margin(inst, x_after) <= 0) strictly_feasible = false;
    };
    const auto start = std::chrono::steady_clock::now();
    HomotopyResult res =
        homotopy_run(inst.problem, sched, StepMode::Analytic, Caps{}, cb);
    const double elapsed = now_seconds(start);
    const double err =
        std::abs(inst.reported_objective(res.x) - *inst.meta.opt_ref);
    const bool ok = res.converged && err <= c.tol && strictly_feasible &&
                    elapsed < c.budget_s;
    o.pass = o.pass && ok;
    ss << c.name << " err=" << err << " t=" << elapsed << "s"
       << (strictly_feasible ? "" : " INFEASIBLE") << (ok ? "; " : " FAIL; ");
  }
  o.detail = ss.str();
  return o;
}

Outcome criterion4() {
  Outcome o;
  o.pass = true;
  long rounds_checked = 0, violations = 0;
  for (const auto& name : builtin_names()) {
    ConicInstance inst = build_builtin(name);
    // inner-loop work grows like 1/epsilon^2, so the larger instances get a
    // looser target to keep the gate fast
    const bool heavy =
        name == "maxcut-triangle" || name == "mixing-path3";
    const double epsilon =
        heavy ? 2e-2 : (name == "covering-identity-10" ? 5e-3 : 1e-3);
    for (int solver = 0; solver < 2; ++solver) {
      const bool inexact = solver == 1;
      if (inexact &&
          inst.problem.set.kind != FeasibleSetSpec::Kind::Spectrahedron)
        continue;
      HomotopySchedule sched = schedule_for(
          inst, epsilon, 0.5,
          inexact ? ScheduleMode::Inexact : ScheduleMode::Exact);
      HomotopyResult res;
      if (inexact) {
        OracleConfig oracle;
        oracle.exact = false;
        oracle.seed = 1;
        res = inexact_homotopy_run(inst.problem, sched, Caps{}, oracle);
      } else {
        res = homotopy_run(inst.problem, sched, StepMode::Analytic, Caps{});
      }
      for (const auto& rs : res.trace.rounds) {
        if (rs.stop_reason != StopReason::GapLeqEta) continue;
        ++rounds_checked;
        if (rs.g_value - inst.g_opt() > rs.certificate + 1e-9) ++violations;
      }
    }
  }
  o.pass = violations == 0 && rounds_checked > 0;
  std::ostringstream ss;
  ss << rounds_checked << " rounds checked, " << violations << " violations";
  o.detail = ss.str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  long rounds_checked = 0, violations = 0;

  // iteration-count monitors against the formula bounds, per completed round
  auto monitor = [&](const ConicInstance& inst, const HomotopySchedule& sched,
                     const HomotopyResult& res, bool inexact) {
    for (const auto& rs : res.trace.rounds) {
      if (rs.iterations == 0 || rs.x_start.size() == 0) continue;
      const double gap0 = exact_gap_at(inst.problem, rs.t, rs.x_start);
      if (!(gap0 > 0)) continue;
      // the start gap upper-bounds the potential residual, and the bounds
      // are monotone in that argument
      long bound;
      if (inexact)
        bound = bound_R_G_inexact(inst.problem.nu, rs.t, gap0, sched.omega_g,
                                  rs.eta, sched.delta, rs.theta);
      else
        bound = bound_R_G(inst.problem.nu, rs.t, gap0, sched.omega_g, rs.eta);
      ++rounds_checked;
      if (rs.iterations > bound) ++violations;
    }
  };

  for (const auto& name :
       {"maxcut-edge", "maxcut-triangle", "covering-1x1", "mixing-path3"}) {
    ConicInstance inst = build_builtin(name);
    const bool heavy =
        std::string(name) == "maxcut-triangle" || std::string(name) == "mixing-path3";
    HomotopySchedule sched =
        schedule_for(inst, heavy ? 2e-2 : 1e-3, 0.5, ScheduleMode::Exact);
    OuterCallbacks cb;
    cb.record_round_points = true;
    monitor(inst, sched,
            homotopy_run(inst.problem, sched, StepMode::Analytic, Caps{}, cb),
            false);
    monitor(inst, sched,
            homotopy_run(inst.problem, sched, StepMode::LineSearch, Caps{}, cb),
            false);
    if (inst.problem.set.kind == FeasibleSetSpec::Kind::Spectrahedron) {
      HomotopySchedule isched =
          schedule_for(inst, 1e-2, 0.5, ScheduleMode::Inexact);
      OracleConfig oracle;
      oracle.exact = false;
      oracle.seed = 2;
      monitor(inst, isched,
              inexact_homotopy_run(inst.problem, isched, Caps{}, oracle, cb),
              true);
    }
  }

  // epsilon-scaling soft check on the covering instance
  ConicInstance cov = build_builtin("covering-identity-10");
  HomotopySchedule s1 = schedule_for(cov, 2e-2, 0.5, ScheduleMode::Exact);
  HomotopySchedule s2 = schedule_for(cov, 1e-2, 0.5, ScheduleMode::Exact);
  const long it1 =
      homotopy_run(cov.problem, s1, StepMode::Analytic, Caps{})
          .trace.total_iterations;
  const long it2 =
      homotopy_run(cov.problem, s2, StepMode::Analytic, Caps{})
          .trace.total_iterations;
  const double ratio =
      static_cast<double>(it2) / static_cast<double>(std::max(it1, 1L));
  const bool scaling_ok = ratio <= 5.0;

  Outcome out;
  out.pass = violations == 0 && rounds_checked > 0 && scaling_ok;
  std::ostringstream ss;
  ss << rounds_checked << " rounds within bounds, " << violations
     << " violations; halving-epsilon ratio " << ratio << " (<= 5)";
  out.detail = ss.str();
  return out;
}

Outcome criterion6() {
  Outcome o;
  std::ostringstream ss;

  // part 1: (1,0)-certified inexact loop is bitwise identical to the plain one
  bool bitwise = true;
  {
    ConicInstance inst = build_builtin("maxcut-triangle");
    HomotopySchedule sched = schedule_for(inst, 2e-2, 0.5, ScheduleMode::Exact);
    HomotopyResult cg =
        homotopy_run(inst.problem, sched, StepMode::Analytic, Caps{});
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      HomotopySchedule is = sched;
      is.theta0 = 0.0;
      OracleConfig oracle;  // exact, so the certificate is (1, 0)
      oracle.seed = seed;
      HomotopyResult icg =
          inexact_homotopy_run(inst.problem, is, Caps{}, oracle);
      if ((cg.x - icg.x).norm() != 0.0 ||
          cg.trace.total_iterations != icg.trace.total_iterations)
        bitwise = false;
    }
  }
  ss << "bitwise CG==ICG(1,0): " << (bitwise ? "yes" : "NO") << "; ";

  // part 2: Lanczos ICG on a random MaxCut instance, checked against the
  // dense oracle round by round
  Graph g = random_mixing_graph(50, 200, 6);  // reuse as a weighted graph
  ConicInstance inst = build_maxcut(g);
  // the objective varies by ~118 over this feasible set, so the target is
  // sized relative to that scale to keep the run under a minute
  const double epsilon = 5.0;
  HomotopySchedule ex = schedule_for(inst, epsilon, 0.5, ScheduleMode::Exact);
  HomotopyResult exact_res =
      homotopy_run(inst.problem, ex, StepMode::Analytic, Caps{});

  HomotopySchedule is = schedule_for(inst, epsilon, 0.5, ScheduleMode::Inexact);
  OracleConfig oracle;
  oracle.exact = false;
  oracle.seed = 7;
  OuterCallbacks cb;
  cb.record_round_points = true;
  HomotopyResult icg_res =
      inexact_homotopy_run(inst.problem, is, Caps{}, oracle, cb);

  long gap_violations = 0, rounds_checked = 0;
  for (const auto& rs : icg_res.trace.rounds) {
    if (rs.stop_reason != StopReason::GapLeqEta || rs.x_end.size() == 0)
      continue;
    ++rounds_checked;
    const double true_gap = exact_gap_at(inst.problem, rs.t, rs.x_end);
    if (true_gap > rs.eta + rs.theta + 1e-9) ++gap_violations;
  }
  const double obj_diff = std::abs(inst.reported_objective(icg_res.x) -
                                   inst.reported_objective(exact_res.x));
  ss << rounds_checked << " rounds, " << gap_violations
     << " gap violations, |obj diff| = " << obj_diff << " (<= " << 3 * epsilon
     << ")";
  o.pass = bitwise && icg_res.converged && rounds_checked > 0 &&
           gap_violations == 0 && obj_diff <= 3 * epsilon;
  o.detail = ss.str();
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::ostringstream ss;

  // part 1: each line-search step is at least as good as the analytic step
  bool dominance = true;
  {
    ConicInstance inst = build_builtin("maxcut-triangle");
    HomotopySchedule sched = schedule_for(inst, 2e-2, 0.5, ScheduleMode::Exact);
    Eigen::VectorXd cur = inst.problem.x0;
    OuterCallbacks cb;
    cb.on_step = [&](long, long, const PotentialProblem& prob,
                     const StepInfo& si, const Eigen::VectorXd& x_after) {
      const double alpha = analytic_step(si.gap, si.e, prob.t);
      Eigen::VectorXd xa = cur + alpha * (si.s.s - cur);
      BarrierPoint pa(inst.problem.barrier, xa);
      if (si.potential_after > potential_value(prob, pa) + 1e-12)
        dominance = false;
      cur = x_after;
    };
    homotopy_run(inst.problem, sched, StepMode::LineSearch, Caps{}, cb);
  }
  ss << "per-step dominance: " << (dominance ? "yes" : "NO") << "; ";

  // part 2: iterations to a fixed relative objective level, LCG vs CG on
  // seeded random mixing graphs
  int lcg_wins = 0;
  const long cap = 800;
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL}) {
    Graph g = random_mixing_graph(100, 1000, seed);
    ConicInstance inst = build_mixing(g, true);
    HomotopySchedule sched = schedule_for(inst, 1e-3, 0.9, ScheduleMode::Exact);
    Caps caps;
    caps.max_iterations = cap;

    struct RunTrack {
      std::vector<double> objectives;
    };
    auto run = [&](StepMode mode) {
      RunTrack tr;
      OuterCallbacks cb;
      cb.on_step = [&](long, long, const PotentialProblem&, const StepInfo&,
                       const Eigen::VectorXd& x_after) {
        tr.objectives.push_back(inst.reported_objective(x_after));
      };
      homotopy_run(inst.problem, sched, mode, caps, cb);
      return tr;
    };
    RunTrack cg = run(StepMode::Analytic);
    RunTrack lcg = run(StepMode::LineSearch);

    double best = 0;
    for (double v : cg.objectives) best = std::max(best, v);
    for (double v : lcg.objectives) best = std::max(best, v);
    const double target = 0.75 * best;
    auto first_hit = [&](const RunTrack& tr) {
      for (size_t i = 0; i < tr.objectives.size(); ++i)
        if (tr.objectives[i] >= target) return static_cast<long>(i) + 1;
      return 2 * cap;
    };
    const long cg_it = first_hit(cg), lcg_it = first_hit(lcg);
    if (lcg_it <= cg_it) ++lcg_wins;
    ss << "seed " << seed << ": lcg " << lcg_it << " vs cg " << cg_it << "; ";
  }
  o.pass = dominance && lcg_wins >= 3;
  ss << "lcg no slower on " << lcg_wins << "/4 seeds";
  o.detail = ss.str();
  return o;
}

Outcome criterion8() {
  std::vector<std::string> candidates = {"data/G1", "../data/G1"};
  if (const char* dir = std::getenv("HCG_GSET_DIR"))
    candidates.insert(candidates.begin(), std::string(dir) + "/G1");
  std::string found;
  for (const auto& c : candidates) {
    std::ifstream f(c);
    if (f.good()) {
      found = c;
      break;
    }
  }
  Outcome o;
  if (found.empty()) {
    o.pass = true;
    o.skipped = true;
    o.detail = "G1 dataset not present (set HCG_GSET_DIR to enable)";
    return o;
  }
  std::ifstream f(found);
  std::ostringstream buf;
  buf << f.rdbuf();
  ConicInstance inst = build_maxcut(parse_gset(buf.str()));
  HomotopySchedule sched = schedule_for(inst, 1e-3, 0.9, ScheduleMode::Exact);
  Caps caps;
  caps.max_seconds = 1000.0;
  HomotopyResult res =
      homotopy_run(inst.problem, sched, StepMode::LineSearch, caps);
  const double reference = 12083.2;
  const double rel_gap =
      (reference - inst.reported_objective(res.x)) / reference;
  o.pass = rel_gap <= 0.10;
  std::ostringstream ss;
  ss << found << ": objective " << inst.reported_objective(res.x)
     << ", relative gap " << rel_gap;
  o.detail = ss.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  bool ok = true;
  std::ostringstream ss;

  // worked case diag(1, -0.5)
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2);
  x(0, 0) = 1.0;
  x(1, 1) = -0.5;
  auto [fixed, rep] = repair_maxcut_solution(x);
  ok = ok && std::abs(rep.shift + 0.5) < 1e-12 &&
       std::abs(rep.alpha - 1.5) < 1e-12 &&
       std::abs(fixed(0, 0) - 1.0) < 1e-12 && std::abs(fixed(1, 1)) < 1e-12;
  ss << "diag(1,-0.5) worked case " << (ok ? "ok" : "FAIL") << "; ";

  std::mt19937 rng(31);
  std::normal_distribution<double> gauss;
  ConicInstance path = build_builtin("mixing-path3");
  long checked = 0, bad = 0;
  for (int it = 0; it < 100; ++it) {
    Eigen::MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = gauss(rng);
    m = (0.5 * (m + m.transpose())).eval();
    auto [mc_fixed, mc_rep] = repair_maxcut_solution(m);
    auto [mc_again, mc_rep2] = repair_maxcut_solution(mc_fixed);
    ++checked;
    if (mc_rep.margin_after < -1e-9 ||
        (mc_again - mc_fixed).norm() > 1e-9 * std::max(1.0, mc_fixed.norm()))
      ++bad;

    Eigen::MatrixXd b(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = gauss(rng);
    Eigen::MatrixXd psd = 4.0 * b * b.transpose();
    auto [mix_fixed, mix_rep] = repair_mixing_solution(psd, path);
    auto [mix_again, mix_rep2] = repair_mixing_solution(mix_fixed, path);
    ++checked;
    if (mix_rep.margin_after < -1e-9 || mix_rep2.steps != 0) ++bad;
  }
  ok = ok && bad == 0;
  ss << checked << " randomized repairs, " << bad << " violations";
  o.pass = ok;
  o.detail = ss.str();
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "barrier property suite", criterion1},
      {2, "worked micro-example", criterion2},
      {3, "exact-solver correctness", criterion3},
      {4, "certificate soundness", criterion4},
      {5, "complexity monitors", criterion5},
      {6, "inexact-oracle equivalence", criterion6},
      {7, "line-search dominance", criterion7},
      {8, "Gset hook", criterion8},
      {9, "repair procedures", criterion9},
  };
  int failures = 0;
  for (const auto& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    const char* tag = o.pass ? (o.skipped ? "[SKIP]" : "[PASS]") : "[FAIL]";
    std::cout << tag << " criterion " << e.number << ": " << e.title << " - "
              << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria satisfied"
                              : "criteria failed: ")
            << (failures == 0 ? "" : std::to_string(failures)) << "\n";
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <functional>
#include <optional>

#include "hcg/barrier.hpp"
#include "hcg/lmo.hpp"

namespace hcg {

// Everything needed to pose min_{x in X} V_t(x) = F(x)/t + g(x) for varying
// t: barrier, linear objective g(x) = <c_g, x> + g_const, and the LMO set.
struct ProblemData {
  BarrierSpec barrier;
  double nu = 0;
  Eigen::VectorXd c_g;
  double g_const = 0;
  FeasibleSetSpec set;
  Eigen::VectorXd x0;
};

struct PotentialProblem {
  const ProblemData* data;
  double t;
};

double g_value(const ProblemData& d, const Eigen::VectorXd& x);
double potential_value(const PotentialProblem& p, const BarrierPoint& pt);

struct GapInfo {
  LmoAnswer answer;
  double gap = 0;  // gap (exact oracle) or gap-hat (certified oracle)
  double e = 0;    // ||s - x||_x
};

// Linearized-decrease merit at x: gap_t(x) = t^-1 F'(x)[x-s] + g(x) - g(s)
// with s from the (possibly inexact) oracle.
GapInfo compute_gap(const PotentialProblem& p, const BarrierPoint& pt,
                    const OracleConfig& oracle = {});

// alpha = min{1, t*gap / (e*(e + t*gap))}; conventions: gap <= 0 -> 0,
// e = 0 with gap > 0 -> 1.
double analytic_step(double gap, double e, double t);

// Golden-section minimizer of V_t along x + gamma*(s - x) over
// [0, min(1, 0.999*max_step)], compared against the analytic step's point;
// returns whichever gamma has the smaller potential.
double line_search_gamma(const PotentialProblem& p, const BarrierPoint& pt,
                         const Eigen::VectorXd& s);

enum class StopReason { GapLeqEta, IterCap, TimeCap, OracleFlagged };

struct StepInfo {
  LmoAnswer s;
  double gap = 0;
  double e = 0;
  double alpha = 0;
  enum class Kind { Analytic, Full, LineSearch } kind = Kind::Analytic;
  double potential_before = 0;
  double potential_after = 0;
};

struct InnerResult {
  Eigen::VectorXd x_final;
  long iterations = 0;
  std::vector<StepInfo> trace;
  StopReason stop_reason = StopReason::GapLeqEta;
  double last_gap = 0;
};

struct Caps {
  long max_iterations = 1000000;
  double max_seconds = 3600.0;
};

enum class StepMode { Analytic, LineSearch };

struct InnerOpts {
  StepMode step = StepMode::Analytic;
  OracleConfig oracle{};
  double delta = 1.0;  // stop when gap-hat <= eta*delta
  Caps caps{};
  bool record_trace = false;
  // called after each step with the updated iterate
  std::function<void(const StepInfo&, const Eigen::VectorXd& x_after)> on_step;
};

InnerResult inner_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                      const InnerOpts& opts);

// Named entry points for the three inner algorithms; all share inner_run so
// the exact-certified inexact loop is bitwise identical to the plain one.
InnerResult cg_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                   const Caps& caps, bool record_trace = false);
InnerResult lcg_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                    const Caps& caps, bool record_trace = false);
InnerResult icg_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                    double delta, const OracleConfig& oracle, const Caps& caps,
                    bool record_trace = false);

// Iteration-bound evaluators used as runtime monitors (never control flow).
// All arguments must be positive (theta may be zero).
long bound_R_G(double nu, double t, double delta0_upper, double omega_g,
               double eta);
long bound_R_Delta(double nu, double t, double delta0_upper, double omega_g,
                   double eta);
long bound_R_G_inexact(double nu, double t, double delta0_upper, double omega_g,
                       double eta, double delta, double theta);
long bound_R_Delta_inexact(double nu, double t, double delta0_upper,
                           double omega_g, double eta, double delta,
                           double theta);

}  // namespace hcg

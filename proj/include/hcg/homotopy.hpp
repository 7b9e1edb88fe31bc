#pragma once

#include <cmath>

#include "hcg/solver.hpp"

namespace hcg {

// Geometric penalty/accuracy schedule: t_i = t0 * sigma^-i, eta_i = eta0 *
// sigma^i, theta_i = theta0 * sigma^i. `rounds` stores I from the printed
// formula; runs execute rounds i = 0..I inclusive so the final certificate
// 2*eta_I (or 3*eta_I) is actually attained.
struct HomotopySchedule {
  double epsilon = 1e-3;
  double sigma = 0.9;
  double t0 = 1;
  double eta0 = 1;
  double theta0 = 0;
  double delta = 1.0;
  double omega_g = 0;
  long rounds = 0;
  bool inexact = false;
  bool omega_flagged = false;  // omega_g = 0 fallback applied

  double t(long i) const { return t0 / std::pow(sigma, static_cast<double>(i)); }
  double eta(long i) const { return eta0 * std::pow(sigma, static_cast<double>(i)); }
  double theta(long i) const {
    return theta0 * std::pow(sigma, static_cast<double>(i));
  }
};

enum class ScheduleMode { Exact, Inexact };

// Theorem default parameters: eta0 = eta0_mult * omega_g (theorem value
// eta0_mult = 2), t0 = 2*nu/eta0 so t0*eta0 = 2*nu exactly, theta0 = eta0 in
// inexact mode. omega_g = 0 degenerates to eta0 = max(epsilon, 1e-12),
// flagged.
HomotopySchedule default_schedule(double nu, double omega_g, double epsilon,
                                  double sigma, ScheduleMode mode,
                                  double eta0_mult = 2.0, double delta = 1.0);

// Objective variation over X: max g - min g via two LMO calls.
double compute_omega_g(const Eigen::VectorXd& c_g, const FeasibleSetSpec& set);

// g(x_i) - Opt upper bound after round i: eta + 2*nu/t, plus theta when the
// oracle is inexact.
double certificate(double eta_i, double theta_i, double nu, double t_i,
                   bool inexact);

struct RoundStats {
  long round = 0;
  double t = 0, eta = 0, theta = 0;
  long iterations = 0;
  double g_value = 0;
  double certificate = 0;
  double elapsed_s = 0;
  StopReason stop_reason = StopReason::GapLeqEta;
  double last_gap = 0;
  Eigen::VectorXd x_start, x_end;  // filled when record_round_points is set
};

struct OuterTrace {
  std::vector<RoundStats> rounds;
  long total_iterations = 0;
  double elapsed_s = 0;
};

struct HomotopyResult {
  Eigen::VectorXd x;
  OuterTrace trace;
  bool converged = false;  // certificate <= epsilon reached
  double certificate = 0;  // best (smallest) completed-round certificate
  double g_value = 0;
};

struct OuterCallbacks {
  // called for every inner step with the updated iterate
  std::function<void(long round, long inner_iter, const PotentialProblem&,
                     const StepInfo&, const Eigen::VectorXd& x_after)>
      on_step;
  bool record_round_points = false;
};

HomotopyResult homotopy_run(const ProblemData& data,
                            const HomotopySchedule& schedule, StepMode inner,
                            const Caps& caps, const OuterCallbacks& cb = {});

HomotopyResult inexact_homotopy_run(const ProblemData& data,
                                    const HomotopySchedule& schedule,
                                    const Caps& caps,
                                    const OracleConfig& oracle_base,
                                    const OuterCallbacks& cb = {});

}  // namespace hcg

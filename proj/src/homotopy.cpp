#include "hcg/homotopy.hpp"

#include <chrono>
#include <stdexcept>

namespace hcg {

HomotopySchedule default_schedule(double nu, double omega_g, double epsilon,
                                  double sigma, ScheduleMode mode,
                                  double eta0_mult, double delta) {
  if (nu < 1) throw std::invalid_argument("default_schedule: nu must be >= 1");
  if (omega_g < 0) throw std::invalid_argument("default_schedule: omega_g < 0");
  if (epsilon <= 0) throw std::invalid_argument("default_schedule: epsilon <= 0");
  if (!(sigma > 0 && sigma < 1))
    throw std::invalid_argument("default_schedule: sigma must be in (0,1)");
  if (eta0_mult <= 0)
    throw std::invalid_argument("default_schedule: eta0 multiplier <= 0");
  HomotopySchedule s;
  s.epsilon = epsilon;
  s.sigma = sigma;
  s.delta = delta;
  s.omega_g = omega_g;
  s.inexact = mode == ScheduleMode::Inexact;
  if (omega_g > 0) {
    s.eta0 = eta0_mult * omega_g;
  } else {
    s.eta0 = std::max(epsilon, 1e-12);
    s.omega_flagged = true;
  }
  s.t0 = 2.0 * nu / s.eta0;
  s.theta0 = s.inexact ? s.eta0 : 0.0;
  const double mult = s.inexact ? 3.0 : 2.0;
  s.rounds = static_cast<long>(
      std::ceil(std::log(mult * s.eta0 / epsilon) / std::log(1.0 / sigma)));
  if (s.rounds < 0) s.rounds = 0;
  return s;
}

double compute_omega_g(const Eigen::VectorXd& c_g, const FeasibleSetSpec& set) {
  LmoAnswer lo = composite_lmo(set, c_g);
  LmoAnswer hi = composite_lmo(set, -c_g);
  return c_g.dot(hi.s) - c_g.dot(lo.s);
}

double certificate(double eta_i, double theta_i, double nu, double t_i,
                   bool inexact) {
  return eta_i + (inexact ? theta_i : 0.0) + 2.0 * nu / t_i;
}

namespace {

HomotopyResult run_outer(const ProblemData& data,
                         const HomotopySchedule& schedule, StepMode inner,
                         const Caps& caps, const OracleConfig& oracle_base,
                         bool inexact, const OuterCallbacks& cb) {
  const auto start = std::chrono::steady_clock::now();
  HomotopyResult res;
  res.x = data.x0;
  res.certificate = std::numeric_limits<double>::infinity();
  long iter_budget = caps.max_iterations;
  for (long i = 0; i <= schedule.rounds; ++i) {
    const double pw = std::pow(schedule.sigma, static_cast<double>(i));
    const double t_i = schedule.t0 / pw;
    const double eta_i = schedule.eta0 * pw;
    const double theta_i = schedule.theta0 * pw;

    PotentialProblem prob{&data, t_i};
    InnerOpts opts;
    opts.step = inner;
    opts.delta = inexact ? schedule.delta : 1.0;
    opts.oracle = oracle_base;
    if (!oracle_base.exact) opts.oracle.theta_target = theta_i;
    opts.caps.max_iterations = iter_budget;
    const double used =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    opts.caps.max_seconds = caps.max_seconds - used;
    long inner_counter = 0;
    if (cb.on_step)
      opts.on_step = [&](const StepInfo& si, const Eigen::VectorXd& x_after) {
        cb.on_step(i, inner_counter++, prob, si, x_after);
      };

    RoundStats rs;
    rs.round = i;
    rs.t = t_i;
    rs.eta = eta_i;
    rs.theta = theta_i;
    if (cb.record_round_points) rs.x_start = res.x;
    const auto round_start = std::chrono::steady_clock::now();
    InnerResult ir = inner_run(prob, res.x, eta_i, opts);
    rs.elapsed_s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - round_start)
                       .count();
    res.x = std::move(ir.x_final);
    rs.iterations = ir.iterations;
    rs.g_value = g_value(data, res.x);
    rs.stop_reason = ir.stop_reason;
    rs.last_gap = ir.last_gap;
    rs.certificate = certificate(eta_i, theta_i, data.nu, t_i, inexact);
    if (cb.record_round_points) rs.x_end = res.x;
    res.trace.total_iterations += ir.iterations;
    iter_budget -= ir.iterations;
    res.trace.rounds.push_back(std::move(rs));

    if (ir.stop_reason != StopReason::GapLeqEta) break;  // caps or flagged
    res.certificate = std::min(res.certificate,
                               res.trace.rounds.back().certificate);
    if (res.certificate <= schedule.epsilon) break;
    if (iter_budget <= 0) break;
  }
  res.converged = res.certificate <= schedule.epsilon;
  res.g_value = g_value(data, res.x);
  res.trace.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

}  // namespace

HomotopyResult homotopy_run(const ProblemData& data,
                            const HomotopySchedule& schedule, StepMode inner,
                            const Caps& caps, const OuterCallbacks& cb) {
  return run_outer(data, schedule, inner, caps, OracleConfig{}, false, cb);
}

HomotopyResult inexact_homotopy_run(const ProblemData& data,
                                    const HomotopySchedule& schedule,
                                    const Caps& caps,
                                    const OracleConfig& oracle_base,
                                    const OuterCallbacks& cb) {
  return run_outer(data, schedule, StepMode::Analytic, caps, oracle_base, true,
                   cb);
}

}  // namespace hcg

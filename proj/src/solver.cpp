#include "hcg/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace hcg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double g_value(const ProblemData& d, const Eigen::VectorXd& x) {
  return d.c_g.dot(x) + d.g_const;
}

double potential_value(const PotentialProblem& p, const BarrierPoint& pt) {
  return pt.value() / p.t + g_value(*p.data, pt.x());
}

GapInfo compute_gap(const PotentialProblem& p, const BarrierPoint& pt,
                    const OracleConfig& oracle) {
  if (p.t <= 0) throw std::invalid_argument("compute_gap: t must be positive");
  const ProblemData& d = *p.data;
  Eigen::VectorXd cost = pt.gradient() / p.t + d.c_g;
  GapInfo gi;
  gi.answer = composite_lmo(d.set, cost, oracle);
  gi.gap = cost.dot(pt.x()) - gi.answer.linear_value;
  gi.e = pt.local_norm(gi.answer.s - pt.x());
  return gi;
}

double analytic_step(double gap, double e, double t) {
  if (t <= 0) throw std::invalid_argument("analytic_step: t must be positive");
  if (!(gap > 0)) return 0.0;
  if (e == 0) return 1.0;
  const double tg = t * gap;
  return std::min(1.0, tg / (e * (e + tg)));
}

double line_search_gamma(const PotentialProblem& p, const BarrierPoint& pt,
                         const Eigen::VectorXd& s) {
  const ProblemData& d = *p.data;
  Eigen::VectorXd dir = s - pt.x();
  if (dir.isZero(0.0)) return 0.0;
  BarrierSegment seg = pt.segment(dir);
  const double hi = std::min(1.0, 0.999 * seg.max_step());
  const double gslope = d.c_g.dot(dir);
  auto phi = [&](double gamma) { return seg.value(gamma) / p.t + gamma * gslope; };

  double best_gamma = 0.0;
  double best_val = phi(0.0);
  auto consider = [&](double gamma) {
    if (gamma <= 0) return;
    const double v = phi(gamma);
    if (v < best_val) {
      best_val = v;
      best_gamma = gamma;
    }
  };
  if (hi > 0) consider(golden_section(phi, 0.0, hi, 1e-10));
  // comparison principle: never worse than the analytic step
  const double e = pt.local_norm(dir);
  const double gap = pt.grad_dot(-dir) / p.t - gslope;
  const double alpha = analytic_step(gap, e, p.t);
  if (alpha < seg.max_step()) consider(alpha);
  return best_gamma;
}

InnerResult inner_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                      const InnerOpts& opts) {
  if (eta <= 0) throw std::invalid_argument("inner_run: eta must be positive");
  if (opts.delta <= 0 || opts.delta > 1)
    throw std::invalid_argument("inner_run: delta must be in (0,1]");
  const auto start = std::chrono::steady_clock::now();
  const ProblemData& d = *p.data;
  InnerResult res;
  BarrierPoint pt(d.barrier, std::move(x0));
  long k = 0;
  res.last_gap = kInf;
  for (;;) {
    if (k >= opts.caps.max_iterations) {
      res.stop_reason = StopReason::IterCap;
      break;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > opts.caps.max_seconds) {
      res.stop_reason = StopReason::TimeCap;
      break;
    }
    OracleConfig oracle = opts.oracle;
    oracle.seed = opts.oracle.seed + static_cast<std::uint64_t>(k);
    GapInfo gi = compute_gap(p, pt, oracle);
    if (!oracle.exact && !(gi.gap > 0)) {
      // nonpositive gap-hat: Eq. for alpha is undefined; retry once with a
      // tightened target, then stop flagged
      oracle.theta_target *= 0.1;
      oracle.seed += 0x9e3779b97f4a7c15ULL;
      gi = compute_gap(p, pt, oracle);
      if (!(gi.gap > 0)) {
        StepInfo info;
        info.s = gi.answer;
        info.gap = gi.gap;
        info.e = gi.e;
        info.alpha = 0.0;
        const double v = potential_value(p, pt);
        info.potential_before = info.potential_after = v;
        if (opts.record_trace) res.trace.push_back(info);
        if (opts.on_step) opts.on_step(info, pt.x());
        res.last_gap = gi.gap;
        res.stop_reason = StopReason::OracleFlagged;
        break;
      }
    }
    res.last_gap = gi.gap;
    if (gi.gap <= eta * opts.delta) {
      res.stop_reason = StopReason::GapLeqEta;
      break;
    }
    StepInfo info;
    info.gap = gi.gap;
    info.e = gi.e;
    Eigen::VectorXd dir = gi.answer.s - pt.x();
    if (opts.step == StepMode::LineSearch) {
      info.alpha = line_search_gamma(p, pt, gi.answer.s);
      info.kind = StepInfo::Kind::LineSearch;
    } else {
      info.alpha = analytic_step(gi.gap, gi.e, p.t);
      info.kind = info.alpha == 1.0 ? StepInfo::Kind::Full
                                    : StepInfo::Kind::Analytic;
    }
    info.potential_before = potential_value(p, pt);
    Eigen::VectorXd xn = pt.x() + info.alpha * dir;
    try {
      pt = BarrierPoint(d.barrier, std::move(xn));
    } catch (const DomainError& e) {
      throw std::runtime_error(
          std::string("inner_run: iterate left the barrier domain (bug): ") +
          e.what());
    }
    info.potential_after = potential_value(p, pt);
    info.s = std::move(gi.answer);
    if (opts.record_trace) res.trace.push_back(info);
    if (opts.on_step) opts.on_step(info, pt.x());
    ++k;
  }
  res.x_final = pt.x();
  res.iterations = k;
  return res;
}

InnerResult cg_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                   const Caps& caps, bool record_trace) {
  InnerOpts opts;
  opts.caps = caps;
  opts.record_trace = record_trace;
  return inner_run(p, std::move(x0), eta, opts);
}

InnerResult lcg_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                    const Caps& caps, bool record_trace) {
  InnerOpts opts;
  opts.step = StepMode::LineSearch;
  opts.caps = caps;
  opts.record_trace = record_trace;
  return inner_run(p, std::move(x0), eta, opts);
}

InnerResult icg_run(const PotentialProblem& p, Eigen::VectorXd x0, double eta,
                    double delta, const OracleConfig& oracle, const Caps& caps,
                    bool record_trace) {
  InnerOpts opts;
  opts.oracle = oracle;
  opts.delta = delta;
  opts.caps = caps;
  opts.record_trace = record_trace;
  return inner_run(p, std::move(x0), eta, opts);
}

namespace {
void check_bound_args(double nu, double t, double delta0, double omega_g,
                      double eta) {
  if (!(nu > 0) || !(t > 0) || !(delta0 > 0) || !(eta > 0) || omega_g < 0)
    throw std::invalid_argument("bound evaluator: nonpositive input");
}
long lceil(double v) { return static_cast<long>(std::ceil(v)); }
}  // namespace

long bound_R_G(double nu, double t, double delta0_upper, double omega_g,
               double eta) {
  check_bound_args(nu, t, delta0_upper, omega_g, eta);
  const long first = lceil(5.3 * (nu + t * delta0_upper + t * omega_g) *
                           std::log(10.6 * t * delta0_upper));
  const long second = lceil(24.0 / (t * eta) * (nu + t * omega_g) *
                            (nu + t * omega_g));
  return first + second;
}

long bound_R_Delta(double nu, double t, double delta0_upper, double omega_g,
                   double eta) {
  check_bound_args(nu, t, delta0_upper, omega_g, eta);
  const long first = lceil(5.3 * (nu + t * delta0_upper + t * omega_g) *
                           std::log(10.6 * t * delta0_upper));
  const double bracket =
      std::max(0.0, 1.0 / (t * eta) - 1.0 / (t * delta0_upper));
  const long second =
      lceil(12.0 * (nu + t * omega_g) * (nu + t * omega_g) * bracket);
  return first + second;
}

namespace {
long inexact_first_term(double nu, double t, double delta0, double omega_g,
                        double eta, double delta, double theta) {
  const double plus = std::max(0.0, 1.0 - 10.6 * t * theta);
  const double branch1 =
      plus > 0 ? 10.6 * t * delta0 / plus : std::numeric_limits<double>::infinity();
  const double arg = std::min(branch1, delta0 / eta);
  return lceil(5.3 * (t * delta * (delta0 - theta) + nu + t * omega_g) / delta *
               std::log(arg));
}
}  // namespace

long bound_R_G_inexact(double nu, double t, double delta0_upper, double omega_g,
                       double eta, double delta, double theta) {
  check_bound_args(nu, t, delta0_upper, omega_g, eta);
  if (delta <= 0 || delta > 1 || theta < 0)
    throw std::invalid_argument("bound_R_G_inexact: bad delta/theta");
  const long first =
      inexact_first_term(nu, t, delta0_upper, omega_g, eta, delta, theta);
  const long second =
      lceil(12.0 * (nu + t * omega_g) * (nu + t * omega_g) /
            (t * delta * delta * eta) * (2.0 + theta / eta));
  return first + second + 1;
}

long bound_R_Delta_inexact(double nu, double t, double delta0_upper,
                           double omega_g, double eta, double delta,
                           double theta) {
  check_bound_args(nu, t, delta0_upper, omega_g, eta);
  if (delta <= 0 || delta > 1 || theta < 0 || delta0_upper <= theta)
    throw std::invalid_argument("bound_R_Delta_inexact: bad delta/theta");
  const long first =
      inexact_first_term(nu, t, delta0_upper, omega_g, eta, delta, theta);
  const double bracket =
      std::max(0.0, 1.0 / eta - 1.0 / (delta0_upper - theta));
  const long second = lceil(12.0 * (nu + t * omega_g) * (nu + t * omega_g) /
                            (t * delta * delta) * bracket);
  return first + second + 1;
}

}  // namespace hcg

#include "hcg/hcg.h"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hcg/homotopy.hpp"
#include "hcg/instances.hpp"

using json = nlohmann::json;

namespace {

thread_local std::string g_last_error;

template <typename F>
hcg_status wrap(F&& f) {
  try {
    f();
    return HCG_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return HCG_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HCG_ERR_RUNTIME;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

struct hcg_instance {
  hcg::ConicInstance inst;
  std::uint64_t seed = 0;
  bool normalize = true;
};

struct hcg_result {
  hcg::HomotopyResult res;
  double objective = 0;
  double margin = 0;
};

extern "C" {

void hcg_solve_options_init(hcg_solve_options* opts) {
  opts->solver = HCG_SOLVER_CG;
  opts->epsilon = 1e-3;
  opts->sigma = 0.9;
  opts->eta0_mult = 2.0;
  opts->delta = 1.0;
  opts->theta0 = -1.0;
  opts->seed = 0;
  opts->max_iterations = 1000000;
  opts->max_seconds = 3600.0;
  opts->lanczos_iters = 256;
  opts->trace_timing = 1;
}

const char* hcg_last_error(void) { return g_last_error.c_str(); }

hcg_status hcg_instance_builtin(const char* name, hcg_instance** out) {
  return wrap([&] {
    if (!name || !out) throw std::invalid_argument("null argument");
    auto* h = new hcg_instance;
    h->inst = hcg::build_builtin(name);
    *out = h;
  });
}

hcg_status hcg_instance_from_file(const char* path, hcg_instance** out) {
  return wrap([&] {
    if (!path || !out) throw std::invalid_argument("null argument");
    auto* h = new hcg_instance;
    h->inst = hcg::load_instance_file(path);
    *out = h;
  });
}

hcg_status hcg_instance_from_gset(const char* path, hcg_instance** out) {
  return wrap([&] {
    if (!path || !out) throw std::invalid_argument("null argument");
    auto* h = new hcg_instance;
    h->inst = hcg::build_maxcut(hcg::parse_gset(read_file(path)));
    *out = h;
  });
}

hcg_status hcg_instance_gen_mixing(int n, int m, uint64_t seed, int normalize,
                                   hcg_instance** out) {
  return wrap([&] {
    if (!out) throw std::invalid_argument("null argument");
    auto* h = new hcg_instance;
    h->inst = hcg::build_mixing(hcg::random_mixing_graph(n, m, seed),
                                normalize != 0);
    h->seed = seed;
    h->normalize = normalize != 0;
    *out = h;
  });
}

hcg_status hcg_instance_save(const hcg_instance* inst, const char* path) {
  return wrap([&] {
    if (!inst || !path) throw std::invalid_argument("null argument");
    // persist the raw (pre-normalization) weights so loading reproduces the
    // instance exactly
    hcg::Graph g = inst->inst.graph;
    if (inst->inst.meta.weight_scale != 1.0)
      for (auto& e : g.edges) e.w /= inst->inst.meta.weight_scale;
    hcg::save_instance_file(path, g, inst->inst.kind, inst->seed,
                            inst->normalize);
  });
}

void hcg_instance_free(hcg_instance* inst) { delete inst; }

hcg_status hcg_instance_info(const hcg_instance* inst, double* nu,
                             int* block_dim, int* has_opt_ref,
                             double* opt_ref) {
  return wrap([&] {
    if (!inst) throw std::invalid_argument("null instance");
    if (nu) *nu = inst->inst.problem.nu;
    if (block_dim) *block_dim = inst->inst.n;
    if (has_opt_ref) *has_opt_ref = inst->inst.meta.opt_ref.has_value() ? 1 : 0;
    if (opt_ref) *opt_ref = inst->inst.meta.opt_ref.value_or(0.0);
  });
}

hcg_status hcg_solve(const hcg_instance* hinst, const hcg_solve_options* copts,
                     const char* trace_path, const char* summary_path,
                     hcg_result** out) {
  return wrap([&] {
    if (!hinst || !copts || !out) throw std::invalid_argument("null argument");
    const hcg::ConicInstance& inst = hinst->inst;
    hcg_solve_options o = *copts;
    if (o.epsilon <= 0) throw std::invalid_argument("epsilon must be > 0");

    const double omega_g =
        hcg::compute_omega_g(inst.problem.c_g, inst.problem.set);
    const bool inexact = o.solver == HCG_SOLVER_ICG;
    hcg::HomotopySchedule sched = hcg::default_schedule(
        inst.problem.nu, omega_g, o.epsilon, o.sigma,
        inexact ? hcg::ScheduleMode::Inexact : hcg::ScheduleMode::Exact,
        o.eta0_mult, o.delta);
    if (inexact && o.theta0 >= 0) sched.theta0 = o.theta0;

    hcg::Caps caps{o.max_iterations, o.max_seconds};

    std::ofstream trace;
    if (trace_path) {
      trace.open(trace_path);
      if (!trace)
        throw std::runtime_error(std::string("cannot open trace file ") +
                                 trace_path);
    }
    const auto start = std::chrono::steady_clock::now();
    hcg::OuterCallbacks cb;
    if (trace_path) {
      cb.on_step = [&](long round, long k, const hcg::PotentialProblem& prob,
                       const hcg::StepInfo& si, const Eigen::VectorXd& x) {
        json rec;
        rec["schema"] = 1;
        rec["round"] = round;
        rec["iter"] = k;
        rec["t"] = prob.t;
        rec["eta"] = sched.eta(round);
        rec["gap"] = si.gap;
        rec["potential"] = si.potential_after;
        rec["objective"] = inst.reported_objective(x);
        rec["alpha"] = si.alpha;
        rec["kind"] = si.kind == hcg::StepInfo::Kind::Full         ? "full"
                      : si.kind == hcg::StepInfo::Kind::LineSearch ? "line_search"
                                                                   : "analytic";
        rec["certificate"] = hcg::certificate(sched.eta(round),
                                              sched.theta(round),
                                              inst.problem.nu, sched.t(round),
                                              inexact);
        rec["elapsed_s"] =
            o.trace_timing
                ? std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count()
                : 0.0;
        rec["feasibility_margin"] = hcg::feasibility_margin(inst, x);
        trace << rec.dump() << "\n";
      };
    }

    hcg::HomotopyResult res;
    if (inexact) {
      hcg::OracleConfig oracle;
      oracle.exact =
          inst.problem.set.kind == hcg::FeasibleSetSpec::Kind::ScaledSimplex;
      oracle.max_iters = o.lanczos_iters;
      oracle.seed = o.seed;
      res = hcg::inexact_homotopy_run(inst.problem, sched, caps, oracle, cb);
    } else {
      const hcg::StepMode mode = o.solver == HCG_SOLVER_LCG
                                     ? hcg::StepMode::LineSearch
                                     : hcg::StepMode::Analytic;
      res = hcg::homotopy_run(inst.problem, sched, mode, caps, cb);
    }

    auto* r = new hcg_result;
    r->objective = inst.reported_objective(res.x);
    r->margin = hcg::feasibility_margin(inst, res.x);
    r->res = std::move(res);

    if (summary_path) {
      json s;
      s["schema"] = 1;
      s["instance"] = inst.meta.name;
      s["solver"] = inexact ? "icg"
                            : (o.solver == HCG_SOLVER_LCG ? "lcg" : "cg");
      s["epsilon"] = o.epsilon;
      s["sigma"] = o.sigma;
      s["eta0_mult"] = o.eta0_mult;
      s["delta"] = o.delta;
      s["seed"] = o.seed;
      s["omega_g"] = omega_g;
      s["nu"] = inst.problem.nu;
      s["rounds"] = static_cast<long>(r->res.trace.rounds.size());
      s["total_iterations"] = r->res.trace.total_iterations;
      s["objective"] = r->objective;
      s["g_value"] = r->res.g_value;
      s["certificate"] = r->res.certificate;
      s["converged"] = r->res.converged;
      s["feasibility_margin"] = r->margin;
      s["weight_scale"] = inst.meta.weight_scale;
      s["elapsed_s"] = r->res.trace.elapsed_s;
      std::ofstream sum(summary_path);
      if (!sum) {
        delete r;
        throw std::runtime_error(std::string("cannot open summary file ") +
                                 summary_path);
      }
      sum << s.dump(2) << "\n";
    }
    *out = r;
  });
}

double hcg_result_objective(const hcg_result* r) { return r->objective; }
double hcg_result_certificate(const hcg_result* r) {
  return r->res.certificate;
}
double hcg_result_feasibility_margin(const hcg_result* r) { return r->margin; }
long hcg_result_rounds(const hcg_result* r) {
  return static_cast<long>(r->res.trace.rounds.size());
}
long hcg_result_total_iterations(const hcg_result* r) {
  return r->res.trace.total_iterations;
}
int hcg_result_converged(const hcg_result* r) {
  return r->res.converged ? 1 : 0;
}
void hcg_result_free(hcg_result* r) { delete r; }

hcg_status hcg_repair(const hcg_instance* hinst, const char* solution_path,
                      const char* out_solution_path,
                      const char* out_report_path) {
  return wrap([&] {
    if (!hinst || !solution_path || !out_solution_path)
      throw std::invalid_argument("null argument");
    const hcg::ConicInstance& inst = hinst->inst;
    json doc = json::parse(read_file(solution_path));
    const auto& rows = doc.is_array() ? doc : doc.at("matrix");
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd x(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(rows[static_cast<size_t>(i)].size()) != n)
        throw std::invalid_argument("solution matrix not square");
      for (Eigen::Index j = 0; j < n; ++j)
        x(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)]
                      .get<double>();
    }
    if (n != inst.n)
      throw std::invalid_argument("solution dimension does not match instance");

    std::pair<Eigen::MatrixXd, hcg::RepairReport> rep;
    if (inst.kind == hcg::InstanceKind::MaxCut)
      rep = hcg::repair_maxcut_solution(x);
    else if (inst.kind == hcg::InstanceKind::Mixing)
      rep = hcg::repair_mixing_solution(x, inst);
    else
      throw std::invalid_argument("repair supports maxcut and mixing instances");

    const auto quad_objective = [&](const Eigen::MatrixXd& m) {
      Eigen::VectorXd z = inst.problem.x0;
      z.head(n * n) = Eigen::Map<const Eigen::VectorXd>(m.data(), n * n);
      return inst.reported_objective(z);
    };
    rep.second.objective_before = quad_objective(x);
    rep.second.objective_after = quad_objective(rep.first);

    json outdoc;
    outdoc["schema"] = 1;
    json mat = json::array();
    for (Eigen::Index i = 0; i < n; ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < n; ++j) row.push_back(rep.first(i, j));
      mat.push_back(std::move(row));
    }
    outdoc["matrix"] = std::move(mat);
    std::ofstream outf(out_solution_path);
    if (!outf)
      throw std::runtime_error(std::string("cannot open ") + out_solution_path);
    outf << outdoc.dump(2) << "\n";

    if (out_report_path) {
      json rp;
      rp["schema"] = 1;
      rp["objective_before"] = rep.second.objective_before;
      rp["objective_after"] = rep.second.objective_after;
      rp["margin_before"] = rep.second.margin_before;
      rp["margin_after"] = rep.second.margin_after;
      rp["shift"] = rep.second.shift;
      rp["alpha"] = rep.second.alpha;
      rp["steps"] = rep.second.steps;
      std::ofstream rf(out_report_path);
      if (!rf)
        throw std::runtime_error(std::string("cannot open ") + out_report_path);
      rf << rp.dump(2) << "\n";
    }
  });
}

}  // extern "C"

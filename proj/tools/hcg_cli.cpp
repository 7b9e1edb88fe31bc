// Command-line harness over the hcg C API: solve builtin/generated/loaded
// instances, generate random mixing instances, and repair solution files.

#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "hcg/hcg.h"

namespace {

int fail(const char* context) {
  std::fprintf(stderr, "error: %s: %s\n", context, hcg_last_error());
  return 1;
}

using InstancePtr = std::unique_ptr<hcg_instance, decltype(&hcg_instance_free)>;

InstancePtr open_instance(const std::string& builtin, const std::string& file,
                          const std::string& gset, int* err) {
  hcg_instance* raw = nullptr;
  hcg_status st;
  if (!builtin.empty())
    st = hcg_instance_builtin(builtin.c_str(), &raw);
  else if (!gset.empty())
    st = hcg_instance_from_gset(gset.c_str(), &raw);
  else
    st = hcg_instance_from_file(file.c_str(), &raw);
  *err = st != HCG_OK;
  return InstancePtr(raw, &hcg_instance_free);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homotopy conditional-gradient solver for conic programs"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  std::string instance_name, instance_file, gset_file;
  auto* g1 = solve->add_option("--instance", instance_name, "builtin instance name");
  auto* g2 = solve->add_option("--file", instance_file, "instance file (json)");
  auto* g3 = solve->add_option("--gset", gset_file, "Gset graph file (maxcut)");
  g1->excludes(g2)->excludes(g3);
  g2->excludes(g3);
  std::string solver = "cg";
  solve->add_option("--solver", solver, "cg | lcg | icg")
      ->check(CLI::IsMember({"cg", "lcg", "icg"}));
  hcg_solve_options opts;
  hcg_solve_options_init(&opts);
  solve->add_option("--epsilon", opts.epsilon, "target accuracy");
  solve->add_option("--sigma", opts.sigma, "schedule ratio in (0,1)");
  solve->add_option("--eta0-mult", opts.eta0_mult,
                    "eta0 = mult * Omega_g (0.5, 1 or 2)");
  solve->add_option("--delta", opts.delta, "ILMO multiplicative certificate");
  solve->add_option("--theta0", opts.theta0, "ILMO additive schedule start");
  solve->add_option("--seed", opts.seed, "oracle seed");
  solve->add_option("--max-iters", opts.max_iterations, "total inner iteration cap");
  solve->add_option("--max-seconds", opts.max_seconds, "wall clock cap");
  solve->add_option("--lanczos-iters", opts.lanczos_iters,
                    "max Lanczos iterations per oracle call");
  bool no_timing = false;
  solve->add_flag("--no-trace-timing", no_timing,
                  "write elapsed_s = 0 in trace records (reproducible bytes)");
  std::string trace_path, summary_path;
  solve->add_option("--trace", trace_path, "trace output file (json lines)");
  solve->add_option("--summary", summary_path, "summary output file (json)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string gen_kind = "mixing";
  gen->add_option("kind", gen_kind, "instance kind")->check(CLI::IsMember({"mixing"}));
  int gen_n = 0, gen_m = 0;
  std::uint64_t gen_seed = 0;
  bool no_normalize = false;
  std::string gen_out;
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--m", gen_m, "edge count")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_flag("--no-normalize", no_normalize, "skip the sum d^2 = n^2 rescale");
  gen->add_option("--out", gen_out, "output file")->required();

  // repair
  auto* repair = app.add_subcommand("repair", "repair a solution file");
  std::string rep_name, rep_file, rep_solution, rep_out, rep_report;
  auto* r1 = repair->add_option("--instance", rep_name, "builtin instance name");
  auto* r2 = repair->add_option("--file", rep_file, "instance file (json)");
  r1->excludes(r2);
  repair->add_option("--solution", rep_solution, "solution file (json matrix)")
      ->required();
  repair->add_option("--out", rep_out, "repaired solution file")->required();
  repair->add_option("--report", rep_report, "repair report file");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    if (instance_name.empty() && instance_file.empty() && gset_file.empty()) {
      std::fprintf(stderr, "error: one of --instance/--file/--gset is required\n");
      return 1;
    }
    int err = 0;
    InstancePtr inst = open_instance(instance_name, instance_file, gset_file, &err);
    if (err) return fail("loading instance");
    opts.solver = solver == "lcg"   ? HCG_SOLVER_LCG
                  : solver == "icg" ? HCG_SOLVER_ICG
                                    : HCG_SOLVER_CG;
    opts.trace_timing = no_timing ? 0 : 1;
    hcg_result* res = nullptr;
    if (hcg_solve(inst.get(), &opts,
                  trace_path.empty() ? nullptr : trace_path.c_str(),
                  summary_path.empty() ? nullptr : summary_path.c_str(),
                  &res) != HCG_OK)
      return fail("solve");
    std::printf("objective %.10g certificate %.4g rounds %ld iterations %ld %s\n",
                hcg_result_objective(res), hcg_result_certificate(res),
                hcg_result_rounds(res), hcg_result_total_iterations(res),
                hcg_result_converged(res) ? "converged" : "cap-exhausted");
    const int code = hcg_result_converged(res) ? 0 : 2;
    hcg_result_free(res);
    return code;
  }

  if (gen->parsed()) {
    hcg_instance* raw = nullptr;
    if (hcg_instance_gen_mixing(gen_n, gen_m, gen_seed, no_normalize ? 0 : 1,
                                &raw) != HCG_OK)
      return fail("gen");
    InstancePtr inst(raw, &hcg_instance_free);
    if (hcg_instance_save(inst.get(), gen_out.c_str()) != HCG_OK)
      return fail("writing instance file");
    std::printf("wrote %s\n", gen_out.c_str());
    return 0;
  }

  if (repair->parsed()) {
    if (rep_name.empty() && rep_file.empty()) {
      std::fprintf(stderr, "error: one of --instance/--file is required\n");
      return 1;
    }
    int err = 0;
    InstancePtr inst = open_instance(rep_name, rep_file, "", &err);
    if (err) return fail("loading instance");
    if (hcg_repair(inst.get(), rep_solution.c_str(), rep_out.c_str(),
                   rep_report.empty() ? nullptr : rep_report.c_str()) != HCG_OK)
      return fail("repair");
    std::printf("wrote %s\n", rep_out.c_str());
    return 0;
  }
  return 1;
}

#pragma once

#include <optional>
#include <string>

#include "hcg/solver.hpp"

namespace hcg {

// Undirected weighted graph, 1-indexed nodes, edges kept with i < j.
// For mixing instances w holds the squared distance d^2_ij.
struct Graph {
  struct Edge {
    int i = 0, j = 0;
    double w = 1.0;
  };
  int n = 0;
  std::vector<Edge> edges;
};

// Text format: first line "N M", then M lines "i j w".
Graph parse_gset(const std::string& text);

// Connected random graph: random spanning tree plus m-n+1 distinct extra
// edges, weights d^2 ~ Uniform(0,1], deterministic per seed.
Graph random_mixing_graph(int n, int m, std::uint64_t seed);

enum class InstanceKind { MaxCut, Packing, Covering, Mixing };

struct InstanceMetadata {
  std::string name;
  std::optional<double> opt_ref;  // in the reported (user) sense
  std::string opt_provenance;
  bool maximize = false;  // reported objective = -g when true
  double weight_scale = 1.0;  // mixing d^2 rescale factor (1 if none)
};

// Reduced-coordinate edge data kept for mixing repair and margins.
struct MixingData {
  struct Edge {
    int a = -1, b = -1;  // 0-based reduced indices; a = -1 when node 1
    double d2 = 0;
  };
  std::vector<Edge> edges;
  double alpha = 0;  // trace bound
};

struct ConicInstance {
  InstanceKind kind = InstanceKind::MaxCut;
  ProblemData problem;
  InstanceMetadata meta;
  int n = 0;  // matrix order of the variable block
  MixingData mixing;  // populated for mixing instances
  Graph graph;        // populated for graph-based instances

  double reported_objective(const Eigen::VectorXd& x) const {
    const double g = g_value(problem, x);
    return meta.maximize ? -g : g;
  }
  double g_opt() const {  // reference optimum in min-g sense
    return meta.maximize ? -*meta.opt_ref : *meta.opt_ref;
  }
};

ConicInstance build_maxcut(const Graph& g);
ConicInstance build_packing(const std::vector<Eigen::MatrixXd>& a,
                            const Eigen::MatrixXd& c, double rho);
ConicInstance build_covering(const std::vector<Eigen::MatrixXd>& a, double rho);
ConicInstance build_mixing(const Graph& g, bool normalize);

// Named test instances with derived reference optima.
ConicInstance build_builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Minimum constraint slack of the flattened point x: barrier slacks (or
// lambda_min of M(x)) and the feasible-set margins; >= 0 iff feasible.
double feasibility_margin(const ConicInstance& inst, const Eigen::VectorXd& x);

struct RepairReport {
  double objective_before = 0, objective_after = 0;
  double margin_before = 0, margin_after = 0;
  double shift = 0;   // lambda_min shift (maxcut)
  double alpha = 0;   // diagonal rescale (maxcut)
  long steps = 0;     // scaling iterations (mixing)
};

// X~ = (X - min(0, lambda_min(X)) I) / max(1, max_ii after the shift)
std::pair<Eigen::MatrixXd, RepairReport> repair_maxcut_solution(
    const Eigen::MatrixXd& x);

// Iteratively rescales the row and column of the node with the largest
// relative edge violation gamma by 1/(1+gamma) until D(X) <= d^2.
std::pair<Eigen::MatrixXd, RepairReport> repair_mixing_solution(
    const Eigen::MatrixXd& x, const ConicInstance& inst);

// Self-describing instance files (JSON; fields: schema, kind, n, edges,
// weights, seed, normalize).
void save_instance_file(const std::string& path, const Graph& g,
                        InstanceKind kind, std::uint64_t seed, bool normalize);
ConicInstance load_instance_file(const std::string& path);

}  // namespace hcg

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace hcg {

// Answer of a linear minimization oracle over X: a vertex (or the zero
// point) s with its linear value and a (delta, theta) inexactness
// certificate. Exact oracles report (1, 0).
struct LmoAnswer {
  Eigen::VectorXd s;
  double linear_value = 0;
  double delta = 1.0;
  double theta = 0.0;
  bool target_met = true;  // false if theta_target was not reached
  int iterations = 0;      // Lanczos iterations, 0 for closed forms
  double residual = 0.0;   // ||C v - lambda v|| justifying theta
};

// Feasible sets used by the instances: a trace-bounded spectrahedron
// {S >= 0, tr S <= rho} over an n x n matrix block (stored flattened,
// column-major), or a scaled nonnegative simplex {x >= 0, sum x <= rho},
// optionally extended by pinned coordinates the oracle passes through.
struct FeasibleSetSpec {
  enum class Kind { Spectrahedron, ScaledSimplex };
  Kind kind = Kind::Spectrahedron;
  double rho = 1.0;
  Eigen::Index block_dim = 0;  // matrix order n, or vector length m
  std::vector<std::pair<Eigen::Index, double>> pinned;

  static FeasibleSetSpec spectrahedron(Eigen::Index n, double rho);
  static FeasibleSetSpec scaled_simplex(Eigen::Index m, double rho);
  FeasibleSetSpec with_pinned(
      std::vector<std::pair<Eigen::Index, double>> coords) const;

  Eigen::Index block_size() const {
    return kind == Kind::Spectrahedron ? block_dim * block_dim : block_dim;
  }
  Eigen::Index dim() const {
    return block_size() + static_cast<Eigen::Index>(pinned.size());
  }
  // Minimum constraint slack of x over this set (ignoring pinned coords
  // unless violated beyond 1e-9); >= 0 iff x is a member.
  double margin(const Eigen::VectorXd& x) const;
};

struct OracleConfig {
  bool exact = true;
  double theta_target = 0.0;  // absolute target for the certified theta
  int max_iters = 256;
  std::uint64_t seed = 0;
};

LmoAnswer spectrahedron_lmo(const Eigen::MatrixXd& c, double rho);
LmoAnswer spectrahedron_lmo_lanczos(const Eigen::MatrixXd& c, double rho,
                                    double theta_target, int max_iters,
                                    std::uint64_t seed);
LmoAnswer scaled_simplex_lmo(const Eigen::VectorXd& c, double rho);

// Dispatches on the set kind with the effective cost vector (barrier part
// plus linear objective already summed); pinned coordinates are copied from
// the spec and contribute to linear_value.
LmoAnswer composite_lmo(const FeasibleSetSpec& set, const Eigen::VectorXd& cost,
                        const OracleConfig& oracle = {});

}  // namespace hcg

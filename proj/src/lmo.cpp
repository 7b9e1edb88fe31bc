#include "hcg/lmo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hcg {

namespace {

void check_symmetric(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols())
    throw std::invalid_argument("spectrahedron_lmo: matrix not square");
  const double scale = c.norm();
  if ((c - c.transpose()).norm() > 1e-10 * std::max(scale, 1.0))
    throw std::invalid_argument("spectrahedron_lmo: matrix not symmetric");
}

LmoAnswer rank_one_answer(const Eigen::VectorXd& v, double lambda, double rho,
                          const Eigen::MatrixXd& c) {
  LmoAnswer a;
  const Eigen::Index n = v.size();
  if (lambda < 0) {
    Eigen::MatrixXd s = rho * (v * v.transpose());
    a.s = Eigen::Map<const Eigen::VectorXd>(s.data(), n * n);
    a.linear_value = rho * v.dot(c * v);
  } else {
    a.s = Eigen::VectorXd::Zero(n * n);
    a.linear_value = 0.0;
  }
  return a;
}

struct LanczosResult {
  double lambda = 0;       // Ritz value (Rayleigh quotient of v)
  Eigen::VectorXd v;       // unit Ritz vector
  double residual = 0;     // ||C v - lambda v||
  int iterations = 0;
};

// Smallest-eigenpair Lanczos with full reorthogonalization and a seeded
// random unit start vector. Stops once rho*residual <= theta_target.
LanczosResult lanczos_min_eig(const Eigen::MatrixXd& c, double rho,
                              double theta_target, int max_iters,
                              std::uint64_t seed) {
  const Eigen::Index n = c.rows();
  max_iters = static_cast<int>(std::min<Eigen::Index>(max_iters, n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = gauss(rng);
  q.normalize();

  Eigen::MatrixXd basis(n, max_iters);
  Eigen::VectorXd alpha(max_iters), beta(max_iters);
  LanczosResult best;
  int k = 0;
  bool breakdown = false;
  double prev_lambda = std::numeric_limits<double>::infinity();
  for (; k < max_iters; ++k) {
    basis.col(k) = q;
    Eigen::VectorXd w = c * q;
    alpha[k] = q.dot(w);
    w -= alpha[k] * q;
    if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
    // full reorthogonalization, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    beta[k] = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      t(i, i) = alpha[i];
      if (i > 0) t(i, i - 1) = t(i - 1, i) = beta[i - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::Index imin;
    es.eigenvalues().minCoeff(&imin);
    Eigen::VectorXd y = es.eigenvectors().col(imin);
    Eigen::VectorXd v = basis.leftCols(k + 1) * y;
    v.normalize();
    best.lambda = v.dot(c * v);
    best.v = v;
    best.residual = (c * v - best.lambda * v).norm();
    best.iterations = k + 1;
    // a small residual alone can certify a misconverged Ritz pair inside an
    // eigenvalue cluster above the minimum; require the Ritz value to have
    // stabilized and verify lambda_min >= lambda - ||r|| (the inequality the
    // certificate rests on) with a Cholesky test before accepting the stop
    const bool stable = rho * std::abs(best.lambda - prev_lambda) <= theta_target;
    prev_lambda = best.lambda;
    if (rho * best.residual <= theta_target && stable) {
      Eigen::MatrixXd shifted = c;
      shifted.diagonal().array() -= best.lambda - best.residual;
      if (Eigen::LLT<Eigen::MatrixXd>(shifted).info() == Eigen::Success) break;
    }
    if (beta[k] <= 1e-13 * std::max(1.0, c.norm())) {
      breakdown = true;  // invariant subspace: the Ritz pair is exact
      break;
    }
    q = w / beta[k];
  }
  if (breakdown && best.residual <= 1e-10 * std::max(1.0, c.norm()))
    best.residual = 0.0;
  return best;
}

}  // namespace

FeasibleSetSpec FeasibleSetSpec::spectrahedron(Eigen::Index n, double rho) {
  if (n <= 0 || rho <= 0)
    throw std::invalid_argument("spectrahedron: need n > 0, rho > 0");
  FeasibleSetSpec s;
  s.kind = Kind::Spectrahedron;
  s.rho = rho;
  s.block_dim = n;
  return s;
}

FeasibleSetSpec FeasibleSetSpec::scaled_simplex(Eigen::Index m, double rho) {
  if (m <= 0 || rho <= 0)
    throw std::invalid_argument("scaled_simplex: need m > 0, rho > 0");
  FeasibleSetSpec s;
  s.kind = Kind::ScaledSimplex;
  s.rho = rho;
  s.block_dim = m;
  return s;
}

FeasibleSetSpec FeasibleSetSpec::with_pinned(
    std::vector<std::pair<Eigen::Index, double>> coords) const {
  FeasibleSetSpec s = *this;
  for (const auto& [idx, val] : coords) {
    if (idx < s.block_size() + static_cast<Eigen::Index>(s.pinned.size()))
      throw std::invalid_argument("with_pinned: pinned index inside the block");
    s.pinned.emplace_back(idx, val);
  }
  return s;
}

double FeasibleSetSpec::margin(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("margin: dimension mismatch");
  double m = std::numeric_limits<double>::infinity();
  if (kind == Kind::Spectrahedron) {
    const Eigen::Index n = block_dim;
    Eigen::MatrixXd xm =
        Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (xm + xm.transpose()),
                                                      Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
    m = std::min(m, rho - xm.trace());
  } else {
    m = std::min(m, x.head(block_dim).minCoeff());
    m = std::min(m, rho - x.head(block_dim).sum());
  }
  for (const auto& [idx, val] : pinned) {
    const double dev = std::abs(x[idx] - val);
    if (dev > 1e-9) m = std::min(m, -dev);
  }
  return m;
}

LmoAnswer spectrahedron_lmo(const Eigen::MatrixXd& c, double rho) {
  check_symmetric(c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectrahedron_lmo: eigendecomposition failed");
  Eigen::Index imin;
  const double lmin = es.eigenvalues().minCoeff(&imin);
  LmoAnswer a = rank_one_answer(es.eigenvectors().col(imin), lmin, rho, c);
  a.linear_value = rho * std::min(0.0, lmin);
  return a;
}

LmoAnswer spectrahedron_lmo_lanczos(const Eigen::MatrixXd& c, double rho,
                                    double theta_target, int max_iters,
                                    std::uint64_t seed) {
  check_symmetric(c);
  if (theta_target < 0)
    throw std::invalid_argument("spectrahedron_lmo_lanczos: theta_target < 0");
  if (max_iters <= 0)
    throw std::invalid_argument("spectrahedron_lmo_lanczos: max_iters <= 0");
  LanczosResult r = lanczos_min_eig(c, rho, theta_target, max_iters, seed);
  LmoAnswer a = rank_one_answer(r.v, r.lambda, rho, c);
  a.theta = rho * r.residual;
  a.residual = r.residual;
  a.iterations = r.iterations;
  a.target_met = a.theta <= theta_target;
  return a;
}

LmoAnswer scaled_simplex_lmo(const Eigen::VectorXd& c, double rho) {
  if (c.size() == 0) throw std::invalid_argument("scaled_simplex_lmo: empty cost");
  Eigen::Index imin = 0;
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (c[i] < c[imin]) imin = i;  // strict: lowest index wins ties
  LmoAnswer a;
  a.s = Eigen::VectorXd::Zero(c.size());
  if (c[imin] < 0) {
    a.s[imin] = rho;
    a.linear_value = rho * c[imin];
  }
  return a;
}

LmoAnswer composite_lmo(const FeasibleSetSpec& set, const Eigen::VectorXd& cost,
                        const OracleConfig& oracle) {
  if (cost.size() != set.dim())
    throw std::invalid_argument("composite_lmo: cost dimension mismatch");
  const Eigen::Index bs = set.block_size();
  LmoAnswer a;
  if (set.kind == FeasibleSetSpec::Kind::Spectrahedron) {
    const Eigen::Index n = set.block_dim;
    Eigen::MatrixXd c = Eigen::Map<const Eigen::MatrixXd>(cost.data(), n, n);
    a = oracle.exact
            ? spectrahedron_lmo(c, set.rho)
            : spectrahedron_lmo_lanczos(c, set.rho, oracle.theta_target,
                                        oracle.max_iters, oracle.seed);
  } else {
    a = scaled_simplex_lmo(cost.head(bs), set.rho);
  }
  if (!set.pinned.empty()) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(set.dim());
    s.head(bs) = a.s;
    for (const auto& [idx, val] : set.pinned) {
      s[idx] = val;
      a.linear_value += cost[idx] * val;
    }
    a.s = std::move(s);
  }
  return a;
}

}  // namespace hcg

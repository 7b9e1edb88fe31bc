// Randomized invariant checks shared by the unit tests and the acceptance
// gate. Each check returns the number of violated cases; tolerances follow
// the per-invariant values the library promises.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hcg/barrier.hpp"

namespace hcg_test {

struct PropertyFailures {
  long homogeneity = 0;
  long identities = 0;  // the four log-homogeneity identities
  long descent = 0;     // upper convexity bound via omega_star
  long lower = 0;       // lower convexity bound via omega
  long sandwich = 0;
  long finite_diff = 0;
  long total() const {
    return homogeneity + identities + descent + lower + sandwich + finite_diff;
  }
};

inline hcg::BarrierSpec random_affine_spec(std::mt19937& rng, Eigen::VectorXd* x) {
  std::uniform_int_distribution<int> mdist(2, 6), ddist(2, 5);
  std::normal_distribution<double> gauss;
  const int m = mdist(rng), d = ddist(rng);
  Eigen::VectorXd xx(d);
  for (int i = 0; i < d; ++i) xx[i] = gauss(rng);
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < m; ++r) {
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a[i] = gauss(rng);
    // shift a along x so the slack -a.x is exactly 1/2 (interior start)
    a -= ((a.dot(xx) + 0.5) / xx.squaredNorm()) * xx;
    for (int i = 0; i < d; ++i) trip.emplace_back(r, i, a[i]);
  }
  hcg::SparseRowMatrix rows(m, d);
  rows.setFromTriplets(trip.begin(), trip.end());
  *x = xx;
  return hcg::BarrierSpec::affine_inequality(std::move(rows),
                                             Eigen::VectorXd::Zero(m));
}

inline hcg::BarrierSpec random_logdet_spec(std::mt19937& rng, Eigen::VectorXd* x) {
  std::uniform_int_distribution<int> pdist(2, 4), kdist(2, 4);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  const int p = pdist(rng), k = kdist(rng);
  std::vector<Eigen::MatrixXd> coeffs;
  Eigen::VectorXd xx(k);
  Eigen::MatrixXd rest = Eigen::MatrixXd::Zero(p, p);
  for (int i = 1; i < k; ++i) {
    Eigen::MatrixXd m(p, p);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) m(r, c) = gauss(rng);
    m = 0.5 * (m + m.transpose()).eval();
    coeffs.push_back(m);
    xx[i] = unif(rng);
    rest += xx[i] * m;
  }
  // the leading coefficient is the identity with a weight that dominates
  xx[0] = 1.0 + 2.0 * rest.norm();
  coeffs.insert(coeffs.begin(), Eigen::MatrixXd::Identity(p, p));
  *x = xx;
  return hcg::BarrierSpec::log_det_affine(Eigen::MatrixXd::Zero(p, p),
                                          std::move(coeffs));
}

inline hcg::BarrierSpec random_product_spec(std::mt19937& rng,
                                            Eigen::VectorXd* x) {
  Eigen::VectorXd xa, xl;
  hcg::BarrierSpec a = random_affine_spec(rng, &xa);
  hcg::BarrierSpec l = random_logdet_spec(rng, &xl);
  Eigen::VectorXd xx(xa.size() + xl.size());
  xx << xa, xl;
  *x = xx;
  std::vector<hcg::BarrierSpec> kids;
  kids.push_back(std::move(a));
  kids.push_back(std::move(l));
  return hcg::BarrierSpec::product(std::move(kids));
}

inline void check_one_barrier_case(const hcg::BarrierSpec& spec,
                                   const Eigen::VectorXd& x, std::mt19937& rng,
                                   PropertyFailures* fails) {
  using hcg::BarrierPoint;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double nu = spec.nu();
  BarrierPoint pt(spec, x);

  const double scale = 0.25 + 3.0 * unif(rng);
  BarrierPoint pts(spec, scale * x);
  Eigen::VectorXd h(x.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = gauss(rng);
  const double hn = pt.local_norm(h);
  if (hn > 1e-12) h /= hn;  // unit local norm keeps FD well conditioned

  const double tol_id = 1e-8;
  if (std::abs(pts.value() - (pt.value() - nu * std::log(scale))) >
      tol_id * (1.0 + std::abs(pt.value()) + nu))
    ++fails->homogeneity;

  long id_bad = 0;
  if (std::abs(pt.grad_dot(x) + nu) > tol_id * (1.0 + nu)) ++id_bad;
  if (std::abs(pt.curvature(x) - nu) > tol_id * (1.0 + nu)) ++id_bad;
  if (std::abs(pts.grad_dot(h) - pt.grad_dot(h) / scale) >
      tol_id * (1.0 + std::abs(pt.grad_dot(h))))
    ++id_bad;
  if (std::abs(pts.curvature(h) - pt.curvature(h) / (scale * scale)) >
      tol_id * (1.0 + pt.curvature(h)))
    ++id_bad;
  if (id_bad) ++fails->identities;

  // convexity bounds along x + gamma*h with gamma*||h||_x < 1
  const double gamma = 0.05 + 0.85 * unif(rng);
  const double tau = gamma * pt.local_norm(h);
  try {
    BarrierPoint moved(spec, x + gamma * h);
    const double lin = pt.value() + gamma * pt.grad_dot(h);
    if (moved.value() > lin + hcg::omega_star(tau) + 1e-9) ++fails->descent;
    if (moved.value() < lin + hcg::omega(tau) - 1e-9) ++fails->lower;
  } catch (const hcg::DomainError&) {
    ++fails->descent;  // tau < 1 guarantees feasibility
  }

  const double st = unif(rng) * 0.999;
  const double os = hcg::omega_star(st);
  if (!(st * st / (2.0 - st) <= os + 1e-12 &&
        os <= st * st / (2.0 * (1.0 - st)) + 1e-12))
    ++fails->sandwich;

  const double eps = 1e-5;
  const double fp = BarrierPoint(spec, x + eps * h).value();
  const double fm = BarrierPoint(spec, x - eps * h).value();
  long fd_bad = 0;
  const double gfd = (fp - fm) / (2.0 * eps);
  if (std::abs(gfd - pt.grad_dot(h)) > 1e-5 * (1.0 + std::abs(pt.grad_dot(h))))
    ++fd_bad;
  const double eps2 = 1e-4;  // larger step tames cancellation noise
  const double fp2 = BarrierPoint(spec, x + eps2 * h).value();
  const double fm2 = BarrierPoint(spec, x - eps2 * h).value();
  const double cfd = (fp2 + fm2 - 2.0 * pt.value()) / (eps2 * eps2);
  if (std::abs(cfd - pt.curvature(h)) > 1e-5 * (1.0 + pt.curvature(h)) + 1e-6)
    ++fd_bad;
  if (fd_bad) ++fails->finite_diff;
}

// cases per kind; returns aggregate failure counts over all three kinds.
inline PropertyFailures run_barrier_property_suite(int cases,
                                                   std::uint32_t seed) {
  PropertyFailures fails;
  std::mt19937 rng(seed);
  for (int kind = 0; kind < 3; ++kind) {
    for (int c = 0; c < cases; ++c) {
      Eigen::VectorXd x;
      hcg::BarrierSpec spec = kind == 0   ? random_affine_spec(rng, &x)
                              : kind == 1 ? random_logdet_spec(rng, &x)
                                          : random_product_spec(rng, &x);
      check_one_barrier_case(spec, x, rng, &fails);
    }
  }
  return fails;
}

}  // namespace hcg_test

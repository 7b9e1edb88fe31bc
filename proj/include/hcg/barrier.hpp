#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcg {

// Thrown when a point leaves the open barrier domain. `index` identifies the
// violated affine row or the matrix block whose factorization failed, -1 if
// not applicable.
class DomainError : public std::runtime_error {
public:
  DomainError(const std::string& what, long index = -1)
      : std::runtime_error(what), index(index) {}
  long index;
};

// omega(tau) = tau - log(1 + tau), tau >= 0.
double omega(double tau);
// omega_star(tau) = -tau - log(1 - tau), 0 <= tau < 1.
double omega_star(double tau);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// A nu-canonical barrier specification. Three kinds:
//   affine_inequality: F(x) = -sum_i log(b_i - <a_i, x>)
//   log_det_affine:    F(x) = -log det(M0 + sum_i x_i M_i)
//   product:           children over consecutive disjoint coordinate blocks
class BarrierSpec {
public:
  enum class Kind { AffineInequality, LogDetAffine, Product };

  // empty barrier (dim 0, nu 0); placeholder until a factory result is
  // assigned
  BarrierSpec() = default;

  static BarrierSpec affine_inequality(SparseRowMatrix rows,
                                       Eigen::VectorXd offsets);
  static BarrierSpec log_det_affine(Eigen::MatrixXd constant,
                                    std::vector<Eigen::MatrixXd> coeffs);
  static BarrierSpec product(std::vector<BarrierSpec> children);

  Kind kind() const { return kind_; }
  double nu() const { return nu_; }
  Eigen::Index dim() const { return dim_; }
  // True when the spec is a section of a homogeneous cone (zero offsets /
  // zero constant term), i.e. when the log-homogeneity identities apply.
  bool homogeneous() const;

  // affine_inequality accessors
  const SparseRowMatrix& rows() const { return rows_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  // log_det_affine accessors
  const Eigen::MatrixXd& constant_term() const { return constant_; }
  const std::vector<Eigen::MatrixXd>& coeffs() const { return coeffs_; }
  Eigen::Index matrix_dim() const { return p_; }
  Eigen::MatrixXd map_linear(const Eigen::VectorXd& h) const;  // sum h_i M_i
  // product accessors: children with their coordinate offsets
  const std::vector<std::pair<Eigen::Index, BarrierSpec>>& children() const {
    return children_;
  }

private:
  Kind kind_ = Kind::AffineInequality;
  double nu_ = 0;
  Eigen::Index dim_ = 0;
  SparseRowMatrix rows_;
  Eigen::VectorXd offsets_;
  Eigen::MatrixXd constant_;
  std::vector<Eigen::MatrixXd> coeffs_;
  Eigen::Index p_ = 0;
  std::vector<std::pair<Eigen::Index, BarrierSpec>> children_;
};

// Restriction of F to a ray x + gamma*d with the gamma-independent work
// (slack products / eigenvalues of the compressed direction) precomputed,
// so line searches pay O(m) or O(p) per evaluation.
class BarrierSegment {
public:
  double max_step() const { return max_step_; }
  double value(double gamma) const;  // F(x + gamma*d)

private:
  friend class BarrierPoint;
  BarrierSegment() = default;
  BarrierSpec::Kind kind_ = BarrierSpec::Kind::AffineInequality;
  Eigen::VectorXd slacks_, dslacks_;   // affine
  double base_value_ = 0;              // logdet: F(x)
  Eigen::VectorXd mus_;                // logdet: eig(L^-1 dM L^-T)
  std::vector<BarrierSegment> parts_;  // product
  double max_step_ = 0;
};

// A strictly feasible point with cached slacks / Cholesky factor.
class BarrierPoint {
public:
  BarrierPoint(const BarrierSpec& spec, Eigen::VectorXd x);

  const BarrierSpec& spec() const { return *spec_; }
  const Eigen::VectorXd& x() const { return x_; }

  double value() const;
  double grad_dot(const Eigen::VectorXd& h) const;  // F'(x)[h]
  Eigen::VectorXd gradient() const;
  double curvature(const Eigen::VectorXd& h) const;  // F''(x)[h,h]
  double local_norm(const Eigen::VectorXd& h) const;
  // sup{gamma > 0 : x + gamma*d strictly feasible}, +inf if unconstrained
  double max_step(const Eigen::VectorXd& d) const;
  BarrierSegment segment(const Eigen::VectorXd& d) const;

private:
  const BarrierSpec* spec_;
  Eigen::VectorXd x_;
  Eigen::VectorXd slacks_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXd minv_;
  double logdet_ = 0;
  std::vector<BarrierPoint> children_;
};

}  // namespace hcg

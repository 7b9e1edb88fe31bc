#include "hcg/barrier.hpp"

#include <cmath>
#include <limits>

namespace hcg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double omega(double tau) {
  if (tau < 0) throw std::invalid_argument("omega: tau must be >= 0");
  return tau - std::log1p(tau);
}

double omega_star(double tau) {
  if (tau < 0 || tau >= 1)
    throw std::invalid_argument("omega_star: tau must be in [0, 1)");
  return -tau - std::log1p(-tau);
}

BarrierSpec BarrierSpec::affine_inequality(SparseRowMatrix rows,
                                           Eigen::VectorXd offsets) {
  if (rows.rows() == 0) throw std::invalid_argument("affine_inequality: no rows");
  if (rows.rows() != offsets.size())
    throw std::invalid_argument("affine_inequality: rows/offsets size mismatch");
  BarrierSpec s;
  s.kind_ = Kind::AffineInequality;
  s.nu_ = static_cast<double>(rows.rows());
  s.dim_ = rows.cols();
  s.rows_ = std::move(rows);
  s.rows_.makeCompressed();
  s.offsets_ = std::move(offsets);
  return s;
}

BarrierSpec BarrierSpec::log_det_affine(Eigen::MatrixXd constant,
                                        std::vector<Eigen::MatrixXd> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("log_det_affine: no coefficients");
  const Eigen::Index p = constant.rows();
  if (constant.cols() != p)
    throw std::invalid_argument("log_det_affine: constant term not square");
  for (const auto& m : coeffs)
    if (m.rows() != p || m.cols() != p)
      throw std::invalid_argument("log_det_affine: coefficient dimension mismatch");
  BarrierSpec s;
  s.kind_ = Kind::LogDetAffine;
  s.nu_ = static_cast<double>(p);
  s.dim_ = static_cast<Eigen::Index>(coeffs.size());
  s.constant_ = std::move(constant);
  s.coeffs_ = std::move(coeffs);
  s.p_ = p;
  return s;
}

BarrierSpec BarrierSpec::product(std::vector<BarrierSpec> children) {
  if (children.empty()) throw std::invalid_argument("product: empty child list");
  BarrierSpec s;
  s.kind_ = Kind::Product;
  Eigen::Index off = 0;
  for (auto& c : children) {
    s.nu_ += c.nu();
    const Eigen::Index d = c.dim();
    s.children_.emplace_back(off, std::move(c));
    off += d;
  }
  s.dim_ = off;
  return s;
}

bool BarrierSpec::homogeneous() const {
  switch (kind_) {
    case Kind::AffineInequality:
      return offsets_.isZero(0.0);
    case Kind::LogDetAffine:
      return constant_.isZero(0.0);
    case Kind::Product:
      for (const auto& [off, c] : children_)
        if (!c.homogeneous()) return false;
      return true;
  }
  return false;
}

Eigen::MatrixXd BarrierSpec::map_linear(const Eigen::VectorXd& h) const {
  if (kind_ != Kind::LogDetAffine)
    throw std::logic_error("map_linear: not a log_det_affine spec");
  if (h.size() != dim_)
    throw std::invalid_argument("map_linear: dimension mismatch");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p_, p_);
  for (Eigen::Index i = 0; i < dim_; ++i)
    if (h[i] != 0.0) m += h[i] * coeffs_[static_cast<size_t>(i)];
  return m;
}

double BarrierSegment::value(double gamma) const {
  switch (kind_) {
    case BarrierSpec::Kind::AffineInequality: {
      double v = 0;
      for (Eigen::Index i = 0; i < slacks_.size(); ++i) {
        const double s = slacks_[i] - gamma * dslacks_[i];
        if (!(s > 0)) throw DomainError("segment value: slack exhausted", i);
        v -= std::log(s);
      }
      return v;
    }
    case BarrierSpec::Kind::LogDetAffine: {
      double v = base_value_;
      for (Eigen::Index i = 0; i < mus_.size(); ++i) {
        const double s = 1.0 + gamma * mus_[i];
        if (!(s > 0)) throw DomainError("segment value: pivot exhausted", i);
        v -= std::log(s);
      }
      return v;
    }
    case BarrierSpec::Kind::Product: {
      double v = 0;
      for (const auto& part : parts_) v += part.value(gamma);
      return v;
    }
  }
  return 0;
}

BarrierPoint::BarrierPoint(const BarrierSpec& spec, Eigen::VectorXd x)
    : spec_(&spec), x_(std::move(x)) {
  if (x_.size() != spec.dim())
    throw std::invalid_argument("BarrierPoint: dimension mismatch");
  switch (spec.kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      slacks_ = spec.offsets() - spec.rows() * x_;
      for (Eigen::Index i = 0; i < slacks_.size(); ++i)
        if (!(slacks_[i] > 0))
          throw DomainError("infeasible point: nonpositive slack", i);
      break;
    }
    case BarrierSpec::Kind::LogDetAffine: {
      Eigen::MatrixXd m = spec.constant_term() + spec.map_linear(x_);
      llt_.compute(m);
      const Eigen::Index p = spec.matrix_dim();
      const double scale =
          std::max(m.trace() / static_cast<double>(p), 1e-300);
      const double pivot_tol = 1e-12 * scale;
      bool ok = llt_.info() == Eigen::Success;
      if (ok) {
        const auto& l = llt_.matrixLLT();
        for (Eigen::Index i = 0; i < p; ++i)
          if (!(l(i, i) * l(i, i) > pivot_tol)) {
            ok = false;
            break;
          }
      }
      if (!ok) throw DomainError("infeasible point: M(x) not positive definite");
      logdet_ = 0;
      for (Eigen::Index i = 0; i < p; ++i)
        logdet_ += 2.0 * std::log(llt_.matrixLLT()(i, i));
      minv_ = llt_.solve(Eigen::MatrixXd::Identity(p, p));
      break;
    }
    case BarrierSpec::Kind::Product: {
      children_.reserve(spec.children().size());
      for (const auto& [off, child] : spec.children())
        children_.emplace_back(child, x_.segment(off, child.dim()));
      break;
    }
  }
}

double BarrierPoint::value() const {
  switch (spec_->kind()) {
    case BarrierSpec::Kind::AffineInequality:
      return -slacks_.array().log().sum();
    case BarrierSpec::Kind::LogDetAffine:
      return -logdet_;
    case BarrierSpec::Kind::Product: {
      double v = 0;
      for (const auto& c : children_) v += c.value();
      return v;
    }
  }
  return 0;
}

double BarrierPoint::grad_dot(const Eigen::VectorXd& h) const {
  if (h.size() != spec_->dim())
    throw std::invalid_argument("grad_dot: dimension mismatch");
  switch (spec_->kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      Eigen::VectorXd ah = spec_->rows() * h;
      return (ah.array() / slacks_.array()).sum();
    }
    case BarrierSpec::Kind::LogDetAffine:
      return -(minv_ * spec_->map_linear(h)).trace();
    case BarrierSpec::Kind::Product: {
      double v = 0;
      for (size_t k = 0; k < children_.size(); ++k) {
        const auto& [off, child] = spec_->children()[k];
        v += children_[k].grad_dot(h.segment(off, child.dim()));
      }
      return v;
    }
  }
  return 0;
}

Eigen::VectorXd BarrierPoint::gradient() const {
  switch (spec_->kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      Eigen::VectorXd inv = slacks_.cwiseInverse();
      return spec_->rows().transpose() * inv;
    }
    case BarrierSpec::Kind::LogDetAffine: {
      Eigen::VectorXd g(spec_->dim());
      for (Eigen::Index i = 0; i < spec_->dim(); ++i)
        g[i] = -minv_.cwiseProduct(spec_->coeffs()[static_cast<size_t>(i)]).sum();
      return g;
    }
    case BarrierSpec::Kind::Product: {
      Eigen::VectorXd g(spec_->dim());
      for (size_t k = 0; k < children_.size(); ++k) {
        const auto& [off, child] = spec_->children()[k];
        g.segment(off, child.dim()) = children_[k].gradient();
      }
      return g;
    }
  }
  return {};
}

double BarrierPoint::curvature(const Eigen::VectorXd& h) const {
  if (h.size() != spec_->dim())
    throw std::invalid_argument("curvature: dimension mismatch");
  switch (spec_->kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      Eigen::VectorXd ah = spec_->rows() * h;
      return (ah.array() / slacks_.array()).square().sum();
    }
    case BarrierSpec::Kind::LogDetAffine: {
      Eigen::MatrixXd w = minv_ * spec_->map_linear(h);
      return w.cwiseProduct(w.transpose()).sum();
    }
    case BarrierSpec::Kind::Product: {
      double v = 0;
      for (size_t k = 0; k < children_.size(); ++k) {
        const auto& [off, child] = spec_->children()[k];
        v += children_[k].curvature(h.segment(off, child.dim()));
      }
      return v;
    }
  }
  return 0;
}

double BarrierPoint::local_norm(const Eigen::VectorXd& h) const {
  return std::sqrt(std::max(0.0, curvature(h)));
}

double BarrierPoint::max_step(const Eigen::VectorXd& d) const {
  if (d.size() != spec_->dim())
    throw std::invalid_argument("max_step: dimension mismatch");
  switch (spec_->kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      Eigen::VectorXd ad = spec_->rows() * d;
      double g = kInf;
      for (Eigen::Index i = 0; i < ad.size(); ++i)
        if (ad[i] > 0) g = std::min(g, slacks_[i] / ad[i]);
      return g;
    }
    case BarrierSpec::Kind::LogDetAffine: {
      Eigen::MatrixXd dm = spec_->map_linear(d);
      const auto& l = llt_.matrixL();
      Eigen::MatrixXd w = l.solve(dm);
      w = l.solve(w.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          0.5 * (w + w.transpose()), Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      return lmin < 0 ? -1.0 / lmin : kInf;
    }
    case BarrierSpec::Kind::Product: {
      double g = kInf;
      for (size_t k = 0; k < children_.size(); ++k) {
        const auto& [off, child] = spec_->children()[k];
        g = std::min(g, children_[k].max_step(d.segment(off, child.dim())));
      }
      return g;
    }
  }
  return kInf;
}

BarrierSegment BarrierPoint::segment(const Eigen::VectorXd& d) const {
  if (d.size() != spec_->dim())
    throw std::invalid_argument("segment: dimension mismatch");
  BarrierSegment seg;
  seg.kind_ = spec_->kind();
  switch (spec_->kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      seg.slacks_ = slacks_;
      seg.dslacks_ = spec_->rows() * d;
      double g = kInf;
      for (Eigen::Index i = 0; i < seg.dslacks_.size(); ++i)
        if (seg.dslacks_[i] > 0)
          g = std::min(g, seg.slacks_[i] / seg.dslacks_[i]);
      seg.max_step_ = g;
      break;
    }
    case BarrierSpec::Kind::LogDetAffine: {
      seg.base_value_ = value();
      Eigen::MatrixXd dm = spec_->map_linear(d);
      const auto& l = llt_.matrixL();
      Eigen::MatrixXd w = l.solve(dm);
      w = l.solve(w.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()),
                                                        Eigen::EigenvaluesOnly);
      seg.mus_ = es.eigenvalues();
      const double lmin = seg.mus_.minCoeff();
      seg.max_step_ = lmin < 0 ? -1.0 / lmin : kInf;
      break;
    }
    case BarrierSpec::Kind::Product: {
      double g = kInf;
      for (size_t k = 0; k < children_.size(); ++k) {
        const auto& [off, child] = spec_->children()[k];
        seg.parts_.push_back(children_[k].segment(d.segment(off, child.dim())));
        g = std::min(g, seg.parts_.back().max_step());
      }
      seg.max_step_ = g;
      break;
    }
  }
  return seg;
}

}  // namespace hcg

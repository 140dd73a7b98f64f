#include "penlmc/potential.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace penlmc {

Potential Potential::quadratic(Eigen::VectorXd mean,
                               Eigen::MatrixXd precision) {
  if (precision.rows() != mean.size() || precision.cols() != mean.size())
    throw DomainError("potential: precision/mean dimension mismatch");
  if (!precision.isApprox(precision.transpose(), 1e-12))
    throw NotSPD("potential: precision is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw NotSPD("potential: precision failed Cholesky factorization");

  Potential f;
  f.dim_ = static_cast<int>(mean.size());
  f.quadratic_ = true;
  f.mean_ = std::move(mean);
  f.precision_ = std::move(precision);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.precision_);
  f.m_ = es.eigenvalues().minCoeff();
  f.M_ = es.eigenvalues().maxCoeff();

  const Eigen::VectorXd mu = f.mean_;
  const Eigen::MatrixXd A = f.precision_;
  f.value_ = [mu, A](const Eigen::VectorXd& x) {
    const Eigen::VectorXd d = x - mu;
    return 0.5 * d.dot(A * d);
  };
  f.grad_ = [mu, A](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(A * (x - mu));
  };
  return f;
}

Potential Potential::custom(ValueFn value, GradFn grad, double m, double M,
                            int dim) {
  if (!(0.0 < m && m <= M))
    throw DomainError("potential: need 0 < m <= M");
  Potential f;
  f.dim_ = dim;
  f.m_ = m;
  f.M_ = M;
  f.value_ = std::move(value);
  f.grad_ = std::move(grad);
  return f;
}

Eigen::VectorXd Potential::minimizer() const {
  if (quadratic_) return mean_;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  const double step = 1.0 / M_;
  for (int it = 0; it < 1000000; ++it) {
    const Eigen::VectorXd g = grad_(x);
    if (g.norm() <= 1e-8) return x;
    x -= step * g;
  }
  throw NonConvergence("potential: minimizer search did not converge");
}

SurrogatePotential::SurrogatePotential(Potential f, Penalty penalty,
                                       ConvexBody body)
    : f_(std::move(f)), penalty_(std::move(penalty)), body_(std::move(body)) {
  if (body_->dim() != f_.dim())
    throw DomainError("surrogate: body/potential dimension mismatch");
  m0_ = penalty_->m0(*body_);
}

SurrogatePotential::SurrogatePotential(Potential f) : f_(std::move(f)) {}

double SurrogatePotential::value(const Eigen::VectorXd& x) const {
  double v = f_.value(x);
  if (penalty_) {
    const double lam = penalty_->lambda();
    v += penalty_->distance(*body_, x) / (2.0 * lam * lam);
  }
  return v;
}

Eigen::VectorXd SurrogatePotential::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = f_.gradient(x);
  if (penalty_) {
    const double lam = penalty_->lambda();
    g += penalty_->distance_gradient(*body_, x) / (2.0 * lam * lam);
  }
  return g;
}

double SurrogatePotential::smoothness_bound() const {
  if (!penalty_) return f_.smoothness();
  const double lam = penalty_->lambda();
  return f_.smoothness() + m0_ / (2.0 * lam * lam);
}

}  // namespace penlmc

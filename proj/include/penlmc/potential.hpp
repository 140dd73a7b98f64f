#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "penlmc/geometry.hpp"

namespace penlmc {

// Strongly convex, smooth potential f with known constants m <= M and a
// known (or computed) minimizer.
class Potential {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  // f(x) = (x - mu)^T A (x - mu) / 2 with A symmetric positive definite;
  // m = lambda_min(A), M = lambda_max(A), minimizer = mu.
  static Potential quadratic(Eigen::VectorXd mean, Eigen::MatrixXd precision);
  static Potential custom(ValueFn value, GradFn grad, double m, double M,
                          int dim);

  double value(const Eigen::VectorXd& x) const { return value_(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    return grad_(x);
  }

  double strong_convexity() const { return m_; }
  double smoothness() const { return M_; }
  int dim() const { return dim_; }
  bool is_quadratic() const { return quadratic_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& precision() const { return precision_; }

  // Minimizer of f; for custom potentials found by gradient descent with
  // step 1/M down to |grad| <= 1e-8.
  Eigen::VectorXd minimizer() const;

 private:
  Potential() = default;

  ValueFn value_;
  GradFn grad_;
  double m_ = 0.0, M_ = 0.0;
  int dim_ = 0;
  bool quadratic_ = false;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd precision_;
};

// U^lambda = f + d_K/(2 lambda^2). Without a penalty it degenerates to f
// itself (the lambda -> infinity limit), which is convenient for tests and
// unconstrained baselines.
class SurrogatePotential {
 public:
  SurrogatePotential(Potential f, Penalty penalty, ConvexBody body);
  explicit SurrogatePotential(Potential f);

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  double strong_convexity() const { return f_.strong_convexity(); }
  // M + m0/(2 lambda^2), where m0 is the penalty's d_K smoothness constant.
  // For Q = I this is M + 1/lambda^2, matching the Moreau-envelope bound.
  double smoothness_bound() const;

  const Potential& potential() const { return f_; }
  const Penalty* penalty() const {
    return penalty_ ? &*penalty_ : nullptr;
  }
  const ConvexBody* body() const { return body_ ? &*body_ : nullptr; }
  int dim() const { return f_.dim(); }

 private:
  Potential f_;
  std::optional<Penalty> penalty_;
  std::optional<ConvexBody> body_;
  double m0_ = 0.0;  // cached d_K smoothness
};

}  // namespace penlmc

#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "penlmc/errors.hpp"

namespace penlmc {

enum class BodyShape { Ball, Box, Polytope, Oracle };

struct Halfspace {
  Eigen::VectorXd normal;  // a_i
  double offset = 0.0;     // b_i, must be > 0 (origin interior)
};

// A convex compact body K with the origin in its interior and known
// inner/outer radii r <= R: B(r) subset K subset B(R).
class ConvexBody {
 public:
  using MembershipFn = std::function<bool(const Eigen::VectorXd&)>;

  static ConvexBody ball(Eigen::VectorXd center, double radius);
  static ConvexBody box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  // inner/outer radii are computed when omitted (outer radius via vertex
  // enumeration, available in dimension 2 only).
  static ConvexBody polytope(std::vector<Halfspace> halfspaces,
                             std::optional<double> inner_radius = {},
                             std::optional<double> outer_radius = {});
  static ConvexBody oracle(MembershipFn membership, int dim,
                           double inner_radius, double outer_radius);

  BodyShape shape_kind() const { return shape_; }
  int dim() const { return dim_; }
  double inner_radius() const { return inner_radius_; }
  double outer_radius() const { return outer_radius_; }

  const Eigen::VectorXd& ball_center() const { return ball_center_; }
  double ball_radius() const { return ball_radius_; }
  const Eigen::VectorXd& box_lower() const { return box_lower_; }
  const Eigen::VectorXd& box_upper() const { return box_upper_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  bool contains(const Eigen::VectorXd& x) const;

  // Nearest point of K in the Euclidean metric. Closed form for Ball/Box,
  // Dykstra sweeps for Polytope, supporting-halfspace cuts for Oracle.
  Eigen::VectorXd euclidean_project(const Eigen::VectorXd& x) const;

  // argmin_{y in K} (x-y)^T Q (x-y). Q = I short-circuits to the Euclidean
  // projection; otherwise projected gradient with step 1/(2 lambda_max(Q)).
  Eigen::VectorXd bregman_project(const Eigen::MatrixXd& Q,
                                  const Eigen::VectorXd& x) const;

  // g_K(x) = inf{t >= 1 : x in tK}; 1 on K.
  double gauge(const Eigen::VectorXd& x) const;
  // Gradient of g_K at points with g_K(x) > 1. Analytic for Ball/Box/
  // Polytope (lowest-index facet on ties), central differences for Oracle.
  Eigen::VectorXd gauge_gradient(const Eigen::VectorXd& x) const;

  // Raw Minkowski functional inf{t >= 0 : x in tK} (no clamp at 1).
  double minkowski(const Eigen::VectorXd& x) const;

 private:
  ConvexBody() = default;
  void validate() const;

  BodyShape shape_ = BodyShape::Ball;
  int dim_ = 0;
  double inner_radius_ = 0.0;
  double outer_radius_ = 0.0;

  Eigen::VectorXd ball_center_;
  double ball_radius_ = 0.0;
  Eigen::VectorXd box_lower_, box_upper_;
  std::vector<Halfspace> halfspaces_;
  MembershipFn membership_;
};

enum class PenaltyKind { Euclidean, Bregman, Gauge };

// The distance function d_K together with its tuning parameter and the
// constants needed by the surrogate potential.
//
// d_K by kind:
//   Euclidean      |x - P_K(x)|^2
//   Bregman(Q)     (x - P_K^B(x))^T Q (x - P_K^B(x))   (squared Mahalanobis)
//   Gauge          (g_K(x) - 1)^2
//
// m0 below is the gradient-Lipschitz constant of d_K itself. The penalty
// enters the potential as d_K/(2 lambda^2), so the surrogate smoothness is
// M + m0/(2 lambda^2); with m0 = 2 (Euclidean) this reduces to M + 1/lambda^2
// and with m0 = 2 lambda_max(Q) (Bregman) to M + lambda_max(Q)/lambda^2.
class Penalty {
 public:
  static Penalty euclidean(double lambda);
  static Penalty bregman(Eigen::MatrixXd Q, double lambda);  // throws NotSPD
  static Penalty gauge(double lambda);

  PenaltyKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  const Eigen::MatrixXd& Q() const { return Q_; }

  double distance(const ConvexBody& body, const Eigen::VectorXd& x) const;
  Eigen::VectorXd distance_gradient(const ConvexBody& body,
                                    const Eigen::VectorXd& x) const;

  // Smoothness constant of d_K:
  //   Euclidean 2; Bregman 2 lambda_max(Q); Gauge 4/r^2 for balls and
  //   2(1 + C_K r)/r^2 otherwise, with C_K estimated from the gauge Hessian
  //   sampled over 1e3 boundary directions.
  double m0(const ConvexBody& body) const;

  // Quadratic-equivalence constants c1 <= c2 with
  // c1 |x-P(x)|^2 <= d_K(x) <= c2 |x-P(x)|^2.
  double c1(const ConvexBody& body) const;
  double c2(const ConvexBody& body) const;

 private:
  Penalty(PenaltyKind kind, double lambda) : kind_(kind), lambda_(lambda) {}

  PenaltyKind kind_;
  double lambda_;
  Eigen::MatrixXd Q_;
  double q_lambda_max_ = 0.0;
  double q_lambda_min_ = 0.0;
};

// Estimate of the gauge-Hessian constant C_K (largest spectral norm of the
// Minkowski functional's Hessian over boundary directions, scaled by |x|).
double estimate_gauge_curvature(const ConvexBody& body, int samples = 1000,
                                std::uint64_t seed = 20240901);

}  // namespace penlmc

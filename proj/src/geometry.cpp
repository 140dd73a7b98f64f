#include "penlmc/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "penlmc/rng.hpp"

namespace penlmc {

namespace {

constexpr double kProjTol = 1e-10;
constexpr int kProjCap = 100000;
constexpr double kGaugeRelTol = 1e-10;
constexpr double kOracleFdStep = 1e-6;

Eigen::VectorXd project_halfspace(const Halfspace& hs,
                                  const Eigen::VectorXd& z) {
  const double slack = hs.normal.dot(z) - hs.offset;
  if (slack <= 0.0) return z;
  return z - (slack / hs.normal.squaredNorm()) * hs.normal;
}

// Dykstra's alternating projections onto an intersection of halfspaces.
Eigen::VectorXd dykstra(const std::vector<Halfspace>& hs,
                        const Eigen::VectorXd& x, double tol, int cap) {
  Eigen::VectorXd y = x;
  std::vector<Eigen::VectorXd> corr(hs.size(),
                                    Eigen::VectorXd::Zero(x.size()));
  for (int sweep = 0; sweep < cap; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const Eigen::VectorXd z = y + corr[i];
      const Eigen::VectorXd ynew = project_halfspace(hs[i], z);
      corr[i] = z - ynew;
      moved = std::max(moved, (ynew - y).norm());
      y = ynew;
    }
    if (moved <= tol) return y;
  }
  throw NonConvergence("dykstra: projection did not converge within cap");
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction & validation
// ---------------------------------------------------------------------------

ConvexBody ConvexBody::ball(Eigen::VectorXd center, double radius) {
  ConvexBody b;
  b.shape_ = BodyShape::Ball;
  b.dim_ = static_cast<int>(center.size());
  b.ball_center_ = std::move(center);
  b.ball_radius_ = radius;
  const double cn = b.ball_center_.norm();
  b.inner_radius_ = radius - cn;
  b.outer_radius_ = radius + cn;
  b.validate();
  return b;
}

ConvexBody ConvexBody::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  ConvexBody b;
  b.shape_ = BodyShape::Box;
  b.dim_ = static_cast<int>(lower.size());
  b.box_lower_ = std::move(lower);
  b.box_upper_ = std::move(upper);
  double inner = std::numeric_limits<double>::infinity();
  double outer2 = 0.0;
  for (int i = 0; i < b.dim_; ++i) {
    inner = std::min({inner, -b.box_lower_[i], b.box_upper_[i]});
    outer2 += std::pow(std::max(-b.box_lower_[i], b.box_upper_[i]), 2);
  }
  b.inner_radius_ = inner;
  b.outer_radius_ = std::sqrt(outer2);
  b.validate();
  return b;
}

ConvexBody ConvexBody::polytope(std::vector<Halfspace> halfspaces,
                                std::optional<double> inner_radius,
                                std::optional<double> outer_radius) {
  ConvexBody b;
  b.shape_ = BodyShape::Polytope;
  if (halfspaces.empty()) throw InvalidBody("polytope: no halfspaces");
  b.dim_ = static_cast<int>(halfspaces.front().normal.size());
  b.halfspaces_ = std::move(halfspaces);

  double inner = std::numeric_limits<double>::infinity();
  for (const auto& hs : b.halfspaces_) {
    if (hs.normal.size() != b.dim_)
      throw InvalidBody("polytope: inconsistent halfspace dimensions");
    const double an = hs.normal.norm();
    if (!(an > 0.0)) throw InvalidBody("polytope: zero halfspace normal");
    if (!(hs.offset > 0.0))
      throw InvalidBody("polytope: offset b_i must be positive");
    inner = std::min(inner, hs.offset / an);
  }
  b.inner_radius_ = inner_radius.value_or(inner);

  if (outer_radius) {
    b.outer_radius_ = *outer_radius;
  } else if (b.dim_ == 2) {
    // vertex enumeration over line pairs
    double best = 0.0;
    bool found = false;
    const auto& hs = b.halfspaces_;
    for (std::size_t i = 0; i < hs.size(); ++i)
      for (std::size_t j = i + 1; j < hs.size(); ++j) {
        Eigen::Matrix2d A;
        A.row(0) = hs[i].normal.transpose();
        A.row(1) = hs[j].normal.transpose();
        if (std::abs(A.determinant()) < 1e-14) continue;
        const Eigen::Vector2d v =
            A.inverse() * Eigen::Vector2d(hs[i].offset, hs[j].offset);
        bool feasible = true;
        for (const auto& h : hs)
          if (h.normal.dot(v) > h.offset + 1e-9) feasible = false;
        if (feasible) {
          best = std::max(best, v.norm());
          found = true;
        }
      }
    if (!found) throw InvalidBody("polytope: not bounded (no vertices)");
    b.outer_radius_ = best;
  } else {
    throw InvalidBody("polytope: outer radius required for dim != 2");
  }
  b.validate();
  return b;
}

ConvexBody ConvexBody::oracle(MembershipFn membership, int dim,
                              double inner_radius, double outer_radius) {
  ConvexBody b;
  b.shape_ = BodyShape::Oracle;
  b.dim_ = dim;
  b.membership_ = std::move(membership);
  b.inner_radius_ = inner_radius;
  b.outer_radius_ = outer_radius;
  if (!b.membership_(Eigen::VectorXd::Zero(dim)))
    throw InvalidBody("oracle body: origin not a member");
  b.validate();
  return b;
}

void ConvexBody::validate() const {
  if (dim_ < 1) throw InvalidBody("body dimension must be >= 1");
  if (!(inner_radius_ > 0.0))
    throw InvalidBody("inner radius must be positive (origin interior)");
  if (!(inner_radius_ <= outer_radius_ + 1e-12))
    throw InvalidBody("inner radius exceeds outer radius");
  if (shape_ == BodyShape::Ball && !(ball_radius_ > 0.0))
    throw InvalidBody("ball radius must be positive");
  if (shape_ == BodyShape::Box)
    for (int i = 0; i < dim_; ++i)
      if (!(box_lower_[i] < 0.0 && box_upper_[i] > 0.0))
        throw InvalidBody("box must contain the origin in its interior");
}

// ---------------------------------------------------------------------------
// Membership, projections
// ---------------------------------------------------------------------------

bool ConvexBody::contains(const Eigen::VectorXd& x) const {
  switch (shape_) {
    case BodyShape::Ball:
      return (x - ball_center_).norm() <= ball_radius_;
    case BodyShape::Box:
      return (x.array() >= box_lower_.array()).all() &&
             (x.array() <= box_upper_.array()).all();
    case BodyShape::Polytope:
      for (const auto& hs : halfspaces_)
        if (hs.normal.dot(x) > hs.offset) return false;
      return true;
    case BodyShape::Oracle:
      return membership_(x);
  }
  return false;
}

Eigen::VectorXd ConvexBody::euclidean_project(const Eigen::VectorXd& x) const {
  switch (shape_) {
    case BodyShape::Ball: {
      const Eigen::VectorXd d = x - ball_center_;
      const double n = d.norm();
      if (n <= ball_radius_) return x;
      return ball_center_ + (ball_radius_ / n) * d;
    }
    case BodyShape::Box:
      return x.cwiseMax(box_lower_).cwiseMin(box_upper_);
    case BodyShape::Polytope:
      if (contains(x)) return x;
      return dykstra(halfspaces_, x, kProjTol, kProjCap);
    case BodyShape::Oracle:
      break;
  }

  // Oracle: lazily discovered supporting halfspaces. Each cut contains K, so
  // once the projected point is a member it is the exact projection.
  if (contains(x)) return x;
  std::vector<Halfspace> cuts;
  Eigen::VectorXd y = x;
  Eigen::VectorXd prev = x;
  for (int iter = 0; iter < 500; ++iter) {
    if (contains(y)) return y;
    const double g = minkowski(y);
    if (g <= 1.0 + 1e-12) return y / std::max(1.0, g);
    const Eigen::VectorXd z = y / g;
    // outward normal at the boundary point from the Minkowski functional
    Eigen::VectorXd n(dim_);
    for (int i = 0; i < dim_; ++i) {
      Eigen::VectorXd zp = z, zm = z;
      zp[i] += kOracleFdStep;
      zm[i] -= kOracleFdStep;
      n[i] = (minkowski(zp) - minkowski(zm)) / (2.0 * kOracleFdStep);
    }
    if (n.norm() < 1e-14)
      throw NonConvergence("oracle projection: degenerate boundary normal");
    cuts.push_back({n, n.dot(z)});
    y = dykstra(cuts, x, kProjTol, kProjCap);
    if (iter > 0 && (y - prev).norm() <= 1e-11 && minkowski(y) <= 1.0 + 1e-9)
      return y / std::max(1.0, minkowski(y));
    prev = y;
  }
  throw NonConvergence("oracle projection: cut iteration cap exceeded");
}

Eigen::VectorXd ConvexBody::bregman_project(const Eigen::MatrixXd& Q,
                                            const Eigen::VectorXd& x) const {
  if (Q.rows() != dim_ || Q.cols() != dim_)
    throw NotSPD("bregman: Q has wrong dimensions");
  if (!Q.isApprox(Q.transpose(), 1e-12))
    throw NotSPD("bregman: Q is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  if (llt.info() != Eigen::Success)
    throw NotSPD("bregman: Q failed Cholesky factorization");
  if (Q.isIdentity(1e-14)) return euclidean_project(x);
  if (contains(x)) return x;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  const double lmax = es.eigenvalues().maxCoeff();
  const double step = 1.0 / (2.0 * lmax);

  Eigen::VectorXd y = euclidean_project(x);
  double obj = (x - y).dot(Q * (x - y));
  for (int it = 0; it < kProjCap; ++it) {
    const Eigen::VectorXd grad = 2.0 * (Q * (y - x));
    y = euclidean_project(y - step * grad);
    const double next = (x - y).dot(Q * (x - y));
    if (obj - next <= kProjTol && it > 0) return y;
    obj = next;
  }
  throw NonConvergence("bregman projection: iteration cap exceeded");
}

// ---------------------------------------------------------------------------
// Gauge
// ---------------------------------------------------------------------------

double ConvexBody::minkowski(const Eigen::VectorXd& x) const {
  switch (shape_) {
    case BodyShape::Ball: {
      const double xn2 = x.squaredNorm();
      if (xn2 == 0.0) return 0.0;
      if (ball_center_.isZero(0.0)) return std::sqrt(xn2) / ball_radius_;
      const double cx = ball_center_.dot(x);
      const double denom =
          ball_radius_ * ball_radius_ - ball_center_.squaredNorm();
      return (cx + std::sqrt(cx * cx + denom * xn2)) / denom;
    }
    case BodyShape::Box: {
      double g = 0.0;
      for (int i = 0; i < dim_; ++i) {
        if (x[i] > 0.0)
          g = std::max(g, x[i] / box_upper_[i]);
        else if (x[i] < 0.0)
          g = std::max(g, x[i] / box_lower_[i]);
      }
      return g;
    }
    case BodyShape::Polytope: {
      double g = 0.0;
      for (const auto& hs : halfspaces_)
        g = std::max(g, hs.normal.dot(x) / hs.offset);
      return g;
    }
    case BodyShape::Oracle:
      break;
  }
  const double xn = x.norm();
  if (xn == 0.0) return 0.0;
  double hi = 1.0 + xn / inner_radius_;  // x/hi lies in B(r), hence in K
  if (contains(x)) {
    // bisect downward: smallest t with x in tK
    double lo = 0.0;
    hi = 1.0;
    while (hi - lo > kGaugeRelTol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid > 0.0 && contains(x / mid))
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  }
  double lo = 1.0;
  while (hi - lo > kGaugeRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (contains(x / mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double ConvexBody::gauge(const Eigen::VectorXd& x) const {
  if (shape_ == BodyShape::Oracle) {
    if (contains(x)) return 1.0;
    const double xn = x.norm();
    double lo = 1.0, hi = 1.0 + xn / inner_radius_;
    while (hi - lo > kGaugeRelTol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (contains(x / mid))
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::max(1.0, minkowski(x));
}

Eigen::VectorXd ConvexBody::gauge_gradient(const Eigen::VectorXd& x) const {
  switch (shape_) {
    case BodyShape::Ball: {
      const double g = minkowski(x);
      if (ball_center_.isZero(0.0))
        return x / (ball_radius_ * x.norm());
      const Eigen::VectorXd w = x - g * ball_center_;
      return w / (ball_center_.dot(w) + g * ball_radius_ * ball_radius_);
    }
    case BodyShape::Box: {
      int best = 0;
      double bestval = -std::numeric_limits<double>::infinity();
      double scale = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double v = x[i] > 0.0   ? x[i] / box_upper_[i]
                         : x[i] < 0.0 ? x[i] / box_lower_[i]
                                      : 0.0;
        if (v > bestval) {
          bestval = v;
          best = i;
          scale = x[i] > 0.0 ? 1.0 / box_upper_[i] : 1.0 / box_lower_[i];
        }
      }
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim_);
      grad[best] = scale;
      return grad;
    }
    case BodyShape::Polytope: {
      std::size_t best = 0;
      double bestval = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < halfspaces_.size(); ++i) {
        const double v =
            halfspaces_[i].normal.dot(x) / halfspaces_[i].offset;
        if (v > bestval) {  // lowest facet index wins ties
          bestval = v;
          best = i;
        }
      }
      return halfspaces_[best].normal / halfspaces_[best].offset;
    }
    case BodyShape::Oracle:
      break;
  }
  Eigen::VectorXd grad(dim_);
  for (int i = 0; i < dim_; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += kOracleFdStep;
    xm[i] -= kOracleFdStep;
    grad[i] = (gauge(xp) - gauge(xm)) / (2.0 * kOracleFdStep);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Penalty
// ---------------------------------------------------------------------------

Penalty Penalty::euclidean(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("penalty: lambda must be positive");
  return Penalty(PenaltyKind::Euclidean, lambda);
}

Penalty Penalty::gauge(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("penalty: lambda must be positive");
  return Penalty(PenaltyKind::Gauge, lambda);
}

Penalty Penalty::bregman(Eigen::MatrixXd Q, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("penalty: lambda must be positive");
  if (!Q.isApprox(Q.transpose(), 1e-12))
    throw NotSPD("penalty: Q is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  if (llt.info() != Eigen::Success)
    throw NotSPD("penalty: Q failed Cholesky factorization");
  Penalty p(PenaltyKind::Bregman, lambda);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  p.q_lambda_max_ = es.eigenvalues().maxCoeff();
  p.q_lambda_min_ = es.eigenvalues().minCoeff();
  p.Q_ = std::move(Q);
  return p;
}

double Penalty::distance(const ConvexBody& body,
                         const Eigen::VectorXd& x) const {
  if (body.contains(x)) return 0.0;
  switch (kind_) {
    case PenaltyKind::Euclidean: {
      return (x - body.euclidean_project(x)).squaredNorm();
    }
    case PenaltyKind::Bregman: {
      const Eigen::VectorXd r = x - body.bregman_project(Q_, x);
      return r.dot(Q_ * r);
    }
    case PenaltyKind::Gauge: {
      const double g = body.gauge(x);
      return (g - 1.0) * (g - 1.0);
    }
  }
  return 0.0;
}

Eigen::VectorXd Penalty::distance_gradient(const ConvexBody& body,
                                           const Eigen::VectorXd& x) const {
  if (body.contains(x)) return Eigen::VectorXd::Zero(x.size());
  switch (kind_) {
    case PenaltyKind::Euclidean:
      return 2.0 * (x - body.euclidean_project(x));
    case PenaltyKind::Bregman:
      return 2.0 * (Q_ * (x - body.bregman_project(Q_, x)));
    case PenaltyKind::Gauge: {
      const double g = body.gauge(x);
      if (g <= 1.0) return Eigen::VectorXd::Zero(x.size());
      return 2.0 * (g - 1.0) * body.gauge_gradient(x);
    }
  }
  return Eigen::VectorXd::Zero(x.size());
}

double Penalty::m0(const ConvexBody& body) const {
  switch (kind_) {
    case PenaltyKind::Euclidean:
      return 2.0;
    case PenaltyKind::Bregman:
      return 2.0 * q_lambda_max_;
    case PenaltyKind::Gauge: {
      const double r = body.inner_radius();
      if (body.shape_kind() == BodyShape::Ball) return 4.0 / (r * r);
      const double ck = estimate_gauge_curvature(body);
      return 2.0 * (1.0 + ck * r) / (r * r);
    }
  }
  return 2.0;
}

double Penalty::c1(const ConvexBody& body) const {
  switch (kind_) {
    case PenaltyKind::Euclidean:
      return 1.0;
    case PenaltyKind::Bregman:
      return q_lambda_min_;
    case PenaltyKind::Gauge:
      return 1.0 / (body.outer_radius() * body.outer_radius());
  }
  return 1.0;
}

double Penalty::c2(const ConvexBody& body) const {
  switch (kind_) {
    case PenaltyKind::Euclidean:
      return 1.0;
    case PenaltyKind::Bregman:
      return q_lambda_max_;
    case PenaltyKind::Gauge:
      return 1.0 / (body.inner_radius() * body.inner_radius());
  }
  return 1.0;
}

double estimate_gauge_curvature(const ConvexBody& body, int samples,
                                std::uint64_t seed) {
  RandomStream rng(seed, 0, StreamPurpose::Generic);
  const int p = body.dim();
  const double step = 1e-4;
  std::vector<double> norms;
  norms.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    rng.seek(static_cast<std::uint32_t>(s));
    Eigen::VectorXd dir = rng.normal_vector(p);
    const double dn = dir.norm();
    if (dn < 1e-12) continue;
    dir /= dn;
    const Eigen::VectorXd z = dir / body.minkowski(dir);  // boundary point
    Eigen::MatrixXd H(p, p);
    const double g0 = body.minkowski(z);
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        double hij;
        if (i == j) {
          Eigen::VectorXd zp = z, zm = z;
          zp[i] += step;
          zm[i] -= step;
          hij = (body.minkowski(zp) - 2.0 * g0 + body.minkowski(zm)) /
                (step * step);
        } else {
          Eigen::VectorXd zpp = z, zpm = z, zmp = z, zmm = z;
          zpp[i] += step; zpp[j] += step;
          zpm[i] += step; zpm[j] -= step;
          zmp[i] -= step; zmp[j] += step;
          zmm[i] -= step; zmm[j] -= step;
          hij = (body.minkowski(zpp) - body.minkowski(zpm) -
                 body.minkowski(zmp) + body.minkowski(zmm)) /
                (4.0 * step * step);
        }
        H(i, j) = hij;
        H(j, i) = hij;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const double spectral =
        std::max(std::abs(es.eigenvalues().maxCoeff()),
                 std::abs(es.eigenvalues().minCoeff()));
    norms.push_back(spectral * z.norm());
  }
  if (norms.empty()) return 0.0;
  // 90th percentile: robust against finite-difference artifacts at facet
  // junctions where the gauge is not twice differentiable.
  std::sort(norms.begin(), norms.end());
  const std::size_t idx =
      std::min(norms.size() - 1,
               static_cast<std::size_t>(0.9 * (norms.size() - 1)));
  return norms[idx];
}

}  // namespace penlmc

#include "penlmc/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "penlmc/kernels.hpp"

namespace penlmc {

namespace {

constexpr int kAssignmentCap = 2000;
constexpr int kQuantileGrid = 200000;

// Jonker-Volgonant style shortest augmenting path assignment, O(n^3).
// cost is n x n row-major; returns the optimal total cost.
double solve_assignment(const std::vector<double>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur =
            cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] -
            v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    total += cost[static_cast<std::size_t>(p[j] - 1) * n + (j - 1)];
  return total;
}

void check_pair(const EmpiricalMeasure& A, const EmpiricalMeasure& B) {
  if (A.size() != B.size())
    throw SizeMismatch("wasserstein: sample sizes differ");
  if (A.dim() != B.dim())
    throw SizeMismatch("wasserstein: dimensions differ");
  if (A.size() < 1) throw SizeMismatch("wasserstein: empty measures");
}

// Lexicographic order of the flattened point arrays; used to canonicalize
// argument order so that W(A,B) is bitwise symmetric.
bool lex_less(const EmpiricalMeasure& A, const EmpiricalMeasure& B) {
  const double* a = A.points.data();
  const double* b = B.points.data();
  const std::size_t n = A.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

double w1d_sorted(double q, std::vector<double>& a, std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += std::pow(std::abs(a[i] - b[i]), q);
  return acc / static_cast<double>(a.size());
}

}  // namespace

double wasserstein_empirical(double q, const EmpiricalMeasure& A,
                             const EmpiricalMeasure& B) {
  check_pair(A, B);
  if (q < 1.0) throw DomainError("wasserstein: order q must be >= 1");
  const int n = A.size();
  if (n > kAssignmentCap)
    throw SizeMismatch(
        "wasserstein_empirical: N > 2000; use sliced_wasserstein");

  const EmpiricalMeasure& X = lex_less(B, A) ? B : A;
  const EmpiricalMeasure& Y = lex_less(B, A) ? A : B;

  if (X.dim() == 1) {
    std::vector<double> a(X.points.data(), X.points.data() + n);
    std::vector<double> b(Y.points.data(), Y.points.data() + n);
    return std::pow(w1d_sorted(q, a, b), 1.0 / q);
  }

  const int p = X.dim();
  std::vector<double> Adata(static_cast<std::size_t>(n) * p);
  std::vector<double> Btdata(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k)
      Adata[static_cast<std::size_t>(i) * p + k] = X.points(i, k);
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < n; ++j)
      Btdata[static_cast<std::size_t>(k) * n + j] = Y.points(j, k);

  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  kernels::active_kernels().sqdist_matrix(Adata.data(), Btdata.data(), n, n,
                                          p, cost.data());
  if (q != 2.0) {
    const double e = q / 2.0;
    for (auto& c : cost) c = std::pow(c, e);
  }
  const double total = solve_assignment(cost, n);
  return std::pow(total / n, 1.0 / q);
}

double sliced_wasserstein(double q, const EmpiricalMeasure& A,
                          const EmpiricalMeasure& B, int n_projections,
                          std::uint64_t seed) {
  check_pair(A, B);
  if (q < 1.0) throw DomainError("wasserstein: order q must be >= 1");
  if (n_projections < 1)
    throw DomainError("sliced: need at least one projection");
  const int n = A.size();
  const int p = A.dim();

  std::vector<double> Adata(static_cast<std::size_t>(n) * p);
  std::vector<double> Bdata(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) {
      Adata[static_cast<std::size_t>(i) * p + k] = A.points(i, k);
      Bdata[static_cast<std::size_t>(i) * p + k] = B.points(i, k);
    }

  std::vector<double> pa(n), pb(n);
  double acc = 0.0;
  RandomStream dirs(seed, 0, StreamPurpose::Projections);
  for (int s = 0; s < n_projections; ++s) {
    dirs.seek(static_cast<std::uint32_t>(s));  // per-projection substream
    Eigen::VectorXd dir = dirs.normal_vector(p);
    double dn = dir.norm();
    if (dn < 1e-14) {
      dir.setZero();
      dir[0] = 1.0;
      dn = 1.0;
    }
    dir /= dn;
    kernels::active_kernels().project_points(Adata.data(), n, p, dir.data(),
                                             pa.data());
    kernels::active_kernels().project_points(Bdata.data(), n, p, dir.data(),
                                             pb.data());
    acc += w1d_sorted(q, pa, pb);
  }
  return std::pow(acc / n_projections, 1.0 / q);
}

double radial_wasserstein(double q, const RadialDensity& A,
                          const RadialDensity& B) {
  if (A.p != B.p)
    throw SizeMismatch("radial_wasserstein: dimensions differ");
  if (q < 1.0) throw DomainError("wasserstein: order q must be >= 1");

  struct Cdf {
    Eigen::VectorXd t, F;
  };
  const auto build = [](const RadialDensity& d) {
    const int n = static_cast<int>(d.rho.size());
    if (n < 2) throw DegenerateDensity("radial density: grid too small");
    Cdf c;
    c.t.resize(n);
    c.F.resize(n);
    const double dt = d.t_max / (n - 1);
    c.F[0] = 0.0;
    for (int i = 0; i < n; ++i) c.t[i] = i * dt;
    for (int i = 1; i < n; ++i)
      c.F[i] = c.F[i - 1] + 0.5 * (d.rho[i] + d.rho[i - 1]) * dt;
    const double total = c.F[n - 1];
    if (!(total > 1e-300))
      throw DegenerateDensity("radial density: total mass below 1e-300");
    c.F /= total;
    return c;
  };
  const Cdf ca = build(A);
  const Cdf cb = build(B);

  // march both inverse CDFs over the uniform quantile grid
  const auto invert_step = [](const Cdf& c, double u, int& idx) {
    const int n = static_cast<int>(c.F.size());
    while (idx + 1 < n - 1 && c.F[idx + 1] < u) ++idx;
    const double f0 = c.F[idx], f1 = c.F[idx + 1];
    if (f1 <= f0) return c.t[idx + 1];
    const double w = (u - f0) / (f1 - f0);
    return c.t[idx] + w * (c.t[idx + 1] - c.t[idx]);
  };

  int ia = 0, ib = 0;
  double acc = 0.0;
  for (int k = 0; k < kQuantileGrid; ++k) {
    const double u = (k + 0.5) / kQuantileGrid;
    const double qa = invert_step(ca, u, ia);
    const double qb = invert_step(cb, u, ib);
    acc += std::pow(std::abs(qa - qb), q);
  }
  return std::pow(acc / kQuantileGrid, 1.0 / q);
}

namespace {

Eigen::MatrixXd gaussian_cholesky_factor(const Potential& f) {
  if (!f.is_quadratic())
    throw DomainError("rejection sampler: potential must be quadratic");
  Eigen::LLT<Eigen::MatrixXd> llt(f.precision());
  if (llt.info() != Eigen::Success)
    throw NotSPD("rejection sampler: precision not SPD");
  return llt.matrixL();
}

Eigen::VectorXd gaussian_draw(const Eigen::VectorXd& mean,
                              const Eigen::MatrixXd& L, RandomStream& rng) {
  // x = mu + L^{-T} z has covariance (L L^T)^{-1} = precision^{-1}
  const Eigen::VectorXd z = rng.normal_vector(mean.size());
  return mean +
         L.transpose().triangularView<Eigen::Upper>().solve(z);
}

}  // namespace

EmpiricalMeasure rejection_sample_target(const Potential& f,
                                         const ConvexBody& body, int N,
                                         RandomStream& rng) {
  const Eigen::MatrixXd L = gaussian_cholesky_factor(f);
  EmpiricalMeasure out;
  out.points.resize(N, f.dim());
  long long proposals = 0, accepted = 0;
  bool warned = false;
  std::uint32_t step = rng.step();
  while (accepted < N) {
    rng.seek(step++);
    const Eigen::VectorXd x = gaussian_draw(f.mean(), L, rng);
    ++proposals;
    if (body.contains(x)) {
      out.points.row(accepted++) = x.transpose();
    }
    if (!warned && proposals >= 100000 &&
        static_cast<double>(accepted) / proposals < 1e-4) {
      std::cerr << "warning: rejection sampler acceptance rate below 1e-4\n";
      warned = true;
    }
    if (proposals > 200000000LL)
      throw NonConvergence("rejection sampler: acceptance rate too low");
  }
  return out;
}

long long rejection_acceptance_count(const Potential& f,
                                     const ConvexBody& body,
                                     long long n_proposals,
                                     RandomStream& rng) {
  const Eigen::MatrixXd L = gaussian_cholesky_factor(f);
  long long accepted = 0;
  std::uint32_t step = rng.step();
  for (long long k = 0; k < n_proposals; ++k) {
    rng.seek(step++);
    if (body.contains(gaussian_draw(f.mean(), L, rng))) ++accepted;
  }
  return accepted;
}

EmpiricalMeasure rejection_sample_surrogate(const Potential& f,
                                            const ConvexBody& body,
                                            const Penalty& penalty, int N,
                                            RandomStream& rng) {
  const Eigen::MatrixXd L = gaussian_cholesky_factor(f);
  const double lam = penalty.lambda();
  EmpiricalMeasure out;
  out.points.resize(N, f.dim());
  long long proposals = 0, accepted = 0;
  std::uint32_t step = rng.step();
  while (accepted < N) {
    rng.seek(step++);
    const Eigen::VectorXd x = gaussian_draw(f.mean(), L, rng);
    const double u = rng.uniform();
    ++proposals;
    const double d = penalty.distance(body, x);
    if (u < std::exp(-d / (2.0 * lam * lam)))
      out.points.row(accepted++) = x.transpose();
    if (proposals > 200000000LL)
      throw NonConvergence("surrogate sampler: acceptance rate too low");
  }
  return out;
}

RadialDensity surrogate_radial_density(const Potential& f,
                                       const ConvexBody& ball,
                                       PenaltyKind kind, double lambda,
                                       double t_max, int grid_points) {
  if (ball.shape_kind() != BodyShape::Ball || !ball.ball_center().isZero(0.0))
    throw DomainError("radial density: body must be an origin-centered ball");
  if (!f.is_quadratic() || !f.mean().isZero(0.0))
    throw DomainError("radial density: potential must be centered quadratic");
  const int p = f.dim();
  const Eigen::MatrixXd& A = f.precision();
  const double a0 = A(0, 0);
  if (!A.isApprox(a0 * Eigen::MatrixXd::Identity(p, p), 1e-12))
    throw DomainError("radial density: potential must be isotropic");
  if (kind == PenaltyKind::Bregman)
    throw DomainError("radial density: penalty must be Euclidean or Gauge");
  if (grid_points < 2) throw DomainError("radial density: grid too small");

  const double r = ball.ball_radius();
  RadialDensity d;
  d.p = p;
  d.t_max = t_max;
  d.rho.resize(grid_points);
  const double dt = t_max / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double t = i * dt;
    double pen = 0.0;
    if (t > r) {
      if (lambda == 0.0) {
        d.rho[i] = 0.0;
        continue;
      }
      if (std::isfinite(lambda)) {
        const double dist = kind == PenaltyKind::Euclidean
                                ? (t - r) * (t - r)
                                : (t / r - 1.0) * (t / r - 1.0);
        pen = dist / (2.0 * lambda * lambda);
      }
    }
    const double logrho = (p - 1) * (t > 0.0 ? std::log(t) : 0.0) -
                          0.5 * a0 * t * t - pen;
    d.rho[i] = (p > 1 && t == 0.0) ? 0.0 : std::exp(logrho);
  }
  double total = 0.0;
  for (int i = 1; i < grid_points; ++i)
    total += 0.5 * (d.rho[i] + d.rho[i - 1]) * dt;
  if (!(total > 1e-300))
    throw DegenerateDensity("radial density: total mass below 1e-300");
  // grid must cover the support: the tail beyond t_max has to be negligible
  const double tail_proxy = d.rho[grid_points - 1] * dt;
  if (tail_proxy > 1e-12 * total)
    throw DomainError("radial density: grid does not cover the support");
  return d;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3)
    throw DegenerateInput("loglog_slope: need at least 3 pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [lam, w] : pairs) {
    if (!(lam > 0.0) || !(w > 0.0))
      throw DegenerateInput("loglog_slope: values must be positive");
    const double x = std::log(lam);
    const double y = std::log(w);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw DegenerateInput("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace penlmc

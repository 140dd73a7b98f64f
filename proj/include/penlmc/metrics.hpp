#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "penlmc/geometry.hpp"
#include "penlmc/potential.hpp"
#include "penlmc/rng.hpp"

namespace penlmc {

// N uniformly weighted points in R^p (rows).
struct EmpiricalMeasure {
  Eigen::MatrixXd points;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

// Exact W_q between equal-size uniform empirical measures via the
// assignment problem (O(N^3) shortest augmenting paths). Inputs above
// N = 2000 are a hard error; use sliced_wasserstein instead.
double wasserstein_empirical(double q, const EmpiricalMeasure& A,
                             const EmpiricalMeasure& B);

// Monte Carlo sliced estimate: ( avg over random unit directions of the
// exact 1-D W_q^q of the projections )^(1/q). Equals the exact distance in
// dimension 1. Each projection uses a deterministic substream of `seed`.
double sliced_wasserstein(double q, const EmpiricalMeasure& A,
                          const EmpiricalMeasure& B, int n_projections,
                          std::uint64_t seed);

// Unnormalized radial density rho(t) (already including the t^{p-1} area
// factor) tabulated on a uniform grid over [0, t_max].
struct RadialDensity {
  int p = 1;
  double t_max = 0.0;
  Eigen::VectorXd rho;  // values at t_k = k * t_max/(n-1)
};

// W_q between rotation-invariant measures via the monotone radial coupling:
// ( int_0^1 |F_A^{-1}(u) - F_B^{-1}(u)|^q du )^(1/q) on a 2e5-point
// quantile grid. Exact quantile coupling in dimension 1.
double radial_wasserstein(double q, const RadialDensity& A,
                          const RadialDensity& B);

// Exact i.i.d. draws from nu ∝ e^{-f} 1_K for quadratic f, by proposing
// from the matching Gaussian and accepting on membership. Warns to stderr
// when the acceptance rate drops below 1e-4.
EmpiricalMeasure rejection_sample_target(const Potential& f,
                                         const ConvexBody& body, int N,
                                         RandomStream& rng);

// Acceptance-rate probe used by tests: returns accepted count from
// n_proposals proposals.
long long rejection_acceptance_count(const Potential& f,
                                     const ConvexBody& body,
                                     long long n_proposals,
                                     RandomStream& rng);

// Draws from the surrogate nu^lambda ∝ e^{-f - d_K/(2 lambda^2)} for
// quadratic f: propose from the Gaussian, accept w.p. e^{-d/(2 lambda^2)}.
EmpiricalMeasure rejection_sample_surrogate(const Potential& f,
                                            const ConvexBody& body,
                                            const Penalty& penalty, int N,
                                            RandomStream& rng);

// Tabulates t^{p-1} exp(-f(t) - d_K(t)/(2 lambda^2)) for an isotropic
// quadratic potential centered at the origin and a Ball body. lambda may be
// +infinity (unconstrained limit) or 0 (hard truncation to K).
RadialDensity surrogate_radial_density(const Potential& f,
                                       const ConvexBody& ball,
                                       PenaltyKind kind, double lambda,
                                       double t_max, int grid_points);

// Least-squares slope of log W against log lambda; needs >= 3 positive pairs.
double loglog_slope(const std::vector<std::pair<double, double>>& pairs);

}  // namespace penlmc

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "penlmc/potential.hpp"
#include "penlmc/rng.hpp"

namespace penlmc {

enum class Algorithm { CLMC, CKLMC, CRLMC, CRKLMC };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);
bool is_kinetic(Algorithm a);
// Gradient evaluations per step: 1 for Euler schemes, 2 for midpoint ones.
int gradient_evals_per_step(Algorithm a);

// psi(x) = (1 - e^{-x})/x, psi(0) = 1; series below 1e-4.
double psi(double x);

// Per-coordinate covariance of the exact frozen-drift kinetic step noise
// (eta_x, eta_v) over one step of length h with friction gamma:
//   xx = 2[h - 2(1-e^{-gh})/g + (1-e^{-2gh})/(2g)]
//   xv = (1-e^{-gh})^2
//   vv = g(1-e^{-2gh})
struct PairCovariance {
  double xx, xv, vv;
};
PairCovariance kinetic_noise_covariance_pair(double gamma, double h);

// Per-coordinate covariance of the randomized-midpoint kinetic noise triple
// (xi', xi'', xi''') given the midpoint fraction u, assembled from
// Cov(B_s,B_t)=min(s,t), Cov(B_s,G_t)=(e^{a min}-1)/a,
// Cov(G_s,G_t)=(e^{2a min}-1)/(2a) with a = gamma h.
class NoiseCovariance3 {
 public:
  NoiseCovariance3(double gamma, double h, double u);
  const Eigen::Matrix3d& matrix() const { return sigma_; }
  // Symmetric square root with eigenvalues clipped at zero (threshold
  // -1e-12; more negative values indicate an assembly bug and throw).
  const Eigen::Matrix3d& sqrt() const { return sqrt_; }
  double min_eigenvalue_before_clip() const { return min_eig_; }

 private:
  Eigen::Matrix3d sigma_;
  Eigen::Matrix3d sqrt_;
  double min_eig_ = 0.0;
};

NoiseCovariance3 kinetic_noise_covariance_triple(double gamma, double h,
                                                 double u);

// ---------------------------------------------------------------------------
// Chain state and one-step kernels.
//
// The *_update functions are deterministic maps from (state, draws); the
// *_step functions draw from the chain's stream and call them. Tests force
// draws through the kernels directly.
// ---------------------------------------------------------------------------

struct ChainState {
  Eigen::VectorXd theta;
  double h = 0.0;
  RandomStream rng;
  std::uint64_t grad_evals = 0;
  std::uint32_t step_index = 0;
};

struct KineticState {
  Eigen::VectorXd theta;
  Eigen::VectorXd v;
  double gamma = 0.0;
  double h = 0.0;
  RandomStream rng;
  std::uint64_t grad_evals = 0;
  std::uint32_t step_index = 0;
};

Eigen::VectorXd clmc_update(const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& grad, double h,
                            const Eigen::VectorXd& xi);

struct CrlmcDraws {
  double iota;
  Eigen::VectorXd xi1, xi2;
};
// Returns (midpoint, next); the caller evaluates the gradient at the
// midpoint between the two phases, so this is split accordingly.
Eigen::VectorXd crlmc_midpoint(const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& grad_at_theta, double h,
                               const CrlmcDraws& d);
Eigen::VectorXd crlmc_finish(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& grad_at_mid, double h,
                             const CrlmcDraws& d);

struct KineticUpdate {
  Eigen::VectorXd theta;
  Eigen::VectorXd v;
};
KineticUpdate cklmc_update(const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& v,
                           const Eigen::VectorXd& grad, double gamma,
                           double h, const Eigen::VectorXd& eta_x,
                           const Eigen::VectorXd& eta_v);

struct CrklmcDraws {
  double iota;
  // per-coordinate noise triple, already scaled by sqrt(2h)
  Eigen::VectorXd xi1, xi2, xi3;
};
Eigen::VectorXd crklmc_midpoint(const Eigen::VectorXd& theta,
                                const Eigen::VectorXd& v,
                                const Eigen::VectorXd& grad_at_theta,
                                double gamma, double h, const CrklmcDraws& d);
KineticUpdate crklmc_finish(const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& v,
                            const Eigen::VectorXd& grad_at_mid, double gamma,
                            double h, const CrklmcDraws& d);

// Sampling steps. An explicit step size may override state.h for this step
// (the experiment harness scales the step inside K); noise covariances are
// built from the step actually taken. Exactly 1 gradient evaluation for
// CLMC/CKLMC and 2 for CRLMC/CRKLMC. Throws NonFinite on NaN/Inf iterates.
void clmc_step(ChainState& state, const SurrogatePotential& sp,
               std::optional<double> h_override = {});
void crlmc_step(ChainState& state, const SurrogatePotential& sp,
                std::optional<double> h_override = {});
void cklmc_step(KineticState& state, const SurrogatePotential& sp,
                std::optional<double> h_override = {});
void crklmc_step(KineticState& state, const SurrogatePotential& sp,
                 std::optional<double> h_override = {});

struct ChainTrace {
  std::vector<Eigen::VectorXd> positions;  // n + 1 entries
  std::uint64_t grad_evals = 0;
};

// Runs n steps of the requested algorithm from `init`. Kinetic algorithms
// draw v0 ~ N(0, gamma I) from the chain's InitialVelocity stream. Fully
// deterministic given (seed, chain_id). `step_scale_inside` multiplies the
// step whenever the current iterate lies in the constraint body (1 = off).
ChainTrace run_chain(Algorithm algo, const SurrogatePotential& sp,
                     const Eigen::VectorXd& init, int n, double h,
                     std::optional<double> gamma, std::uint64_t seed,
                     std::uint32_t chain_id,
                     double step_scale_inside = 1.0);

}  // namespace penlmc

#include "penlmc/samplers.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iostream>

namespace penlmc {

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "clmc") return Algorithm::CLMC;
  if (name == "cklmc") return Algorithm::CKLMC;
  if (name == "crlmc") return Algorithm::CRLMC;
  if (name == "crklmc") return Algorithm::CRKLMC;
  throw DomainError("unknown algorithm: " + name);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::CLMC: return "clmc";
    case Algorithm::CKLMC: return "cklmc";
    case Algorithm::CRLMC: return "crlmc";
    case Algorithm::CRKLMC: return "crklmc";
  }
  return "?";
}

bool is_kinetic(Algorithm a) {
  return a == Algorithm::CKLMC || a == Algorithm::CRKLMC;
}

int gradient_evals_per_step(Algorithm a) {
  return (a == Algorithm::CRLMC || a == Algorithm::CRKLMC) ? 2 : 1;
}

double psi(double x) {
  if (x < 0.0) throw DomainError("psi: negative argument");
  if (x < 1e-4) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

PairCovariance kinetic_noise_covariance_pair(double gamma, double h) {
  const double a = gamma * h;
  const double e1 = -std::expm1(-a);       // 1 - e^{-a}
  const double e2 = -std::expm1(-2.0 * a); // 1 - e^{-2a}
  PairCovariance c;
  c.xx = 2.0 * (h - 2.0 * e1 / gamma + e2 / (2.0 * gamma));
  c.xv = e1 * e1;
  c.vv = gamma * e2;
  return c;
}

NoiseCovariance3::NoiseCovariance3(double gamma, double h, double u) {
  if (u < 0.0 || u > 1.0)
    throw DomainError("noise triple: u must lie in [0, 1]");
  const double a = gamma * h;
  if (!(a > 0.0)) throw DomainError("noise triple: gamma*h must be positive");
  const auto ea = [a](double t) { return std::expm1(a * t) / a; };
  const auto e2a = [a](double t) { return std::expm1(2.0 * a * t) / (2.0 * a); };
  const double ema = std::exp(-a);
  const double emau = std::exp(-a * u);

  sigma_(0, 0) = u - 2.0 * emau * ea(u) + emau * emau * e2a(u);
  sigma_(0, 1) = u - ema * ea(u) - emau * ea(u) + ema * emau * e2a(u);
  sigma_(0, 2) = gamma * ema * (ea(u) - emau * e2a(u));
  sigma_(1, 1) = 1.0 - 2.0 * ema * ea(1.0) + ema * ema * e2a(1.0);
  sigma_(1, 2) = gamma * ema * (ea(1.0) - ema * e2a(1.0));
  sigma_(2, 2) = gamma * gamma * ema * ema * e2a(1.0);
  sigma_(1, 0) = sigma_(0, 1);
  sigma_(2, 0) = sigma_(0, 2);
  sigma_(2, 1) = sigma_(1, 2);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sigma_);
  min_eig_ = es.eigenvalues().minCoeff();
  if (min_eig_ < -1e-12)
    throw DomainError("noise triple: covariance not PSD (eigenvalue " +
                      std::to_string(min_eig_) + ")");
  const Eigen::Vector3d clipped = es.eigenvalues().cwiseMax(0.0);
  sqrt_ = es.eigenvectors() * clipped.cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
}

NoiseCovariance3 kinetic_noise_covariance_triple(double gamma, double h,
                                                 double u) {
  return NoiseCovariance3(gamma, h, u);
}

// ---------------------------------------------------------------------------
// Deterministic update kernels
// ---------------------------------------------------------------------------

Eigen::VectorXd clmc_update(const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& grad, double h,
                            const Eigen::VectorXd& xi) {
  return theta - h * grad + std::sqrt(2.0 * h) * xi;
}

Eigen::VectorXd crlmc_midpoint(const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& grad_at_theta, double h,
                               const CrlmcDraws& d) {
  return theta - h * d.iota * grad_at_theta +
         std::sqrt(2.0 * h * d.iota) * d.xi1;
}

Eigen::VectorXd crlmc_finish(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& grad_at_mid, double h,
                             const CrlmcDraws& d) {
  const Eigen::VectorXd xi =
      std::sqrt(d.iota) * d.xi1 + std::sqrt(1.0 - d.iota) * d.xi2;
  return theta - h * grad_at_mid + std::sqrt(2.0 * h) * xi;
}

KineticUpdate cklmc_update(const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& v,
                           const Eigen::VectorXd& grad, double gamma,
                           double h, const Eigen::VectorXd& eta_x,
                           const Eigen::VectorXd& eta_v) {
  const double a = gamma * h;
  const double psia = psi(a);
  KineticUpdate out;
  out.theta = theta + h * psia * v - h * (1.0 - psia) * grad + eta_x;
  out.v = std::exp(-a) * v + std::expm1(-a) * grad + eta_v;
  return out;
}

Eigen::VectorXd crklmc_midpoint(const Eigen::VectorXd& theta,
                                const Eigen::VectorXd& v,
                                const Eigen::VectorXd& grad_at_theta,
                                double gamma, double h,
                                const CrklmcDraws& d) {
  const double u = d.iota;
  const double au = gamma * h * u;
  return theta + u * h * psi(au) * v -
         u * h * (1.0 - psi(au)) * grad_at_theta +
         std::sqrt(2.0 * h) * d.xi1;
}

KineticUpdate crklmc_finish(const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& v,
                            const Eigen::VectorXd& grad_at_mid, double gamma,
                            double h, const CrklmcDraws& d) {
  const double u = d.iota;
  const double a = gamma * h;
  const double s2h = std::sqrt(2.0 * h);
  KineticUpdate out;
  out.theta = theta + h * psi(a) * v -
              gamma * h * h * (1.0 - u) * psi(a * (1.0 - u)) * grad_at_mid +
              s2h * d.xi2;
  out.v = std::exp(-a) * v -
          gamma * h * std::exp(-a * (1.0 - u)) * grad_at_mid + s2h * d.xi3;
  return out;
}

// ---------------------------------------------------------------------------
// Sampling steps
// ---------------------------------------------------------------------------

namespace {

void check_finite(const Eigen::VectorXd& x, const char* algo,
                  std::uint32_t step) {
  if (!x.allFinite())
    throw NonFinite(std::string(algo) + ": non-finite position at step " +
                    std::to_string(step) +
                    " (step size too large for the surrogate smoothness?)");
}

void warn_step_size(double h, const SurrogatePotential& sp) {
  static bool warned = false;
  const double ml = sp.smoothness_bound();
  if (!warned && h * ml >= 1.0) {
    std::cerr << "warning: step size " << h
              << " is not below 1/M^lambda = " << 1.0 / ml << "\n";
    warned = true;
  }
}

}  // namespace

void clmc_step(ChainState& state, const SurrogatePotential& sp,
               std::optional<double> h_override) {
  const double h = h_override.value_or(state.h);
  warn_step_size(h, sp);
  state.rng.seek(state.step_index);
  const Eigen::VectorXd grad = sp.gradient(state.theta);
  ++state.grad_evals;
  const Eigen::VectorXd xi = state.rng.normal_vector(state.theta.size());
  state.theta = clmc_update(state.theta, grad, h, xi);
  check_finite(state.theta, "clmc", state.step_index);
  ++state.step_index;
}

void crlmc_step(ChainState& state, const SurrogatePotential& sp,
                std::optional<double> h_override) {
  const double h = h_override.value_or(state.h);
  warn_step_size(h, sp);
  state.rng.seek(state.step_index);
  const Eigen::Index p = state.theta.size();
  CrlmcDraws d;
  d.iota = state.rng.uniform();
  d.xi1 = state.rng.normal_vector(p);
  d.xi2 = state.rng.normal_vector(p);

  const Eigen::VectorXd g0 = sp.gradient(state.theta);
  ++state.grad_evals;
  const Eigen::VectorXd mid = crlmc_midpoint(state.theta, g0, h, d);
  const Eigen::VectorXd g1 = sp.gradient(mid);
  ++state.grad_evals;
  state.theta = crlmc_finish(state.theta, g1, h, d);
  check_finite(state.theta, "crlmc", state.step_index);
  ++state.step_index;
}

void cklmc_step(KineticState& state, const SurrogatePotential& sp,
                std::optional<double> h_override) {
  const double h = h_override.value_or(state.h);
  state.rng.seek(state.step_index);
  const Eigen::Index p = state.theta.size();
  const PairCovariance c = kinetic_noise_covariance_pair(state.gamma, h);
  const double l11 = std::sqrt(c.xx);
  const double l21 = c.xv / l11;
  const double l22 = std::sqrt(std::max(c.vv - l21 * l21, 0.0));

  Eigen::VectorXd eta_x(p), eta_v(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double z1 = state.rng.normal();
    const double z2 = state.rng.normal();
    eta_x[i] = l11 * z1;
    eta_v[i] = l21 * z1 + l22 * z2;
  }

  const Eigen::VectorXd grad = sp.gradient(state.theta);
  ++state.grad_evals;
  const KineticUpdate up =
      cklmc_update(state.theta, state.v, grad, state.gamma, h, eta_x, eta_v);
  state.theta = up.theta;
  state.v = up.v;
  check_finite(state.theta, "cklmc", state.step_index);
  check_finite(state.v, "cklmc(v)", state.step_index);
  ++state.step_index;
}

void crklmc_step(KineticState& state, const SurrogatePotential& sp,
                 std::optional<double> h_override) {
  const double h = h_override.value_or(state.h);
  state.rng.seek(state.step_index);
  const Eigen::Index p = state.theta.size();
  CrklmcDraws d;
  d.iota = state.rng.uniform();
  const NoiseCovariance3 cov(state.gamma, h, d.iota);
  const Eigen::Matrix3d& A = cov.sqrt();
  d.xi1.resize(p);
  d.xi2.resize(p);
  d.xi3.resize(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::Vector3d z(state.rng.normal(), state.rng.normal(),
                            state.rng.normal());
    const Eigen::Vector3d xi = A * z;
    d.xi1[i] = xi[0];
    d.xi2[i] = xi[1];
    d.xi3[i] = xi[2];
  }

  const Eigen::VectorXd g0 = sp.gradient(state.theta);
  ++state.grad_evals;
  const Eigen::VectorXd mid =
      crklmc_midpoint(state.theta, state.v, g0, state.gamma, h, d);
  const Eigen::VectorXd g1 = sp.gradient(mid);
  ++state.grad_evals;
  const KineticUpdate up =
      crklmc_finish(state.theta, state.v, g1, state.gamma, h, d);
  state.theta = up.theta;
  state.v = up.v;
  check_finite(state.theta, "crklmc", state.step_index);
  check_finite(state.v, "crklmc(v)", state.step_index);
  ++state.step_index;
}

ChainTrace run_chain(Algorithm algo, const SurrogatePotential& sp,
                     const Eigen::VectorXd& init, int n, double h,
                     std::optional<double> gamma, std::uint64_t seed,
                     std::uint32_t chain_id, double step_scale_inside) {
  if (n < 0) throw DomainError("run_chain: n must be >= 0");
  ChainTrace trace;
  trace.positions.reserve(n + 1);
  trace.positions.push_back(init);

  const ConvexBody* body = sp.body();
  const auto step_size = [&](const Eigen::VectorXd& theta) {
    if (step_scale_inside != 1.0 && body && body->contains(theta))
      return h * step_scale_inside;
    return h;
  };

  if (is_kinetic(algo)) {
    if (!gamma || !(*gamma > 0.0))
      throw DomainError("run_chain: kinetic algorithm requires gamma > 0");
    KineticState st{init,
                    Eigen::VectorXd(),
                    *gamma,
                    h,
                    RandomStream(seed, chain_id, StreamPurpose::ChainNoise),
                    0,
                    0};
    RandomStream vstream(seed, chain_id, StreamPurpose::InitialVelocity);
    st.v = std::sqrt(*gamma) * vstream.normal_vector(init.size());
    for (int k = 0; k < n; ++k) {
      const double hk = step_size(st.theta);
      if (algo == Algorithm::CKLMC)
        cklmc_step(st, sp, hk);
      else
        crklmc_step(st, sp, hk);
      trace.positions.push_back(st.theta);
    }
    trace.grad_evals = st.grad_evals;
  } else {
    ChainState st{init, h,
                  RandomStream(seed, chain_id, StreamPurpose::ChainNoise), 0,
                  0};
    for (int k = 0; k < n; ++k) {
      const double hk = step_size(st.theta);
      if (algo == Algorithm::CLMC)
        clmc_step(st, sp, hk);
      else
        crlmc_step(st, sp, hk);
      trace.positions.push_back(st.theta);
    }
    trace.grad_evals = st.grad_evals;
  }
  return trace;
}

}  // namespace penlmc

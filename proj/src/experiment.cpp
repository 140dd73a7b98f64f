#include "penlmc/experiment.hpp"

#include <chrono>
#include <cmath>

namespace penlmc {

ExperimentReport run_experiment(const RunConfig& cfg, const RowSink& sink,
                                bool compute_metrics) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;

  const ConvexBody body = cfg.body.build();
  const Potential f = cfg.potential.build(body.dim());
  const Eigen::VectorXd init = f.minimizer();

  for (Algorithm algo : cfg.algorithms) {
    const Penalty penalty = cfg.make_penalty(algo);
    const SurrogatePotential sp(f, penalty, body);
    std::optional<double> gamma;
    if (is_kinetic(algo)) gamma = 5.0 * sp.smoothness_bound();

    for (std::uint64_t seed : cfg.seeds) {
      AlgoSeedResult cell;
      cell.finals.points.resize(cfg.samples, body.dim());

      const auto t0 = std::chrono::steady_clock::now();
      std::uint64_t grad_evals = 0;
      for (int chain = 0; chain < cfg.samples; ++chain) {
        const ChainTrace trace =
            run_chain(algo, sp, init, cfg.n, cfg.h, gamma, seed,
                      static_cast<std::uint32_t>(chain), cfg.inside_scale);
        cell.finals.points.row(chain) = trace.positions.back().transpose();
        grad_evals += trace.grad_evals;
      }
      const auto t1 = std::chrono::steady_clock::now();

      MetricsRow& row = cell.row;
      row.algo = to_string(algo);
      row.seed = seed;
      row.n = cfg.n;
      row.N = cfg.samples;
      row.h = cfg.h;
      row.lambda = cfg.lambda_for(algo);
      row.grad_evals = grad_evals;
      row.wall_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();

      if (compute_metrics) {
        RandomStream truth_rng(seed, 0, StreamPurpose::GroundTruth);
        const EmpiricalMeasure truth =
            rejection_sample_target(f, body, cfg.samples, truth_rng);
        if (cfg.samples <= 2000) {
          row.w1 = wasserstein_empirical(1.0, cell.finals, truth);
          row.w2 = wasserstein_empirical(2.0, cell.finals, truth);
        } else {
          row.w1 = sliced_wasserstein(1.0, cell.finals, truth, 128, seed);
          row.w2 = sliced_wasserstein(2.0, cell.finals, truth, 128, seed);
        }
      }

      if (sink) sink(cell);
      report.results.push_back(std::move(cell));
    }
  }
  return report;
}

RatesReport validate_rates() {
  RatesReport rep;
  const double r = 0.5;
  const int grid_points = 400000;

  for (int k = 3; k <= 8; ++k) rep.lambdas.push_back(std::pow(2.0, -k));

  const auto density_pair = [&](int p, double lam) {
    const Potential f = Potential::quadratic(
        Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Identity(p, p));
    const ConvexBody ball = ConvexBody::ball(Eigen::VectorXd::Zero(p), r);
    const double t_max = r + 14.0 * lam + 2.0;
    const RadialDensity target = surrogate_radial_density(
        f, ball, PenaltyKind::Euclidean, 0.0, t_max, grid_points);
    const RadialDensity surrogate = surrogate_radial_density(
        f, ball, PenaltyKind::Euclidean, lam, t_max, grid_points);
    return std::make_pair(target, surrogate);
  };

  std::vector<std::pair<double, double>> fit11, fit23;
  for (double lam : rep.lambdas) {
    const auto [t1, s1] = density_pair(1, lam);
    const double w11 = radial_wasserstein(1.0, t1, s1);
    rep.w_p1_q1.push_back(w11);
    fit11.push_back({lam, w11});

    const auto [t2, s2] = density_pair(2, lam);
    const double w23 = radial_wasserstein(3.0, t2, s2);
    rep.w_p2_q3.push_back(w23);
    fit23.push_back({lam, w23});
  }
  rep.slope_p1_q1 = loglog_slope(fit11);
  rep.slope_p2_q3 = loglog_slope(fit23);

  rep.ratio_min = rep.w_p1_q1[0] / rep.lambdas[0];
  rep.ratio_max = rep.ratio_min;
  for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
    const double ratio = rep.w_p1_q1[i] / rep.lambdas[i];
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
  }
  return rep;
}

}  // namespace penlmc

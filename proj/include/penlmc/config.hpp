#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "penlmc/geometry.hpp"
#include "penlmc/potential.hpp"
#include "penlmc/samplers.hpp"

namespace penlmc {

struct BodySpec {
  std::string shape = "ball";  // ball | box | polytope
  int dim = 2;
  Eigen::VectorXd center;
  double radius = 0.5;
  Eigen::VectorXd lower, upper;
  std::vector<Halfspace> halfspaces;
  std::optional<double> inner_radius, outer_radius;

  ConvexBody build() const;
};

struct PotentialSpec {
  Eigen::VectorXd mean;       // defaults to zeros
  Eigen::MatrixXd precision;  // defaults to identity

  Potential build(int dim) const;
};

// Either an explicit value or an exponent rule lambda = h^e.
struct LambdaRule {
  bool is_exponent = false;
  double value = 0.0;

  double resolve(double h) const;
  std::string describe() const;
};

struct RunConfig {
  BodySpec body;
  PotentialSpec potential;

  PenaltyKind penalty_kind = PenaltyKind::Euclidean;
  Eigen::MatrixXd penalty_Q;  // bregman only
  // Per-algorithm lambda rules; defaults follow the experiment settings
  // h^{1/4}, h^{1/4}, h^{3/10}, h^{3/8} for clmc/crlmc/cklmc/crklmc.
  std::map<Algorithm, LambdaRule> lambda_rules;

  std::vector<Algorithm> algorithms = {Algorithm::CLMC, Algorithm::CKLMC,
                                       Algorithm::CRLMC, Algorithm::CRKLMC};
  double h = 0.001;
  double inside_scale = 0.1;  // step multiplier while the iterate is in K
  int n = 1000;
  int samples = 500;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string outputs = "out";
  bool emit_svg = false;

  double lambda_for(Algorithm a) const;
  Penalty make_penalty(Algorithm a) const;
  // Throws ValidationError listing every violation.
  void validate() const;
};

// Parses either the sectioned key-value text format or JSON (detected from
// the first non-space character). Unknown keys are hard errors.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_json(const std::string& text);

}  // namespace penlmc

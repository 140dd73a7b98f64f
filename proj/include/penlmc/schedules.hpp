#pragma once

#include <optional>

#include "penlmc/samplers.hpp"

namespace penlmc {

enum class Metric { W1, W2 };

Metric metric_from_string(const std::string& name);
std::string to_string(Metric m);

struct ScheduleRequest {
  Algorithm algo = Algorithm::CLMC;
  Metric metric = Metric::W1;
  double epsilon = 0.1;   // target accuracy, in (0, 1)
  int p = 1;              // dimension
  double m = 1.0;         // strong convexity of f
  double M = 1.0;         // smoothness of f
  double M0 = 2.0;        // smoothness of the penalty distance d_K
  double user_constant = 1.0;
};

struct SchedulePlan {
  double lambda = 0.0;
  double h = 0.0;
  long long n = 0;
  std::optional<double> gamma;  // kinetic algorithms only
};

// Step-size exponent: h = user_constant * eps^e_h.
double step_exponent(Algorithm algo, Metric metric, int p);
// Penalty exponent: lambda = h^e_lambda.
double lambda_exponent(Algorithm algo, Metric metric, int p);

// h = user_constant * eps^e_h, lambda = h^e_lambda,
// n = ceil(c_n/(m h) * ln(c_log/eps)) with c_n = 2 (Euler-in-time vanilla
// chains) or 1 (kinetic), and gamma = 5 (M + M0/(2 lambda^2)) for kinetic
// algorithms.
SchedulePlan select_parameters(const ScheduleRequest& req);

}  // namespace penlmc

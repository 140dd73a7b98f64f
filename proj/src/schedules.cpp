#include "penlmc/schedules.hpp"

#include <cmath>

namespace penlmc {

Metric metric_from_string(const std::string& name) {
  if (name == "w1" || name == "W1") return Metric::W1;
  if (name == "w2" || name == "W2") return Metric::W2;
  throw UnsupportedCombination("unknown metric: " + name);
}

std::string to_string(Metric m) { return m == Metric::W1 ? "w1" : "w2"; }

double step_exponent(Algorithm algo, Metric metric, int p) {
  const double pd = p;
  switch (algo) {
    case Algorithm::CLMC:
      return metric == Metric::W1 ? 4.0 : (6.0 * pd + 4.0) / (pd + 2.0);
    case Algorithm::CKLMC:
      return metric == Metric::W1 ? 4.0 : (7.0 * pd + 2.0) / (pd + 2.0);
    case Algorithm::CRLMC:
      return metric == Metric::W1 ? 10.0 / 3.0
                                  : (18.0 * pd + 4.0) / (3.0 * pd + 6.0);
    case Algorithm::CRKLMC:
      return metric == Metric::W1 ? 8.0 / 3.0
                                  : (15.0 * pd + 2.0) / (3.0 * pd + 6.0);
  }
  throw UnsupportedCombination("unknown (algorithm, metric) pair");
}

double lambda_exponent(Algorithm algo, Metric metric, int p) {
  const double pd = p;
  switch (algo) {
    case Algorithm::CLMC:
      return metric == Metric::W1 ? 0.25 : pd / (3.0 * pd + 2.0);
    case Algorithm::CKLMC:
      return metric == Metric::W1 ? 0.25 : 2.0 * pd / (7.0 * pd + 2.0);
    case Algorithm::CRLMC:
      return metric == Metric::W1 ? 0.3 : 3.0 * pd / (9.0 * pd + 2.0);
    case Algorithm::CRKLMC:
      return metric == Metric::W1 ? 0.375 : 6.0 * pd / (15.0 * pd + 2.0);
  }
  throw UnsupportedCombination("unknown (algorithm, metric) pair");
}

namespace {

double log_constant(Algorithm algo) {
  switch (algo) {
    case Algorithm::CLMC: return 3.0;
    case Algorithm::CRLMC: return 3.3;
    case Algorithm::CKLMC: return 6.0;
    case Algorithm::CRKLMC: return 4.8;
  }
  return 3.0;
}

}  // namespace

SchedulePlan select_parameters(const ScheduleRequest& req) {
  if (!(req.epsilon > 0.0 && req.epsilon < 1.0))
    throw DomainError("schedule: epsilon must lie in (0, 1)");
  if (req.p < 1) throw DomainError("schedule: dimension must be >= 1");
  if (!(req.m > 0.0 && req.M >= req.m))
    throw DomainError("schedule: need 0 < m <= M");
  if (!(req.M0 > 0.0)) throw DomainError("schedule: M0 must be positive");
  if (!(req.user_constant > 0.0))
    throw DomainError("schedule: user constant must be positive");

  SchedulePlan plan;
  const double eh = step_exponent(req.algo, req.metric, req.p);
  const double el = lambda_exponent(req.algo, req.metric, req.p);
  plan.h = req.user_constant * std::pow(req.epsilon, eh);
  plan.lambda = std::pow(plan.h, el);
  const double cn = is_kinetic(req.algo) ? 1.0 : 2.0;
  plan.n = static_cast<long long>(std::ceil(
      cn / (req.m * plan.h) * std::log(log_constant(req.algo) / req.epsilon)));
  if (plan.n < 1) plan.n = 1;
  if (is_kinetic(req.algo))
    plan.gamma =
        5.0 * (req.M + req.M0 / (2.0 * plan.lambda * plan.lambda));
  return plan;
}

}  // namespace penlmc

#pragma once

#include <string>

#include "penlmc/experiment.hpp"

namespace penlmc {

// Full-precision decimal formatting (%.17g): doubles survive a CSV round
// trip bit-exactly.
std::string format_double(double v);

// Streams experiment outputs into a directory:
//   samples_<algo>_<seed>.csv   one row per final position
//   metrics.csv                 one row per (algorithm, seed)
//   report.json                 config echo + per-row results + aggregates
//   scatter_<algo>.svg          first-seed cloud with the dashed boundary
// Rows are flushed as they arrive so partial results survive an abort.
class ExperimentWriter {
 public:
  ExperimentWriter(std::string directory, const RunConfig& cfg,
                   bool with_metrics = true);

  void write_row(const AlgoSeedResult& cell);
  // Writes report.json (and SVGs when configured). Call once at the end.
  void finalize(const ExperimentReport& report);

  const std::string& directory() const { return dir_; }

 private:
  std::string dir_;
  RunConfig cfg_;
  bool with_metrics_;
};

std::string samples_csv_path(const std::string& dir, const std::string& algo,
                             std::uint64_t seed);

// Reads back a samples CSV into an empirical measure (test support and
// external tooling).
EmpiricalMeasure read_samples_csv(const std::string& path);

// Scatter plot with the constraint boundary dashed: one circle element for
// a ball, one line element per facet for boxes/polytopes (2-D only).
std::string render_scatter_svg(const EmpiricalMeasure& samples,
                               const ConvexBody& body);

}  // namespace penlmc

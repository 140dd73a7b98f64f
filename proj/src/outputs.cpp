#include "penlmc/outputs.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace penlmc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string samples_csv_path(const std::string& dir, const std::string& algo,
                             std::uint64_t seed) {
  return dir + "/samples_" + algo + "_" + std::to_string(seed) + ".csv";
}

ExperimentWriter::ExperimentWriter(std::string directory, const RunConfig& cfg,
                                   bool with_metrics)
    : dir_(std::move(directory)), cfg_(cfg), with_metrics_(with_metrics) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory: " + dir_);
  std::ofstream metrics(dir_ + "/metrics.csv", std::ios::trunc);
  if (!metrics) throw IoError("cannot open metrics.csv for writing");
  metrics << "algo,seed,n,N,h,lambda,w1,w2,grad_evals,wall_ms\n";
}

void ExperimentWriter::write_row(const AlgoSeedResult& cell) {
  // samples CSV
  {
    std::ofstream out(samples_csv_path(dir_, cell.row.algo, cell.row.seed),
                      std::ios::trunc);
    if (!out) throw IoError("cannot write samples CSV");
    const int p = cell.finals.dim();
    for (int k = 0; k < p; ++k) out << (k ? "," : "") << "x" << (k + 1);
    out << "\n";
    for (int i = 0; i < cell.finals.size(); ++i) {
      for (int k = 0; k < p; ++k)
        out << (k ? "," : "") << format_double(cell.finals.points(i, k));
      out << "\n";
    }
  }
  // metrics row
  std::ofstream metrics(dir_ + "/metrics.csv", std::ios::app);
  if (!metrics) throw IoError("cannot append to metrics.csv");
  const MetricsRow& r = cell.row;
  metrics << r.algo << ',' << r.seed << ',' << r.n << ',' << r.N << ','
          << format_double(r.h) << ',' << format_double(r.lambda) << ','
          << (with_metrics_ ? format_double(r.w1) : "") << ','
          << (with_metrics_ ? format_double(r.w2) : "") << ','
          << r.grad_evals << ',' << format_double(r.wall_ms) << "\n";
  metrics.flush();
}

namespace {

json config_to_json(const RunConfig& cfg) {
  json body;
  body["shape"] = cfg.body.shape;
  body["dim"] = cfg.body.dim;
  if (cfg.body.shape == "ball") {
    body["radius"] = cfg.body.radius;
    if (cfg.body.center.size()) {
      body["center"] = std::vector<double>(
          cfg.body.center.data(),
          cfg.body.center.data() + cfg.body.center.size());
    }
  }
  if (cfg.body.shape == "box") {
    body["lower"] = std::vector<double>(
        cfg.body.lower.data(), cfg.body.lower.data() + cfg.body.lower.size());
    body["upper"] = std::vector<double>(
        cfg.body.upper.data(), cfg.body.upper.data() + cfg.body.upper.size());
  }
  if (cfg.body.shape == "polytope") {
    json hss = json::array();
    for (const auto& hs : cfg.body.halfspaces) {
      std::vector<double> row(hs.normal.data(),
                              hs.normal.data() + hs.normal.size());
      row.push_back(hs.offset);
      hss.push_back(row);
    }
    body["halfspaces"] = hss;
  }

  json penalty;
  penalty["kind"] = cfg.penalty_kind == PenaltyKind::Euclidean ? "euclidean"
                    : cfg.penalty_kind == PenaltyKind::Bregman ? "bregman"
                                                               : "gauge";
  for (const auto& [algo, rule] : cfg.lambda_rules)
    penalty["lambda_" + to_string(algo)] = rule.describe();

  json run;
  json algos = json::array();
  for (Algorithm a : cfg.algorithms) algos.push_back(to_string(a));
  run["algorithms"] = algos;
  run["h"] = cfg.h;
  run["inside_scale"] = cfg.inside_scale;
  run["n"] = cfg.n;
  run["samples"] = cfg.samples;
  run["seeds"] = cfg.seeds;
  run["outputs"] = cfg.outputs;
  run["svg"] = cfg.emit_svg;

  return json{{"body", body}, {"penalty", penalty}, {"run", run}};
}

}  // namespace

void ExperimentWriter::finalize(const ExperimentReport& report) {
  json rows = json::array();
  std::map<std::string, std::vector<double>> w1s, w2s;
  for (const auto& cell : report.results) {
    const MetricsRow& r = cell.row;
    json row;
    row["algo"] = r.algo;
    row["seed"] = r.seed;
    row["n"] = r.n;
    row["N"] = r.N;
    row["h"] = r.h;
    row["lambda"] = r.lambda;
    row["grad_evals"] = r.grad_evals;
    row["wall_ms"] = r.wall_ms;
    if (with_metrics_) {
      row["w1"] = r.w1;
      row["w2"] = r.w2;
      w1s[r.algo].push_back(r.w1);
      w2s[r.algo].push_back(r.w2);
    }
    rows.push_back(row);
  }

  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  json aggregates;
  for (const auto& [algo, vals] : w1s) {
    aggregates[algo]["median_w1"] = median(vals);
    aggregates[algo]["median_w2"] = median(w2s[algo]);
  }

  json doc;
  doc["config"] = config_to_json(report.config);
  doc["results"] = rows;
  doc["aggregates"] = aggregates;
  std::ofstream out(dir_ + "/report.json", std::ios::trunc);
  if (!out) throw IoError("cannot write report.json");
  out << doc.dump(2) << "\n";

  if (cfg_.emit_svg && cfg_.body.dim == 2 && !report.results.empty()) {
    const ConvexBody body = cfg_.body.build();
    std::map<std::string, const AlgoSeedResult*> first_cell;
    for (const auto& cell : report.results)
      if (!first_cell.count(cell.row.algo)) first_cell[cell.row.algo] = &cell;
    for (const auto& [algo, cell] : first_cell) {
      std::ofstream svg(dir_ + "/scatter_" + algo + ".svg", std::ios::trunc);
      if (!svg) throw IoError("cannot write scatter SVG");
      svg << render_scatter_svg(cell->finals, body);
    }
  }
}

EmpiricalMeasure read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open samples CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty samples CSV");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("samples CSV has no data rows");
  EmpiricalMeasure m;
  m.points.resize(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m.points(i, k) = rows[i][k];
  return m;
}

std::string render_scatter_svg(const EmpiricalMeasure& samples,
                               const ConvexBody& body) {
  if (samples.dim() != 2)
    throw DomainError("scatter SVG: only 2-D samples are supported");
  double extent = 1.1 * body.outer_radius();
  for (int i = 0; i < samples.size(); ++i)
    extent = std::max(extent, 1.1 * samples.points.row(i).norm());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" "
         "height=\"480\" viewBox=\""
      << -extent << " " << -extent << " " << 2 * extent << " " << 2 * extent
      << "\">\n";
  svg << "<g transform=\"scale(1,-1)\">\n";

  const double pr = extent / 120.0;
  for (int i = 0; i < samples.size(); ++i)
    svg << "<circle class=\"pt\" cx=\"" << samples.points(i, 0) << "\" cy=\""
        << samples.points(i, 1) << "\" r=\"" << pr
        << "\" fill=\"#1f6fb4\" fill-opacity=\"0.45\"/>\n";

  const std::string dash = "fill=\"none\" stroke=\"#d62728\" stroke-width=\"" +
                           std::to_string(extent / 150.0) +
                           "\" stroke-dasharray=\"" +
                           std::to_string(extent / 18.0) + " " +
                           std::to_string(extent / 30.0) + "\"";
  switch (body.shape_kind()) {
    case BodyShape::Ball:
      svg << "<circle class=\"boundary\" cx=\"" << body.ball_center()[0]
          << "\" cy=\"" << body.ball_center()[1] << "\" r=\""
          << body.ball_radius() << "\" " << dash << "/>\n";
      break;
    case BodyShape::Box: {
      const double x0 = body.box_lower()[0], y0 = body.box_lower()[1];
      const double x1 = body.box_upper()[0], y1 = body.box_upper()[1];
      const double seg[4][4] = {{x0, y0, x1, y0},
                                {x1, y0, x1, y1},
                                {x1, y1, x0, y1},
                                {x0, y1, x0, y0}};
      for (const auto& s : seg)
        svg << "<line class=\"boundary\" x1=\"" << s[0] << "\" y1=\"" << s[1]
            << "\" x2=\"" << s[2] << "\" y2=\"" << s[3] << "\" " << dash
            << "/>\n";
      break;
    }
    case BodyShape::Polytope: {
      // facet segments from pairwise line intersections
      const auto& hs = body.halfspaces();
      for (std::size_t i = 0; i < hs.size(); ++i) {
        std::vector<Eigen::Vector2d> pts;
        for (std::size_t j = 0; j < hs.size(); ++j) {
          if (i == j) continue;
          Eigen::Matrix2d A;
          A.row(0) = hs[i].normal.transpose();
          A.row(1) = hs[j].normal.transpose();
          if (std::abs(A.determinant()) < 1e-14) continue;
          const Eigen::Vector2d v =
              A.inverse() * Eigen::Vector2d(hs[i].offset, hs[j].offset);
          bool feasible = true;
          for (const auto& h : hs)
            if (h.normal.dot(v) > h.offset + 1e-9) feasible = false;
          if (feasible) pts.push_back(v);
        }
        if (pts.size() >= 2)
          svg << "<line class=\"boundary\" x1=\"" << pts[0][0] << "\" y1=\""
              << pts[0][1] << "\" x2=\"" << pts[1][0] << "\" y2=\""
              << pts[1][1] << "\" " << dash << "/>\n";
      }
      break;
    }
    case BodyShape::Oracle:
      break;  // no closed-form boundary to draw
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace penlmc

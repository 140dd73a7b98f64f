#include "penlmc/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace penlmc {

using nlohmann::json;

ConvexBody BodySpec::build() const {
  if (shape == "ball") {
    Eigen::VectorXd c = center.size() ? center : Eigen::VectorXd::Zero(dim);
    return ConvexBody::ball(c, radius);
  }
  if (shape == "box") return ConvexBody::box(lower, upper);
  if (shape == "polytope")
    return ConvexBody::polytope(halfspaces, inner_radius, outer_radius);
  throw ValidationError("body.shape: unknown shape '" + shape + "'");
}

Potential PotentialSpec::build(int dim) const {
  Eigen::VectorXd mu = mean.size() ? mean : Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd A =
      precision.size() ? precision
                       : Eigen::MatrixXd::Identity(dim, dim);
  return Potential::quadratic(mu, A);
}

double LambdaRule::resolve(double h) const {
  return is_exponent ? std::pow(h, value) : value;
}

std::string LambdaRule::describe() const {
  std::ostringstream os;
  if (is_exponent)
    os << "h^" << value;
  else
    os << value;
  return os.str();
}

double RunConfig::lambda_for(Algorithm a) const {
  const auto it = lambda_rules.find(a);
  if (it == lambda_rules.end())
    throw ValidationError("penalty.lambda: no rule for " + to_string(a));
  return it->second.resolve(h);
}

Penalty RunConfig::make_penalty(Algorithm a) const {
  const double lam = lambda_for(a);
  switch (penalty_kind) {
    case PenaltyKind::Euclidean: return Penalty::euclidean(lam);
    case PenaltyKind::Bregman: return Penalty::bregman(penalty_Q, lam);
    case PenaltyKind::Gauge: return Penalty::gauge(lam);
  }
  throw ValidationError("penalty.kind: unknown kind");
}

void RunConfig::validate() const {
  std::vector<std::string> errors;
  if (!(h > 0.0)) errors.push_back("run.h: must be positive");
  if (n < 0) errors.push_back("run.n: must be >= 0");
  if (samples < 1) errors.push_back("run.samples: must be >= 1");
  if (seeds.empty()) errors.push_back("run.seeds: must be non-empty");
  if (!(inside_scale > 0.0 && inside_scale <= 1.0))
    errors.push_back("run.inside_scale: must lie in (0, 1]");
  if (algorithms.empty())
    errors.push_back("run.algorithms: must be non-empty");
  for (Algorithm a : algorithms) {
    const auto it = lambda_rules.find(a);
    if (it == lambda_rules.end()) {
      errors.push_back("penalty.lambda: missing rule for " + to_string(a));
      continue;
    }
    const double lam = it->second.resolve(h);
    if (!(lam > 0.0) || !std::isfinite(lam))
      errors.push_back("penalty.lambda (" + to_string(a) +
                       "): resolves to a non-positive value");
  }
  if (penalty_kind == PenaltyKind::Bregman && penalty_Q.size() == 0)
    errors.push_back("penalty.q: required for the bregman kind");
  try {
    body.build();
  } catch (const Error& e) {
    errors.push_back(std::string("body: ") + e.what());
  }
  if (!errors.empty()) {
    std::string msg = "configuration invalid:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ValidationError(msg);
  }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& s, const std::string& key,
                                  int line) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (!(is.eof()) && (is.clear(), is >> rest))
    throw ParseError("line " + std::to_string(line) + ": field '" + key +
                     "': expected numbers, got '" + rest + "'");
  if (out.empty())
    throw ParseError("line " + std::to_string(line) + ": field '" + key +
                     "': expected at least one number");
  return out;
}

double parse_scalar(const std::string& s, const std::string& key, int line) {
  const auto v = parse_numbers(s, key, line);
  if (v.size() != 1)
    throw ParseError("line " + std::to_string(line) + ": field '" + key +
                     "': expected a single number");
  return v[0];
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

// "identity <p>" | "diag d1 ... dp" | "dense r11 r12 ; r21 r22"
Eigen::MatrixXd parse_matrix(const std::string& s, const std::string& key,
                             int line) {
  std::istringstream is(s);
  std::string head;
  is >> head;
  if (head == "identity") {
    double p;
    if (!(is >> p))
      throw ParseError("line " + std::to_string(line) + ": field '" + key +
                       "': identity needs a dimension");
    return Eigen::MatrixXd::Identity(static_cast<int>(p),
                                     static_cast<int>(p));
  }
  if (head == "diag") {
    std::vector<double> d;
    double v;
    while (is >> v) d.push_back(v);
    if (d.empty())
      throw ParseError("line " + std::to_string(line) + ": field '" + key +
                       "': diag needs entries");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  if (head == "dense") {
    std::string rest;
    std::getline(is, rest);
    std::vector<std::vector<double>> rows;
    std::stringstream rs(rest);
    std::string rowstr;
    while (std::getline(rs, rowstr, ';'))
      rows.push_back(parse_numbers(rowstr, key, line));
    const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
    if (rows.empty() || ncols == 0 || rows.size() != ncols)
      throw ParseError("line " + std::to_string(line) + ": field '" + key +
                       "': dense matrix must be square");
    Eigen::MatrixXd m(rows.size(), ncols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != ncols)
        throw ParseError("line " + std::to_string(line) + ": field '" + key +
                         "': ragged matrix rows");
      for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  throw ParseError("line " + std::to_string(line) + ": field '" + key +
                   "': expected identity|diag|dense");
}

LambdaRule parse_lambda_rule(const std::string& s, const std::string& key,
                             int line) {
  LambdaRule rule;
  const std::string v = trim(s);
  if (v.rfind("h^", 0) == 0) {
    rule.is_exponent = true;
    const std::string expo = v.substr(2);
    const auto slash = expo.find('/');
    try {
      if (slash != std::string::npos) {
        const double num = std::stod(expo.substr(0, slash));
        const double den = std::stod(expo.substr(slash + 1));
        rule.value = num / den;
      } else {
        rule.value = std::stod(expo);
      }
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line) + ": field '" + key +
                       "': bad exponent '" + expo + "'");
    }
    return rule;
  }
  rule.is_exponent = false;
  rule.value = parse_scalar(v, key, line);
  return rule;
}

bool parse_bool(const std::string& s, const std::string& key, int line) {
  const std::string v = trim(s);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("line " + std::to_string(line) + ": field '" + key +
                   "': expected a boolean");
}

void apply_penalty_lambda_key(RunConfig& cfg, const std::string& key,
                              const Entry& e) {
  if (key == "lambda") {
    const LambdaRule rule = parse_lambda_rule(e.value, key, e.line);
    for (Algorithm a : {Algorithm::CLMC, Algorithm::CKLMC, Algorithm::CRLMC,
                        Algorithm::CRKLMC})
      cfg.lambda_rules[a] = rule;
    return;
  }
  const std::string prefix = "lambda_";
  if (key.rfind(prefix, 0) == 0) {
    const Algorithm a = algorithm_from_string(key.substr(prefix.size()));
    cfg.lambda_rules[a] = parse_lambda_rule(e.value, key, e.line);
    return;
  }
  throw ParseError("line " + std::to_string(e.line) +
                   ": unknown key 'penalty." + key + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  // section -> key -> entries (halfspace is repeatable)
  std::map<std::string, std::vector<std::pair<std::string, Entry>>> sections;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(lineno) +
                         ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "body" && section != "potential" &&
          section != "penalty" && section != "run")
        throw ParseError("line " + std::to_string(lineno) +
                         ": unknown section '" + section + "'");
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    if (section.empty())
      throw ParseError("line " + std::to_string(lineno) +
                       ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    sections[section].push_back(
        {key, Entry{trim(line.substr(eq + 1)), lineno}});
  }

  for (const auto& [key, e] : sections["body"]) {
    if (key == "shape") cfg.body.shape = e.value;
    else if (key == "dim")
      cfg.body.dim = static_cast<int>(parse_scalar(e.value, key, e.line));
    else if (key == "center")
      cfg.body.center = to_vector(parse_numbers(e.value, key, e.line));
    else if (key == "radius")
      cfg.body.radius = parse_scalar(e.value, key, e.line);
    else if (key == "lower")
      cfg.body.lower = to_vector(parse_numbers(e.value, key, e.line));
    else if (key == "upper")
      cfg.body.upper = to_vector(parse_numbers(e.value, key, e.line));
    else if (key == "halfspace") {
      const auto nums = parse_numbers(e.value, key, e.line);
      if (nums.size() < 2)
        throw ParseError("line " + std::to_string(e.line) +
                         ": halfspace needs 'a1 ... ap b'");
      Halfspace hs;
      hs.normal = to_vector({nums.begin(), nums.end() - 1});
      hs.offset = nums.back();
      cfg.body.halfspaces.push_back(std::move(hs));
    } else if (key == "inner_radius")
      cfg.body.inner_radius = parse_scalar(e.value, key, e.line);
    else if (key == "outer_radius")
      cfg.body.outer_radius = parse_scalar(e.value, key, e.line);
    else
      throw ParseError("line " + std::to_string(e.line) +
                       ": unknown key 'body." + key + "'");
  }
  for (const auto& [key, e] : sections["potential"]) {
    if (key == "mean")
      cfg.potential.mean = to_vector(parse_numbers(e.value, key, e.line));
    else if (key == "precision")
      cfg.potential.precision = parse_matrix(e.value, key, e.line);
    else
      throw ParseError("line " + std::to_string(e.line) +
                       ": unknown key 'potential." + key + "'");
  }
  for (const auto& [key, e] : sections["penalty"]) {
    if (key == "kind") {
      if (e.value == "euclidean") cfg.penalty_kind = PenaltyKind::Euclidean;
      else if (e.value == "bregman") cfg.penalty_kind = PenaltyKind::Bregman;
      else if (e.value == "gauge") cfg.penalty_kind = PenaltyKind::Gauge;
      else
        throw ParseError("line " + std::to_string(e.line) +
                         ": penalty.kind must be euclidean|bregman|gauge");
    } else if (key == "q")
      cfg.penalty_Q = parse_matrix(e.value, key, e.line);
    else
      apply_penalty_lambda_key(cfg, key, e);
  }
  for (const auto& [key, e] : sections["run"]) {
    if (key == "algorithms") {
      cfg.algorithms.clear();
      std::istringstream as(e.value);
      std::string name;
      while (as >> name) cfg.algorithms.push_back(algorithm_from_string(name));
    } else if (key == "h")
      cfg.h = parse_scalar(e.value, key, e.line);
    else if (key == "inside_scale")
      cfg.inside_scale = parse_scalar(e.value, key, e.line);
    else if (key == "n")
      cfg.n = static_cast<int>(parse_scalar(e.value, key, e.line));
    else if (key == "samples")
      cfg.samples = static_cast<int>(parse_scalar(e.value, key, e.line));
    else if (key == "seeds") {
      cfg.seeds.clear();
      for (double s : parse_numbers(e.value, key, e.line))
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (key == "outputs")
      cfg.outputs = e.value;
    else if (key == "svg")
      cfg.emit_svg = parse_bool(e.value, key, e.line);
    else
      throw ParseError("line " + std::to_string(e.line) +
                       ": unknown key 'run." + key + "'");
  }

  // default experiment lambda rules
  const auto defaults = std::map<Algorithm, double>{
      {Algorithm::CLMC, 0.25},
      {Algorithm::CRLMC, 0.25},
      {Algorithm::CKLMC, 0.3},
      {Algorithm::CRKLMC, 0.375}};
  for (const auto& [a, expo] : defaults)
    if (!cfg.lambda_rules.count(a))
      cfg.lambda_rules[a] = LambdaRule{true, expo};

  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd json_vector(const json& j, const std::string& key) {
  if (!j.is_array())
    throw ParseError("field '" + key + "': expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Eigen::MatrixXd json_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ParseError("field '" + key + "': expected an array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols)
      throw ParseError("field '" + key + "': ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

LambdaRule json_lambda_rule(const json& j, const std::string& key) {
  if (j.is_number()) return LambdaRule{false, j.get<double>()};
  if (j.is_string()) return parse_lambda_rule(j.get<std::string>(), key, 0);
  throw ParseError("field '" + key + "': expected number or \"h^e\" string");
}

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> known) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* name : known)
      if (k == name) ok = true;
    if (!ok && section == "penalty" && k.rfind("lambda_", 0) == 0) ok = true;
    if (!ok)
      throw ParseError("unknown key '" + section + "." + k + "'");
  }
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [k, v] : j.items())
    if (k != "body" && k != "potential" && k != "penalty" && k != "run")
      throw ParseError("unknown section '" + k + "'");

  if (j.contains("body")) {
    const json& b = j["body"];
    reject_unknown(b, "body",
                   {"shape", "dim", "center", "radius", "lower", "upper",
                    "halfspaces", "inner_radius", "outer_radius"});
    if (b.contains("shape")) cfg.body.shape = b["shape"].get<std::string>();
    if (b.contains("dim")) cfg.body.dim = b["dim"].get<int>();
    if (b.contains("center")) cfg.body.center = json_vector(b["center"], "body.center");
    if (b.contains("radius")) cfg.body.radius = b["radius"].get<double>();
    if (b.contains("lower")) cfg.body.lower = json_vector(b["lower"], "body.lower");
    if (b.contains("upper")) cfg.body.upper = json_vector(b["upper"], "body.upper");
    if (b.contains("inner_radius")) cfg.body.inner_radius = b["inner_radius"].get<double>();
    if (b.contains("outer_radius")) cfg.body.outer_radius = b["outer_radius"].get<double>();
    if (b.contains("halfspaces")) {
      for (const auto& h : b["halfspaces"]) {
        const Eigen::VectorXd row = json_vector(h, "body.halfspaces");
        if (row.size() < 2)
          throw ParseError("body.halfspaces: entries are [a1..ap, b]");
        Halfspace hs;
        hs.normal = row.head(row.size() - 1);
        hs.offset = row[row.size() - 1];
        cfg.body.halfspaces.push_back(std::move(hs));
      }
    }
  }
  if (j.contains("potential")) {
    const json& p = j["potential"];
    reject_unknown(p, "potential", {"mean", "precision"});
    if (p.contains("mean")) cfg.potential.mean = json_vector(p["mean"], "potential.mean");
    if (p.contains("precision"))
      cfg.potential.precision = json_matrix(p["precision"], "potential.precision");
  }
  if (j.contains("penalty")) {
    const json& p = j["penalty"];
    reject_unknown(p, "penalty", {"kind", "q", "lambda"});
    if (p.contains("kind")) {
      const std::string k = p["kind"].get<std::string>();
      if (k == "euclidean") cfg.penalty_kind = PenaltyKind::Euclidean;
      else if (k == "bregman") cfg.penalty_kind = PenaltyKind::Bregman;
      else if (k == "gauge") cfg.penalty_kind = PenaltyKind::Gauge;
      else throw ParseError("penalty.kind must be euclidean|bregman|gauge");
    }
    if (p.contains("q")) cfg.penalty_Q = json_matrix(p["q"], "penalty.q");
    if (p.contains("lambda")) {
      const LambdaRule rule = json_lambda_rule(p["lambda"], "penalty.lambda");
      for (Algorithm a : {Algorithm::CLMC, Algorithm::CKLMC, Algorithm::CRLMC,
                          Algorithm::CRKLMC})
        cfg.lambda_rules[a] = rule;
    }
    for (const auto& [k, v] : p.items())
      if (k.rfind("lambda_", 0) == 0)
        cfg.lambda_rules[algorithm_from_string(k.substr(7))] =
            json_lambda_rule(v, "penalty." + k);
  }
  if (j.contains("run")) {
    const json& r = j["run"];
    reject_unknown(r, "run",
                   {"algorithms", "h", "inside_scale", "n", "samples",
                    "seeds", "outputs", "svg"});
    if (r.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : r["algorithms"])
        cfg.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    }
    if (r.contains("h")) cfg.h = r["h"].get<double>();
    if (r.contains("inside_scale")) cfg.inside_scale = r["inside_scale"].get<double>();
    if (r.contains("n")) cfg.n = r["n"].get<int>();
    if (r.contains("samples")) cfg.samples = r["samples"].get<int>();
    if (r.contains("seeds")) {
      cfg.seeds.clear();
      for (const auto& s : r["seeds"])
        cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    if (r.contains("outputs")) cfg.outputs = r["outputs"].get<std::string>();
    if (r.contains("svg")) cfg.emit_svg = r["svg"].get<bool>();
  }

  const auto defaults = std::map<Algorithm, double>{
      {Algorithm::CLMC, 0.25},
      {Algorithm::CRLMC, 0.25},
      {Algorithm::CKLMC, 0.3},
      {Algorithm::CRKLMC, 0.375}};
  for (const auto& [a, expo] : defaults)
    if (!cfg.lambda_rules.count(a))
      cfg.lambda_rules[a] = LambdaRule{true, expo};

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return parse_config_json(text);
  return parse_config_text(text);
}

}  // namespace penlmc

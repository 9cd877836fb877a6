#include "fsnet/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fsnet {

ConfigError::ConfigError(int line, int column, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

struct Cursor {
  int line;
  int col;
};

[[noreturn]] void fail(Cursor at, const std::string& msg) {
  throw ConfigError(at.line, at.col, msg);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& tok, Cursor at) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail(at, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) fail(at, "expected a number, got '" + tok + "'");
  return v;
}

int to_int(double v, Cursor at) {
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(at, "expected an integer");
  return int(v);
}

int parse_int(const std::string& tok, Cursor at) {
  const double v = parse_num(tok, at);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    fail(at, "expected an integer, got '" + tok + "'");
  return int(v);
}

bool parse_bool(const std::string& tok, Cursor at) {
  if (tok == "1" || tok == "true" || tok == "yes") return true;
  if (tok == "0" || tok == "false" || tok == "no") return false;
  fail(at, "expected a boolean (true/false), got '" + tok + "'");
}

std::vector<double> parse_num_list(const std::string& val, Cursor at) {
  std::istringstream ss(val);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_num(tok, at));
  if (out.empty()) fail(at, "expected one or more numbers");
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section;  // "", "graph", "weight", "drift", "run"
  bool saw_version = false;
  bool saw_inline = false;

  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const int col = int(raw.find_first_not_of(" \t")) + 1;
    const Cursor at{lineno, col};

    if (line.front() == '[') {
      if (line.back() != ']') fail(at, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "graph" && section != "weight" && section != "drift" &&
          section != "run")
        fail(at, "unknown section [" + section + "]");
      if (section != "run") saw_inline = true;
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(at, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(at, "empty key");
    if (val.empty()) fail(at, "empty value for '" + key + "'");
    const Cursor vat{lineno, col + int(eq) + 1};

    if (section.empty()) {
      if (key == "version") {
        if (parse_int(val, vat) != 1) fail(vat, "unsupported version '" + val + "'");
        saw_version = true;
      } else if (key == "preset") {
        cfg.preset_name = val;
      } else if (key == "outdir") {
        cfg.outdir = val;
      } else if (key == "emit") {
        std::istringstream ss(val);
        std::string tok;
        while (ss >> tok) {
          if (tok != "trajectory" && tok != "report" && tok != "plotdata" &&
              tok != "summary")
            fail(vat, "unknown emit target '" + tok + "'");
          cfg.emit.push_back(tok);
        }
      } else {
        fail(at, "unknown top-level key '" + key + "'");
      }
    } else if (section == "graph") {
      if (key == "nodes") {
        cfg.nodes = parse_int(val, vat);
        if (cfg.nodes < 3) fail(vat, "nodes must be >= 3");
      } else if (key == "edge") {
        const auto nums = parse_num_list(val, vat);
        if (nums.size() != 3) fail(vat, "edge needs 'i j w'");
        const int i = to_int(nums[0], vat);
        const int j = to_int(nums[1], vat);
        if (i < 1 || j < 1) fail(vat, "edge endpoints are 1-based");
        cfg.edges.push_back({i - 1, j - 1, nums[2]});
      } else if (key == "dynamic_edge") {
        const auto nums = parse_num_list(val, vat);
        if (nums.size() != 2) fail(vat, "dynamic_edge needs 'i j'");
        const int i = to_int(nums[0], vat);
        const int j = to_int(nums[1], vat);
        if (i < 1 || j < 1) fail(vat, "edge endpoints are 1-based");
        cfg.dynamic_edge = {i - 1, j - 1};
      } else {
        fail(at, "unknown key '" + key + "' in [graph]");
      }
    } else if (section == "weight") {
      if (key == "w_star")
        cfg.w_star = parse_num(val, vat);
      else if (key == "alpha1")
        cfg.alpha1 = parse_num(val, vat);
      else if (key == "alpha2")
        cfg.alpha2 = parse_num(val, vat);
      else if (key == "alpha3") {
        if (!cfg.cubic) cfg.cubic = CubicTerms{0.0, 0.0};
        cfg.cubic->alpha3 = parse_num(val, vat);
      } else if (key == "alpha4") {
        if (!cfg.cubic) cfg.cubic = CubicTerms{0.0, 0.0};
        cfg.cubic->alpha4 = parse_num(val, vat);
      } else if (key == "uses_y")
        cfg.uses_y = parse_bool(val, vat);
      else
        fail(at, "unknown key '" + key + "' in [weight]");
    } else if (section == "drift") {
      if (key == "kind") {
        if (val == "constant")
          cfg.drift.kind = DriftKind::Constant;
        else if (val == "quadratic_a")
          cfg.drift.kind = DriftKind::QuadraticA;
        else if (val == "linear_a")
          cfg.drift.kind = DriftKind::LinearA;
        else
          fail(vat, "unknown drift kind '" + val + "'");
      } else if (key == "k1")
        cfg.drift.k1 = parse_num(val, vat);
      else if (key == "beta")
        cfg.drift.beta = parse_num(val, vat);
      else
        fail(at, "unknown key '" + key + "' in [drift]");
    } else {  // [run]
      if (key == "epsilon")
        cfg.epsilon = parse_num(val, vat);
      else if (key == "x0")
        cfg.x0 = parse_num_list(val, vat);
      else if (key == "y0")
        cfg.y0 = parse_num(val, vat);
      else if (key == "dt")
        cfg.dt = parse_num(val, vat);
      else if (key == "t_end")
        cfg.t_end = parse_num(val, vat);
      else if (key == "e_A")
        cfg.e_A = parse_num(val, vat);
      else if (key == "record_stride") {
        cfg.record_stride = parse_int(val, vat);
        if (*cfg.record_stride < 1) fail(vat, "record_stride must be >= 1");
      } else if (key == "method") {
        if (val != "euler" && val != "rk4" && val != "canard_aware")
          fail(vat, "unknown method '" + val + "'");
        cfg.method = val;
      } else
        fail(at, "unknown key '" + key + "' in [run]");
    }
  }

  if (!saw_version) throw ConfigError(1, 1, "missing 'version=1'");
  if (cfg.preset_name && saw_inline)
    throw ConfigError(1, 1,
                      "config must either name a preset or describe the "
                      "model inline, not both");
  if (!cfg.preset_name && !saw_inline)
    throw ConfigError(1, 1, "config names no preset and describes no model");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

Scenario build_inline(const RunConfig& cfg) {
  if (cfg.nodes < 3)
    throw std::invalid_argument("inline model: [graph] nodes missing");
  if (!cfg.dynamic_edge)
    throw std::invalid_argument("inline model: dynamic_edge missing");
  if (!cfg.x0) throw std::invalid_argument("inline model: [run] x0 missing");
  if (int(cfg.x0->size()) != cfg.nodes)
    throw std::invalid_argument("inline model: x0 needs one value per node");
  Graph g(cfg.nodes, cfg.edges, *cfg.dynamic_edge);
  DynamicWeight w(cfg.w_star, cfg.alpha1, cfg.alpha2, cfg.cubic, cfg.uses_y);
  Scenario s{"inline",
             ModelParams(std::move(g), std::move(w), cfg.epsilon, cfg.drift),
             {},
             {}};
  s.ic.x = Eigen::Map<const Eigen::VectorXd>(cfg.x0->data(), cfg.x0->size());
  s.ic.y = cfg.y0.value_or(0.0);
  return s;
}

}  // namespace

RunPlan materialize(const RunConfig& cfg) {
  Scenario s = cfg.preset_name ? preset(*cfg.preset_name) : build_inline(cfg);

  if (cfg.preset_name) {
    if (cfg.x0) {
      if (int(cfg.x0->size()) != s.model.graph.node_count())
        throw std::invalid_argument("x0 needs one value per node");
      s.ic.x = Eigen::Map<const Eigen::VectorXd>(cfg.x0->data(), cfg.x0->size());
    }
    if (cfg.y0) s.ic.y = *cfg.y0;
  }
  if (cfg.dt) s.cfg.dt = *cfg.dt;
  if (cfg.t_end) s.cfg.t_end = *cfg.t_end;
  if (cfg.e_A) s.cfg.e_A = *cfg.e_A;
  if (cfg.record_stride) s.cfg.record_stride = *cfg.record_stride;

  bool use_canard = s.canard_aware_default;
  if (cfg.method) {
    if (*cfg.method == "euler") {
      s.cfg.method = Method::ForwardEuler;
      use_canard = false;
    } else if (*cfg.method == "rk4") {
      s.cfg.method = Method::RK4;
      use_canard = false;
    } else {  // canard_aware
      s.cfg.method = Method::ForwardEuler;
      use_canard = true;
    }
  }
  validate(s.cfg);

  std::vector<std::string> emit =
      cfg.emit.empty() ? std::vector<std::string>{"trajectory", "report",
                                                  "plotdata", "summary"}
                       : cfg.emit;
  return RunPlan{std::move(s), use_canard, cfg.outdir, std::move(emit)};
}

}  // namespace fsnet

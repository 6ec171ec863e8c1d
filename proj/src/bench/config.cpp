#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rfm/bench.hpp"
#include "rfm/error.hpp"

namespace rfm::bench {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorCode::ConfigError, "key '" + key + "' = '" + value + "': expected " + expected);
}

double to_double(const std::string& key, const std::string& v) {
  const std::string s = boost::trim_copy(v);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad(key, v, "a number");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  const std::string s = boost::trim_copy(v);
  long long out = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad(key, v, "an integer");
  return out;
}

/// "4" -> {4,4,4}; "2,2,1" -> {2,2,1}.
std::array<int, 3> to_triple(const std::string& key, const std::string& v) {
  std::vector<std::string> parts;
  boost::split(parts, v, boost::is_any_of(",x"));
  if (parts.size() != 1 && parts.size() != 2 && parts.size() != 3) bad(key, v, "1 to 3 comma-separated integers");
  std::array<int, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const long long x = to_int(key, parts[std::min(i, parts.size() - 1)]);
    if (x < 1 || x > 100000) bad(key, v, "positive counts");
    out[i] = static_cast<int>(x);
  }
  if (parts.size() == 2) out[2] = 1;
  return out;
}

}  // namespace

const char* solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::ipn: return "ipn";
    case SolverKind::amipn: return "amipn";
    case SolverKind::lm: return "lm";
    case SolverKind::gauss_newton: return "gauss_newton";
  }
  return "unknown";
}

SolverKind parse_solver(const std::string& name) {
  const std::string s = boost::to_lower_copy(boost::trim_copy(name));
  if (s == "ipn") return SolverKind::ipn;
  if (s == "amipn") return SolverKind::amipn;
  if (s == "lm") return SolverKind::lm;
  if (s == "gauss_newton" || s == "gn") return SolverKind::gauss_newton;
  throw Error(ErrorCode::ConfigError, "unknown solver '" + name + "' (ipn, amipn, lm, gauss_newton)");
}

void ExperimentConfig::validate() const {
  const auto names = list_problems();
  if (std::find(names.begin(), names.end(), problem) == names.end())
    throw Error(ErrorCode::ConfigError, "unknown problem '" + problem + "'");
  // Also rejects unknown problem parameters; axes beyond the problem dimension are ignored.
  const int dim = make_problem(problem, params).dim;
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 1) throw Error(ErrorCode::ConfigError, "N must be positive");
    if (q[a] < 2) throw Error(ErrorCode::ConfigError, "Q must be at least 2");
    if (eval_grid[a] < 1) throw Error(ErrorCode::ConfigError, "eval_grid must be positive");
  }
  if (j < 1) throw Error(ErrorCode::ConfigError, "J must be positive");
  if (feature_range < 0.0) throw Error(ErrorCode::ConfigError, "feature_range must be positive (or 0 for default)");
  solver_params.validate();
}

disc::DiscretizationConfig ExperimentConfig::discretization() const {
  disc::DiscretizationConfig d;
  d.n = n;
  d.q = q;
  d.j = j;
  d.feature_range = feature_range;
  d.pou = pou;
  d.seed = seed;
  return d;
}

ExperimentConfig apply_keys(ExperimentConfig c, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    const std::string v = boost::trim_copy(value);
    auto& sp = c.solver_params;
    if (key == "problem") c.problem = v;
    else if (key == "N") c.n = to_triple(key, v);
    else if (key == "Q") c.q = to_triple(key, v);
    else if (key == "J") {
      const long long x = to_int(key, v);
      if (x < 1) bad(key, v, "a positive integer");
      c.j = static_cast<std::size_t>(x);
    } else if (key == "solver") c.solver = parse_solver(v);
    else if (key == "seed") {
      const long long x = to_int(key, v);
      if (x < 0) bad(key, v, "a non-negative integer");
      c.seed = static_cast<std::uint64_t>(x);
      sp.seed = c.seed;
    } else if (key == "feature_range") c.feature_range = to_double(key, v);
    else if (key == "pou") {
      if (v == "a") c.pou = disc::Pou::a;
      else if (v == "b") c.pou = disc::Pou::b;
      else bad(key, v, "a or b");
    } else if (key == "eval_grid") c.eval_grid = to_triple(key, v);
    else if (key == "out") c.output = v;
    else if (key == "scaling") {
      if (v == "c100" || v == "row_scale_c100") c.scaling = nls::Scaling::row_scale_c100;
      else if (v == "none") c.scaling = nls::Scaling::none;
      else bad(key, v, "c100 or none");
    } else if (key == "gamma") sp.gamma = to_double(key, v);
    else if (key == "eta") sp.eta = to_double(key, v);
    else if (key == "epsilon") sp.epsilon = to_double(key, v);
    else if (key == "max_outer") sp.max_outer = static_cast<int>(to_int(key, v));
    else if (key == "m_max") sp.m_max = static_cast<int>(to_int(key, v));
    else if (key == "tau_rel") sp.tau_rel = to_double(key, v);
    else if (key == "lsqr_max_iter") {
      const long long x = to_int(key, v);
      if (x < 0) bad(key, v, "a non-negative integer");
      sp.lsqr_max_iter = static_cast<std::size_t>(x);
    } else if (key == "alpha_tol") sp.line_search.alpha_tol = to_double(key, v);
    else if (key == "ls_max_evals") sp.line_search.max_evals = static_cast<int>(to_int(key, v));
    else if (key.rfind("param.", 0) == 0 && key.size() > 6) c.params[key.substr(6)] = to_double(key, v);
    else throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  }
  return c;
}

std::vector<KeyValues> parse_config_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config syntax: ") + e.what());
  }
  KeyValues shared;
  std::vector<KeyValues> experiments;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      shared[name] = node.data();
      continue;
    }
    if (name.rfind("experiment", 0) != 0)
      throw Error(ErrorCode::ConfigError, "unknown section [" + name + "]; sections must start with 'experiment'");
    KeyValues kv;
    for (const auto& [k, leaf] : node) kv[k] = leaf.data();
    experiments.push_back(std::move(kv));
  }
  if (experiments.empty()) return {shared};
  for (auto& e : experiments)
    for (const auto& [k, v] : shared) e.emplace(k, v);
  return experiments;
}

std::vector<KeyValues> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace rfm::bench

#include "gibbswave/config.hpp"

#include "internal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gibbswave {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "' expects a number, got '" +
                       v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw config_error("config: key '" + key + "' expects an integer, got '" +
                       v + "'");
  return x;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty())
      throw config_error("config: key '" + key +
                         "' has an empty list element");
    out.push_back(parse_int(key, tok));
  }
  if (out.empty())
    throw config_error("config: key '" + key + "' expects a non-empty list");
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config: line " + std::to_string(lineno) +
                         " is not of the form key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw config_error("config: line " + std::to_string(lineno) +
                         " has an empty key or value");
    if (!seen.insert(key).second)
      throw config_error("config: duplicate key '" + key + "'");

    if (key == "alpha") cfg.alpha = parse_double(key, val);
    else if (key == "p") cfg.p = parse_double(key, val);
    else if (key == "s") cfg.s = parse_double(key, val);
    else if (key == "n_modes") cfg.n_modes = parse_int(key, val);
    else if (key == "n_quad") cfg.n_quad = parse_int(key, val);
    else if (key == "dt") cfg.dt = parse_double(key, val);
    else if (key == "t_final") cfg.t_final = parse_double(key, val);
    else if (key == "record_every") cfg.record_every = parse_int(key, val);
    else if (key == "n_ensemble") cfg.n_ensemble = parse_int(key, val);
    else if (key == "n_samples") cfg.n_samples = parse_int(key, val);
    else if (key == "n_trials") cfg.n_trials = parse_int(key, val);
    else if (key == "t_nodes") cfg.t_nodes = parse_int(key, val);
    else if (key == "min_count") cfg.min_count = parse_int(key, val);
    else if (key == "q_max") cfg.q_max = parse_int(key, val);
    else if (key == "measure") cfg.measure = val;
    else if (key == "n_list") cfg.n_list = parse_int_list(key, val);
    else if (key == "n_ref") cfg.n_ref = parse_int(key, val);
    else if (key == "partition_n_list")
      cfg.partition_n_list = parse_int_list(key, val);
    else if (key == "observe_spacetime")
      cfg.observe_spacetime = parse_int(key, val);
    else if (key == "dt_refine") cfg.dt_refine = parse_int(key, val);
    else if (key == "nonlinear") cfg.nonlinear = parse_int(key, val);
    else if (key == "workers") cfg.workers = parse_int(key, val);
    else
      throw config_error("config: unknown key '" + key + "'");
  }
  return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw config_error("config: cannot open file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

void Config::validate() const {
  if (!(alpha > 0.0 && alpha < 3.0))
    throw config_error(
        "config: alpha must lie in (0,3) so the admissible window "
        "max(4,2alpha) < p < 6 is nonempty, got " +
        std::to_string(alpha));
  double p_lo = std::max(4.0, 2.0 * alpha);
  if (!(p > p_lo && p < 6.0))
    throw config_error(
        "config: p violates max(4,2alpha) < p < 6 (alpha = " +
        std::to_string(alpha) + " requires p in (" + std::to_string(p_lo) +
        ",6), got " + std::to_string(p) + ")");
  if (!(s > 0.0 && s < 0.5))
    throw config_error("config: s must lie in (0,1/2), got " +
                       std::to_string(s));
  if (n_modes < 1) throw config_error("config: n_modes must be >= 1");
  if (n_quad < 0) throw config_error("config: n_quad must be >= 0");
  if (n_quad > 0 && n_quad < 2 * n_modes)
    throw config_error(
        "config: n_quad must be 0 (default) or >= 2*n_modes for a stable "
        "Gram matrix");
  if (!(dt > 0.0)) throw config_error("config: dt must be > 0");
  if (!(t_final >= 0.0)) throw config_error("config: t_final must be >= 0");
  if (record_every < 1)
    throw config_error("config: record_every must be >= 1");
  if (n_ensemble < 2) throw config_error("config: n_ensemble must be >= 2");
  if (n_samples < 100) throw config_error("config: n_samples must be >= 100");
  if (n_trials < 1) throw config_error("config: n_trials must be >= 1");
  if (t_nodes < 16) throw config_error("config: t_nodes must be >= 16");
  if (min_count < 2) throw config_error("config: min_count must be >= 2");
  if (q_max < 2 || q_max > 16 || q_max % 2 != 0)
    throw config_error("config: q_max must be even and within [2,16]");
  if (measure != "gibbs" && measure != "gaussian")
    throw config_error("config: measure must be 'gibbs' or 'gaussian', got '" +
                       measure + "'");
  for (int n : n_list)
    if (n < 1) throw config_error("config: n_list entries must be >= 1");
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw config_error("config: n_list must be increasing");
  if (n_ref <= n_list.back())
    throw config_error("config: n_ref must exceed every n_list entry");
  for (int n : partition_n_list)
    if (n < 1)
      throw config_error("config: partition_n_list entries must be >= 1");
  if (!std::is_sorted(partition_n_list.begin(), partition_n_list.end()) ||
      partition_n_list.size() < 2)
    throw config_error(
        "config: partition_n_list must be increasing with >= 2 entries");
  if (observe_spacetime != 0 && observe_spacetime != 1)
    throw config_error("config: observe_spacetime must be 0 or 1");
  if (dt_refine != 0 && dt_refine != 1)
    throw config_error("config: dt_refine must be 0 or 1");
  if (nonlinear != 0 && nonlinear != 1)
    throw config_error("config: nonlinear must be 0 or 1");
  if (workers < 0) throw config_error("config: workers must be >= 0");
}

std::map<std::string, std::string> Config::snapshot() const {
  std::map<std::string, std::string> m;
  m["alpha"] = detail::fmt17(alpha);
  m["p"] = detail::fmt17(p);
  m["s"] = detail::fmt17(s);
  m["n_modes"] = std::to_string(n_modes);
  m["n_quad"] = std::to_string(n_quad);
  m["dt"] = detail::fmt17(dt);
  m["t_final"] = detail::fmt17(t_final);
  m["record_every"] = std::to_string(record_every);
  m["n_ensemble"] = std::to_string(n_ensemble);
  m["n_samples"] = std::to_string(n_samples);
  m["n_trials"] = std::to_string(n_trials);
  m["t_nodes"] = std::to_string(t_nodes);
  m["min_count"] = std::to_string(min_count);
  m["q_max"] = std::to_string(q_max);
  m["measure"] = measure;
  m["n_list"] = join_ints(n_list);
  m["n_ref"] = std::to_string(n_ref);
  m["partition_n_list"] = join_ints(partition_n_list);
  m["observe_spacetime"] = std::to_string(observe_spacetime);
  m["dt_refine"] = std::to_string(dt_refine);
  m["nonlinear"] = std::to_string(nonlinear);
  m["workers"] = std::to_string(workers);
  return m;
}

}  // namespace gibbswave

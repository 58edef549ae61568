#include "memsfield/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "memsfield/io.hpp"

namespace memsfield {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int r = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ',')) out.push_back(to_int(key, trim(cur)));
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

std::vector<std::string> to_str_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(v);
  while (std::getline(in, cur, ';')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError("config: '" + key + "' must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& content) {
  RunConfig cfg;
  std::istringstream in(content);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known = {
          "params", "profile", "mesh",   "solver",
          "tolerances", "verify", "study", "output"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError("config: unknown section '" + section + "'");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    const std::string full = section + "." + key;

    if (full == "params.L") cfg.params.L = to_double(full, value);
    else if (full == "params.H") cfg.params.H = to_double(full, value);
    else if (full == "params.d") cfg.params.d = to_double(full, value);
    else if (full == "params.V") cfg.params.V = to_double(full, value);
    else if (full == "params.sigma1") cfg.params.sigma1 = to_double(full, value);
    else if (full == "params.sigma2") cfg.params.sigma2 = to_double(full, value);
    else if (full == "profile.name") cfg.profile_name = value;
    else if (full == "profile.csv") cfg.profile_csv = value;
    else if (full == "profile.nx") cfg.nx = to_int(full, value);
    else if (full == "mesh.n1") cfg.n1 = to_int(full, value);
    else if (full == "mesh.n2") cfg.n2 = to_int(full, value);
    else if (full == "solver.cg_tol") cfg.cg_tol = to_double(full, value);
    else if (full == "solver.max_iter") cfg.max_iter = to_int(full, value);
    else if (full == "tolerances.eps_sign") cfg.eps_sign = to_double(full, value);
    else if (full == "tolerances.eps_touch") cfg.eps_touch = to_double(full, value);
    else if (full == "verify.flux_tol") cfg.flux_tol = to_double(full, value);
    else if (full == "verify.identity_rel_tol")
      cfg.identity_rel_tol = to_double(full, value);
    else if (full == "verify.identity_abs_tol")
      cfg.identity_abs_tol = to_double(full, value);
    else if (full == "study.levels") cfg.levels = to_int_list(full, value);
    else if (full == "study.schedule") cfg.schedule = to_int_list(full, value);
    else if (full == "study.direction") cfg.direction = value;
    else if (full == "study.kappa") cfg.kappa = to_double(full, value);
    else if (full == "study.profiles") cfg.profiles = to_str_list(value);
    else if (full == "output.dir") cfg.out_dir = value;
    else
      throw ConfigError("config: unknown key '" + full + "'");
  }

  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.nx < 4) throw ConfigError("config: 'profile.nx' must be >= 4");
  if (cfg.n1 < 1 || cfg.n2 < 1)
    throw ConfigError("config: mesh cell counts must be >= 1");
  require_positive(cfg.cg_tol, "solver.cg_tol");
  if (cfg.max_iter < 1)
    throw ConfigError("config: 'solver.max_iter' must be >= 1");
  require_positive(cfg.kappa, "study.kappa");
  for (int l : cfg.levels)
    if (l < 4) throw ConfigError("config: study levels must be >= 4");
  for (int n : cfg.schedule)
    if (n < 1) throw ConfigError("config: schedule entries must be >= 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

}  // namespace memsfield

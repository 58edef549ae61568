#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "memsfield/geometry.hpp"

namespace memsfield {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run configuration, parsed from a strict TOML-style key/value file.
/// Unknown sections or keys are rejected and named in the error.
struct RunConfig {
  PhysicalParams params;

  // [profile]
  std::string profile_name = "flat";  // builtin name, e.g. "cosine(-0.5)"
  std::string profile_csv;            // takes precedence when non-empty
  int nx = 64;

  // [mesh]
  int n1 = 64;
  int n2 = 64;

  // [solver]
  double cg_tol = 1e-10;
  int max_iter = 50000;

  // [tolerances]
  double eps_sign = -1.0;  // negative selects scale-aware defaults
  double eps_touch = -1.0;

  // [verify]
  double flux_tol = 0.1;
  double identity_rel_tol = 0.1;
  double identity_abs_tol = 1e-12;

  // [study]
  std::vector<int> levels = {16, 32, 64, 128};
  std::vector<int> schedule = {1, 2, 4, 8, 16};
  std::string direction = "cosine(-0.5)";
  double kappa = 10.0;
  std::vector<std::string> profiles = {"flat", "cosine(-0.5)", "cosine(-0.25)",
                                       "parabola_touch", "bump(0.3)"};

  // [output]
  std::string out_dir = "out";
};

RunConfig parse_config(const std::string& content);
RunConfig load_config(const std::string& path);

}  // namespace memsfield

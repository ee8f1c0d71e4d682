#ifndef GAPSCREEN_CONFIG_HPP
#define GAPSCREEN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "gapscreen/data_io.hpp"
#include "gapscreen/problem.hpp"
#include "gapscreen/screening.hpp"
#include "gapscreen/solvers.hpp"

namespace gapscreen {

// A config file problem whose message names the offending key.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct run_config {
  // problem block
  std::string kind;
  double lambda = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 0.0;
  double box_upper = 0.0;  // C
  double radius = 0.0;     // r
  double scale = 1.0;      // elastic ball scale
  bool improved = false;   // hinge rule sqrt(2) variant
  std::vector<index_t> groups;   // group lengths
  std::vector<double> group_rho; // per-group rho_g
  // data block: exactly one source
  std::string data_path;
  std::optional<synthetic_spec> synthetic;
  // solver block
  solver_config solver;
  // output block
  std::string trace_path;
  std::string report_path;
};

run_config parse_run_config(const std::string& json_text);
run_config load_run_config(const std::string& path);
std::string serialize_run_config(const run_config& cfg);

struct built_problem {
  problem_spec problem;
  rule_kind rule = rule_kind::none;
  vec x_true;  // planted vector for synthetic regression kinds (may be empty)
};

built_problem build_problem(const run_config& cfg);

const std::vector<std::string>& known_problem_kinds();

}  // namespace gapscreen

#endif  // GAPSCREEN_CONFIG_HPP

#ifndef GAPSCREEN_HARNESS_HPP
#define GAPSCREEN_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "gapscreen/config.hpp"

namespace gapscreen {

struct cli_overrides {
  std::optional<std::uint64_t> seed;
  bool no_screening = false;
};

// exit codes: 0 success, 1 verification failure, 2 config error,
// 3 runtime numerical error
int cmd_solve(const std::string& config_path, const cli_overrides& ov,
              std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config_path, const cli_overrides& ov,
                std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& config_path, const cli_overrides& ov,
               std::ostream& out, std::ostream& err);

// Comparison of the two L1-ball screening parameterizations on one shared
// pairwise Frank-Wolfe trajectory (the barycentric solve), with per-event
// rows and the per-variant timing table measured on real screened runs.
struct compare_row {
  std::uint64_t iter = 0;
  double wolfe_gap_simplex = 0.0;
  double wolfe_gap_l1 = 0.0;
  double active_frac_l1 = 1.0;
  double active_frac_simplex = 1.0;
};

struct compare_outcome {
  std::vector<compare_row> rows;
  double max_gap_deviation = 0.0;
  std::optional<std::uint64_t> first_fire_simplex;
  std::optional<std::uint64_t> first_fire_l1;
  // timing runs: elapsed ms for {simplex, l1} x {no screening, screening}
  double elapsed_simplex_plain = 0.0;
  double elapsed_simplex_screen = 0.0;
  double elapsed_l1_plain = 0.0;
  double elapsed_l1_screen = 0.0;
};

compare_outcome run_comparison(const run_config& cfg);

}  // namespace gapscreen

#endif  // GAPSCREEN_HARNESS_HPP

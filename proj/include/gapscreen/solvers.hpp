#ifndef GAPSCREEN_SOLVERS_HPP
#define GAPSCREEN_SOLVERS_HPP

#include <functional>
#include <iosfwd>

#include "gapscreen/screening.hpp"

namespace gapscreen {

enum class algorithm_kind {
  pairwise_frank_wolfe,
  proximal_gradient,
  coordinate_descent_box
};

struct solver_config {
  algorithm_kind algorithm = algorithm_kind::pairwise_frank_wolfe;
  std::uint64_t max_iter = 100000;
  double gap_tol = 1e-7;
  bool screening_enabled = true;
  std::uint64_t screening_period = 10;
  double safety_slack = 0.0;  // tau; negative values are a test hook only
  std::uint64_t seed = 0;
};

struct trace_row {
  std::uint64_t iter = 0;
  double elapsed_ms = 0.0;
  double primal = 0.0;
  double gap = 0.0;
  std::optional<double> wolfe_gap;
  index_t n_active = 0;
  index_t n_fixed_zero = 0;
  index_t n_fixed_upper = 0;
};

struct solve_trace {
  std::vector<trace_row> rows;
  // header: iter,elapsed_ms,primal,gap,wolfe_gap,n_active,n_fixed_zero,
  // n_fixed_upper. elapsed_ms is wall clock and excluded from determinism
  // comparisons; pass include_elapsed=false to blank it.
  void write_csv(std::ostream& os, bool include_elapsed = true) const;
};

struct solve_result {
  vec x;  // original coordinates, fixed variables back-filled from the mask
  double primal = 0.0;
  double gap = 0.0;
  std::optional<double> wolfe_gap;
  std::uint64_t iterations = 0;
  double elapsed_ms = 0.0;
  solve_trace trace;
  screen_mask mask;
  std::vector<rule_report> reports;
};

// Callbacks a concrete algorithm plugs into the driver. `step` advances one
// iteration on the current view. `rebuild` runs after screening shrank the
// view: `kept` lists the surviving old view columns in order and `x` has
// already been remapped; the algorithm refreshes caches and may rescale x
// (simplex mass renormalization). `cheap_gap` exposes a per-iteration gap
// estimate when the algorithm computes one anyway (Frank-Wolfe's gap).
struct solver_callbacks {
  std::function<void(const problem_spec&, vec&)> step;
  std::function<void(const problem_spec&, const std::vector<index_t>&, vec&)>
      rebuild;
  std::function<std::optional<double>()> cheap_gap;
  // Invoked at every certificate refresh with the view, the fresh iterate
  // and its certificate; diagnostic consumers (the comparison harness)
  // evaluate extra rules here without touching the solve.
  std::function<void(const problem_spec&, const iterate&,
                     const gap_certificate&, std::uint64_t)>
      observer;
};

using event_observer =
    std::function<void(const problem_spec&, const iterate&,
                       const gap_certificate&, std::uint64_t)>;

solve_result dynamic_screening_driver(const problem_spec& full,
                                      rule_kind rule,
                                      const solver_config& cfg,
                                      solver_callbacks callbacks, vec x0);

solve_result pairwise_frank_wolfe(const problem_spec& p, rule_kind rule,
                                  const solver_config& cfg,
                                  event_observer observer = nullptr);
solve_result proximal_gradient(const problem_spec& p, rule_kind rule,
                               const solver_config& cfg,
                               event_observer observer = nullptr);
solve_result coordinate_descent_box(const problem_spec& p, rule_kind rule,
                                    const solver_config& cfg,
                                    event_observer observer = nullptr);

// dispatches on cfg.algorithm
solve_result solve(const problem_spec& p, rule_kind rule,
                   const solver_config& cfg,
                   event_observer observer = nullptr);

}  // namespace gapscreen

#endif  // GAPSCREEN_SOLVERS_HPP

#include "gapscreen/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "gapscreen/reference.hpp"

namespace gapscreen {

namespace {

run_config load_with_overrides(const std::string& path,
                               const cli_overrides& ov) {
  run_config cfg = load_run_config(path);
  if (ov.seed) {
    cfg.solver.seed = *ov.seed;
    if (cfg.synthetic) cfg.synthetic->seed = *ov.seed;
  }
  if (ov.no_screening) cfg.solver.screening_enabled = false;
  return cfg;
}

void write_outputs(const run_config& cfg, const solve_result& res,
                   std::ostream& err) {
  if (!cfg.trace_path.empty()) {
    std::ofstream tf(cfg.trace_path);
    if (!tf) {
      err << "warning: cannot write trace to " << cfg.trace_path << "\n";
    } else {
      res.trace.write_csv(tf);
    }
  }
  if (!cfg.report_path.empty()) {
    std::ofstream rf(cfg.report_path);
    if (!rf) {
      err << "warning: cannot write report to " << cfg.report_path << "\n";
    } else {
      write_reports_csv(rf, res.reports);
    }
  }
}

void print_summary(const run_config& cfg, const solve_result& res,
                   std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%s: gap %.3e, %llu iters, %.1f ms, active %lld/%lld",
                cfg.kind.c_str(), res.gap,
                static_cast<unsigned long long>(res.iterations),
                res.elapsed_ms, static_cast<long long>(res.mask.n_active()),
                static_cast<long long>(res.mask.n_original()));
  out << buf << "\n";
}

}  // namespace

int cmd_solve(const std::string& config_path, const cli_overrides& ov,
              std::ostream& out, std::ostream& err) {
  run_config cfg;
  built_problem bp = [&] {
    cfg = load_with_overrides(config_path, ov);
    return build_problem(cfg);
  }();
  solve_result res = solve(bp.problem, bp.rule, cfg.solver);
  write_outputs(cfg, res, err);
  print_summary(cfg, res, out);
  return 0;
}

// ---------------------------------------------------------------------------
// compare: the two L1-ball parameterizations on one shared trajectory

compare_outcome run_comparison(const run_config& cfg) {
  require(cfg.kind == "l1_ls", "compare requires problem.kind == l1_ls");
  built_problem l1 = build_problem(cfg);
  const double r = cfg.radius;
  const column_matrix& A = l1.problem.matrix();
  index_t n = A.cols();

  // barycentric lift: unit simplex over the 2n sign copies of r*A
  column_matrix A_bar = A.hstack_neg().scaled(r);
  problem_spec simplex_problem(
      A_bar, l1.problem.objective(), constraint_spec::simplex(2 * n));

  compare_outcome out;

  // Diagnostic pass: solve in the simplex parameterization with screening
  // off so the trajectory is untouched, and evaluate both rule families on
  // every certificate refresh. Both Wolfe gaps are computed on the same
  // underlying point, which is what makes them comparable.
  screen_mask mask_simplex(2 * n, A.rows());
  screen_mask mask_l1(n, A.rows());
  std::vector<index_t> ids_simplex(static_cast<std::size_t>(2 * n));
  std::vector<index_t> ids_l1(static_cast<std::size_t>(n));
  for (index_t i = 0; i < 2 * n; ++i)
    ids_simplex[static_cast<std::size_t>(i)] = i;
  for (index_t i = 0; i < n; ++i) ids_l1[static_cast<std::size_t>(i)] = i;

  solver_config diag_cfg = cfg.solver;
  diag_cfg.screening_enabled = false;

  auto observer = [&](const problem_spec& view, const iterate& it,
                      const gap_certificate& cert, std::uint64_t iter) {
    // simplex-rule pass on the lifted variables
    screen_context ctx_s{view,        it,
                         cert,        mask_simplex,
                         ids_simplex, cfg.solver.safety_slack,
                         iter};
    rule_report rep_s = screen_simplex(ctx_s);
    if (!rep_s.newly_fixed.empty()) {
      if (!out.first_fire_simplex) out.first_fire_simplex = iter;
      mask_simplex.commit(rep_s, A_bar);
    }
    // L1-rule pass on the pulled-back point
    vec x_l1 = from_barycentric(it.x, r);
    iterate it_l1 = make_iterate(l1.problem, x_l1);
    gap_certificate cert_l1 = certify(l1.problem, it_l1, iter);
    screen_context ctx_l{l1.problem, it_l1,
                         cert_l1,    mask_l1,
                         ids_l1,     cfg.solver.safety_slack,
                         iter};
    rule_report rep_l = screen_l1_constrained(ctx_l);
    if (!rep_l.newly_fixed.empty()) {
      if (!out.first_fire_l1) out.first_fire_l1 = iter;
      mask_l1.commit(rep_l, A);
    }
    compare_row row;
    row.iter = iter;
    row.wolfe_gap_simplex = cert.wolfe_gap.value_or(cert.duality_gap);
    row.wolfe_gap_l1 = cert_l1.wolfe_gap.value_or(cert_l1.duality_gap);
    row.active_frac_l1 = static_cast<double>(mask_l1.n_active()) /
                         static_cast<double>(n);
    row.active_frac_simplex =
        static_cast<double>(mask_simplex.n_active()) /
        static_cast<double>(2 * n);
    out.max_gap_deviation =
        std::max(out.max_gap_deviation,
                 std::abs(row.wolfe_gap_simplex - row.wolfe_gap_l1));
    out.rows.push_back(row);
  };

  pairwise_frank_wolfe(simplex_problem, rule_kind::none, diag_cfg, observer);

  // timing runs on real screened/unscreened solves
  solver_config timing = cfg.solver;
  timing.screening_enabled = false;
  out.elapsed_simplex_plain =
      pairwise_frank_wolfe(simplex_problem, rule_kind::simplex, timing)
          .elapsed_ms;
  out.elapsed_l1_plain =
      pairwise_frank_wolfe(l1.problem, rule_kind::l1_constrained, timing)
          .elapsed_ms;
  timing.screening_enabled = true;
  out.elapsed_simplex_screen =
      pairwise_frank_wolfe(simplex_problem, rule_kind::simplex, timing)
          .elapsed_ms;
  out.elapsed_l1_screen =
      pairwise_frank_wolfe(l1.problem, rule_kind::l1_constrained, timing)
          .elapsed_ms;
  return out;
}

int cmd_compare(const std::string& config_path, const cli_overrides& ov,
                std::ostream& out, std::ostream& err) {
  run_config cfg = load_with_overrides(config_path, ov);
  if (cfg.kind != "l1_ls")
    throw config_error("compare requires problem.kind == l1_ls");
  compare_outcome res = run_comparison(cfg);

  std::string merged_path = cfg.trace_path.empty()
                                ? std::string("compare.csv")
                                : cfg.trace_path;
  {
    std::ofstream mf(merged_path);
    if (!mf) {
      err << "warning: cannot write " << merged_path << "\n";
    } else {
      mf << "iter,gap,active_frac_l1,active_frac_simplex\n";
      char buf[128];
      for (const auto& row : res.rows) {
        std::snprintf(buf, sizeof(buf), "%llu,%.17g,%.17g,%.17g\n",
                      static_cast<unsigned long long>(row.iter),
                      row.wolfe_gap_simplex, row.active_frac_l1,
                      row.active_frac_simplex);
        mf << buf;
      }
    }
  }
  std::string timing_path = merged_path + ".timing.csv";
  {
    std::ofstream tf(timing_path);
    if (tf) {
      tf << "variant,screening,elapsed_ms\n";
      char buf[128];
      std::snprintf(buf, sizeof(buf), "simplex,off,%.3f\n",
                    res.elapsed_simplex_plain);
      tf << buf;
      std::snprintf(buf, sizeof(buf), "simplex,on,%.3f\n",
                    res.elapsed_simplex_screen);
      tf << buf;
      std::snprintf(buf, sizeof(buf), "l1,off,%.3f\n", res.elapsed_l1_plain);
      tf << buf;
      std::snprintf(buf, sizeof(buf), "l1,on,%.3f\n", res.elapsed_l1_screen);
      tf << buf;
    }
  }

  char buf[256];
  out << "variant    screening   elapsed_ms\n";
  std::snprintf(buf, sizeof(buf), "simplex    off         %10.3f\n",
                res.elapsed_simplex_plain);
  out << buf;
  std::snprintf(buf, sizeof(buf), "simplex    on          %10.3f\n",
                res.elapsed_simplex_screen);
  out << buf;
  std::snprintf(buf, sizeof(buf), "l1         off         %10.3f\n",
                res.elapsed_l1_plain);
  out << buf;
  std::snprintf(buf, sizeof(buf), "l1         on          %10.3f\n",
                res.elapsed_l1_screen);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "max wolfe-gap deviation between parameterizations: %.3e\n",
                res.max_gap_deviation);
  out << buf;
  if (res.first_fire_simplex)
    out << "simplex rule first fired at iter " << *res.first_fire_simplex
        << "\n";
  if (res.first_fire_l1)
    out << "l1 rule first fired at iter " << *res.first_fire_l1 << "\n";

  if (res.max_gap_deviation > 1e-10) {
    err << "wolfe gaps of the two parameterizations disagree\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& config_path, const cli_overrides& ov,
               std::ostream& out, std::ostream& err) {
  run_config cfg = load_with_overrides(config_path, ov);
  if (!cfg.synthetic)
    throw config_error("verify requires data.synthetic");
  built_problem bp = build_problem(cfg);
  solve_result res = solve(bp.problem, bp.rule, cfg.solver);
  write_outputs(cfg, res, err);

  reference::reference_solution ref =
      reference::solve_reference(bp.problem);
  double upper = res.mask.upper_value();
  auto violations =
      reference::check_safety(res.reports, ref.x_ref, upper);
  std::size_t n_fixed = 0;
  for (const auto& rep : res.reports) n_fixed += rep.newly_fixed.size();
  out << "verified " << n_fixed << " fixed decisions against reference (gap "
      << ref.gap_ref << ", " << ref.method << ")\n";
  if (violations.empty()) {
    out << "no violations\n";
    return 0;
  }
  for (const auto& v : violations) {
    err << "violation: iter " << v.iter << ", index " << v.index << ", rule "
        << v.rule_id << ", x_ref " << v.x_ref_value << "\n";
  }
  return 1;
}

}  // namespace gapscreen

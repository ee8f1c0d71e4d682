#ifndef GAPSCREEN_SCREENING_HPP
#define GAPSCREEN_SCREENING_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gapscreen/gaps.hpp"

namespace gapscreen {

enum class var_status : std::uint8_t { active, fixed_zero, fixed_upper };

struct fixed_entry {
  index_t index = 0;  // original variable index
  var_status status = var_status::fixed_zero;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct rule_report {
  std::string rule_id;
  std::uint64_t iter = 0;
  std::vector<fixed_entry> newly_fixed;
  // diagnostic margins for every tested column, in view order
  std::vector<double> tested_lhs;
  std::vector<double> tested_rhs;
};

// one CSV row per fixed index: rule_id,iter,index,status,lhs,rhs
void write_reports_csv(std::ostream& os,
                       const std::vector<rule_report>& reports);

// Per-variable screening state. Statuses only move Active -> FixedZero or
// Active -> FixedUpper; the fixed-upper image offset is recomputed exactly
// on every commit that adds a fixed-upper variable.
class screen_mask {
 public:
  screen_mask(index_t n_original, index_t n_rows, double upper_value = 0.0);

  index_t n_original() const { return static_cast<index_t>(status_.size()); }
  index_t n_active() const { return n_active_; }
  index_t n_fixed_zero() const { return n_fixed_zero_; }
  index_t n_fixed_upper() const { return n_fixed_upper_; }
  double upper_value() const { return upper_value_; }

  var_status status(index_t i) const;
  const std::vector<index_t>& active_to_original() const { return active_; }
  const vec& fixed_offset() const { return fixed_offset_; }

  void commit(const rule_report& report, const column_matrix& full_matrix);

  // embeds a compressed vector into original coordinates
  vec embed(const vec& x_active) const;

 private:
  std::vector<var_status> status_;
  std::vector<index_t> active_;
  vec fixed_offset_;
  double upper_value_;
  index_t n_active_;
  index_t n_fixed_zero_ = 0;
  index_t n_fixed_upper_ = 0;
};

// Everything a rule needs: the (possibly compressed) problem, the iterate on
// it, its certificate, the map from view columns to original indices, and
// the mask saying which originals are still active.
struct screen_context {
  const problem_spec& problem;
  const iterate& it;
  const gap_certificate& cert;
  const screen_mask& mask;
  const std::vector<index_t>& to_original;
  double slack = 0.0;  // tau: a rule fires only when its margin exceeds tau
  std::uint64_t iter = 0;
};

rule_report screen_simplex(const screen_context& ctx);
rule_report screen_l1_constrained(const screen_context& ctx);
rule_report screen_elastic_constrained(const screen_context& ctx);
rule_report screen_box(const screen_context& ctx);
rule_report screen_hinge_svm(const screen_context& ctx, bool improved);
rule_report screen_sq_hinge_svm(const screen_context& ctx);
rule_report screen_meb(const screen_context& ctx);
rule_report screen_l1_penalized(const screen_context& ctx);
rule_report screen_elastic_penalized_unit(const screen_context& ctx);
rule_report screen_elastic_penalized_regression(const screen_context& ctx);
rule_report screen_group(const screen_context& ctx);

enum class rule_kind {
  none,
  simplex,
  l1_constrained,
  elastic_constrained,
  box,
  hinge_svm,
  hinge_svm_improved,
  sq_hinge_svm,
  meb,
  l1_penalized,
  elastic_penalized_unit,
  elastic_penalized_regression,
  group
};

const char* rule_name(rule_kind k);

// throws when the rule does not apply to the problem's shape
void validate_rule(rule_kind k, const problem_spec& p);

rule_report run_rule(rule_kind k, const screen_context& ctx);

// The compressed working problem: only Active columns remain; fixed-upper
// contributions live in the view's y offset and primal shift. When every
// variable is fixed the problem is absent and the mask determines the
// solution outright.
struct compressed_problem {
  std::optional<problem_spec> problem;
  std::vector<index_t> to_original;

  bool solved() const { return !problem.has_value(); }
};

compressed_problem apply_mask(const problem_spec& full,
                              const screen_mask& mask);

}  // namespace gapscreen

#endif  // GAPSCREEN_SCREENING_HPP

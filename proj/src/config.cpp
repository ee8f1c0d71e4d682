#include "gapscreen/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace gapscreen {

using nlohmann::json;

namespace {

const std::vector<std::string> kKinds = {
    "simplex_ls",  "l1_ls",       "elastic_ball_ls", "box_svm_hinge",
    "sq_hinge_svm", "meb",        "lasso",           "elastic_net",
    "group_lasso", "logistic_l1"};

double need_positive(const json& block, const std::string& block_name,
                     const std::string& key) {
  if (!block.contains(key))
    throw config_error("missing " + block_name + "." + key);
  if (!block[key].is_number())
    throw config_error(block_name + "." + key + " must be a number");
  double v = block[key].get<double>();
  if (!(v > 0) || !std::isfinite(v))
    throw config_error(block_name + "." + key + " must be positive");
  return v;
}

double optional_number(const json& block, const std::string& block_name,
                       const std::string& key, double fallback) {
  if (!block.contains(key)) return fallback;
  if (!block[key].is_number())
    throw config_error(block_name + "." + key + " must be a number");
  return block[key].get<double>();
}

algorithm_kind parse_algorithm(const std::string& name) {
  if (name == "pairwise_frank_wolfe")
    return algorithm_kind::pairwise_frank_wolfe;
  if (name == "proximal_gradient") return algorithm_kind::proximal_gradient;
  if (name == "coordinate_descent_box")
    return algorithm_kind::coordinate_descent_box;
  throw config_error("unknown solver.algorithm '" + name + "'");
}

const char* algorithm_name(algorithm_kind k) {
  switch (k) {
    case algorithm_kind::pairwise_frank_wolfe:
      return "pairwise_frank_wolfe";
    case algorithm_kind::proximal_gradient:
      return "proximal_gradient";
    case algorithm_kind::coordinate_descent_box:
      return "coordinate_descent_box";
  }
  return "?";
}

algorithm_kind default_algorithm(const std::string& kind) {
  if (kind == "box_svm_hinge") return algorithm_kind::coordinate_descent_box;
  if (kind == "lasso" || kind == "elastic_net" || kind == "group_lasso" ||
      kind == "logistic_l1")
    return algorithm_kind::proximal_gradient;
  return algorithm_kind::pairwise_frank_wolfe;
}

}  // namespace

const std::vector<std::string>& known_problem_kinds() { return kKinds; }

run_config parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw config_error("config must be a JSON object");
  for (const auto& block : {"problem", "data", "solver", "output"})
    if (!root.contains(block))
      throw config_error(std::string("missing block '") + block + "'");

  run_config cfg;
  const json& prob = root["problem"];
  if (!prob.contains("kind") || !prob["kind"].is_string())
    throw config_error("missing problem.kind");
  cfg.kind = prob["kind"].get<std::string>();
  if (std::find(kKinds.begin(), kKinds.end(), cfg.kind) == kKinds.end())
    throw config_error("unknown problem.kind '" + cfg.kind + "'");

  if (cfg.kind == "lasso" || cfg.kind == "logistic_l1" ||
      cfg.kind == "group_lasso")
    cfg.lambda = need_positive(prob, "problem", "lambda");
  if (cfg.kind == "elastic_net") {
    cfg.lambda1 = need_positive(prob, "problem", "lambda1");
    cfg.lambda2 = optional_number(prob, "problem", "lambda2", 0.0);
    if (cfg.lambda2 < 0) throw config_error("problem.lambda2 must be >= 0");
  }
  if (cfg.kind == "elastic_ball_ls") {
    cfg.alpha = need_positive(prob, "problem", "alpha");
    if (cfg.alpha > 1) throw config_error("problem.alpha must be in (0,1]");
    cfg.scale = optional_number(prob, "problem", "scale", 1.0);
    if (!(cfg.scale > 0)) throw config_error("problem.scale must be positive");
  }
  if (cfg.kind == "box_svm_hinge") {
    cfg.box_upper = need_positive(prob, "problem", "C");
    if (prob.contains("improved")) {
      if (!prob["improved"].is_boolean())
        throw config_error("problem.improved must be a boolean");
      cfg.improved = prob["improved"].get<bool>();
    }
  }
  if (cfg.kind == "l1_ls") cfg.radius = need_positive(prob, "problem", "r");
  if (cfg.kind == "group_lasso") {
    if (!prob.contains("groups") || !prob["groups"].is_array() ||
        prob["groups"].empty())
      throw config_error("missing problem.groups");
    for (const auto& g : prob["groups"]) {
      if (!g.is_number_integer() || g.get<long long>() < 1)
        throw config_error("problem.groups entries must be positive integers");
      cfg.groups.push_back(static_cast<index_t>(g.get<long long>()));
    }
    if (prob.contains("rho")) {
      if (!prob["rho"].is_array() || prob["rho"].size() != cfg.groups.size())
        throw config_error("problem.rho must list one value per group");
      for (const auto& r : prob["rho"]) {
        if (!r.is_number() || !(r.get<double>() > 0))
          throw config_error("problem.rho entries must be positive");
        cfg.group_rho.push_back(r.get<double>());
      }
    } else {
      cfg.group_rho.assign(cfg.groups.size(), 1.0);
    }
  }

  const json& data = root["data"];
  bool has_path = data.contains("path");
  bool has_synth = data.contains("synthetic");
  if (has_path == has_synth)
    throw config_error("data must contain exactly one of path/synthetic");
  if (has_path) {
    if (!data["path"].is_string())
      throw config_error("data.path must be a string");
    cfg.data_path = data["path"].get<std::string>();
  } else {
    const json& s = data["synthetic"];
    synthetic_spec spec;
    spec.d = static_cast<index_t>(need_positive(s, "data.synthetic", "d"));
    spec.n = static_cast<index_t>(need_positive(s, "data.synthetic", "n"));
    spec.support = static_cast<index_t>(
        optional_number(s, "data.synthetic", "support", 0.0));
    if (spec.support < 0 || spec.support > spec.n)
      throw config_error("data.synthetic.support must be in [0, n]");
    spec.noise_sigma =
        optional_number(s, "data.synthetic", "noise_sigma", 0.0);
    if (spec.noise_sigma < 0)
      throw config_error("data.synthetic.noise_sigma must be >= 0");
    spec.seed = static_cast<std::uint64_t>(
        optional_number(s, "data.synthetic", "seed", 0.0));
    cfg.synthetic = spec;
  }

  const json& solver = root["solver"];
  cfg.solver.algorithm =
      solver.contains("algorithm")
          ? parse_algorithm(solver["algorithm"].get<std::string>())
          : default_algorithm(cfg.kind);
  cfg.solver.max_iter = static_cast<std::uint64_t>(
      optional_number(solver, "solver", "max_iter", 100000.0));
  cfg.solver.gap_tol = optional_number(solver, "solver", "gap_tol", 1e-7);
  if (!(cfg.solver.gap_tol > 0))
    throw config_error("solver.gap_tol must be positive");
  if (solver.contains("screening_enabled")) {
    if (!solver["screening_enabled"].is_boolean())
      throw config_error("solver.screening_enabled must be a boolean");
    cfg.solver.screening_enabled = solver["screening_enabled"].get<bool>();
  }
  cfg.solver.screening_period = static_cast<std::uint64_t>(
      optional_number(solver, "solver", "screening_period", 10.0));
  if (cfg.solver.screening_period < 1)
    throw config_error("solver.screening_period must be >= 1");
  cfg.solver.safety_slack =
      optional_number(solver, "solver", "safety_slack", 0.0);
  cfg.solver.seed = static_cast<std::uint64_t>(
      optional_number(solver, "solver", "seed", 0.0));

  const json& output = root["output"];
  if (output.contains("trace_path"))
    cfg.trace_path = output["trace_path"].get<std::string>();
  if (output.contains("report_path"))
    cfg.report_path = output["report_path"].get<std::string>();
  return cfg;
}

run_config load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string serialize_run_config(const run_config& cfg) {
  json prob;
  prob["kind"] = cfg.kind;
  if (cfg.kind == "lasso" || cfg.kind == "logistic_l1" ||
      cfg.kind == "group_lasso")
    prob["lambda"] = cfg.lambda;
  if (cfg.kind == "elastic_net") {
    prob["lambda1"] = cfg.lambda1;
    prob["lambda2"] = cfg.lambda2;
  }
  if (cfg.kind == "elastic_ball_ls") {
    prob["alpha"] = cfg.alpha;
    prob["scale"] = cfg.scale;
  }
  if (cfg.kind == "box_svm_hinge") {
    prob["C"] = cfg.box_upper;
    prob["improved"] = cfg.improved;
  }
  if (cfg.kind == "l1_ls") prob["r"] = cfg.radius;
  if (cfg.kind == "group_lasso") {
    prob["groups"] = json::array();
    for (index_t g : cfg.groups) prob["groups"].push_back(g);
    prob["rho"] = cfg.group_rho;
  }

  json data;
  if (cfg.synthetic) {
    data["synthetic"] = {{"d", cfg.synthetic->d},
                         {"n", cfg.synthetic->n},
                         {"support", cfg.synthetic->support},
                         {"noise_sigma", cfg.synthetic->noise_sigma},
                         {"seed", cfg.synthetic->seed}};
  } else {
    data["path"] = cfg.data_path;
  }

  json solver;
  solver["algorithm"] = algorithm_name(cfg.solver.algorithm);
  solver["max_iter"] = cfg.solver.max_iter;
  solver["gap_tol"] = cfg.solver.gap_tol;
  solver["screening_enabled"] = cfg.solver.screening_enabled;
  solver["screening_period"] = cfg.solver.screening_period;
  solver["safety_slack"] = cfg.solver.safety_slack;
  solver["seed"] = cfg.solver.seed;

  json output;
  if (!cfg.trace_path.empty()) output["trace_path"] = cfg.trace_path;
  if (!cfg.report_path.empty()) output["report_path"] = cfg.report_path;

  json root;
  root["problem"] = prob;
  root["data"] = data;
  root["solver"] = solver;
  root["output"] = output;
  return root.dump(2);
}

// ---------------------------------------------------------------------------
// problem building

namespace {

struct raw_data {
  column_matrix A;  // d x n, columns are the screened variables
  vec b;            // targets (regression kinds), length d
  vec x_true;       // planted vector (synthetic regression), may be empty
};

// Regression-shaped data: columns are features. From a libsvm file the
// samples-by-features matrix itself is A and the labels are b.
raw_data regression_data(const run_config& cfg) {
  if (cfg.synthetic) {
    synthetic_regression s = synth_regression(*cfg.synthetic);
    return {std::move(s.A), std::move(s.b), std::move(s.x_true)};
  }
  labeled_dataset ds = read_libsvm_file(cfg.data_path);
  return {ds.feature_columns(), ds.labels, vec()};
}

// SVM-shaped data: columns are label-folded samples a_i = y_i * sample_i.
// Synthetic data draws Gaussian points and labels them with a random
// hyperplane so the instance is linearly structured.
column_matrix svm_data(const run_config& cfg) {
  if (cfg.synthetic) {
    rng gen(cfg.synthetic->seed, 2);
    index_t d = cfg.synthetic->d;
    index_t n = cfg.synthetic->n;
    vec w0 = gen.normal_vector(d);
    dense_matrix A(d, n);
    for (index_t j = 0; j < n; ++j) {
      vec p = gen.normal_vector(d);
      double margin = w0.dot(p) >= 0 ? 1.0 : -1.0;
      A.col(j) = margin * p;  // label-folded column
    }
    return column_matrix::dense(std::move(A));
  }
  labeled_dataset ds = read_libsvm_file(cfg.data_path);
  return ds.svm_columns();
}

// MEB point cloud: columns are the points.
column_matrix meb_data(const run_config& cfg) {
  if (cfg.synthetic) {
    rng gen(cfg.synthetic->seed, 3);
    dense_matrix A(cfg.synthetic->d, cfg.synthetic->n);
    for (index_t j = 0; j < cfg.synthetic->n; ++j)
      for (index_t i = 0; i < cfg.synthetic->d; ++i)
        A(i, j) = gen.next_normal();
    return column_matrix::dense(std::move(A));
  }
  labeled_dataset ds = read_libsvm_file(cfg.data_path);
  // points are samples; transpose so columns are points
  const sparse_matrix& rows = ds.samples.sparse_storage();
  sparse_matrix cols = rows.transpose();
  return column_matrix::sparse(std::move(cols));
}

// Label-folded logistic design: minimizing sum log(1+exp([Ax]_i)) over the
// folded rows -y_i * sample_i is the logistic regression loss.
raw_data logistic_data(const run_config& cfg) {
  if (cfg.synthetic) {
    synthetic_regression s = synth_regression(*cfg.synthetic);
    dense_matrix folded(cfg.synthetic->d, cfg.synthetic->n);
    const dense_matrix& A = s.A.dense_storage();
    for (index_t i = 0; i < A.rows(); ++i) {
      double y = s.b[i] >= 0 ? 1.0 : -1.0;
      folded.row(i) = -y * A.row(i);
    }
    return {column_matrix::dense(std::move(folded)), vec(), vec()};
  }
  labeled_dataset ds = read_libsvm_file(cfg.data_path);
  const sparse_matrix& rows = ds.samples.sparse_storage();
  sparse_matrix folded(rows.rows(), rows.cols());
  std::vector<Eigen::Triplet<double>> trip;
  for (index_t j = 0; j < rows.outerSize(); ++j)
    for (sparse_matrix::InnerIterator it(rows, j); it; ++it) {
      double y = ds.labels[it.row()] >= 0 ? 1.0 : -1.0;
      trip.emplace_back(it.row(), j, -y * it.value());
    }
  folded.setFromTriplets(trip.begin(), trip.end());
  return {column_matrix::sparse(std::move(folded)), vec(), vec()};
}

}  // namespace

built_problem build_problem(const run_config& cfg) {
  const std::string& kind = cfg.kind;
  if (kind == "simplex_ls") {
    raw_data d = regression_data(cfg);
    index_t n = d.A.cols();
    return {problem_spec(std::move(d.A),
                         smooth_objective::squared_error(std::move(d.b)),
                         constraint_spec::simplex(n)),
            rule_kind::simplex, std::move(d.x_true)};
  }
  if (kind == "l1_ls") {
    raw_data d = regression_data(cfg);
    index_t n = d.A.cols();
    return {problem_spec(std::move(d.A),
                         smooth_objective::squared_error(std::move(d.b)),
                         constraint_spec::l1_ball(n, cfg.radius)),
            rule_kind::l1_constrained, std::move(d.x_true)};
  }
  if (kind == "elastic_ball_ls") {
    raw_data d = regression_data(cfg);
    index_t n = d.A.cols();
    return {
        problem_spec(std::move(d.A),
                     smooth_objective::squared_error(std::move(d.b)),
                     constraint_spec::elastic_ball(n, cfg.alpha, cfg.scale)),
        rule_kind::elastic_constrained, std::move(d.x_true)};
  }
  if (kind == "box_svm_hinge") {
    column_matrix A = svm_data(cfg);
    index_t n = A.cols();
    index_t d = A.rows();
    constraint_spec box = constraint_spec::box(n, cfg.box_upper)
                              .with_linear_term(vec::Constant(n, -1.0));
    return {problem_spec(std::move(A), smooth_objective::linear_quadratic(d),
                         std::move(box)),
            cfg.improved ? rule_kind::hinge_svm_improved
                         : rule_kind::hinge_svm,
            vec()};
  }
  if (kind == "sq_hinge_svm") {
    column_matrix A = svm_data(cfg);
    index_t n = A.cols();
    index_t d = A.rows();
    return {problem_spec(std::move(A), smooth_objective::pure_quadratic(d),
                         constraint_spec::simplex(n)),
            rule_kind::sq_hinge_svm, vec()};
  }
  if (kind == "meb") {
    column_matrix A = meb_data(cfg);
    index_t n = A.cols();
    index_t d = A.rows();
    vec c(n);
    for (index_t j = 0; j < n; ++j) c[j] = -A.col_norm(j) * A.col_norm(j);
    constraint_spec simplex =
        constraint_spec::simplex(n).with_linear_term(std::move(c));
    return {problem_spec(std::move(A), smooth_objective::meb_quadratic(d),
                         std::move(simplex)),
            rule_kind::meb, vec()};
  }
  if (kind == "lasso") {
    raw_data d = regression_data(cfg);
    index_t n = d.A.cols();
    return {problem_spec(std::move(d.A),
                         smooth_objective::squared_error(std::move(d.b)),
                         regularizer_spec::l1(n, cfg.lambda)),
            rule_kind::l1_penalized, std::move(d.x_true)};
  }
  if (kind == "elastic_net") {
    raw_data d = regression_data(cfg);
    index_t n = d.A.cols();
    return {
        problem_spec(std::move(d.A),
                     smooth_objective::squared_error(std::move(d.b)),
                     regularizer_spec::elastic_net(n, cfg.lambda1,
                                                   cfg.lambda2)),
        rule_kind::elastic_penalized_regression, std::move(d.x_true)};
  }
  if (kind == "group_lasso") {
    raw_data d = regression_data(cfg);
    index_t n = d.A.cols();
    index_t total = 0;
    for (index_t g : cfg.groups) total += g;
    if (total != n)
      throw config_error("problem.groups must cover all " +
                         std::to_string(n) + " columns");
    vec weights(static_cast<index_t>(cfg.groups.size()));
    for (index_t g = 0; g < weights.size(); ++g)
      weights[g] =
          cfg.lambda * std::sqrt(cfg.group_rho[static_cast<std::size_t>(g)]);
    return {problem_spec(
                std::move(d.A),
                smooth_objective::squared_error(std::move(d.b)),
                regularizer_spec::group_l2l1(
                    group_layout::contiguous(cfg.groups), std::move(weights))),
            rule_kind::group, std::move(d.x_true)};
  }
  if (kind == "logistic_l1") {
    raw_data d = logistic_data(cfg);
    index_t n = d.A.cols();
    index_t rows = d.A.rows();
    return {problem_spec(std::move(d.A), smooth_objective::logistic(rows),
                         regularizer_spec::l1(n, cfg.lambda)),
            rule_kind::l1_penalized, vec()};
  }
  throw config_error("unknown problem.kind '" + kind + "'");
}

}  // namespace gapscreen

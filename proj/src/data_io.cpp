#include "gapscreen/data_io.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "gapscreen/rng.hpp"

namespace gapscreen {

column_matrix labeled_dataset::svm_columns() const {
  const sparse_matrix& rows = samples.sparse_storage();
  sparse_matrix cols(n_features(), n_samples());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(rows.nonZeros()));
  for (index_t j = 0; j < rows.outerSize(); ++j) {
    for (sparse_matrix::InnerIterator it(rows, j); it; ++it) {
      double y = labels[it.row()];
      require(y == 1.0 || y == -1.0,
              "svm_columns: labels must be -1 or +1");
      trip.emplace_back(j, it.row(), y * it.value());
    }
  }
  cols.setFromTriplets(trip.begin(), trip.end());
  return column_matrix::sparse(std::move(cols));
}

labeled_dataset read_libsvm(std::istream& in, index_t expected_dim) {
  std::vector<double> labels;
  std::vector<Eigen::Triplet<double>> trip;
  index_t max_dim = expected_dim;
  std::string line;
  index_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // tolerate unicode minus signs that show up in hand-written files
    std::string::size_type pos;
    while ((pos = line.find("\xe2\x88\x92")) != std::string::npos)
      line.replace(pos, 3, "-");
    std::istringstream ls(line);
    double label;
    if (!(ls >> label)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error("read_libsvm: malformed label on line " +
                               std::to_string(line_no));
    }
    index_t row = static_cast<index_t>(labels.size());
    labels.push_back(label);
    std::string tok;
    long long prev_index = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error(
            "read_libsvm: malformed feature (missing ':') on line " +
            std::to_string(line_no));
      long long idx;
      double val;
      try {
        std::size_t used = 0;
        idx = std::stoll(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
        std::string vs = tok.substr(colon + 1);
        val = std::stod(vs, &used);
        if (used != vs.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::runtime_error("read_libsvm: malformed feature on line " +
                                 std::to_string(line_no));
      }
      if (idx <= 0)
        throw std::runtime_error("read_libsvm: index must be >= 1 on line " +
                                 std::to_string(line_no));
      if (idx <= prev_index)
        throw std::runtime_error(
            "read_libsvm: indices not strictly increasing on line " +
            std::to_string(line_no));
      prev_index = idx;
      max_dim = std::max(max_dim, static_cast<index_t>(idx));
      trip.emplace_back(row, static_cast<index_t>(idx) - 1, val);
    }
  }
  require(!labels.empty(), "read_libsvm: no samples");
  require(max_dim >= 1, "read_libsvm: no features seen and no expected_dim");
  if (expected_dim > 0)
    require(max_dim <= expected_dim,
            "read_libsvm: feature index exceeds expected_dim");
  sparse_matrix m(static_cast<index_t>(labels.size()), max_dim);
  m.setFromTriplets(trip.begin(), trip.end());
  labeled_dataset out{column_matrix::sparse(std::move(m)),
                      vec(static_cast<index_t>(labels.size()))};
  for (index_t i = 0; i < out.labels.size(); ++i)
    out.labels[i] = labels[static_cast<std::size_t>(i)];
  return out;
}

labeled_dataset read_libsvm_file(const std::string& path,
                                 index_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_libsvm: cannot open " + path);
  return read_libsvm(in, expected_dim);
}

void write_libsvm(std::ostream& out, const labeled_dataset& data) {
  const sparse_matrix& m = data.samples.sparse_storage();
  char buf[64];
  // row-major walk over a column-major matrix: collect per-row entries once
  std::vector<std::vector<std::pair<index_t, double>>> rows(
      static_cast<std::size_t>(m.rows()));
  for (index_t j = 0; j < m.outerSize(); ++j)
    for (sparse_matrix::InnerIterator it(m, j); it; ++it)
      rows[static_cast<std::size_t>(it.row())].emplace_back(j, it.value());
  for (index_t i = 0; i < m.rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", data.labels[i]);
    out << buf;
    for (const auto& [j, v] : rows[static_cast<std::size_t>(i)]) {
      std::snprintf(buf, sizeof(buf), " %lld:%.17g",
                    static_cast<long long>(j + 1), v);
      out << buf;
    }
    out << '\n';
  }
}

synthetic_regression synth_regression(const synthetic_spec& spec) {
  require(spec.d >= 1 && spec.n >= 1, "synth_regression: bad dimensions");
  require(spec.support <= spec.n,
          "synth_regression: support exceeds column count");
  require(spec.noise_sigma >= 0, "synth_regression: negative noise");
  rng gen(spec.seed, 1);
  dense_matrix A(spec.d, spec.n);
  for (index_t j = 0; j < spec.n; ++j)
    for (index_t i = 0; i < spec.d; ++i) A(i, j) = gen.next_normal();
  vec x_true = vec::Zero(spec.n);
  std::vector<index_t> order(static_cast<std::size_t>(spec.n));
  std::iota(order.begin(), order.end(), index_t{0});
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[gen.next_below(i)]);
  for (index_t k = 0; k < spec.support; ++k)
    x_true[order[static_cast<std::size_t>(k)]] =
        gen.next_uniform() < 0.5 ? 1.0 : -1.0;
  synthetic_regression out{column_matrix::dense(std::move(A)), vec(),
                           std::move(x_true)};
  out.b = out.A.multiply(out.x_true);
  if (spec.noise_sigma > 0)
    out.b += spec.noise_sigma * gen.normal_vector(spec.d);
  return out;
}

vec barycentric_point(const vec& x_l1, double radius) {
  require(radius > 0, "barycentric_point: radius must be positive");
  require(x_l1.lpNorm<1>() <= radius * (1.0 + 1e-9),
          "barycentric_point: point outside the L1 ball");
  index_t n = x_l1.size();
  vec z(2 * n);
  double used = 0.0;
  for (index_t i = 0; i < n; ++i) {
    z[i] = std::max(x_l1[i], 0.0) / radius;
    z[n + i] = std::max(-x_l1[i], 0.0) / radius;
    used += z[i] + z[n + i];
  }
  // spread the leftover mass evenly over all sign copies; any symmetric
  // split of it pulls back to the same point
  double slack = std::max(0.0, 1.0 - used) / static_cast<double>(2 * n);
  z.array() += slack;
  double total = z.sum();
  if (total > 0) z /= total;
  return z;
}

barycentric_problem to_barycentric(const column_matrix& A, const vec& x_l1,
                                   double radius) {
  require(x_l1.size() == A.cols(), "to_barycentric: length mismatch");
  return {A.hstack_neg().scaled(radius), barycentric_point(x_l1, radius)};
}

vec from_barycentric(const vec& x_simplex, double radius) {
  require(x_simplex.size() % 2 == 0,
          "from_barycentric: expected an even-length simplex point");
  index_t n = x_simplex.size() / 2;
  vec x(n);
  for (index_t i = 0; i < n; ++i)
    x[i] = radius * (x_simplex[i] - x_simplex[n + i]);
  return x;
}

}  // namespace gapscreen

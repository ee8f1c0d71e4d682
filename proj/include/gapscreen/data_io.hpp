#ifndef GAPSCREEN_DATA_IO_HPP
#define GAPSCREEN_DATA_IO_HPP

#include <iosfwd>
#include <string>

#include "gapscreen/linalg.hpp"

namespace gapscreen {

// Rows of `samples` are the dataset's samples; labels align with the rows.
struct labeled_dataset {
  column_matrix samples;  // n_samples x n_features, sparse
  vec labels;

  index_t n_samples() const { return samples.rows(); }
  index_t n_features() const { return samples.cols(); }

  // A with one column per feature (the samples x features matrix itself)
  // and b = labels; used by the regression / feature-screening kinds
  column_matrix feature_columns() const { return samples; }
  // A with one column per sample, label-folded: a_i = y_i * sample_i;
  // used by the SVM duals. Labels must be in {-1, +1}.
  column_matrix svm_columns() const;
};

labeled_dataset read_libsvm(std::istream& in,
                            index_t expected_dim = 0);
labeled_dataset read_libsvm_file(const std::string& path,
                                 index_t expected_dim = 0);
void write_libsvm(std::ostream& out, const labeled_dataset& data);

struct synthetic_spec {
  index_t d = 0;            // rows of A
  index_t n = 0;            // columns of A
  index_t support = 0;      // nonzeros of the planted vector
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct synthetic_regression {
  column_matrix A;  // d x n Gaussian
  vec b;            // A x_true + noise
  vec x_true;       // `support` entries of +/-1
};

synthetic_regression synth_regression(const synthetic_spec& spec);

// Barycentric lift of the scaled L1 ball onto the unit simplex: the matrix
// is pre-scaled by the radius so the simplex is always the unit simplex.
struct barycentric_problem {
  column_matrix A;  // r * [A | -A]
  vec x;            // point on the unit simplex
};

barycentric_problem to_barycentric(const column_matrix& A, const vec& x_l1,
                                   double radius);
vec barycentric_point(const vec& x_l1, double radius);
vec from_barycentric(const vec& x_simplex, double radius);

}  // namespace gapscreen

#endif  // GAPSCREEN_DATA_IO_HPP

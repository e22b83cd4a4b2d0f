#include "hidnet/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "hidnet/error.hpp"

namespace hidnet {

FeatureMatrix read_matrix(std::istream& in) {
  long long n = 0, q = 0;
  if (!(in >> n >> q) || n < 0 || q < 0) {
    throw Error(ErrorKind::Parse, "matrix header must be `n q` with non-negative counts");
  }
  FeatureMatrix m(n, q);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < q; ++j) {
      if (!(in >> m(i, j))) {
        throw Error(ErrorKind::Parse, "matrix body ended at row " + std::to_string(i) +
                                          ", column " + std::to_string(j));
      }
    }
  }
  return m;
}

FeatureMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open matrix file " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_matrix(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write matrix file " + path);
  write_matrix(out, m);
}

bool all_finite(const FeatureMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k)
    if (!std::isfinite(m.data()[k])) return false;
  return true;
}

}  // namespace hidnet

#pragma once

#include <iosfwd>
#include <string>

#include "hidnet/sparse.hpp"

namespace hidnet {

// Dense text format: a header line `n q`, then n rows of q whitespace-separated
// reals. Values are written with round-trip precision.
FeatureMatrix read_matrix(std::istream& in);
FeatureMatrix read_matrix(const std::string& path);
void write_matrix(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m);
void write_matrix(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m);

bool all_finite(const FeatureMatrix& m);

}  // namespace hidnet

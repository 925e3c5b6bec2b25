#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

namespace slope {

// Numbers are serialized with 12 significant digits everywhere so reruns
// diff cleanly.
std::string format_number(double v);

// Matrix files are headerless comma-separated rows; vectors are single
// columns. Readers accept any rectangular layout and reject ragged rows or
// unparsable cells.
Eigen::MatrixXd read_matrix_csv(const std::string& path);
Eigen::VectorXd read_vector_csv(const std::string& path);

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
void write_vector_csv(const Eigen::VectorXd& v, const std::string& path);

}  // namespace slope

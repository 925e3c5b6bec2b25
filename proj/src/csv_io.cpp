#include "slope/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "slope/errors.hpp"

namespace slope {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == cell.c_str() || (end && *end != '\0')) {
        throw DataError(path + ": unparsable cell '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError(path + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path + ": empty file");
  return rows;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

Eigen::VectorXd read_vector_csv(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw DataError(path + ": expected a vector, got " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()));
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

void write_vector_csv(const Eigen::VectorXd& v, const std::string& path) {
  write_matrix_csv(v, path);
}

}  // namespace slope

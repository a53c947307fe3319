#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace l0fa {

/// Shortest round-trip-safe text: 17 significant digits, "inf"/"-inf"/"nan".
std::string format_double(double v);
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::vector<std::string> split_csv_line(const std::string& line);

/// Dense matrix, row-major, comma-separated, no header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

/// File variants; failures raise ErrorKind::Io naming the path.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace l0fa

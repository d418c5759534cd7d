#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>

namespace gsadmm::csv {

// Shortest decimal representation that round-trips to the same double, so a
// save -> load -> save cycle is byte-identical.
std::string format_double(double v);

// Matrix files: row-major, one matrix row per line, comma separated, '.'
// decimal, no header. Vectors are written as single-column matrices.
void write_matrix(const std::filesystem::path& file, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& file);

void write_vector(const std::filesystem::path& file, const Eigen::VectorXd& v);
Eigen::VectorXd read_vector(const std::filesystem::path& file);

}  // namespace gsadmm::csv

#include "gsadmm/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace gsadmm::csv {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

static double parse_double(const std::string& token, const std::filesystem::path& file) {
  double v = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::runtime_error(file.string() + ": bad numeric field '" + token + "'");
  }
  return v;
}

void write_matrix(const std::filesystem::path& file, const Eigen::MatrixXd& m) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  std::string line;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) line += ',';
      line += format_double(m(r, c));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      row.push_back(parse_double(line.substr(pos, next - pos), file));
      pos = next + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(file.string() + ": ragged row " + std::to_string(rows.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(file.string() + ": empty matrix file");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_vector(const std::filesystem::path& file, const Eigen::VectorXd& v) {
  write_matrix(file, v);
}

Eigen::VectorXd read_vector(const std::filesystem::path& file) {
  Eigen::MatrixXd m = read_matrix(file);
  if (m.cols() != 1) throw std::runtime_error(file.string() + ": expected a single column");
  return m.col(0);
}

}  // namespace gsadmm::csv

#include "ewa/matrix_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ewa {

namespace {

constexpr char kMagic[4] = {'E', 'W', 'A', 'M'};

[[noreturn]] void io_error(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error("matrix io: " + path.string() + ": " + what);
}

}  // namespace

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_error(path, "cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      io_error(path, "ragged csv rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) io_error(path, "empty csv");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) io_error(path, "cannot open for writing");
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      // 17 significant digits round-trip any IEEE double exactly.
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) io_error(path, "write failed");
}

Matrix read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open");
  char magic[4];
  std::uint32_t k = 0, n = 0, reserved = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&k), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) io_error(path, "bad EWAM header");
  if (k == 0 || n == 0) io_error(path, "empty matrix dimensions");
  Matrix m(static_cast<Index>(k), static_cast<Index>(n));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * k * n));
  if (!in) io_error(path, "truncated data");
  return m;
}

void write_matrix_binary(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  const std::uint32_t k = static_cast<std::uint32_t>(m.rows());
  const std::uint32_t n = static_cast<std::uint32_t>(m.cols());
  const std::uint32_t reserved = 0;
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&k), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!out) io_error(path, "write failed");
}

Matrix read_matrix(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_matrix_csv(path) : read_matrix_binary(path);
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    write_matrix_csv(m, path);
  } else {
    write_matrix_binary(m, path);
  }
}

}  // namespace ewa

#pragma once

#include <filesystem>

#include "ewa/matrix.hpp"

namespace ewa {

// CSV: one line per matrix row, comma separated, written with enough digits
// for a bit-exact double round trip.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

// Binary: 16-byte header "EWAM" | u32 K | u32 n | u32 reserved, followed by
// K*n little-endian f64 values in column-major order.
Matrix read_matrix_binary(const std::filesystem::path& path);
void write_matrix_binary(const Matrix& m, const std::filesystem::path& path);

// Dispatch on extension: ".csv" -> CSV, anything else -> binary.
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const Matrix& m, const std::filesystem::path& path);

}  // namespace ewa

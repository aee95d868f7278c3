#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ewa {

// K x n matrix of labels / regression values. Column i is the i-th
// observation vector, contiguous in memory (Eigen stores column-major).
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(where) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

inline void require_finite(const Matrix& a, const char* where) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": non-finite matrix entries");
  }
}

inline void require_nonempty(const Matrix& a, const char* where) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw std::invalid_argument(std::string(where) + ": empty matrix");
  }
}

}  // namespace ewa

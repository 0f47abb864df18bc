#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace crn {

/// Dense row-major integer matrix for exact linear algebra on small inputs.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Determinant by Bareiss fraction-free elimination. Every intermediate is a
/// minor of the input, so it is exact whenever the minors fit in 64 bits.
std::int64_t bareiss_determinant(IntMatrix m);

/// Rank over Q by fraction-free elimination.
std::size_t exact_rank(IntMatrix m);

}  // namespace crn

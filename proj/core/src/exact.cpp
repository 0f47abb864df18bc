#include "crnatoms/exact.hpp"

#include <stdexcept>
#include <utility>

namespace crn {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("bareiss: minor exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t bareiss_determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("bareiss_determinant: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  int sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Wide v = Wide(m(i, j)) * m(k, k) - Wide(m(i, k)) * m(k, j);
        m(i, j) = narrow(v / prev);
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t exact_rank(IntMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t rank = 0;
  std::int64_t prev = 1;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && m(p, col) == 0) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(rank, j), m(p, j));
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        Wide v = Wide(m(i, j)) * m(rank, col) - Wide(m(i, col)) * m(rank, j);
        m(i, j) = narrow(v / prev);
      }
      m(i, col) = 0;
    }
    prev = m(rank, col);
    ++rank;
  }
  return rank;
}

}  // namespace crn

#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "fbk/ring.hpp"

namespace fbk {

/// Dense row-major matrix over one ring. Zero-sized shapes are valid.
class RingMatrix {
 public:
  RingMatrix(Ring ring, std::size_t rows, std::size_t cols);

  static RingMatrix zero(const Ring& ring, std::size_t rows, std::size_t cols) { return {ring, rows, cols}; }
  static RingMatrix identity(const Ring& ring, std::size_t n);
  /// Entries given as integers, row-major.
  static RingMatrix from_ints(const Ring& ring, std::size_t rows, std::size_t cols, const std::vector<long>& values);
  /// Entries given as literals of the ring, row-major.
  static RingMatrix parse(const Ring& ring, std::size_t rows, std::size_t cols,
                          const std::vector<std::string>& literals);
  static RingMatrix from_entries(const Ring& ring, std::size_t rows, std::size_t cols,
                                 std::vector<RingElement> entries);
  /// Unit column e_index of length n.
  static RingMatrix unit_column(const Ring& ring, std::size_t n, std::size_t index);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  const RingElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  RingElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const std::vector<RingElement>& entries() const { return data_; }

  bool is_zero() const;
  bool is_identity() const;

  RingMatrix transpose() const;
  RingMatrix column(std::size_t j) const;
  RingMatrix columns(std::size_t first, std::size_t count) const;
  RingMatrix row_range(std::size_t first, std::size_t count) const;
  RingMatrix block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const;
  /// Copies `src` into this matrix with its top-left corner at (row, col).
  void set_block(std::size_t row, std::size_t col, const RingMatrix& src);

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  RingMatrix operator+(const RingMatrix& other) const;
  RingMatrix operator-(const RingMatrix& other) const;
  RingMatrix operator*(const RingMatrix& other) const;
  RingMatrix operator-() const;
  RingMatrix scaled(const RingElement& c) const;

  friend bool operator==(const RingMatrix& a, const RingMatrix& b);

  /// One row per line, entries separated by two spaces.
  std::string to_string() const;
  std::vector<std::string> literals() const;

 private:
  void require_same_ring(const RingMatrix& other, const char* what) const;

  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<RingElement> data_;
};

/// [a | b]
RingMatrix hcat(const RingMatrix& a, const RingMatrix& b);
/// [a ; b]
RingMatrix vcat(const RingMatrix& a, const RingMatrix& b);
/// Bass block-diagonal a (+) b.
RingMatrix block_diag(const RingMatrix& a, const RingMatrix& b);

inline std::ostream& operator<<(std::ostream& out, const RingMatrix& m) { return out << "\n" << m.to_string(); }

}  // namespace fbk

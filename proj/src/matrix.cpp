#include "fbk/matrix.hpp"

#include <sstream>

namespace fbk {

RingMatrix::RingMatrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, RingElement::zero(ring_)) {}

RingMatrix RingMatrix::identity(const Ring& ring, std::size_t n) {
  RingMatrix m(ring, n, n);
  const auto one = RingElement::one(ring);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

RingMatrix RingMatrix::from_ints(const Ring& ring, std::size_t rows, std::size_t cols,
                                 const std::vector<long>& values) {
  if (values.size() != rows * cols) throw ShapeError("entry count does not match the shape");
  RingMatrix m(ring, rows, cols);
  for (std::size_t k = 0; k < values.size(); ++k) m.data_[k] = RingElement::from_int(ring, values[k]);
  return m;
}

RingMatrix RingMatrix::parse(const Ring& ring, std::size_t rows, std::size_t cols,
                             const std::vector<std::string>& literals) {
  if (literals.size() != rows * cols) throw ShapeError("entry count does not match the shape");
  RingMatrix m(ring, rows, cols);
  for (std::size_t k = 0; k < literals.size(); ++k) m.data_[k] = RingElement::parse(ring, literals[k]);
  return m;
}

RingMatrix RingMatrix::from_entries(const Ring& ring, std::size_t rows, std::size_t cols,
                                    std::vector<RingElement> entries) {
  if (entries.size() != rows * cols) throw ShapeError("entry count does not match the shape");
  for (const auto& e : entries) {
    if (!same_ring(e.ring(), ring)) throw DescriptorMismatch("matrix entry from another ring");
  }
  RingMatrix m(ring, 0, 0);
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(entries);
  return m;
}

RingMatrix RingMatrix::unit_column(const Ring& ring, std::size_t n, std::size_t index) {
  RingMatrix m(ring, n, 1);
  m(index, 0) = RingElement::one(ring);
  return m;
}

bool RingMatrix::is_zero() const {
  for (const auto& e : data_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool RingMatrix::is_identity() const { return is_square() && *this == identity(ring_, rows_); }

RingMatrix RingMatrix::transpose() const {
  RingMatrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RingMatrix RingMatrix::column(std::size_t j) const { return columns(j, 1); }

RingMatrix RingMatrix::columns(std::size_t first, std::size_t count) const {
  return block(0, first, rows_, count);
}

RingMatrix RingMatrix::row_range(std::size_t first, std::size_t count) const {
  return block(first, 0, count, cols_);
}

RingMatrix RingMatrix::block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const {
  if (row + rows > rows_ || col + cols > cols_) throw ShapeError("block out of range");
  RingMatrix b(ring_, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(row + i, col + j);
  return b;
}

void RingMatrix::set_block(std::size_t row, std::size_t col, const RingMatrix& src) {
  require_same_ring(src, "set_block");
  if (row + src.rows_ > rows_ || col + src.cols_ > cols_) throw ShapeError("block out of range");
  for (std::size_t i = 0; i < src.rows_; ++i)
    for (std::size_t j = 0; j < src.cols_; ++j) (*this)(row + i, col + j) = src(i, j);
}

void RingMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void RingMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void RingMatrix::require_same_ring(const RingMatrix& other, const char* what) const {
  if (!same_ring(ring_, other.ring_)) {
    throw DescriptorMismatch(std::string(what) + ": matrices over " + ring_->to_string() + " and " +
                             other.ring_->to_string());
  }
}

RingMatrix RingMatrix::operator+(const RingMatrix& other) const {
  require_same_ring(other, "matrix sum");
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix sum: shape mismatch");
  RingMatrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += other.data_[k];
  return r;
}

RingMatrix RingMatrix::operator-(const RingMatrix& other) const {
  require_same_ring(other, "matrix difference");
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix difference: shape mismatch");
  RingMatrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= other.data_[k];
  return r;
}

RingMatrix RingMatrix::operator*(const RingMatrix& other) const {
  require_same_ring(other, "matrix product");
  if (cols_ != other.rows_) {
    throw ShapeError("matrix product: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " times " +
                     std::to_string(other.rows_) + "x" + std::to_string(other.cols_));
  }
  RingMatrix r(ring_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const auto& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        if (other(k, j).is_zero()) continue;
        r(i, j) += a * other(k, j);
      }
    }
  }
  return r;
}

RingMatrix RingMatrix::operator-() const { return RingMatrix(ring_, rows_, cols_) - *this; }

RingMatrix RingMatrix::scaled(const RingElement& c) const {
  RingMatrix r = *this;
  for (auto& e : r.data_) e *= c;
  return r;
}

bool operator==(const RingMatrix& a, const RingMatrix& b) {
  return same_ring(a.ring_, b.ring_) && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string RingMatrix::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < rows_; ++i) {
    out << "[";
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? "  " : "") << (*this)(i, j).to_string();
    out << "]\n";
  }
  return out.str();
}

std::vector<std::string> RingMatrix::literals() const {
  std::vector<std::string> out;
  out.reserve(data_.size());
  for (const auto& e : data_) out.push_back(e.to_string());
  return out;
}

RingMatrix hcat(const RingMatrix& a, const RingMatrix& b) {
  if (!same_ring(a.ring(), b.ring())) throw DescriptorMismatch("hcat: different rings");
  if (a.rows() != b.rows()) throw ShapeError("hcat: row counts differ");
  RingMatrix r(a.ring(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

RingMatrix vcat(const RingMatrix& a, const RingMatrix& b) {
  if (!same_ring(a.ring(), b.ring())) throw DescriptorMismatch("vcat: different rings");
  if (a.cols() != b.cols()) throw ShapeError("vcat: column counts differ");
  RingMatrix r(a.ring(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

RingMatrix block_diag(const RingMatrix& a, const RingMatrix& b) {
  if (!same_ring(a.ring(), b.ring())) throw DescriptorMismatch("block_diag: different rings");
  RingMatrix r(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

}  // namespace fbk

#include "fbk/linalg.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>

namespace fbk {
namespace {

// Integer matrices are handled as plain mpz arrays during the normal-form
// algorithms and converted back to RingMatrix at the boundary.
struct IntMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<mpz_class> a;

  IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  static IntMat identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  mpz_class& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  void swap_rows(std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap((*this)(x, j), (*this)(y, j));
  }
  void swap_cols(std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap((*this)(i, x), (*this)(i, y));
  }
  // row_dst -= q * row_src
  void row_sub(std::size_t dst, std::size_t src, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j) (*this)(dst, j) -= q * (*this)(src, j);
  }
  void col_sub(std::size_t dst, std::size_t src, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows; ++i) (*this)(i, dst) -= q * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols; ++j) (*this)(r, j) = -(*this)(r, j);
  }
};

void require_kind(const RingMatrix& m, bool ok, const char* what) {
  if (!ok) throw Unsupported(std::string(what) + " is not available over " + m.ring()->to_string());
}

IntMat to_int(const RingMatrix& m) {
  require_kind(m, m.ring()->kind() == RingKind::Integers, "integer normal forms");
  IntMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).integer();
  return r;
}

RingMatrix from_int(const IntMat& m) {
  const Ring z = RingDescriptor::integers();
  std::vector<RingElement> entries;
  entries.reserve(m.a.size());
  for (const auto& v : m.a) entries.push_back(RingElement::from_integer(z, v));
  return RingMatrix::from_entries(z, m.rows, m.cols, std::move(entries));
}

// Row-style Hermite form; returns rank.
std::size_t hermite_in_place(IntMat& h, IntMat& u) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < h.cols && row < h.rows; ++col) {
    for (;;) {
      std::size_t best = h.rows;
      for (std::size_t i = row; i < h.rows; ++i) {
        if (h(i, col) != 0 && (best == h.rows || abs(h(i, col)) < abs(h(best, col)))) best = i;
      }
      if (best == h.rows) break;
      h.swap_rows(row, best);
      u.swap_rows(row, best);
      bool cleared = true;
      for (std::size_t i = row + 1; i < h.rows; ++i) {
        if (h(i, col) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(row, col).get_mpz_t());
        h.row_sub(i, row, q);
        u.row_sub(i, row, q);
        if (h(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (row >= h.rows || h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      h.negate_row(row);
      u.negate_row(row);
    }
    for (std::size_t i = 0; i < row; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(row, col).get_mpz_t());
      h.row_sub(i, row, q);
      u.row_sub(i, row, q);
    }
    ++row;
  }
  return row;
}

struct ColumnHermite {
  IntMat lower;   // m * vt, column echelon
  IntMat vt;      // unimodular, cols x cols
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
};

ColumnHermite column_hermite(const IntMat& m) {
  IntMat h(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) h(j, i) = m(i, j);
  IntMat u = IntMat::identity(m.cols);
  const std::size_t r = hermite_in_place(h, u);
  ColumnHermite out{IntMat(m.rows, m.cols), IntMat(m.cols, m.cols), r, {}};
  for (std::size_t i = 0; i < h.rows; ++i)
    for (std::size_t j = 0; j < h.cols; ++j) out.lower(j, i) = h(i, j);
  for (std::size_t i = 0; i < u.rows; ++i)
    for (std::size_t j = 0; j < u.cols; ++j) out.vt(j, i) = u(i, j);
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t p = 0;
    while (h(k, p) == 0) ++p;
    out.pivot_rows.push_back(p);
  }
  return out;
}

std::optional<RingMatrix> solve_integer(const RingMatrix& a, const RingMatrix& b) {
  const IntMat am = to_int(a);
  const IntMat bm = to_int(b);
  const ColumnHermite ch = column_hermite(am);
  IntMat x(a.cols(), b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    std::vector<mpz_class> res(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) res[i] = bm(i, col);
    std::vector<mpz_class> y(a.cols());
    for (std::size_t k = 0; k < ch.rank; ++k) {
      const std::size_t p = ch.pivot_rows[k];
      const mpz_class& piv = ch.lower(p, k);
      if (!mpz_divisible_p(res[p].get_mpz_t(), piv.get_mpz_t())) return std::nullopt;
      mpz_divexact(y[k].get_mpz_t(), res[p].get_mpz_t(), piv.get_mpz_t());
      for (std::size_t i = 0; i < a.rows(); ++i) res[i] -= y[k] * ch.lower(i, k);
    }
    if (std::any_of(res.begin(), res.end(), [](const mpz_class& v) { return v != 0; })) return std::nullopt;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      mpz_class s = 0;
      for (std::size_t k = 0; k < ch.rank; ++k) s += ch.vt(i, k) * y[k];
      x(i, col) = s;
    }
  }
  return from_int(x);
}

std::optional<RingMatrix> solve_field(const RingMatrix& a, const RingMatrix& b) {
  const EchelonForm ef = rref(a);
  const RingMatrix tb = ef.transform * b;
  for (std::size_t i = ef.rank; i < tb.rows(); ++i)
    for (std::size_t j = 0; j < tb.cols(); ++j)
      if (!tb(i, j).is_zero()) return std::nullopt;
  RingMatrix x(a.ring(), a.cols(), b.cols());
  for (std::size_t i = 0; i < ef.rank; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(ef.pivots[i], j) = tb(i, j);
  return x;
}

RingElement det_field(RingMatrix m) {
  const Ring& ring = m.ring();
  const std::size_t n = m.rows();
  RingElement result = RingElement::one(ring);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col).is_zero()) ++piv;
    if (piv == n) return RingElement::zero(ring);
    if (piv != col) {
      m.swap_rows(piv, col);
      result = -result;
    }
    result *= m(col, col);
    const RingElement inv = *m(col, col).try_invert();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      const RingElement factor = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
    }
  }
  return result;
}

// Fraction-free Bareiss elimination.
RingElement det_integer(const RingMatrix& m) {
  IntMat a = to_int(m);
  const std::size_t n = a.rows;
  if (n == 0) return RingElement::one(m.ring());
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, k) == 0) ++piv;
      if (piv == n) return RingElement::zero(m.ring());
      a.swap_rows(k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return RingElement::from_integer(m.ring(), sign * a(n - 1, n - 1));
}

// Division-free Laplace expansion over row prefixes, memoised on the set of
// used columns.
RingElement det_expansion(const RingMatrix& m) {
  const std::size_t n = m.rows();
  if (n > 20) throw Unsupported("determinant expansion limited to 20x20");
  const Ring& ring = m.ring();
  std::unordered_map<std::uint32_t, RingElement> layer{{0u, RingElement::one(ring)}};
  for (std::size_t row = 0; row < n; ++row) {
    std::unordered_map<std::uint32_t, RingElement> next;
    for (const auto& [used, value] : layer) {
      if (value.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used & (1u << j)) continue;
        if (m(row, j).is_zero()) continue;
        const int larger = std::popcount(used >> (j + 1));
        RingElement term = value * m(row, j);
        if (larger % 2) term = -term;
        const std::uint32_t key = used | (1u << j);
        auto it = next.find(key);
        if (it == next.end()) {
          next.emplace(key, std::move(term));
        } else {
          it->second += term;
        }
      }
    }
    layer = std::move(next);
  }
  const auto it = layer.find(n == 0 ? 0u : (n == 32 ? ~0u : (1u << n) - 1));
  return it == layer.end() ? RingElement::zero(ring) : it->second;
}

RingMatrix minor_matrix(const RingMatrix& m, std::size_t skip_row, std::size_t skip_col) {
  const std::size_t n = m.rows();
  RingMatrix r(m.ring(), n - 1, n - 1);
  for (std::size_t i = 0, ri = 0; i < n; ++i) {
    if (i == skip_row) continue;
    for (std::size_t j = 0, rj = 0; j < n; ++j) {
      if (j == skip_col) continue;
      r(ri, rj++) = m(i, j);
    }
    ++ri;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

EchelonForm rref(const RingMatrix& m) {
  require_kind(m, m.ring()->is_field(), "rref");
  const Ring& ring = m.ring();
  RingMatrix r = m;
  RingMatrix t = RingMatrix::identity(ring, m.rows());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && r(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    r.swap_rows(row, piv);
    t.swap_rows(row, piv);
    const RingElement inv = *r(row, col).try_invert();
    for (std::size_t j = 0; j < m.cols(); ++j) r(row, j) *= inv;
    for (std::size_t j = 0; j < m.rows(); ++j) t(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || r(i, col).is_zero()) continue;
      const RingElement factor = r(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) -= factor * r(row, j);
      for (std::size_t j = 0; j < m.rows(); ++j) t(i, j) -= factor * t(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return EchelonForm{std::move(r), row, std::move(pivots), std::move(t)};
}

std::size_t rank(const RingMatrix& m) {
  if (m.ring()->is_field()) return rref(m).rank;
  IntMat h = to_int(m);
  IntMat u = IntMat::identity(h.rows);
  return hermite_in_place(h, u);
}

std::optional<RingMatrix> solve_right(const RingMatrix& a, const RingMatrix& b) {
  if (!same_ring(a.ring(), b.ring())) throw DescriptorMismatch("solve_right: different rings");
  if (a.rows() != b.rows()) throw ShapeError("solve_right: row counts differ");
  if (a.ring()->is_field()) return solve_field(a, b);
  require_kind(a, a.ring()->kind() == RingKind::Integers, "solve_right");
  return solve_integer(a, b);
}

RingMatrix kernel_basis(const RingMatrix& m) {
  const Ring& ring = m.ring();
  if (ring->is_field()) {
    const EchelonForm ef = rref(m);
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0, p = 0; j < m.cols(); ++j) {
      if (p < ef.pivots.size() && ef.pivots[p] == j) {
        ++p;
      } else {
        free_cols.push_back(j);
      }
    }
    RingMatrix k(ring, m.cols(), free_cols.size());
    for (std::size_t c = 0; c < free_cols.size(); ++c) {
      k(free_cols[c], c) = RingElement::one(ring);
      for (std::size_t i = 0; i < ef.rank; ++i) k(ef.pivots[i], c) = -ef.reduced(i, free_cols[c]);
    }
    return k;
  }
  const ColumnHermite ch = column_hermite(to_int(m));
  IntMat k(m.cols(), m.cols() - ch.rank);
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t c = ch.rank; c < m.cols(); ++c) k(i, c - ch.rank) = ch.vt(i, c);
  return from_int(k);
}

HermiteForm hnf(const RingMatrix& m) {
  IntMat h = to_int(m);
  IntMat u = IntMat::identity(h.rows);
  hermite_in_place(h, u);
  return HermiteForm{from_int(h), from_int(u)};
}

std::vector<mpz_class> SmithDecomposition::diagonal() const {
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i).integer());
  return out;
}

SmithDecomposition snf(const RingMatrix& m) {
  IntMat d = to_int(m);
  IntMat u = IntMat::identity(d.rows);
  IntMat v = IntMat::identity(d.cols);
  const std::size_t steps = std::min(d.rows, d.cols);
  for (std::size_t t = 0; t < steps; ++t) {
    bool exhausted = false;
    for (;;) {
      std::size_t bi = d.rows, bj = d.cols;
      for (std::size_t i = t; i < d.rows; ++i)
        for (std::size_t j = t; j < d.cols; ++j)
          if (d(i, j) != 0 && (bi == d.rows || abs(d(i, j)) < abs(d(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == d.rows) {
        exhausted = true;
        break;
      }
      d.swap_rows(t, bi);
      u.swap_rows(t, bi);
      d.swap_cols(t, bj);
      v.swap_cols(t, bj);

      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows; ++i) {
        if (d(i, t) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        d.row_sub(i, t, q);
        u.row_sub(i, t, q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols; ++j) {
        if (d(t, j) == 0) continue;
        mpz_class q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        d.col_sub(j, t, q);
        v.col_sub(j, t, q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // The pivot must divide every remaining entry.
      std::size_t offender = d.rows;
      for (std::size_t i = t + 1; i < d.rows && offender == d.rows; ++i)
        for (std::size_t j = t + 1; j < d.cols; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            offender = i;
            break;
          }
      if (offender == d.rows) break;
      d.row_sub(t, offender, -1);
      u.row_sub(t, offender, -1);
    }
    if (exhausted) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return SmithDecomposition{from_int(u), from_int(d), from_int(v)};
}

std::string AbelianGroupStructure::to_string() const {
  std::ostringstream out;
  bool first = true;
  if (free_rank > 0) {
    out << "Z^" << free_rank;
    first = false;
  }
  for (const auto& t : torsion) {
    out << (first ? "" : " + ") << "Z/" << t.get_str();
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

AbelianGroupStructure direct_sum(const AbelianGroupStructure& a, const AbelianGroupStructure& b) {
  AbelianGroupStructure out;
  out.free_rank = a.free_rank + b.free_rank;
  std::vector<mpz_class> all = a.torsion;
  all.insert(all.end(), b.torsion.begin(), b.torsion.end());
  if (all.empty()) return out;
  const Ring z = RingDescriptor::integers();
  RingMatrix diag(z, all.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) diag(i, i) = RingElement::from_integer(z, all[i]);
  for (const auto& d : snf(diag).diagonal()) {
    if (d > 1) out.torsion.push_back(d);
  }
  return out;
}

AbelianGroupStructure cokernel_structure(const RingMatrix& g, std::size_t ambient_rank) {
  if (g.rows() != ambient_rank) throw ShapeError("cokernel_structure: generator rows differ from ambient rank");
  AbelianGroupStructure out;
  if (g.ring()->is_field()) {
    out.free_rank = ambient_rank - rank(g);
    return out;
  }
  require_kind(g, g.ring()->kind() == RingKind::Integers, "cokernel_structure");
  std::size_t nonzero = 0;
  for (const auto& d : snf(g).diagonal()) {
    if (d == 0) continue;
    ++nonzero;
    if (d > 1) out.torsion.push_back(d);
  }
  out.free_rank = ambient_rank - nonzero;
  return out;
}

RingMatrix canonical_column_basis(const RingMatrix& g) {
  if (g.ring()->is_field()) {
    const EchelonForm ef = rref(g.transpose());
    return ef.reduced.row_range(0, ef.rank).transpose();
  }
  require_kind(g, g.ring()->kind() == RingKind::Integers, "canonical_column_basis");
  IntMat h(g.cols(), g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) h(j, i) = g(i, j).integer();
  IntMat u = IntMat::identity(h.rows);
  const std::size_t r = hermite_in_place(h, u);
  IntMat out(g.rows(), r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < g.rows(); ++i) out(i, k) = h(k, i);
  return from_int(out);
}

RingMatrix column_space_sum(const RingMatrix& a, const RingMatrix& b) {
  return canonical_column_basis(hcat(a, b));
}

bool membership(const RingMatrix& v, const RingMatrix& g) { return solve_right(g, v).has_value(); }

bool same_column_space(const RingMatrix& a, const RingMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("same_column_space: ambient ranks differ");
  return canonical_column_basis(a) == canonical_column_basis(b);
}

RingElement det(const RingMatrix& m) {
  if (!m.is_square()) throw ShapeError("det of a non-square matrix");
  switch (m.ring()->kind()) {
    case RingKind::Rationals:
    case RingKind::PrimeField:
      return det_field(m);
    case RingKind::Integers:
      return det_integer(m);
    case RingKind::PolyQuotient:
      return det_expansion(m);
  }
  throw Error("unknown ring kind");
}

std::optional<RingMatrix> inverse(const RingMatrix& m) {
  if (!m.is_square()) throw ShapeError("inverse of a non-square matrix");
  const Ring& ring = m.ring();
  const std::size_t n = m.rows();
  if (ring->is_field()) {
    EchelonForm ef = rref(m);
    if (ef.rank != n) return std::nullopt;
    return std::move(ef.transform);
  }
  const auto d_inv = det(m).try_invert();
  if (!d_inv) return std::nullopt;
  if (ring->kind() == RingKind::Integers) return solve_right(m, RingMatrix::identity(ring, n));
  RingMatrix inv(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RingElement c = det(minor_matrix(m, j, i)) * *d_inv;
      inv(i, j) = (i + j) % 2 ? -c : c;
    }
  return inv;
}

}  // namespace fbk

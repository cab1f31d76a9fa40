#pragma once

// Random generators and independent oracles shared by the test binaries.
// The oracles use plain GMP arithmetic on nested vectors and never call into
// the library's linear algebra.

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "fbk/equivalence.hpp"

namespace fbk::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline RingElement random_element(const Ring& ring, Rng& rng) {
  switch (ring->kind()) {
    case RingKind::Rationals: {
      mpq_class q(uniform(rng, -5, 5), uniform(rng, 1, 4));
      q.canonicalize();
      return RingElement::from_rational(ring, q);
    }
    case RingKind::PrimeField:
      return RingElement::from_int(ring, uniform(rng, 0, static_cast<long>(ring->prime()) - 1));
    case RingKind::Integers:
      return RingElement::from_int(ring, uniform(rng, -9, 9));
    case RingKind::PolyQuotient: {
      const std::size_t k = ring->vars().size();
      Polynomial p(k);
      const long terms = uniform(rng, 0, 4);
      for (long t = 0; t < terms; ++t) {
        Exponents e(k, 0);
        long budget = uniform(rng, 0, 3);
        for (std::size_t v = 0; v < k && budget > 0; ++v) {
          const long d = uniform(rng, 0, budget);
          e[v] = static_cast<std::uint32_t>(d);
          budget -= d;
        }
        p.add_term(e, mpq_class(uniform(rng, -3, 3), uniform(rng, 1, 2)));
      }
      return reduce(p, ring);
    }
  }
  return RingElement::zero(ring);
}

/// Entries are zero with probability `zero_bias`.
inline RingMatrix random_matrix(const Ring& ring, std::size_t rows, std::size_t cols, Rng& rng,
                                double zero_bias = 0.3) {
  RingMatrix m(ring, rows, cols);
  std::bernoulli_distribution zero(zero_bias);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!zero(rng)) m(i, j) = random_element(ring, rng);
  return m;
}

/// Product of random elementary operations with unit pivots; invertible over any ring.
inline RingMatrix random_invertible(const Ring& ring, std::size_t n, Rng& rng) {
  RingMatrix m = RingMatrix::identity(ring, n);
  if (n == 0) return m;
  for (std::size_t step = 0; step < 3 * n + 2; ++step) {
    const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    const long kind = uniform(rng, 0, 2);
    if (kind == 0 && i != j) {
      const RingElement c = ring->kind() == RingKind::Integers ? RingElement::from_int(ring, uniform(rng, -2, 2))
                                                               : random_element(ring, rng);
      for (std::size_t col = 0; col < n; ++col) m(i, col) += c * m(j, col);
    } else if (kind == 1) {
      m.swap_rows(i, j);
    } else {
      RingElement unit = RingElement::from_int(ring, -1);
      if (ring->is_field()) {
        RingElement c = random_element(ring, rng);
        if (!c.is_zero()) unit = c;
      }
      for (std::size_t col = 0; col < n; ++col) m(i, col) *= unit;
    }
  }
  return m;
}

inline FeedbackTransform random_feedback(const Ring& ring, std::size_t n, std::size_t m, Rng& rng) {
  return FeedbackTransform{random_invertible(ring, n, rng), random_matrix(ring, m, n, rng),
                           random_invertible(ring, m, rng)};
}

/// Non-increasing partition of n with at most `max_parts` parts.
inline std::vector<std::size_t> random_partition(std::size_t n, std::size_t max_parts, Rng& rng) {
  std::vector<std::size_t> parts;
  std::size_t left = n;
  while (left > 0) {
    const std::size_t slots = max_parts - parts.size();
    const std::size_t lo = (left + slots - 1) / slots;
    const auto part = static_cast<std::size_t>(uniform(rng, static_cast<long>(lo), static_cast<long>(left)));
    parts.push_back(part);
    left -= part;
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return parts;
}

/// Locally Brunovsky system over a field or Z: a canonical pair moved by a
/// random feedback action.
inline LinearSystem random_brunovsky_system(const Ring& ring, std::size_t n, Rng& rng) {
  const std::size_t max_parts = std::max<std::size_t>(1, static_cast<std::size_t>(uniform(rng, 1, 3)));
  const auto indices = random_partition(n, max_parts, rng);
  const auto canon = canonical_pair(ring, indices, indices.size());
  const auto t = random_feedback(ring, n, indices.size(), rng);
  const MatrixPair moved = apply_feedback(MatrixPair{canon.a_c, canon.b_c}, t);
  return LinearSystem::from_pair(moved.a, moved.b);
}

// ---------------------------------------------------------------------------
// Oracles on plain GMP matrices.

using QMat = std::vector<std::vector<mpq_class>>;
using ZMat = std::vector<std::vector<mpz_class>>;

inline QMat to_q(const RingMatrix& m) {
  QMat out(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& e = m(i, j);
      switch (m.ring()->kind()) {
        case RingKind::Rationals:
          out[i][j] = e.rational();
          break;
        case RingKind::Integers:
          out[i][j] = e.integer();
          break;
        case RingKind::PrimeField:
          out[i][j] = static_cast<unsigned long>(e.residue());
          break;
        case RingKind::PolyQuotient:
          break;
      }
    }
  return out;
}

inline ZMat to_z(const RingMatrix& m) {
  ZMat out(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).integer();
  return out;
}

/// Rank by fraction Gaussian elimination; with p > 0 every step is taken mod p.
inline std::size_t oracle_rank(QMat a, unsigned long p = 0) {
  const auto normal = [p](mpq_class& v) {
    if (p == 0) return;
    mpz_class num = v.get_num() % p;
    mpz_class den = v.get_den() % p;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mpz_class(p).get_mpz_t());
    v = mpq_class(((num * inv) % p + p) % p);
  };
  for (auto& row : a)
    for (auto& v : row) normal(v);
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      mpq_class factor = a[r][c] / a[rank][c];
      normal(factor);
      for (std::size_t k = c; k < cols; ++k) {
        a[r][k] -= factor * a[rank][k];
        normal(a[r][k]);
      }
    }
    ++rank;
  }
  return rank;
}

/// dim of B + A B + ... + A^(i-1) B for i = 1 .. n + 1, over Q (p = 0) or GF(p).
inline std::vector<std::size_t> oracle_kalman_dims(const RingMatrix& a, const RingMatrix& b, unsigned long p = 0) {
  const QMat qa = to_q(a);
  QMat block = to_q(b);
  const std::size_t n = qa.size();
  QMat kalman(n);
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t r = 0; r < n; ++r) kalman[r].insert(kalman[r].end(), block[r].begin(), block[r].end());
    dims.push_back(oracle_rank(kalman, p));
    QMat next(n, std::vector<mpq_class>(block.empty() ? 0 : block[0].size()));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < next[r].size(); ++c) next[r][c] += qa[r][k] * block[k][c];
    block = std::move(next);
  }
  return dims;
}

/// Z-ranks from Kalman dims: dim I_i = d_i - d_(i-1), z_i = dim I_i - dim I_(i+1).
inline std::vector<std::size_t> oracle_z_ranks(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> inc;
  std::size_t prev = 0;
  for (const auto d : dims) {
    inc.push_back(d - prev);
    prev = d;
  }
  inc.push_back(0);
  std::vector<std::size_t> z;
  for (std::size_t i = 0; i + 1 < inc.size(); ++i) z.push_back(inc[i] - inc[i + 1]);
  while (!z.empty() && z.back() == 0) z.pop_back();
  return z;
}

inline mpz_class oracle_det(const ZMat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    ZMat minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<mpz_class> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const mpz_class term = m[0][j] * oracle_det(minor);
    total += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return total;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      fn(idx);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

/// Invariant factors from determinantal divisors: d_k = gcd of k x k minors,
/// s_k = d_k / d_(k-1). Only nonzero factors are returned.
inline std::vector<mpz_class> oracle_invariant_factors(const ZMat& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    mpz_class g = 0;
    for_each_subset(rows, k, [&](const std::vector<std::size_t>& rs) {
      for_each_subset(cols, k, [&](const std::vector<std::size_t>& cs) {
        ZMat sub(k, std::vector<mpz_class>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[rs[i]][cs[j]];
        const mpz_class d = oracle_det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      });
    });
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

}  // namespace fbk::testing

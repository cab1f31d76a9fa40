#pragma once

// Exact linear algebra: echelon forms and solving over fields, Hermite and
// Smith normal forms over Z, kernels, submodule sums and membership, and
// cokernel structure of integer relation matrices.
//
// Submodules of R^n are always passed around as generator matrices (one
// generator per column). canonical_column_basis() turns a generator matrix
// into the canonical representative: reduced column echelon form over a field,
// column Hermite form over Z. Two submodules are equal iff their canonical
// bases are equal as matrices.

#include <optional>
#include <string>
#include <vector>

#include "fbk/matrix.hpp"

namespace fbk {

struct EchelonForm {
  RingMatrix reduced;                // R, reduced row-echelon form of M
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
  RingMatrix transform;              // invertible T with T * M = R
};

/// Field rings only.
EchelonForm rref(const RingMatrix& m);

std::size_t rank(const RingMatrix& m);

/// X with a * X = b, or nullopt. Over Z only integral solutions count.
std::optional<RingMatrix> solve_right(const RingMatrix& a, const RingMatrix& b);

/// Columns spanning ker m: a basis over fields, a lattice basis over Z.
RingMatrix kernel_basis(const RingMatrix& m);

struct HermiteForm {
  RingMatrix h;  // row-style Hermite normal form
  RingMatrix u;  // unimodular, u * m = h
};

/// Row-style HNF over Z: h is in row echelon form, pivots are positive and the
/// entries above each pivot lie in [0, pivot).
HermiteForm hnf(const RingMatrix& m);

struct SmithDecomposition {
  RingMatrix u;  // unimodular, rows x rows
  RingMatrix d;  // diagonal, d_1 | d_2 | ..., all d_i >= 0
  RingMatrix v;  // unimodular, cols x cols

  /// Diagonal of d (length min(rows, cols)).
  std::vector<mpz_class> diagonal() const;
};

/// u * m * v = d. Pivoting picks the entry of least absolute value.
SmithDecomposition snf(const RingMatrix& m);

/// Structure of a finitely generated module over a field or Z. Over a field
/// `torsion` is always empty and `free_rank` is the dimension.
struct AbelianGroupStructure {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;  // invariant factors > 1, d_1 | d_2 | ...

  bool is_free() const { return torsion.empty(); }
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  std::string to_string() const;

  friend bool operator==(const AbelianGroupStructure&, const AbelianGroupStructure&) = default;
};

/// Invariant-factor form of a (+) b.
AbelianGroupStructure direct_sum(const AbelianGroupStructure& a, const AbelianGroupStructure& b);

/// Structure of R^ambient_rank / col(g).
AbelianGroupStructure cokernel_structure(const RingMatrix& g, std::size_t ambient_rank);

/// Canonical generator matrix of col(g); full column rank.
RingMatrix canonical_column_basis(const RingMatrix& g);

/// Canonical generators of col(a) + col(b).
RingMatrix column_space_sum(const RingMatrix& a, const RingMatrix& b);

/// Whether every column of v lies in col(g).
bool membership(const RingMatrix& v, const RingMatrix& g);

/// Whether col(a) and col(b) are the same submodule.
bool same_column_space(const RingMatrix& a, const RingMatrix& b);

RingElement det(const RingMatrix& m);

/// Two-sided inverse over fields and Z (det = +-1). Over a polynomial quotient
/// ring only matrices whose determinant is a nonzero constant are inverted.
std::optional<RingMatrix> inverse(const RingMatrix& m);

}  // namespace fbk

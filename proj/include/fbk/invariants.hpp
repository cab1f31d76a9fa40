#pragma once

// Invariant modules of a linear system:
//   N_0 = 0, N_i = B + f(N_{i-1})      (reachability chain)
//   M_i = X / N_i
//   I_i = N_i / N_{i-1}               (kernel of M_{i-1} -> M_i)
//   Z_i = ker(I_i -> I_{i+1})         (map induced by f)
// computed exactly over fields and Z, plus Brunovsky data over fields.

#include <string>
#include <vector>

#include "fbk/system.hpp"

namespace fbk {

struct InvariantReport {
  Ring ring;
  std::size_t state_rank = 0;
  /// Canonical bases of N_0, ..., N_s.
  std::vector<RingMatrix> chain;
  /// First s with N_{s+1} = N_s.
  std::size_t stabilization_index = 0;
  std::vector<AbelianGroupStructure> quotients;   // M_0 .. M_s
  std::vector<AbelianGroupStructure> increments;  // I_1 .. I_s, stored at [i - 1]
  std::vector<AbelianGroupStructure> z_modules;   // Z_1 .. Z_s, stored at [i - 1]
  bool reachable = false;
  bool locally_brunovsky = false;

  // Accessors valid for every i; past s the chain is constant, so I_i = Z_i = 0.
  std::size_t chain_rank(std::size_t i) const;
  AbelianGroupStructure m_module(std::size_t i) const;
  AbelianGroupStructure i_module(std::size_t i) const;
  AbelianGroupStructure z_module(std::size_t i) const;
};

/// Fields and Z; throws Unsupported otherwise.
InvariantReport compute_chain(const LinearSystem& sigma);

/// (rank Z_1, ..., rank Z_s). Sequences compare equal up to trailing zeros.
struct ZSignature {
  std::vector<std::size_t> ranks;

  std::string to_string() const;
  friend bool operator==(const ZSignature& a, const ZSignature& b);
};

/// Throws NotLocallyBrunovsky.
ZSignature z_signature(const InvariantReport& report);
ZSignature z_signature(const LinearSystem& sigma);

struct BrunovskyData {
  /// Non-increasing; sums to n.
  std::vector<std::size_t> indices;
  RingMatrix a_c;
  RingMatrix b_c;

  friend bool operator==(const BrunovskyData&, const BrunovskyData&) = default;
};

/// Conjugate partition: entry j is #{i : dims[i] > j}.
std::vector<std::size_t> conjugate_partition(const std::vector<std::size_t>& parts);

/// Shift blocks e_1 -> e_2 -> ... -> e_k -> 0 per index; column t of b_c is
/// the first vector of block t, padded with zero columns up to `input_cols`.
BrunovskyData canonical_pair(const Ring& ring, const std::vector<std::size_t>& indices, std::size_t input_cols);

/// Field rings; throws NotReachable.
BrunovskyData brunovsky(const LinearSystem& sigma);

/// (P, K, Q) acting on a pair: (A, B) -> (P (A + B K) P^-1, P B Q).
struct FeedbackTransform {
  RingMatrix p;
  RingMatrix k;
  RingMatrix q;
};

struct MatrixPair {
  RingMatrix a;
  RingMatrix b;
};

/// Throws Error if P or Q is not invertible.
MatrixPair apply_feedback(const MatrixPair& pair, const FeedbackTransform& t);

struct CanonicalCertificate {
  BrunovskyData canonical;  // b_c padded to the input width of the pair
  FeedbackTransform transform;
};

/// Brunovsky form of a reachable pair over a field together with (P, K, Q)
/// mapping the pair onto it. Throws NotReachable.
CanonicalCertificate canonical_certificate(const MatrixPair& pair);

}  // namespace fbk

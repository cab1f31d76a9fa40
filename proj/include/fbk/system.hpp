#pragma once

// Linear systems (R^n, f, B) and the constructions on them: pair import,
// direct sum, trivial systems Gamma(p), dynamic enlargement and morphism
// checks.

#include <optional>

#include "fbk/linalg.hpp"

namespace fbk {

/// Sigma = (R^n, f, B). B is the column span of `input_gens`. Over fields and
/// Z the generators are kept canonical, so equal systems compare equal; over a
/// polynomial quotient ring they are stored as given.
class LinearSystem {
 public:
  /// Sigma_{A,B} = (R^n, A, Im(B)). Throws ShapeError / DescriptorMismatch.
  static LinearSystem from_pair(const RingMatrix& endo, const RingMatrix& input);
  /// Gamma(p) = (R^p, 0, R^p); Gamma(0) is the zero system.
  static LinearSystem gamma(const Ring& ring, std::size_t p);
  static LinearSystem zero(const Ring& ring) { return gamma(ring, 0); }

  const Ring& ring() const { return endo_.ring(); }
  std::size_t state_rank() const { return endo_.rows(); }
  const RingMatrix& endo() const { return endo_; }
  const RingMatrix& input_gens() const { return input_gens_; }

  friend bool operator==(const LinearSystem& a, const LinearSystem& b) {
    return a.endo_ == b.endo_ && a.input_gens_ == b.input_gens_;
  }

 private:
  LinearSystem(RingMatrix endo, RingMatrix input) : endo_(std::move(endo)), input_gens_(std::move(input)) {}

  RingMatrix endo_;
  RingMatrix input_gens_;
};

/// (X1 (+) X2, f1 (+) f2, B1 (+) B2).
LinearSystem direct_sum(const LinearSystem& a, const LinearSystem& b);

/// Gamma(p) (+) sigma: the ancillary coordinates come first.
LinearSystem dynamic_enlarge(const LinearSystem& sigma, std::size_t p);

/// phi(B1) in B2 and Im(f2 phi - phi f1) in B2. Fields and Z only; throws
/// Unsupported over polynomial quotient rings.
bool is_morphism(const RingMatrix& phi, const LinearSystem& source, const LinearSystem& target);

/// A state map that has passed is_morphism.
class SystemMorphism {
 public:
  static std::optional<SystemMorphism> make(RingMatrix map, const LinearSystem& source, const LinearSystem& target);

  const RingMatrix& map() const { return map_; }
  const LinearSystem& source() const { return source_; }
  const LinearSystem& target() const { return target_; }

  /// this after `first`; throws ShapeError if the systems do not chain.
  SystemMorphism after(const SystemMorphism& first) const;

 private:
  SystemMorphism(RingMatrix map, LinearSystem source, LinearSystem target)
      : map_(std::move(map)), source_(std::move(source)), target_(std::move(target)) {}

  RingMatrix map_;
  LinearSystem source_;
  LinearSystem target_;
};

struct Biproduct {
  SystemMorphism pi1, pi2;      // sum -> summand
  SystemMorphism iota1, iota2;  // summand -> sum
};

Biproduct biproduct_witnesses(const LinearSystem& a, const LinearSystem& b);

/// Permutation X1 (+) X2 -> X2 (+) X1.
RingMatrix swap_map(const Ring& ring, std::size_t n1, std::size_t n2);

}  // namespace fbk

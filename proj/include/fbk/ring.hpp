#pragma once

// Exact scalars for the supported base rings: Q, GF(p), Z and Q[x1..xk]/(g).

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fbk/error.hpp"

namespace fbk {

using Exponents = std::vector<std::uint32_t>;

/// Graded-lex order: total degree first, then lexicographic with the first
/// variable most significant.
bool grlex_less(const Exponents& a, const Exponents& b);

struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_less(b, a); }
};

/// Multivariate polynomial with rational coefficients. Terms are kept sorted
/// from the grlex-largest monomial down and zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<Exponents, mpq_class, GrlexGreater>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const mpq_class& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Constant polynomials, including zero.
  bool is_constant() const;
  std::uint32_t total_degree() const;

  /// Largest monomial under grlex. Requires a nonzero polynomial.
  const Exponents& leading_monomial() const;
  const mpq_class& leading_coefficient() const;

  void add_term(const Exponents& monomial, const mpq_class& coefficient);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial scaled(const mpq_class& c) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  std::string to_string(const std::vector<std::string>& var_names) const;

 private:
  std::size_t num_vars_;
  Terms terms_;
};

/// Parses an expanded polynomial such as "x^2*y - 3/2*z + 1".
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& var_names);

enum class RingKind { Rationals, PrimeField, Integers, PolyQuotient };

class RingDescriptor;
using Ring = std::shared_ptr<const RingDescriptor>;

class RingDescriptor {
 public:
  static Ring rationals();
  /// Throws Error unless p is prime.
  static Ring prime_field(std::uint64_t p);
  static Ring integers();
  /// Throws Error for a constant or zero relation, duplicate or empty names.
  static Ring poly_quotient(std::vector<std::string> vars, const Polynomial& relation);
  static Ring poly_quotient(std::vector<std::string> vars, std::string_view relation);

  RingKind kind() const { return kind_; }
  bool is_field() const { return kind_ == RingKind::Rationals || kind_ == RingKind::PrimeField; }
  /// Rings where submodule membership is decided (fields and Z).
  bool has_decidable_membership() const { return kind_ != RingKind::PolyQuotient; }

  std::uint64_t prime() const { return prime_; }
  const std::vector<std::string>& vars() const { return vars_; }
  /// Relation normalised to leading coefficient 1.
  const Polynomial& relation() const { return relation_; }

  std::string to_string() const;

  friend bool operator==(const RingDescriptor& a, const RingDescriptor& b) {
    return a.kind_ == b.kind_ && a.prime_ == b.prime_ && a.vars_ == b.vars_ &&
           a.relation_ == b.relation_;
  }

 private:
  RingDescriptor() = default;

  RingKind kind_ = RingKind::Rationals;
  std::uint64_t prime_ = 0;
  std::vector<std::string> vars_;
  Polynomial relation_;
};

bool same_ring(const Ring& a, const Ring& b);

enum class ArithOp { Add, Sub, Mul };

/// An element of one of the supported rings, always stored in canonical form.
class RingElement {
 public:
  using Payload = std::variant<mpq_class, std::uint64_t, mpz_class, Polynomial>;

  static RingElement zero(const Ring& ring);
  static RingElement one(const Ring& ring);
  static RingElement from_int(const Ring& ring, long value);
  static RingElement from_integer(const Ring& ring, const mpz_class& value);
  /// Q only.
  static RingElement from_rational(const Ring& ring, const mpq_class& value);
  /// Parses the literal syntax of the ring (see README).
  static RingElement parse(const Ring& ring, std::string_view text);

  const Ring& ring() const { return ring_; }
  const Payload& payload() const { return value_; }

  bool is_zero() const;
  bool is_one() const;

  const mpq_class& rational() const { return std::get<mpq_class>(value_); }
  std::uint64_t residue() const { return std::get<std::uint64_t>(value_); }
  const mpz_class& integer() const { return std::get<mpz_class>(value_); }
  const Polynomial& polynomial() const { return std::get<Polynomial>(value_); }

  RingElement operator+(const RingElement& other) const;
  RingElement operator-(const RingElement& other) const;
  RingElement operator*(const RingElement& other) const;
  RingElement operator-() const;
  RingElement& operator+=(const RingElement& other) { return *this = *this + other; }
  RingElement& operator-=(const RingElement& other) { return *this = *this - other; }
  RingElement& operator*=(const RingElement& other) { return *this = *this * other; }

  /// Inverse when one is certified: fields (a != 0), Z (a = +-1), PolyQuotient
  /// (nonzero constants only).
  std::optional<RingElement> try_invert() const;

  std::string to_string() const;

  friend bool operator==(const RingElement& a, const RingElement& b);
  friend RingElement arith(const RingElement& a, const RingElement& b, ArithOp op);
  friend RingElement reduce(const Polynomial& p, const Ring& ring);

 private:
  RingElement(Ring ring, Payload value) : ring_(std::move(ring)), value_(std::move(value)) {}

  Ring ring_;
  Payload value_;
};

/// Throws DescriptorMismatch when a and b live in different rings.
RingElement arith(const RingElement& a, const RingElement& b, ArithOp op);

/// Normal form of p modulo the relation of a PolyQuotient ring.
RingElement reduce(const Polynomial& p, const Ring& ring);

inline std::ostream& operator<<(std::ostream& out, const RingElement& a) { return out << a.to_string(); }

}  // namespace fbk

#include "fbk/ring.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace fbk {

bool grlex_less(const Exponents& a, const Exponents& b) {
  const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(std::size_t num_vars, const mpq_class& c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  e.at(index) = 1;
  p.add_term(e, 1);
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

std::uint32_t Polynomial::total_degree() const {
  if (terms_.empty()) return 0;
  const auto& e = terms_.begin()->first;
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

const Exponents& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw Error("leading monomial of the zero polynomial");
  return terms_.begin()->first;
}

const mpq_class& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw Error("leading coefficient of the zero polynomial");
  return terms_.begin()->second;
}

void Polynomial::add_term(const Exponents& monomial, const mpq_class& coefficient) {
  if (monomial.size() != num_vars_) throw ShapeError("monomial has the wrong number of variables");
  if (coefficient == 0) return;
  mpq_class c = coefficient;
  c.canonicalize();
  auto [it, inserted] = terms_.try_emplace(monomial, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r = *this;
  for (const auto& [m, c] : other.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial r = *this;
  for (const auto& [m, c] : other.terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (num_vars_ != other.num_vars_) throw ShapeError("polynomials over different variable sets");
  Polynomial r(num_vars_);
  Exponents e(num_vars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      for (std::size_t i = 0; i < num_vars_; ++i) e[i] = ma[i] + mb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const mpq_class& c) const {
  Polynomial r(num_vars_);
  if (c == 0) return r;
  for (const auto& [m, coeff] : terms_) r.terms_.emplace(m, coeff * c);
  return r;
}

std::string Polynomial::to_string(const std::vector<std::string>& var_names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    mpq_class mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      factors.push_back(m[i] == 1 ? var_names.at(i) : var_names.at(i) + "^" + std::to_string(m[i]));
    }
    if (factors.empty()) {
      out << mag.get_str();
      continue;
    }
    if (mag != 1) out << mag.get_str() << "*";
    for (std::size_t i = 0; i < factors.size(); ++i) out << (i ? "*" : "") << factors[i];
  }
  return out.str();
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Recursive-descent parser over expanded polynomials:
//   poly   := [sign] term (sign term)*
//   term   := factor ('*' factor)*
//   factor := INT ['/' INT] | IDENT ['^' INT]
class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial result(vars_.size());
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    result = result + (negate ? -term() : term());
    for (;;) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
      ++pos_;
      result = result + (c == '-' ? -term() : term());
    }
    return result;
  }

 private:
  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      skip_ws();
      if (at_end() || peek() != '*') return acc;
      ++pos_;
      acc = acc * factor();
    }
  }

  Polynomial factor() {
    skip_ws();
    if (at_end()) fail("expected a factor");
    if (is_digit(peek())) {
      mpz_class num(read_digits(), 10);
      skip_ws();
      mpz_class den = 1;
      if (!at_end() && peek() == '/') {
        ++pos_;
        skip_ws();
        if (at_end() || !is_digit(peek())) fail("expected a denominator");
        den = mpz_class(read_digits(), 10);
        if (den == 0) fail("zero denominator");
      }
      mpq_class q(num, den);
      q.canonicalize();
      return Polynomial::constant(vars_.size(), q);
    }
    if (is_ident_start(peek())) {
      const std::size_t start = pos_;
      while (!at_end() && is_ident_char(peek())) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      const auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) fail("unknown variable '" + name + "'");
      std::uint32_t exponent = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        if (at_end() || !is_digit(peek())) fail("malformed exponent");
        const std::string digits = read_digits();
        if (digits.size() > 6) fail("exponent too large");
        exponent = static_cast<std::uint32_t>(std::stoul(digits));
        if (!at_end() && (peek() == '.' || is_ident_char(peek()))) fail("malformed exponent");
      }
      Exponents e(vars_.size(), 0);
      e[static_cast<std::size_t>(it - vars_.begin())] = exponent;
      Polynomial p(vars_.size());
      p.add_term(e, 1);
      return p;
    }
    fail(std::string("unexpected '") + peek() + "'");
  }

  std::string read_digits() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// [+-]?digits, optionally followed by /digits when allow_fraction is set.
bool matches_number(std::string_view s, bool allow_fraction) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t num_start = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i == num_start) return false;
  if (i == s.size()) return true;
  if (!allow_fraction || s[i] != '/') return false;
  ++i;
  const std::size_t den_start = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  return i > den_start && i == s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpz_class parse_integer_literal(std::string_view s) {
  std::string t(s);
  if (!t.empty() && t.front() == '+') t.erase(0, 1);
  return mpz_class(t, 10);
}

std::uint64_t mod_reduce(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return r.get_ui();
}

__extension__ using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % p);
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& var_names) {
  return PolyParser(text, var_names).parse();
}

// ---------------------------------------------------------------------------
// RingDescriptor

Ring RingDescriptor::rationals() {
  static const Ring q = [] {
    auto* d = new RingDescriptor();
    d->kind_ = RingKind::Rationals;
    return Ring(d);
  }();
  return q;
}

Ring RingDescriptor::integers() {
  static const Ring z = [] {
    auto* d = new RingDescriptor();
    d->kind_ = RingKind::Integers;
    return Ring(d);
  }();
  return z;
}

Ring RingDescriptor::prime_field(std::uint64_t p) {
  mpz_class pz;
  mpz_import(pz.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  if (p < 2 || mpz_probab_prime_p(pz.get_mpz_t(), 40) == 0) {
    throw Error("GF(p) requires a prime modulus, got " + std::to_string(p));
  }
  auto* d = new RingDescriptor();
  d->kind_ = RingKind::PrimeField;
  d->prime_ = p;
  return Ring(d);
}

Ring RingDescriptor::poly_quotient(std::vector<std::string> vars, const Polynomial& relation) {
  if (vars.empty()) throw Error("polynomial quotient ring needs at least one variable");
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (v.empty() || !is_ident_start(v.front()) ||
        !std::all_of(v.begin(), v.end(), is_ident_char)) {
      throw Error("invalid variable name '" + v + "'");
    }
    if (!seen.insert(v).second) throw Error("duplicate variable name '" + v + "'");
  }
  if (relation.num_vars() != vars.size()) throw ShapeError("relation uses a different variable count");
  if (relation.is_constant()) throw Error("relation must be non-constant");
  auto* d = new RingDescriptor();
  d->kind_ = RingKind::PolyQuotient;
  d->vars_ = std::move(vars);
  d->relation_ = relation.scaled(1 / relation.leading_coefficient());
  return Ring(d);
}

Ring RingDescriptor::poly_quotient(std::vector<std::string> vars, std::string_view relation) {
  const Polynomial g = parse_polynomial(relation, vars);
  return poly_quotient(std::move(vars), g);
}

std::string RingDescriptor::to_string() const {
  switch (kind_) {
    case RingKind::Rationals:
      return "Q";
    case RingKind::PrimeField:
      return "GF(" + std::to_string(prime_) + ")";
    case RingKind::Integers:
      return "Z";
    case RingKind::PolyQuotient: {
      std::string out = "Q[";
      for (std::size_t i = 0; i < vars_.size(); ++i) out += (i ? "," : "") + vars_[i];
      return out + "]/(" + relation_.to_string(vars_) + ")";
    }
  }
  return "?";
}

bool same_ring(const Ring& a, const Ring& b) { return a == b || (a && b && *a == *b); }

// ---------------------------------------------------------------------------
// RingElement

RingElement RingElement::zero(const Ring& ring) { return from_int(ring, 0); }
RingElement RingElement::one(const Ring& ring) { return from_int(ring, 1); }

RingElement RingElement::from_int(const Ring& ring, long value) {
  return from_integer(ring, mpz_class(value));
}

RingElement RingElement::from_integer(const Ring& ring, const mpz_class& value) {
  switch (ring->kind()) {
    case RingKind::Rationals:
      return {ring, mpq_class(value)};
    case RingKind::PrimeField:
      return {ring, mod_reduce(value, ring->prime())};
    case RingKind::Integers:
      return {ring, value};
    case RingKind::PolyQuotient:
      return reduce(Polynomial::constant(ring->vars().size(), mpq_class(value)), ring);
  }
  throw Error("unknown ring kind");
}

RingElement RingElement::from_rational(const Ring& ring, const mpq_class& value) {
  mpq_class q = value;
  q.canonicalize();
  if (ring->kind() == RingKind::Rationals) return {ring, q};
  if (ring->kind() == RingKind::PolyQuotient) {
    return reduce(Polynomial::constant(ring->vars().size(), q), ring);
  }
  if (q.get_den() != 1) throw DescriptorMismatch("non-integral rational in " + ring->to_string());
  return from_integer(ring, q.get_num());
}

RingElement RingElement::parse(const Ring& ring, std::string_view raw) {
  const std::string_view text = trim(raw);
  const auto bad = [&](const char* expected) {
    return ParseError("malformed " + ring->to_string() + " literal '" + std::string(raw) + "' (expected " +
                      expected + ")");
  };
  switch (ring->kind()) {
    case RingKind::Rationals: {
      if (!matches_number(text, true)) throw bad("n or p/q");
      std::string t(text);
      if (t.front() == '+') t.erase(0, 1);
      mpq_class q(t, 10);
      if (q.get_den() == 0) throw bad("nonzero denominator");
      q.canonicalize();
      return {ring, q};
    }
    case RingKind::PrimeField:
      if (!matches_number(text, false)) throw bad("an integer residue");
      return {ring, mod_reduce(parse_integer_literal(text), ring->prime())};
    case RingKind::Integers:
      if (!matches_number(text, false)) throw bad("an integer");
      return {ring, parse_integer_literal(text)};
    case RingKind::PolyQuotient:
      return reduce(parse_polynomial(text, ring->vars()), ring);
  }
  throw Error("unknown ring kind");
}

bool RingElement::is_zero() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return v.is_zero();
        } else {
          return v == 0;
        }
      },
      value_);
}

bool RingElement::is_one() const { return *this == one(ring_); }

RingElement arith(const RingElement& a, const RingElement& b, ArithOp op) {
  if (!same_ring(a.ring(), b.ring())) {
    throw DescriptorMismatch("operands in " + a.ring()->to_string() + " and " + b.ring()->to_string());
  }
  const Ring& ring = a.ring();
  switch (ring->kind()) {
    case RingKind::Rationals: {
      const auto& x = a.rational();
      const auto& y = b.rational();
      mpq_class r = op == ArithOp::Add ? mpq_class(x + y) : op == ArithOp::Sub ? mpq_class(x - y) : mpq_class(x * y);
      return RingElement::from_rational(ring, r);
    }
    case RingKind::PrimeField: {
      const std::uint64_t p = ring->prime();
      const std::uint64_t x = a.residue();
      const std::uint64_t y = b.residue();
      std::uint64_t r = 0;
      switch (op) {
        case ArithOp::Add:
          r = static_cast<std::uint64_t>((static_cast<u128>(x) + y) % p);
          break;
        case ArithOp::Sub:
          r = static_cast<std::uint64_t>((static_cast<u128>(x) + p - y) % p);
          break;
        case ArithOp::Mul:
          r = mul_mod(x, y, p);
          break;
      }
      return RingElement(ring, r);
    }
    case RingKind::Integers: {
      const auto& x = a.integer();
      const auto& y = b.integer();
      mpz_class r = op == ArithOp::Add ? mpz_class(x + y) : op == ArithOp::Sub ? mpz_class(x - y) : mpz_class(x * y);
      return RingElement::from_integer(ring, r);
    }
    case RingKind::PolyQuotient: {
      const auto& x = a.polynomial();
      const auto& y = b.polynomial();
      if (op == ArithOp::Add) return reduce(x + y, ring);
      if (op == ArithOp::Sub) return reduce(x - y, ring);
      return reduce(x * y, ring);
    }
  }
  throw Error("unknown ring kind");
}

RingElement RingElement::operator+(const RingElement& other) const { return arith(*this, other, ArithOp::Add); }
RingElement RingElement::operator-(const RingElement& other) const { return arith(*this, other, ArithOp::Sub); }
RingElement RingElement::operator*(const RingElement& other) const { return arith(*this, other, ArithOp::Mul); }
RingElement RingElement::operator-() const { return zero(ring_) - *this; }

std::optional<RingElement> RingElement::try_invert() const {
  if (is_zero()) return std::nullopt;
  switch (ring_->kind()) {
    case RingKind::Rationals:
      return from_rational(ring_, 1 / rational());
    case RingKind::PrimeField: {
      mpz_class inv;
      mpz_class v(std::to_string(residue()));
      mpz_class p(std::to_string(ring_->prime()));
      mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
      return from_integer(ring_, inv);
    }
    case RingKind::Integers:
      if (abs(integer()) == 1) return *this;
      return std::nullopt;
    case RingKind::PolyQuotient: {
      const auto& p = polynomial();
      if (!p.is_constant()) return std::nullopt;
      return reduce(Polynomial::constant(p.num_vars(), 1 / p.leading_coefficient()), ring_);
    }
  }
  return std::nullopt;
}

std::string RingElement::to_string() const {
  switch (ring_->kind()) {
    case RingKind::Rationals:
      return rational().get_str();
    case RingKind::PrimeField:
      return std::to_string(residue());
    case RingKind::Integers:
      return integer().get_str();
    case RingKind::PolyQuotient:
      return polynomial().to_string(ring_->vars());
  }
  return "?";
}

bool operator==(const RingElement& a, const RingElement& b) {
  return same_ring(a.ring_, b.ring_) && a.value_ == b.value_;
}

RingElement reduce(const Polynomial& p, const Ring& ring) {
  if (ring->kind() != RingKind::PolyQuotient) throw Unsupported("reduce needs a polynomial quotient ring");
  const Polynomial& g = ring->relation();
  if (p.num_vars() != g.num_vars()) throw ShapeError("polynomial has the wrong number of variables");
  const Exponents& lead = g.leading_monomial();
  const std::size_t k = lead.size();

  Polynomial r = p;
  Exponents quotient(k);
  for (;;) {
    // Largest term divisible by the leading monomial; each rewrite strictly
    // lowers it, so the loop ends because grlex is a well-order.
    const Exponents* hit = nullptr;
    mpq_class coeff;
    for (const auto& [m, c] : r.terms()) {
      bool divisible = true;
      for (std::size_t i = 0; i < k && divisible; ++i) divisible = m[i] >= lead[i];
      if (divisible) {
        hit = &m;
        coeff = c;
        break;
      }
    }
    if (!hit) break;
    for (std::size_t i = 0; i < k; ++i) quotient[i] = (*hit)[i] - lead[i];
    Polynomial step(k);
    step.add_term(quotient, coeff);
    r = r - step * g;
  }
  return RingElement(ring, std::move(r));
}

}  // namespace fbk

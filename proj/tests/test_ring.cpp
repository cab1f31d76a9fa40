#include <gtest/gtest.h>

#include <map>
#include <set>

#include "fbk/linalg.hpp"
#include "support.hpp"

namespace fbk {
namespace {

using testing::Rng;

Ring sphere() { return RingDescriptor::poly_quotient({"x", "y", "z"}, "x^2 + y^2 + z^2 - 1"); }

std::vector<Ring> all_rings() {
  return {RingDescriptor::rationals(), RingDescriptor::prime_field(2), RingDescriptor::prime_field(5),
          RingDescriptor::integers(), sphere()};
}

TEST(Ring, Descriptors) {
  EXPECT_EQ(RingDescriptor::rationals()->to_string(), "Q");
  EXPECT_EQ(RingDescriptor::integers()->to_string(), "Z");
  EXPECT_EQ(RingDescriptor::prime_field(5)->to_string(), "GF(5)");
  EXPECT_THROW(RingDescriptor::prime_field(4), Error);
  EXPECT_THROW(RingDescriptor::prime_field(1), Error);
  EXPECT_THROW(RingDescriptor::poly_quotient({"x"}, "3"), Error);
  EXPECT_THROW(RingDescriptor::poly_quotient({"x"}, "0"), Error);
  EXPECT_THROW(RingDescriptor::poly_quotient({"x", "x"}, "x"), Error);
  EXPECT_TRUE(same_ring(sphere(), sphere()));
  EXPECT_FALSE(same_ring(RingDescriptor::prime_field(2), RingDescriptor::prime_field(3)));
}

TEST(Ring, Arith) {
  const Ring q = RingDescriptor::rationals();
  EXPECT_EQ(RingElement::parse(q, "1/2") + RingElement::parse(q, "1/3"), RingElement::parse(q, "5/6"));
  EXPECT_EQ(RingElement::parse(q, "2/4").to_string(), "1/2");
  EXPECT_EQ(RingElement::parse(q, "-3/6").to_string(), "-1/2");
  EXPECT_THROW(RingElement::parse(q, "3/-6"), ParseError);

  const Ring f5 = RingDescriptor::prime_field(5);
  EXPECT_EQ((RingElement::from_int(f5, 3) * RingElement::from_int(f5, 4)).to_string(), "2");
  EXPECT_EQ(RingElement::from_int(f5, -1).to_string(), "4");

  const Ring s = sphere();
  const auto x = RingElement::parse(s, "x");
  const auto y = RingElement::parse(s, "y");
  const auto z = RingElement::parse(s, "z");
  EXPECT_TRUE((x * x + y * y + z * z).is_one());

  EXPECT_THROW(RingElement::one(q) + RingElement::one(f5), DescriptorMismatch);
  EXPECT_THROW(RingElement::one(s) * RingElement::one(sphere()) * RingElement::one(q), DescriptorMismatch);
}

TEST(Ring, TryInvert) {
  const Ring q = RingDescriptor::rationals();
  EXPECT_EQ(*RingElement::parse(q, "2/3").try_invert(), RingElement::parse(q, "3/2"));
  EXPECT_FALSE(RingElement::zero(q).try_invert());

  const Ring zz = RingDescriptor::integers();
  EXPECT_FALSE(RingElement::from_int(zz, 2).try_invert());
  EXPECT_EQ(*RingElement::from_int(zz, -1).try_invert(), RingElement::from_int(zz, -1));

  const Ring s = sphere();
  EXPECT_FALSE(RingElement::parse(s, "x").try_invert());
  EXPECT_EQ(*RingElement::parse(s, "-2").try_invert(), RingElement::parse(s, "-1/2"));
}

// x is not a unit of the sphere ring: at the point (0, 1, 0) of the sphere x
// vanishes, so x q = 1 has no solution. Independently, the linear system for
// the coefficients of q over monomials of degree <= 3 is inconsistent.
TEST(Ring, SphereCoordinateIsNotAUnitOracle) {
  const Ring s = sphere();
  const Ring q = RingDescriptor::rationals();
  std::vector<Exponents> monomials;
  for (std::uint32_t a = 0; a <= 3; ++a)
    for (std::uint32_t b = 0; a + b <= 3; ++b)
      for (std::uint32_t c = 0; a + b + c <= 3; ++c) monomials.push_back({a, b, c});

  // Columns: normal forms of x * m; target: 1. Rows indexed by normal-form monomials.
  std::vector<std::map<Exponents, mpq_class>> columns;
  std::set<Exponents> support{{0, 0, 0}};
  for (const auto& m : monomials) {
    Polynomial p(3);
    Exponents e = m;
    e[0] += 1;
    p.add_term(e, 1);
    const auto nf = reduce(p, s).polynomial();
    std::map<Exponents, mpq_class> col;
    for (const auto& [mono, coeff] : nf.terms()) {
      col[mono] = coeff;
      support.insert(mono);
    }
    columns.push_back(col);
  }
  const std::vector<Exponents> rows(support.begin(), support.end());
  RingMatrix a(q, rows.size(), columns.size());
  RingMatrix b(q, rows.size(), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (auto it = columns[j].find(rows[i]); it != columns[j].end()) {
        a(i, j) = RingElement::from_rational(q, it->second);
      }
    }
    if (rows[i] == Exponents{0, 0, 0}) b(i, 0) = RingElement::one(q);
  }
  EXPECT_FALSE(solve_right(a, b).has_value());
  EXPECT_FALSE(RingElement::parse(s, "x").try_invert());
}

TEST(Ring, Reduce) {
  const Ring s = sphere();
  const std::vector<std::string> vars{"x", "y", "z"};
  EXPECT_TRUE(reduce(parse_polynomial("x^2 + y^2 + z^2", vars), s).is_one());
  EXPECT_EQ(reduce(parse_polynomial("x*y", vars), s).to_string(), "x*y");
  // Leading monomial x^2 under (x, y, z): x^2 y -> y - y^3 - y z^2.
  EXPECT_EQ(reduce(parse_polynomial("x^2*y", vars), s), RingElement::parse(s, "y - y^3 - y*z^2"));

  // With z declared first the relation leads with z^2 and z^2 y -> y - x^2 y - y^3.
  const Ring zyx = RingDescriptor::poly_quotient({"z", "y", "x"}, "x^2 + y^2 + z^2 - 1");
  const std::vector<std::string> rvars{"z", "y", "x"};
  EXPECT_EQ(reduce(parse_polynomial("z^2*y", rvars), zyx), RingElement::parse(zyx, "y - x^2*y - y^3"));
}

TEST(Ring, PolynomialParsing) {
  const std::vector<std::string> vars{"x", "y", "z"};
  const Polynomial p = parse_polynomial("x^2*y - 3/2*z + 1", vars);
  EXPECT_EQ(p.to_string(vars), "x^2*y - 3/2*z + 1");
  EXPECT_EQ(parse_polynomial("2*x*x - x^2 + 0*y", vars), parse_polynomial("x^2", vars));
  for (const char* bad : {"x^", "x^-1", "x^1.5", "x^y", "w + 1", "1/0", "x +", "2**x", ""}) {
    EXPECT_THROW(parse_polynomial(bad, vars), ParseError) << bad;
  }
  const Ring q = RingDescriptor::rationals();
  EXPECT_THROW(RingElement::parse(q, "x^2"), ParseError);
  EXPECT_THROW(RingElement::parse(RingDescriptor::integers(), "1/2"), ParseError);
  EXPECT_THROW(RingElement::parse(RingDescriptor::prime_field(3), "abc"), ParseError);
}

TEST(Ring, RoundTripLiterals) {
  Rng rng(11);
  for (const auto& ring : all_rings()) {
    for (int i = 0; i < 100; ++i) {
      const auto a = testing::random_element(ring, rng);
      EXPECT_EQ(RingElement::parse(ring, a.to_string()), a) << ring->to_string() << " " << a.to_string();
    }
  }
}

TEST(RingProperty, CommutativeRingAxioms) {
  Rng rng(1);
  for (const auto& ring : all_rings()) {
    const auto zero = RingElement::zero(ring);
    const auto one = RingElement::one(ring);
    for (int i = 0; i < 1000; ++i) {
      const auto a = testing::random_element(ring, rng);
      const auto b = testing::random_element(ring, rng);
      const auto c = testing::random_element(ring, rng);
      ASSERT_EQ((a + b) + c, a + (b + c)) << ring->to_string();
      ASSERT_EQ((a * b) * c, a * (b * c)) << ring->to_string();
      ASSERT_EQ(a + b, b + a) << ring->to_string();
      ASSERT_EQ(a * b, b * a) << ring->to_string();
      ASSERT_EQ(a * (b + c), a * b + a * c) << ring->to_string();
      ASSERT_EQ(a + zero, a);
      ASSERT_EQ(a * one, a);
      ASSERT_TRUE((a - a).is_zero());
      ASSERT_EQ(a - b, a + (-b));
    }
  }
}

TEST(RingProperty, Inverses) {
  Rng rng(2);
  for (const auto& ring : all_rings()) {
    for (int i = 0; i < 500; ++i) {
      const auto a = testing::random_element(ring, rng);
      const auto inv = a.try_invert();
      if (inv) {
        ASSERT_TRUE((a * *inv).is_one()) << ring->to_string() << " " << a.to_string();
      }
      if (ring->is_field()) {
        ASSERT_EQ(inv.has_value(), !a.is_zero()) << a.to_string();
      }
    }
  }
}

TEST(RingProperty, ReduceIsIdempotentAndMultiplicative) {
  Rng rng(3);
  const Ring s = sphere();
  const std::vector<std::string> vars{"x", "y", "z"};
  for (int i = 0; i < 300; ++i) {
    // Unreduced polynomials of degree up to 4.
    Polynomial p(3), q(3);
    for (int t = 0; t < 4; ++t) {
      p.add_term({static_cast<std::uint32_t>(testing::uniform(rng, 0, 2)),
                  static_cast<std::uint32_t>(testing::uniform(rng, 0, 1)),
                  static_cast<std::uint32_t>(testing::uniform(rng, 0, 2))},
                 testing::uniform(rng, -3, 3));
      q.add_term({static_cast<std::uint32_t>(testing::uniform(rng, 0, 2)),
                  static_cast<std::uint32_t>(testing::uniform(rng, 0, 2)),
                  static_cast<std::uint32_t>(testing::uniform(rng, 0, 1))},
                 testing::uniform(rng, -3, 3));
    }
    const auto rp = reduce(p, s);
    ASSERT_EQ(reduce(rp.polynomial(), s), rp);
    ASSERT_EQ(reduce(p * q, s), rp * reduce(q, s)) << p.to_string(vars) << " | " << q.to_string(vars);
    // Normal forms have no monomial divisible by x^2.
    for (const auto& [mono, coeff] : rp.polynomial().terms()) ASSERT_LT(mono[0], 2u);
  }
}

}  // namespace
}  // namespace fbk

#include <gtest/gtest.h>

#include "fbk/equivalence.hpp"
#include "support.hpp"

namespace fbk {
namespace {

using testing::Rng;

const Ring kQ = RingDescriptor::rationals();
const Ring kZ = RingDescriptor::integers();
const Ring kF2 = RingDescriptor::prime_field(2);

LinearSystem random_system(const Ring& ring, std::size_t n, std::size_t m, Rng& rng) {
  return LinearSystem::from_pair(testing::random_matrix(ring, n, n, rng), testing::random_matrix(ring, n, m, rng));
}

TEST(System, FromPair) {
  const auto g1 = LinearSystem::from_pair(RingMatrix::zero(kQ, 1, 1), RingMatrix::from_ints(kQ, 1, 1, {1}));
  EXPECT_EQ(g1, LinearSystem::gamma(kQ, 1));

  const RingMatrix a = RingMatrix::from_ints(kQ, 2, 2, {0, 0, 1, 0});
  const auto dup = LinearSystem::from_pair(a, RingMatrix::from_ints(kQ, 2, 2, {1, 1, 0, 0}));
  EXPECT_EQ(dup, LinearSystem::from_pair(a, RingMatrix::from_ints(kQ, 2, 1, {1, 0})));
  EXPECT_EQ(dup.input_gens().cols(), 1u);

  EXPECT_THROW(LinearSystem::from_pair(RingMatrix::zero(kQ, 2, 3), RingMatrix::zero(kQ, 2, 1)), ShapeError);
  EXPECT_THROW(LinearSystem::from_pair(RingMatrix::zero(kQ, 2, 2), RingMatrix::zero(kQ, 3, 1)), ShapeError);
  EXPECT_THROW(LinearSystem::from_pair(RingMatrix::zero(kQ, 1, 1), RingMatrix::zero(kZ, 1, 1)), DescriptorMismatch);

  // Over the sphere ring generators are kept verbatim.
  const Ring s = RingDescriptor::poly_quotient({"x", "y", "z"}, "x^2 + y^2 + z^2 - 1");
  RingMatrix b(s, 4, 3);
  for (std::size_t i = 0; i < 3; ++i) b(i, i) = RingElement::one(s);
  const auto sigma = LinearSystem::from_pair(RingMatrix::zero(s, 4, 4), b);
  EXPECT_EQ(sigma.input_gens(), b);
}

TEST(System, DirectSumAndGamma) {
  Rng rng(1);
  const auto sigma = random_system(kQ, 3, 2, rng);
  EXPECT_EQ(direct_sum(sigma, LinearSystem::zero(kQ)), sigma);
  EXPECT_EQ(direct_sum(LinearSystem::zero(kQ), sigma), sigma);
  EXPECT_EQ(direct_sum(LinearSystem::gamma(kQ, 1), LinearSystem::gamma(kQ, 1)), LinearSystem::gamma(kQ, 2));

  const auto a = random_system(kZ, 2, 1, rng);
  const auto b = random_system(kZ, 3, 2, rng);
  const auto sum = direct_sum(a, b);
  EXPECT_EQ(sum.state_rank(), 5u);
  EXPECT_TRUE(sum.endo().block(0, 2, 2, 3).is_zero());
  EXPECT_TRUE(sum.endo().block(2, 0, 3, 2).is_zero());
  EXPECT_THROW(direct_sum(a, sigma), DescriptorMismatch);

  EXPECT_EQ(LinearSystem::gamma(kQ, 0).state_rank(), 0u);
  const auto g2 = LinearSystem::gamma(kQ, 2);
  EXPECT_TRUE(g2.endo().is_zero());
  EXPECT_EQ(g2.input_gens(), RingMatrix::identity(kQ, 2));
}

TEST(System, DynamicEnlarge) {
  Rng rng(2);
  const auto sigma = random_system(kQ, 2, 1, rng);
  EXPECT_EQ(dynamic_enlarge(sigma, 0), sigma);
  EXPECT_EQ(dynamic_enlarge(LinearSystem::gamma(kQ, 2), 3), LinearSystem::gamma(kQ, 5));

  const RingMatrix a = RingMatrix::from_ints(kQ, 2, 2, {1, 2, 3, 4});
  const RingMatrix b = RingMatrix::from_ints(kQ, 2, 1, {1, 1});
  const auto enlarged = dynamic_enlarge(LinearSystem::from_pair(a, b), 1);
  EXPECT_EQ(enlarged, LinearSystem::from_pair(block_diag(RingMatrix::zero(kQ, 1, 1), a),
                                              block_diag(RingMatrix::identity(kQ, 1), b)));
  EXPECT_TRUE(enlarged.endo()(0, 0).is_zero());
}

TEST(System, IsMorphism) {
  Rng rng(3);
  const auto s1 = random_system(kQ, 2, 1, rng);
  const auto s2 = random_system(kQ, 3, 1, rng);
  EXPECT_TRUE(is_morphism(RingMatrix::identity(kQ, 2), s1, s1));
  EXPECT_TRUE(is_morphism(RingMatrix::zero(kQ, 3, 2), s1, s2));

  const auto sum12 = direct_sum(s1, s2);
  const auto sum21 = direct_sum(s2, s1);
  const RingMatrix swap = swap_map(kQ, 2, 3);
  EXPECT_TRUE(is_morphism(swap, sum12, sum21));
  EXPECT_TRUE(is_morphism(swap_map(kQ, 3, 2), sum21, sum12));
  EXPECT_EQ(swap_map(kQ, 3, 2) * swap, RingMatrix::identity(kQ, 5));

  EXPECT_THROW(is_morphism(RingMatrix::identity(kQ, 3), s1, s1), ShapeError);
  const Ring s = RingDescriptor::poly_quotient({"x"}, "x^2 + 1");
  const auto ps = LinearSystem::gamma(s, 1);
  EXPECT_THROW(is_morphism(RingMatrix::identity(s, 1), ps, ps), Unsupported);

  // Over Z the input condition is integral: x -> 2x is a morphism Gamma(1) -> Gamma(1),
  // but B = 2Z does not admit the identity from Gamma(1).
  const auto g = LinearSystem::gamma(kZ, 1);
  const auto half = LinearSystem::from_pair(RingMatrix::zero(kZ, 1, 1), RingMatrix::from_ints(kZ, 1, 1, {2}));
  EXPECT_TRUE(is_morphism(RingMatrix::from_ints(kZ, 1, 1, {2}), g, half));
  EXPECT_FALSE(is_morphism(RingMatrix::identity(kZ, 1), g, half));
}

TEST(System, MorphismWrapperAndComposition) {
  const auto g = LinearSystem::gamma(kZ, 1);
  const auto half = LinearSystem::from_pair(RingMatrix::zero(kZ, 1, 1), RingMatrix::from_ints(kZ, 1, 1, {2}));
  EXPECT_FALSE(SystemMorphism::make(RingMatrix::identity(kZ, 1), g, half));
  const auto two = SystemMorphism::make(RingMatrix::from_ints(kZ, 1, 1, {2}), g, half);
  const auto back = SystemMorphism::make(RingMatrix::identity(kZ, 1), half, g);
  ASSERT_TRUE(two && back);
  EXPECT_EQ(back->after(*two).map(), RingMatrix::from_ints(kZ, 1, 1, {2}));
  EXPECT_THROW(two->after(*two), ShapeError);
}

TEST(System, Biproduct) {
  Rng rng(4);
  for (const Ring& ring : {kQ, kZ, kF2}) {
    const auto a = random_system(ring, 2, 1, rng);
    const auto b = random_system(ring, 3, 2, rng);
    const auto w = biproduct_witnesses(a, b);
    EXPECT_EQ(w.pi1.map() * w.iota1.map(), RingMatrix::identity(ring, 2));
    EXPECT_EQ(w.pi2.map() * w.iota2.map(), RingMatrix::identity(ring, 3));
    EXPECT_TRUE((w.pi1.map() * w.iota2.map()).is_zero());
    EXPECT_TRUE((w.pi2.map() * w.iota1.map()).is_zero());
    EXPECT_EQ(w.iota1.map() * w.pi1.map() + w.iota2.map() * w.pi2.map(), RingMatrix::identity(ring, 5));
  }
}

// Morphisms into a system whose input module is everything are unconstrained,
// which gives a supply of random morphisms for the pairing property.
TEST(SystemProperty, ProductPairingCommutes) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto src = random_system(kQ, 2, 1, rng);
    const auto a = LinearSystem::gamma(kQ, 2);
    const auto b = LinearSystem::gamma(kQ, 1);
    const RingMatrix psi1 = testing::random_matrix(kQ, 2, 2, rng);
    const RingMatrix psi2 = testing::random_matrix(kQ, 1, 2, rng);
    ASSERT_TRUE(is_morphism(psi1, src, a));
    ASSERT_TRUE(is_morphism(psi2, src, b));
    const RingMatrix paired = vcat(psi1, psi2);
    ASSERT_TRUE(is_morphism(paired, src, direct_sum(a, b)));
    const auto w = biproduct_witnesses(a, b);
    ASSERT_EQ(w.pi1.map() * paired, psi1);
    ASSERT_EQ(w.pi2.map() * paired, psi2);
  }
}

// Morphisms between feedback-related systems: conjugates of the identity by
// random feedback actions, composed along chains of three systems.
TEST(SystemProperty, CompositionClosure) {
  Rng rng(6);
  for (const Ring& ring : {kQ, kF2, kZ}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto s1 = random_system(ring, 3, 2, rng);
      const auto t1 = testing::random_feedback(ring, 3, s1.input_gens().cols(), rng);
      const auto img1 = feedback_image(s1, t1);
      const auto t2 = testing::random_feedback(ring, 3, img1.target.input_gens().cols(), rng);
      const auto img2 = feedback_image(img1.target, t2);
      ASSERT_TRUE(is_morphism(t1.p, s1, img1.target));
      ASSERT_TRUE(is_morphism(t2.p, img1.target, img2.target));
      ASSERT_TRUE(is_morphism(t2.p * t1.p, s1, img2.target));
      // A non-invertible morphism: projection onto B composed with anything into Gamma.
      const RingMatrix anything = testing::random_matrix(ring, 2, 3, rng);
      ASSERT_TRUE(is_morphism(anything * t2.p * t1.p, s1, LinearSystem::gamma(ring, 2)));
    }
  }
}

TEST(SystemProperty, IsomorphismsPreserveInputs) {
  Rng rng(7);
  for (const Ring& ring : {kQ, kZ, kF2}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto s1 = random_system(ring, 3, 2, rng);
      const auto img = feedback_image(s1, testing::random_feedback(ring, 3, s1.input_gens().cols(), rng));
      const auto inv = inverse(img.certificate.phi);
      ASSERT_TRUE(inv);
      ASSERT_TRUE(is_morphism(img.certificate.phi, s1, img.target));
      ASSERT_TRUE(is_morphism(*inv, img.target, s1));
      ASSERT_EQ(canonical_column_basis(img.certificate.phi * s1.input_gens()), img.target.input_gens());
    }
  }
}

TEST(SystemProperty, MonoidalLaws) {
  Rng rng(8);
  for (const Ring& ring : {kQ, kZ}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_system(ring, 1, 1, rng);
      const auto b = random_system(ring, 2, 1, rng);
      const auto c = random_system(ring, 2, 2, rng);
      // Associator is the identity matrix on the nested sums.
      ASSERT_EQ(direct_sum(direct_sum(a, b), c), direct_sum(a, direct_sum(b, c)));
      const auto ab = direct_sum(a, b);
      const auto ba = direct_sum(b, a);
      ASSERT_TRUE(is_morphism(swap_map(ring, 1, 2), ab, ba));
      ASSERT_TRUE(is_morphism(swap_map(ring, 2, 1), ba, ab));
      ASSERT_EQ(direct_sum(a, LinearSystem::zero(ring)), a);
    }
  }
}

TEST(SystemProperty, SumOfCertificatesCertifiesSum) {
  Rng rng(9);
  for (const Ring& ring : {kQ, kZ, RingDescriptor::prime_field(3)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto s1 = random_system(ring, 2, 1, rng);
      const auto g1 = random_system(ring, 2, 2, rng);
      const auto i1 = feedback_image(s1, testing::random_feedback(ring, 2, s1.input_gens().cols(), rng));
      const auto i2 = feedback_image(g1, testing::random_feedback(ring, 2, g1.input_gens().cols(), rng));
      const auto cert = direct_sum_certificate(i1.certificate, i2.certificate);
      ASSERT_TRUE(verify_certificate(direct_sum(s1, g1), direct_sum(i1.target, i2.target), cert).accepted());
    }
  }
}

}  // namespace
}  // namespace fbk

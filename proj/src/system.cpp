#include "fbk/system.hpp"

namespace fbk {
namespace {

RingMatrix canonical_inputs(const RingMatrix& input) {
  if (input.ring()->has_decidable_membership()) return canonical_column_basis(input);
  return input;
}

void require_same_ring(const LinearSystem& a, const LinearSystem& b) {
  if (!same_ring(a.ring(), b.ring())) {
    throw DescriptorMismatch("systems over " + a.ring()->to_string() + " and " + b.ring()->to_string());
  }
}

}  // namespace

LinearSystem LinearSystem::from_pair(const RingMatrix& endo, const RingMatrix& input) {
  if (!same_ring(endo.ring(), input.ring())) throw DescriptorMismatch("from_pair: A and B over different rings");
  if (!endo.is_square()) throw ShapeError("from_pair: A must be square");
  if (input.rows() != endo.rows()) throw ShapeError("from_pair: B must have as many rows as A");
  return LinearSystem(endo, canonical_inputs(input));
}

LinearSystem LinearSystem::gamma(const Ring& ring, std::size_t p) {
  return LinearSystem(RingMatrix::zero(ring, p, p), RingMatrix::identity(ring, p));
}

LinearSystem direct_sum(const LinearSystem& a, const LinearSystem& b) {
  require_same_ring(a, b);
  return LinearSystem::from_pair(block_diag(a.endo(), b.endo()), block_diag(a.input_gens(), b.input_gens()));
}

LinearSystem dynamic_enlarge(const LinearSystem& sigma, std::size_t p) {
  return direct_sum(LinearSystem::gamma(sigma.ring(), p), sigma);
}

bool is_morphism(const RingMatrix& phi, const LinearSystem& source, const LinearSystem& target) {
  require_same_ring(source, target);
  if (!same_ring(phi.ring(), source.ring())) throw DescriptorMismatch("is_morphism: map over another ring");
  if (phi.rows() != target.state_rank() || phi.cols() != source.state_rank()) {
    throw ShapeError("is_morphism: map must be target.n x source.n");
  }
  if (!source.ring()->has_decidable_membership()) {
    throw Unsupported("is_morphism over " + source.ring()->to_string() + "; verify a certificate instead");
  }
  const RingMatrix& g2 = target.input_gens();
  if (!membership(phi * source.input_gens(), g2)) return false;
  return membership(target.endo() * phi - phi * source.endo(), g2);
}

std::optional<SystemMorphism> SystemMorphism::make(RingMatrix map, const LinearSystem& source,
                                                   const LinearSystem& target) {
  if (!is_morphism(map, source, target)) return std::nullopt;
  return SystemMorphism(std::move(map), source, target);
}

SystemMorphism SystemMorphism::after(const SystemMorphism& first) const {
  if (!(first.target_ == source_)) throw ShapeError("morphisms do not compose");
  auto composed = make(map_ * first.map_, first.source_, target_);
  if (!composed) throw Error("composition of morphisms failed the morphism check");
  return *composed;
}

Biproduct biproduct_witnesses(const LinearSystem& a, const LinearSystem& b) {
  require_same_ring(a, b);
  const Ring& ring = a.ring();
  const std::size_t n1 = a.state_rank();
  const std::size_t n2 = b.state_rank();
  const LinearSystem sum = direct_sum(a, b);

  RingMatrix p1(ring, n1, n1 + n2);
  p1.set_block(0, 0, RingMatrix::identity(ring, n1));
  RingMatrix p2(ring, n2, n1 + n2);
  p2.set_block(0, n1, RingMatrix::identity(ring, n2));

  auto pi1 = SystemMorphism::make(p1, sum, a);
  auto pi2 = SystemMorphism::make(p2, sum, b);
  auto iota1 = SystemMorphism::make(p1.transpose(), a, sum);
  auto iota2 = SystemMorphism::make(p2.transpose(), b, sum);
  if (!pi1 || !pi2 || !iota1 || !iota2) throw Error("biproduct structure maps failed the morphism check");
  return Biproduct{*pi1, *pi2, *iota1, *iota2};
}

RingMatrix swap_map(const Ring& ring, std::size_t n1, std::size_t n2) {
  RingMatrix s(ring, n1 + n2, n1 + n2);
  s.set_block(0, n1, RingMatrix::identity(ring, n2));
  s.set_block(n2, 0, RingMatrix::identity(ring, n1));
  return s;
}

}  // namespace fbk

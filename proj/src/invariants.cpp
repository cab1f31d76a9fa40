#include "fbk/invariants.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fbk {
namespace {

RingMatrix solve_or_throw(const RingMatrix& a, const RingMatrix& b, const char* what) {
  auto x = solve_right(a, b);
  if (!x) throw Error(std::string("internal: inconsistent system while computing ") + what);
  return *std::move(x);
}

// Structure of Z_i = {a : F a in col(C_next)} / col(C_cur), everything in
// coordinates of the canonical basis of N_i.
AbelianGroupStructure z_structure(const RingMatrix& f_map, const RingMatrix& c_cur, const RingMatrix& c_next) {
  const std::size_t k = f_map.cols();
  const RingMatrix joint = kernel_basis(hcat(f_map, -c_next));
  const RingMatrix lattice = canonical_column_basis(joint.row_range(0, k));
  const RingMatrix relations = solve_or_throw(lattice, c_cur, "Z-invariants");
  return cokernel_structure(relations, lattice.cols());
}

}  // namespace

std::size_t InvariantReport::chain_rank(std::size_t i) const {
  return chain.at(std::min(i, stabilization_index)).cols();
}

AbelianGroupStructure InvariantReport::m_module(std::size_t i) const {
  return quotients.at(std::min(i, stabilization_index));
}

AbelianGroupStructure InvariantReport::i_module(std::size_t i) const {
  if (i == 0 || i > stabilization_index) return {};
  return increments.at(i - 1);
}

AbelianGroupStructure InvariantReport::z_module(std::size_t i) const {
  if (i == 0 || i > stabilization_index) return {};
  return z_modules.at(i - 1);
}

InvariantReport compute_chain(const LinearSystem& sigma) {
  const Ring& ring = sigma.ring();
  if (!ring->has_decidable_membership()) {
    throw Unsupported("invariant chains are not computed over " + ring->to_string());
  }
  const std::size_t n = sigma.state_rank();
  const RingMatrix& f = sigma.endo();
  const RingMatrix& gens = sigma.input_gens();

  InvariantReport report;
  report.ring = ring;
  report.state_rank = n;
  report.chain.push_back(RingMatrix::zero(ring, n, 0));
  for (;;) {
    RingMatrix next = column_space_sum(gens, f * report.chain.back());
    if (next == report.chain.back()) break;
    report.chain.push_back(std::move(next));
  }
  const std::size_t s = report.chain.size() - 1;
  report.stabilization_index = s;

  for (const auto& h : report.chain) report.quotients.push_back(cokernel_structure(h, n));

  // Presentations: I_i = coker(rel[i]) on the basis of N_i, rel[i] expressing
  // N_{i-1} in that basis. rel[s + 1] is the identity since N_{s+1} = N_s.
  std::vector<RingMatrix> rel(s + 2, RingMatrix::zero(ring, 0, 0));
  for (std::size_t i = 1; i <= s; ++i) {
    rel[i] = solve_or_throw(report.chain[i], report.chain[i - 1], "I-invariants");
    report.increments.push_back(cokernel_structure(rel[i], report.chain[i].cols()));
  }
  if (s > 0) rel[s + 1] = RingMatrix::identity(ring, report.chain[s].cols());

  for (std::size_t i = 1; i <= s; ++i) {
    const RingMatrix& upper = report.chain[std::min(i + 1, s)];
    const RingMatrix f_map = solve_or_throw(upper, f * report.chain[i], "the induced map");
    report.z_modules.push_back(z_structure(f_map, rel[i], rel[i + 1]));
  }

  report.reachable = report.quotients.back().is_trivial();
  const auto all_free = [](const std::vector<AbelianGroupStructure>& v) {
    return std::all_of(v.begin(), v.end(), [](const auto& m) { return m.is_free(); });
  };
  report.locally_brunovsky = report.reachable && all_free(report.quotients) && all_free(report.increments) &&
                             all_free(report.z_modules);
  return report;
}

std::string ZSignature::to_string() const {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < ranks.size(); ++i) out << (i ? ", " : "") << ranks[i];
  out << ")";
  return out.str();
}

bool operator==(const ZSignature& a, const ZSignature& b) {
  const std::size_t len = std::max(a.ranks.size(), b.ranks.size());
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t x = i < a.ranks.size() ? a.ranks[i] : 0;
    const std::size_t y = i < b.ranks.size() ? b.ranks[i] : 0;
    if (x != y) return false;
  }
  return true;
}

ZSignature z_signature(const InvariantReport& report) {
  if (!report.locally_brunovsky) throw NotLocallyBrunovsky("Z-signature needs a locally Brunovsky system");
  ZSignature sig;
  for (const auto& z : report.z_modules) sig.ranks.push_back(z.free_rank);
  return sig;
}

ZSignature z_signature(const LinearSystem& sigma) { return z_signature(compute_chain(sigma)); }

std::vector<std::size_t> conjugate_partition(const std::vector<std::size_t>& parts) {
  std::vector<std::size_t> out;
  const std::size_t largest = parts.empty() ? 0 : *std::max_element(parts.begin(), parts.end());
  for (std::size_t j = 0; j < largest; ++j) {
    out.push_back(static_cast<std::size_t>(
        std::count_if(parts.begin(), parts.end(), [j](std::size_t p) { return p > j; })));
  }
  return out;
}

BrunovskyData canonical_pair(const Ring& ring, const std::vector<std::size_t>& indices, std::size_t input_cols) {
  if (!std::is_sorted(indices.begin(), indices.end(), std::greater<>())) {
    throw Error("Brunovsky indices must be non-increasing");
  }
  if (input_cols < indices.size()) throw ShapeError("fewer input columns than Brunovsky blocks");
  std::size_t n = 0;
  for (const auto k : indices) {
    if (k == 0) throw Error("Brunovsky indices must be positive");
    n += k;
  }
  BrunovskyData data{indices, RingMatrix::zero(ring, n, n), RingMatrix::zero(ring, n, input_cols)};
  const auto one = RingElement::one(ring);
  std::size_t offset = 0;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    data.b_c(offset, t) = one;
    for (std::size_t r = 1; r < indices[t]; ++r) data.a_c(offset + r, offset + r - 1) = one;
    offset += indices[t];
  }
  return data;
}

BrunovskyData brunovsky(const LinearSystem& sigma) {
  if (!sigma.ring()->is_field()) throw Unsupported("Brunovsky form is computed over fields only");
  const InvariantReport report = compute_chain(sigma);
  if (!report.reachable) throw NotReachable("system is not reachable");
  std::vector<std::size_t> dims;
  for (const auto& inc : report.increments) dims.push_back(inc.free_rank);
  const auto indices = conjugate_partition(dims);
  return canonical_pair(sigma.ring(), indices, indices.size());
}

MatrixPair apply_feedback(const MatrixPair& pair, const FeedbackTransform& t) {
  const auto p_inv = inverse(t.p);
  if (!p_inv) throw Error("apply_feedback: P is not invertible");
  if (!inverse(t.q)) throw Error("apply_feedback: Q is not invertible");
  return MatrixPair{t.p * (pair.a + pair.b * t.k) * *p_inv, t.p * pair.b * t.q};
}

CanonicalCertificate canonical_certificate(const MatrixPair& pair) {
  const RingMatrix& a = pair.a;
  const RingMatrix& b = pair.b;
  const Ring& ring = a.ring();
  if (!ring->is_field()) throw Unsupported("canonical certificates are computed over fields only");
  if (!a.is_square() || b.rows() != a.rows()) throw ShapeError("canonical_certificate: inconsistent pair");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();

  // Kalman selection ordered by power, then input index: keep A^l b_j while it
  // is independent of everything chosen before it.
  RingMatrix basis = RingMatrix::zero(ring, n, 0);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;  // (input, power) -> basis column
  std::vector<std::size_t> kappa(m, 0);
  std::vector<RingMatrix> current;
  std::vector<std::size_t> alive;
  for (std::size_t j = 0; j < m; ++j) {
    current.push_back(b.column(j));
    alive.push_back(j);
  }
  for (std::size_t power = 0; !alive.empty(); ++power) {
    std::vector<std::size_t> still;
    for (const std::size_t j : alive) {
      if (membership(current[j], basis)) continue;
      slot[{j, power}] = basis.cols();
      basis = hcat(basis, current[j]);
      kappa[j] = power + 1;
      current[j] = a * current[j];
      still.push_back(j);
    }
    alive = std::move(still);
  }
  if (basis.cols() != n) throw NotReachable("pair is not reachable");

  std::vector<std::size_t> selected;
  for (std::size_t j = 0; j < m; ++j)
    if (kappa[j] > 0) selected.push_back(j);
  std::stable_sort(selected.begin(), selected.end(),
                   [&](std::size_t x, std::size_t y) { return kappa[x] > kappa[y]; });

  // Chain vectors e_{j,1..kappa_j} as coordinate vectors over `basis`; the top
  // one removes every term of A^kappa_j b_j that is not already an input.
  const auto unit = [&](std::size_t idx) { return RingMatrix::unit_column(ring, n, idx); };
  const auto shift_down = [&](const RingMatrix& coords) {
    RingMatrix out = RingMatrix::zero(ring, n, 1);
    for (const auto& [key, idx] : slot) {
      if (key.second == 0 || coords(idx, 0).is_zero()) continue;
      out(slot.at({key.first, key.second - 1}), 0) += coords(idx, 0);
    }
    return out;
  };

  std::vector<RingMatrix> e_cols;      // canonical order
  std::vector<RingMatrix> chain_heads;  // e_{j,1} coordinates per chain
  std::vector<RingMatrix> k_cols;
  for (const std::size_t j : selected) {
    const std::size_t kj = kappa[j];
    const RingMatrix alpha = solve_or_throw(basis, current[j], "the selection expansion");
    std::vector<RingMatrix> chain(kj, RingMatrix::zero(ring, n, 1));
    chain[kj - 1] = unit(slot.at({j, kj - 1})) - shift_down(alpha);
    for (std::size_t k = kj - 1; k-- > 0;) chain[k] = shift_down(chain[k + 1]);
    chain_heads.push_back(chain[0]);
    for (std::size_t k = 0; k < kj; ++k) {
      const RingMatrix e = basis * chain[k];
      const RingMatrix succ = k + 1 < kj ? basis * chain[k + 1] : RingMatrix::zero(ring, n, 1);
      e_cols.push_back(e);
      k_cols.push_back(solve_or_throw(b, succ - a * e, "the feedback gain"));
    }
  }

  RingMatrix e_mat = RingMatrix::zero(ring, n, 0);
  for (const auto& c : e_cols) e_mat = hcat(e_mat, c);
  RingMatrix k_coef = RingMatrix::zero(ring, m, 0);
  for (const auto& c : k_cols) k_coef = hcat(k_coef, c);
  const auto p = inverse(e_mat);
  if (!p) throw Error("internal: chain vectors are not a basis");

  // Q: chain heads in terms of the selected inputs, then the dependency of
  // every unselected input on the selected ones.
  RingMatrix q = RingMatrix::zero(ring, m, m);
  for (std::size_t t = 0; t < selected.size(); ++t) {
    for (const auto& [key, idx] : slot) {
      if (chain_heads[t](idx, 0).is_zero()) continue;
      if (key.second != 0) throw Error("internal: chain head has non-input terms");
      q(key.first, t) = chain_heads[t](idx, 0);
    }
  }
  RingMatrix sel_b = RingMatrix::zero(ring, n, 0);
  std::vector<std::size_t> by_index;
  for (std::size_t j = 0; j < m; ++j)
    if (kappa[j] > 0) {
      sel_b = hcat(sel_b, b.column(j));
      by_index.push_back(j);
    }
  std::size_t col = selected.size();
  for (std::size_t u = 0; u < m; ++u) {
    if (kappa[u] > 0) continue;
    const RingMatrix delta = solve_or_throw(sel_b, b.column(u), "input dependencies");
    q(u, col) = RingElement::one(ring);
    for (std::size_t t = 0; t < by_index.size(); ++t) q(by_index[t], col) -= delta(t, 0);
    ++col;
  }

  std::vector<std::size_t> indices;
  for (const std::size_t j : selected) indices.push_back(kappa[j]);
  CanonicalCertificate cert{canonical_pair(ring, indices, m), FeedbackTransform{*p, k_coef * *p, q}};

  const MatrixPair image = apply_feedback(pair, cert.transform);
  if (!(image.a == cert.canonical.a_c) || !(image.b == cert.canonical.b_c)) {
    throw Error("internal: canonical certificate failed verification");
  }
  return cert;
}

}  // namespace fbk

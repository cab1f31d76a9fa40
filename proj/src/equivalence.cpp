#include "fbk/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace fbk {
namespace {

void require_same_ring(const LinearSystem& a, const LinearSystem& b) {
  if (!same_ring(a.ring(), b.ring())) {
    throw DescriptorMismatch("systems over " + a.ring()->to_string() + " and " + b.ring()->to_string());
  }
}

void require_shape(const RingMatrix& m, std::size_t rows, std::size_t cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream out;
    out << "certificate matrix " << name << " is " << m.rows() << "x" << m.cols() << ", expected " << rows << "x"
        << cols;
    throw ShapeError(out.str());
  }
}

// Dense matrices over GF(p) with small residues, for the orbit search.
struct SmallMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> v;

  int at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  friend bool operator==(const SmallMat&, const SmallMat&) = default;
};

SmallMat small_from(const RingMatrix& m) {
  if (m.ring()->kind() != RingKind::PrimeField) throw Unsupported("orbit search needs a prime field");
  SmallMat out{m.rows(), m.cols(), {}};
  for (const auto& e : m.entries()) out.v.push_back(static_cast<int>(e.residue()));
  return out;
}

SmallMat small_mul(const SmallMat& a, const SmallMat& b, int p) {
  SmallMat out{a.rows, b.cols, std::vector<int>(a.rows * b.cols, 0)};
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const int x = a.at(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out.v[i * b.cols + j] = (out.v[i * b.cols + j] + x * b.at(k, j)) % p;
    }
  return out;
}

SmallMat small_sub(const SmallMat& a, const SmallMat& b, int p) {
  SmallMat out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = ((a.v[i] - b.v[i]) % p + p) % p;
  return out;
}

int inverse_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

bool small_invertible(SmallMat m, int p) {
  const std::size_t n = m.rows;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m.v[piv * n + c] == 0) ++piv;
    if (piv == n) return false;
    for (std::size_t j = 0; j < n; ++j) std::swap(m.v[c * n + j], m.v[piv * n + j]);
    const int inv = inverse_mod(m.v[c * n + c], p);
    for (std::size_t r = c + 1; r < n; ++r) {
      const int factor = m.v[r * n + c] * inv % p;
      if (factor == 0) continue;
      for (std::size_t j = c; j < n; ++j) m.v[r * n + j] = ((m.v[r * n + j] - factor * m.v[c * n + j]) % p + p) % p;
    }
  }
  return true;
}

std::vector<SmallMat> all_matrices(std::size_t rows, std::size_t cols, int p) {
  std::vector<SmallMat> out;
  std::vector<int> digits(rows * cols, 0);
  for (;;) {
    out.push_back(SmallMat{rows, cols, digits});
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

const std::vector<SmallMat>& general_linear(std::size_t n, int p) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, std::vector<SmallMat>> cache;
  const std::lock_guard lock(mutex);
  auto [it, fresh] = cache.try_emplace({n, p});
  if (fresh) {
    for (auto& m : all_matrices(n, n, p))
      if (small_invertible(m, p)) it->second.push_back(std::move(m));
  }
  return it->second;
}

std::uint64_t count_matrices(std::size_t entries, std::uint64_t p) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < entries; ++i) out *= p;
  return out;
}

RingMatrix pad_columns(const RingMatrix& m, std::size_t cols) {
  return hcat(m, RingMatrix::zero(m.ring(), m.rows(), cols - m.cols()));
}

std::vector<long> trimmed(std::vector<long> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

}  // namespace

std::string CertificateCheck::to_string() const {
  switch (reason) {
    case RejectReason::None:
      return "Accept";
    case RejectReason::Inverse:
      return "Reject(inverse identity)";
    case RejectReason::UIdentity:
      return "Reject(U identity)";
    case RejectReason::VIdentity:
      return "Reject(V identity)";
    case RejectReason::KwIdentity:
      return "Reject(Kw identity)";
  }
  return "Reject";
}

CertificateCheck verify_certificate(const LinearSystem& source, const LinearSystem& target,
                                    const IsoCertificate& cert) {
  require_same_ring(source, target);
  for (const RingMatrix* m : {&cert.phi, &cert.psi, &cert.u, &cert.v, &cert.kw}) {
    if (!same_ring(m->ring(), source.ring())) throw DescriptorMismatch("certificate matrix over another ring");
  }
  const std::size_t n1 = source.state_rank();
  const std::size_t n2 = target.state_rank();
  const RingMatrix& g1 = source.input_gens();
  const RingMatrix& g2 = target.input_gens();
  require_shape(cert.phi, n2, n1, "phi");
  require_shape(cert.psi, n1, n2, "psi");
  require_shape(cert.u, g2.cols(), g1.cols(), "U");
  require_shape(cert.v, g1.cols(), g2.cols(), "V");
  require_shape(cert.kw, g2.cols(), n1, "Kw");

  const Ring& ring = source.ring();
  if (!(cert.phi * cert.psi == RingMatrix::identity(ring, n2)) ||
      !(cert.psi * cert.phi == RingMatrix::identity(ring, n1))) {
    return {RejectReason::Inverse};
  }
  const RingMatrix image = cert.phi * g1;
  if (!(image == g2 * cert.u)) return {RejectReason::UIdentity};
  if (!(g2 == image * cert.v)) return {RejectReason::VIdentity};
  if (!(target.endo() * cert.phi - cert.phi * source.endo() == g2 * cert.kw)) return {RejectReason::KwIdentity};
  return {};
}

std::optional<IsoCertificate> complete_certificate(const RingMatrix& phi, const LinearSystem& source,
                                                   const LinearSystem& target) {
  require_same_ring(source, target);
  if (!source.ring()->has_decidable_membership()) {
    throw Unsupported("certificates cannot be completed over " + source.ring()->to_string());
  }
  require_shape(phi, target.state_rank(), source.state_rank(), "phi");
  auto psi = inverse(phi);
  if (!psi) return std::nullopt;
  const RingMatrix& g1 = source.input_gens();
  const RingMatrix& g2 = target.input_gens();
  const RingMatrix image = phi * g1;
  auto u = solve_right(g2, image);
  auto v = solve_right(image, g2);
  auto kw = solve_right(g2, target.endo() * phi - phi * source.endo());
  if (!u || !v || !kw) return std::nullopt;
  return IsoCertificate{phi, *std::move(psi), *std::move(u), *std::move(v), *std::move(kw)};
}

IsoCertificate identity_certificate(const LinearSystem& sigma) {
  const Ring& ring = sigma.ring();
  const std::size_t n = sigma.state_rank();
  const std::size_t m = sigma.input_gens().cols();
  return IsoCertificate{RingMatrix::identity(ring, n), RingMatrix::identity(ring, n), RingMatrix::identity(ring, m),
                        RingMatrix::identity(ring, m), RingMatrix::zero(ring, m, n)};
}

IsoCertificate direct_sum_certificate(const IsoCertificate& a, const IsoCertificate& b) {
  return IsoCertificate{block_diag(a.phi, b.phi), block_diag(a.psi, b.psi), block_diag(a.u, b.u),
                        block_diag(a.v, b.v), block_diag(a.kw, b.kw)};
}

IsoCertificate dynamic_certificate(const IsoCertificate& cert, std::size_t p) {
  return direct_sum_certificate(identity_certificate(LinearSystem::gamma(cert.phi.ring(), p)), cert);
}

IsoCertificate stable_certificate(const IsoCertificate& cert, const LinearSystem& gamma) {
  return direct_sum_certificate(cert, identity_certificate(gamma));
}

FeedbackImage feedback_image(const LinearSystem& sigma, const FeedbackTransform& t) {
  const MatrixPair image = apply_feedback(MatrixPair{sigma.endo(), sigma.input_gens()}, t);
  LinearSystem target = LinearSystem::from_pair(image.a, image.b);
  auto cert = complete_certificate(t.p, sigma, target);
  if (!cert) throw Error("internal: feedback action did not yield a certificate");
  return FeedbackImage{std::move(target), *std::move(cert)};
}

std::optional<IsoCertificate> synthesize_certificate(const LinearSystem& source, const LinearSystem& target) {
  require_same_ring(source, target);
  if (!source.ring()->is_field()) throw Unsupported("certificate synthesis needs a field");
  if (source.state_rank() != target.state_rank()) return std::nullopt;
  const auto c1 = canonical_certificate(MatrixPair{source.endo(), source.input_gens()});
  const auto c2 = canonical_certificate(MatrixPair{target.endo(), target.input_gens()});
  if (c1.canonical.indices != c2.canonical.indices) return std::nullopt;
  const auto p2_inv = inverse(c2.transform.p);
  if (!p2_inv) throw Error("internal: canonical transform is singular");
  auto cert = complete_certificate(*p2_inv * c1.transform.p, source, target);
  if (!cert) throw Error("internal: composed canonical transforms are not a feedback isomorphism");
  return cert;
}

std::string K0Class::to_string() const {
  std::ostringstream out;
  out << "(";
  const auto v = trimmed(entries);
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ")";
  return out.str();
}

bool operator==(const K0Class& a, const K0Class& b) { return trimmed(a.entries) == trimmed(b.entries); }

K0Class operator+(const K0Class& a, const K0Class& b) {
  K0Class out;
  out.entries.resize(std::max(a.entries.size(), b.entries.size()), 0);
  for (std::size_t i = 0; i < a.entries.size(); ++i) out.entries[i] += a.entries[i];
  for (std::size_t i = 0; i < b.entries.size(); ++i) out.entries[i] += b.entries[i];
  return out;
}

K0Class k0_class(const LinearSystem& sigma) {
  K0Class out;
  for (const auto r : z_signature(sigma).ranks) out.entries.push_back(static_cast<long>(r));
  return out;
}

bool feedback_equivalent(const LinearSystem& a, const LinearSystem& b) {
  require_same_ring(a, b);
  return z_signature(a) == z_signature(b);
}

bool dynamic_equivalent(const LinearSystem& a, const LinearSystem& b, std::size_t p_max) {
  require_same_ring(a, b);
  for (std::size_t p = 0; p <= p_max; ++p) {
    if (feedback_equivalent(dynamic_enlarge(a, p), dynamic_enlarge(b, p))) return true;
  }
  return false;
}

bool stable_equivalent(const LinearSystem& a, const LinearSystem& b) {
  require_same_ring(a, b);
  return k0_class(a) == k0_class(b);
}

bool feedback_equivalent_pairs_bruteforce(const RingMatrix& a1, const RingMatrix& b1, const RingMatrix& a2,
                                          const RingMatrix& b2, std::uint64_t bound, unsigned workers) {
  for (const RingMatrix* m : {&b1, &a2, &b2}) {
    if (!same_ring(m->ring(), a1.ring())) throw DescriptorMismatch("orbit search over mixed rings");
  }
  if (a1.ring()->kind() != RingKind::PrimeField) throw Unsupported("orbit search needs a prime field");
  if (!a1.is_square() || !a2.is_square() || b1.rows() != a1.rows() || b2.rows() != a2.rows()) {
    throw ShapeError("orbit search: inconsistent pairs");
  }
  if (a1.rows() != a2.rows() || b1.cols() != b2.cols()) return false;

  const int p = static_cast<int>(a1.ring()->prime());
  const std::size_t n = a1.rows();
  const std::size_t m = b1.cols();
  const std::uint64_t k_count = count_matrices(m * n, static_cast<std::uint64_t>(p));
  const std::uint64_t naive = count_matrices(n * n, p) * k_count * count_matrices(m * m, p);
  if (naive > bound) throw Error("orbit search exceeds the size bound");

  const auto& gl_n = general_linear(n, p);
  const auto& gl_m = general_linear(m, p);
  const auto ks = all_matrices(m, n, p);
  const SmallMat sa1 = small_from(a1), sb1 = small_from(b1), sa2 = small_from(a2), sb2 = small_from(b2);

  std::atomic<bool> found{false};
  const auto search = [&](std::size_t start, std::size_t stride) {
    for (std::size_t idx = start; idx < gl_n.size() && !found.load(std::memory_order_relaxed); idx += stride) {
      const SmallMat& pm = gl_n[idx];
      const SmallMat pb1 = small_mul(pm, sb1, p);
      if (!std::any_of(gl_m.begin(), gl_m.end(), [&](const SmallMat& q) { return small_mul(pb1, q, p) == sb2; })) {
        continue;
      }
      // A2 P = P A1 + P B1 K.
      const SmallMat target = small_sub(small_mul(sa2, pm, p), small_mul(pm, sa1, p), p);
      for (const auto& k : ks) {
        if (small_mul(pb1, k, p) == target) {
          found.store(true);
          return;
        }
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    search(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(search, w, workers);
    for (auto& t : pool) t.join();
  }
  return found.load();
}

OracleReport orbit_oracle(std::uint64_t prime, std::size_t n_max, std::size_t m_max, unsigned workers) {
  const Ring ring = RingDescriptor::prime_field(prime);
  const int p = static_cast<int>(prime);
  OracleReport report;
  report.prime = prime;

  struct Entry {
    LinearSystem sigma;
    RingMatrix padded;
  };
  const auto to_ring = [&](const SmallMat& s) {
    std::vector<long> vals(s.v.begin(), s.v.end());
    return RingMatrix::from_ints(ring, s.rows, s.cols, vals);
  };

  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<RingMatrix> subspaces;
    std::map<std::vector<std::string>, bool> seen;
    for (const auto& b : all_matrices(n, m_max, p)) {
      RingMatrix basis = canonical_column_basis(to_ring(b));
      auto key = basis.literals();
      key.push_back(std::to_string(basis.cols()));
      if (seen.emplace(key, true).second) subspaces.push_back(std::move(basis));
    }

    std::map<std::vector<std::size_t>, Entry> reps;
    for (const auto& a : all_matrices(n, n, p)) {
      const RingMatrix endo = to_ring(a);
      for (const auto& basis : subspaces) {
        LinearSystem sigma = LinearSystem::from_pair(endo, basis);
        const InvariantReport chain = compute_chain(sigma);
        if (!chain.reachable) continue;
        ++report.systems;
        auto ranks = z_signature(chain).ranks;
        while (!ranks.empty() && ranks.back() == 0) ranks.pop_back();
        Entry entry{sigma, pad_columns(basis, m_max)};
        auto [it, fresh] = reps.try_emplace(ranks, entry);
        if (fresh) continue;
        const bool by_signature = feedback_equivalent(sigma, it->second.sigma);
        const bool by_search = feedback_equivalent_pairs_bruteforce(endo, entry.padded, it->second.sigma.endo(),
                                                                    it->second.padded, 500'000'000, workers);
        ++report.comparisons;
        if (by_signature != by_search) {
          ++report.disagreements;
          report.details.push_back("n=" + std::to_string(n) + " A=" + endo.to_string() + " vs class rep");
        }
      }
    }
    report.classes += reps.size();
    for (auto x = reps.begin(); x != reps.end(); ++x) {
      for (auto y = std::next(x); y != reps.end(); ++y) {
        const bool by_signature = feedback_equivalent(x->second.sigma, y->second.sigma);
        const bool by_search =
            feedback_equivalent_pairs_bruteforce(x->second.sigma.endo(), x->second.padded, y->second.sigma.endo(),
                                                 y->second.padded, 500'000'000, workers);
        ++report.comparisons;
        if (by_signature != by_search) {
          ++report.disagreements;
          report.details.push_back("n=" + std::to_string(n) + " representatives " + x->second.sigma.endo().to_string() +
                                   " and " + y->second.sigma.endo().to_string());
        }
      }
    }
  }
  return report;
}

}  // namespace fbk

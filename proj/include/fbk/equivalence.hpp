#pragma once

// Feedback, dynamic and stable feedback equivalence, K0 classes, certificate
// checking over any supported ring, and an exhaustive (P, K, Q) orbit search
// over small prime fields used as a test oracle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbk/invariants.hpp"

namespace fbk {

/// Witness bundle for a feedback isomorphism phi : Sigma1 -> Sigma2, with G1, G2
/// the input generators:
///   phi psi = I, psi phi = I, phi G1 = G2 U, G2 = phi G1 V, f2 phi - phi f1 = G2 Kw.
struct IsoCertificate {
  RingMatrix phi;
  RingMatrix psi;
  RingMatrix u;
  RingMatrix v;
  RingMatrix kw;
};

enum class RejectReason { None, Inverse, UIdentity, VIdentity, KwIdentity };

struct CertificateCheck {
  RejectReason reason = RejectReason::None;

  bool accepted() const { return reason == RejectReason::None; }
  /// "Accept" or "Reject(<identity>)".
  std::string to_string() const;
};

/// Exact ring arithmetic only, so it works over polynomial quotient rings.
/// Identities are tried in the order inverse, U, V, Kw. Throws ShapeError or
/// DescriptorMismatch on malformed input; a failed identity is a result.
CertificateCheck verify_certificate(const LinearSystem& source, const LinearSystem& target, const IsoCertificate& cert);

/// Fills in psi and the witnesses for a state map over a field or Z; nullopt
/// if phi is not a feedback isomorphism.
std::optional<IsoCertificate> complete_certificate(const RingMatrix& phi, const LinearSystem& source,
                                                   const LinearSystem& target);

IsoCertificate identity_certificate(const LinearSystem& sigma);

/// Block diagonal of two certificates; certifies s1 (+) s2 -> t1 (+) t2 when
/// the summed systems keep block diagonal generators.
IsoCertificate direct_sum_certificate(const IsoCertificate& a, const IsoCertificate& b);

/// Certificate for Gamma(p) (+) source -> Gamma(p) (+) target.
IsoCertificate dynamic_certificate(const IsoCertificate& cert, std::size_t p);

/// Certificate for source (+) gamma -> target (+) gamma.
IsoCertificate stable_certificate(const IsoCertificate& cert, const LinearSystem& gamma);

/// The system obtained by acting with (P, K, Q) on the pair (f, G) of `sigma`
/// and the certificate phi = P for it.
struct FeedbackImage {
  LinearSystem target;
  IsoCertificate certificate;
};
FeedbackImage feedback_image(const LinearSystem& sigma, const FeedbackTransform& t);

/// Over a field: a certificate built from the two canonical certificates, or
/// nullopt when the systems are not feedback equivalent. Throws NotReachable.
std::optional<IsoCertificate> synthesize_certificate(const LinearSystem& source, const LinearSystem& target);

/// Ranks of Z_1, Z_2, ...; compares equal up to trailing zeros.
struct K0Class {
  std::vector<long> entries;

  std::string to_string() const;
  friend bool operator==(const K0Class& a, const K0Class& b);
  friend K0Class operator+(const K0Class& a, const K0Class& b);
};

/// Throws NotLocallyBrunovsky, Unsupported.
K0Class k0_class(const LinearSystem& sigma);

/// Z-signature equality. Throws NotLocallyBrunovsky, DescriptorMismatch.
bool feedback_equivalent(const LinearSystem& a, const LinearSystem& b);
/// Feedback equivalence of Gamma(p) (+) a and Gamma(p) (+) b for some p <= p_max.
bool dynamic_equivalent(const LinearSystem& a, const LinearSystem& b, std::size_t p_max = 2);
/// K0 class equality.
bool stable_equivalent(const LinearSystem& a, const LinearSystem& b);

/// Exhaustive search for (P, K, Q) with A2 = P (A1 + B1 K) P^-1 and
/// B2 = P B1 Q over GF(p). Throws Error if |GL_n| p^(mn) |GL_m| exceeds
/// `bound`; pairs of different shapes are never equivalent.
bool feedback_equivalent_pairs_bruteforce(const RingMatrix& a1, const RingMatrix& b1, const RingMatrix& a2,
                                          const RingMatrix& b2, std::uint64_t bound = 500'000'000,
                                          unsigned workers = 1);

struct OracleReport {
  std::uint64_t prime = 0;
  std::size_t systems = 0;
  std::size_t classes = 0;
  std::size_t comparisons = 0;
  std::size_t disagreements = 0;
  std::vector<std::string> details;  // one line per disagreement
};

/// Enumerates every reachable system (A, B) over GF(p) with n <= n_max and
/// dim B <= m_max, then compares Z-signature equivalence against the orbit
/// search: each system against its class representative, and all class
/// representatives of equal n pairwise. By transitivity this covers every pair.
OracleReport orbit_oracle(std::uint64_t prime, std::size_t n_max, std::size_t m_max, unsigned workers = 1);

}  // namespace fbk

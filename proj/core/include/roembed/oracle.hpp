#pragma once

#include <cstddef>
#include <optional>

#include "roembed/formula.hpp"
#include "roembed/two_party.hpp"

namespace roembed {

struct EquivResult {
  bool equal = true;
  /// First disagreeing assignment, counting with the first variable as the
  /// least significant bit.
  std::optional<VarAssignment> counterexample;
};

/// Exhaustive comparison over the union of both variable sets. Throws
/// SizeLimitExceeded when that union has more than `limit` variables.
EquivResult equiv_check(const Formula& a, const Formula& b, std::size_t limit = 20);
EquivResult equiv_check(const CanonicalTree& a, const CanonicalTree& b, std::size_t limit = 20);

struct SearchConfig {
  std::size_t max_t = 4;
  std::size_t max_r = 4;
  Embedded embedded = Embedded::Disj;
};

struct SearchResult {
  std::size_t m_star = 0;
  std::optional<EmbeddingCertificate> cert;
};

/// Largest r <= max_r such that the embedded function has a projection
/// certificate into `g`, found by exhaustive search. Throws SizeLimitExceeded
/// when g.t() > max_t or the candidate space exceeds 10^8.
///
/// Completeness-preserving reductions: r never exceeds t (h_a must read every
/// source bit), and source bits are relabelled so h_a introduces them in
/// increasing order; DISJ and NDISJ are invariant under simultaneous
/// permutation of both parties' bits and h_b is still enumerated in full.
SearchResult best_projection_embedding(const GadgetTree& g, const SearchConfig& cfg);

/// Rank over the rationals. Computed exactly by elimination modulo enough
/// 61-bit primes that their product exceeds the Hadamard bound of every
/// square submatrix; the rational rank is the largest modular rank seen.
std::size_t rational_rank(const BitMatrix& m);

/// log2 of the rational rank of the truth table (0 for rank 0). Throws
/// SizeLimitExceeded when g.t() > 10.
double log_rank(const GadgetTree& g);

}  // namespace roembed

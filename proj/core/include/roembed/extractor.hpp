#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "roembed/formula.hpp"
#include "roembed/two_party.hpp"

namespace roembed {

struct SCount {
  /// Number of gates all of whose children are leaves.
  std::size_t s = 0;
  /// Every gate with a leaf child has exactly two children: one Alice leaf
  /// and one Bob leaf.
  bool claim1_ok = false;
};

SCount s_count(const GadgetTree& g);

struct LeafRef {
  Side side = Side::Alice;
  std::size_t coord = 1;  // 1-based

  auto operator<=>(const LeafRef&) const = default;
};

/// Input values for a subset of the gadget leaves (variable values, not
/// literal values).
using PartialInput = std::map<LeafRef, bool>;

/// Fixes every leaf under `subtree` so the subtree evaluates to `value`.
PartialInput force_const(const GadgetTree& g, std::uint32_t subtree, bool value);

/// Forces every sibling subtree along the leaf's root path to its parent
/// gate's neutral element; the restricted tree computes the leaf's literal.
/// Throws MissingVariable when the leaf does not exist.
PartialInput expose_leaf(const GadgetTree& g, LeafRef leaf);

struct ExtractOptions {
  std::size_t verify_limit = default_verify_limit();
  /// Allow the canonical-form check for certificates above verify_limit.
  bool structural_verify = true;
};

struct ExtractionResult {
  std::size_t m0 = 0;  // largest DISJ instance found
  std::size_t m1 = 0;  // largest NDISJ instance found
  std::optional<EmbeddingCertificate> cert0;
  std::optional<EmbeddingCertificate> cert1;
  std::size_t s = 0;
  bool claim1_ok = false;
  /// claim1_ok and more than two leaves.
  bool claim1_applicable = false;
  /// m0 * m1 >= s.
  bool guarantee_met = false;

  bool operator==(const ExtractionResult&) const = default;
};

/// Bottom-up DP building DISJ and NDISJ embeddings. Under an AND gate the
/// children's DISJ witnesses add up; the NDISJ witness is the best single
/// child, or two children realizing the same NDISJ_m together with an Alice
/// and a Bob literal, since (P | a) & (P | b) = P | (a & b). OR gates mirror
/// this. Every emitted certificate is verified before returning; a failure
/// throws VerificationFailed. Certificates above the verification limit throw
/// SizeLimitExceeded unless structural verification applies to them.
ExtractionResult extract(const GadgetTree& g, const ExtractOptions& options = {});

struct LemmaReport {
  Gadget gadget = Gadget::Or;
  std::size_t n = 0;
  ExtractionResult result;
  /// The bound m0 * m1 >= n is asserted only when the gadget tree satisfies
  /// the fan-in-2 leaf-pair condition.
  bool bound_asserted = false;
  bool bound_met = false;
};

/// Uses f(x|y) when every leaf's parent is an AND gate and f(x&y) when every
/// leaf's parent is an OR gate, then runs extract. Throws PreconditionFailed
/// for a bare leaf or mixed leaf-parent kinds.
LemmaReport lemma_pipeline(const CanonicalTree& t, const ExtractOptions& options = {});

enum class LevelSide : std::uint8_t { Odd, Even };

std::string_view to_string(LevelSide side) noexcept;

struct TheoremReport {
  ExtractionResult result;
  LevelSide side = LevelSide::Odd;
  std::size_t n = 0;
  std::size_t n_kept = 0;
  /// Values given to the discarded variables.
  VarAssignment restriction;
  Gadget gadget = Gadget::Or;
  std::string restricted_formula;
  /// Leaf-parent uniformity was lost after restriction, so extract ran on the
  /// mixed tree instead of the lemma pipeline.
  bool fallback = false;
  /// floor(sqrt(ceil(n / 2))).
  std::size_t bound_target = 0;
  bool bound_asserted = false;
  bool bound_met = false;

  std::size_t best() const noexcept { return std::max(result.m0, result.m1); }
  /// "Omega(m)" with m = max(m0, m1): randomized bound via DISJ/NDISJ hardness.
  std::string bound_r() const;
  /// "Omega(sqrt m)": quantum bound via DISJ/NDISJ hardness.
  std::string bound_q() const;

  bool operator==(const TheoremReport&) const = default;
};

/// Keeps the larger of the odd-level and even-level leaf sets (odd on ties),
/// removes every maximal subtree without a kept leaf by forcing it to its
/// parent's neutral element, then runs the lemma pipeline on what remains.
/// Throws DegenerateConstant if the restriction collapses the formula.
TheoremReport theorem_pipeline(const CanonicalTree& t, const ExtractOptions& options = {});

/// `{"m0","m1","s","claim1_ok","claim1_applicable","guarantee_met","cert0","cert1"}`.
std::string to_json(const ExtractionResult& r);
ExtractionResult extraction_result_from_json(std::string_view json);

/// The extraction fields followed by side, n_kept, restriction, bound_R,
/// bound_Q and the remaining report fields.
std::string to_json(const TheoremReport& r);
TheoremReport theorem_report_from_json(std::string_view json);

}  // namespace roembed

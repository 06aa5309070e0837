#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "roembed/formula.hpp"

namespace roembed {

enum class RootChoice : std::uint8_t { And, Or, Random };

struct GenSpec {
  std::size_t n_leaves = 4;
  RootChoice root = RootChoice::Random;
  std::size_t max_fanin = 3;  // >= 2
  double negation_prob = 0.0;
  std::uint64_t seed = 0;
  /// When set, every leaf's parent gate has this kind.
  std::optional<GateKind> leaf_parent;
};

/// Random canonical tree over z1..zn. The same spec always yields the same
/// tree. Throws PreconditionFailed for an invalid or unsatisfiable spec.
CanonicalTree generate_tree(const GenSpec& spec);

/// to_text of generate_tree.
std::string generate_formula(const GenSpec& spec);

}  // namespace roembed

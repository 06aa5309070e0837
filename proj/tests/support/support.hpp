#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "roembed/formula.hpp"
#include "roembed/two_party.hpp"

namespace support {

using roembed::Bits;
using roembed::CanonicalTree;
using roembed::GadgetTree;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Direct AST evaluation, independent of canonicalization.
bool naive_eval(const roembed::FormulaNode& n, const roembed::VarAssignment& a);

/// Evaluates t on z_i = x_i op y_i with op the gadget gate.
bool naive_gadget_eval(const CanonicalTree& t, roembed::Gadget gadget, const Bits& x, const Bits& y);

/// Direct recursive evaluation over the gadget tree nodes.
bool naive_tree_eval(const GadgetTree& g, const Bits& x, const Bits& y);

/// Bits of `value` with bit 1 as the most significant of `width`.
Bits bits_of(std::uint64_t value, std::size_t width);

/// Every canonical tree over exactly z1..zn (n <= 5), with every leaf
/// polarity when `polarities` is set.
std::vector<CanonicalTree> all_canonical_trees(std::size_t n, bool polarities);

/// Gadget trees satisfying the fan-in-2 leaf-pair condition: the shape of
/// `shape` with leaf z_i replaced by a gate over Alice coordinate i and Bob
/// coordinate bob_of[i-1], of the kind dual to its parent. A single-leaf
/// shape uses `single_kind`.
GadgetTree pair_tree(const CanonicalTree& shape, const std::vector<std::size_t>& bob_of,
                     const std::vector<bool>& alice_neg, const std::vector<bool>& bob_neg,
                     roembed::GateKind single_kind = roembed::GateKind::Or);

/// All pair trees with s pair nodes, over all shapes, Bob coordinate
/// permutations and polarities (s <= 4).
std::vector<GadgetTree> all_pair_trees(std::size_t s);

/// Random pair tree with s pair nodes.
GadgetTree random_pair_tree(std::size_t s, Rng& rng);

/// Random gadget tree with t coordinate pairs and arbitrary leaf placement.
GadgetTree random_gadget_tree(std::size_t t, Rng& rng, bool polarities);

/// Random raw formula over z1..zn with NOTs and nesting that are not in
/// canonical form.
roembed::Formula random_raw_formula(std::size_t n, Rng& rng);

/// Equivalent rewrite: re-associate, shuffle children, insert double
/// negations, push negations up by De Morgan.
roembed::Formula scramble(const roembed::Formula& f, Rng& rng);

/// Rank over Q by fraction-free elimination on big integers.
std::size_t bareiss_rank(const roembed::BitMatrix& m);

/// Definition-level check of a certificate on every input pair.
bool brute_force_holds(const roembed::EmbeddingCertificate& c, const GadgetTree& g);

}  // namespace support

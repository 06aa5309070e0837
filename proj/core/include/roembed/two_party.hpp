#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roembed/formula.hpp"

namespace roembed {

/// A bitstring; element i is bit i+1 of the string, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Parses "0110". Throws MalformedInput on any other character.
Bits bits_from_string(std::string_view text);
std::string to_string(const Bits& bits);

/// AND over i of (x_i OR y_i). Throws LengthMismatch unless |x| = |y| >= 1.
bool disj(const Bits& x, const Bits& y);
/// OR over i of (x_i AND y_i). Throws LengthMismatch unless |x| = |y| >= 1.
bool ndisj(const Bits& x, const Bits& y);

enum class Side : std::uint8_t { Alice, Bob };
/// The bitwise combination of Alice's and Bob's inputs: f(x|y) or f(x&y).
enum class Gadget : std::uint8_t { Or, And };
enum class Embedded : std::uint8_t { Disj, Ndisj };

constexpr GateKind gate_of(Gadget g) noexcept { return g == Gadget::Or ? GateKind::Or : GateKind::And; }

std::string_view to_string(Gadget g) noexcept;
std::string_view to_string(Embedded e) noexcept;

/// Value of DISJ_r or NDISJ_r.
bool embedded_value(Embedded e, const Bits& x, const Bits& y);

/// Recursive builder for gadget trees that do not come from gadget_expand.
struct GadgetSpec {
  bool is_leaf = true;
  Side side = Side::Alice;
  std::size_t coord = 1;  // 1-based
  bool negated = false;
  GateKind gate = GateKind::And;
  std::vector<GadgetSpec> children;

  static GadgetSpec alice(std::size_t coord, bool negated = false);
  static GadgetSpec bob(std::size_t coord, bool negated = false);
  static GadgetSpec make_gate(GateKind kind, std::vector<GadgetSpec> children);
};

/// Two-party alternating AND-OR tree with Alice leaves (x_i) and Bob leaves
/// (y_i). Stored as a preorder arena: node 0 is the root and every subtree
/// occupies a contiguous index range.
class GadgetTree {
 public:
  struct Node {
    bool is_leaf = false;
    GateKind gate = GateKind::And;
    Side side = Side::Alice;
    std::uint32_t coord = 0;  // 0-based
    bool negated = false;
    std::uint32_t parent = 0;
    std::uint32_t subtree_size = 1;
    std::vector<std::uint32_t> children;

    bool operator==(const Node&) const = default;
  };

  /// Flattens same-kind nested gates, sorts children canonically and checks
  /// that every coordinate 1..t has exactly one Alice and one Bob leaf.
  /// Throws MalformedInput.
  static GadgetTree from_spec(const GadgetSpec& spec);

  std::size_t t() const noexcept { return t_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::uint32_t alice_leaf(std::size_t coord0) const { return alice_leaf_[coord0]; }
  std::uint32_t bob_leaf(std::size_t coord0) const { return bob_leaf_[coord0]; }
  std::size_t n_leaves() const noexcept { return 2 * t_; }

  /// Surface text of the source formula when built by gadget_expand.
  const std::string& target_formula() const noexcept { return target_formula_; }
  std::optional<Gadget> gadget() const noexcept { return gadget_; }

  /// Rendering with `x1`, `!y2` leaves.
  std::string to_text() const;

  bool operator==(const GadgetTree& other) const { return nodes_ == other.nodes_; }

 private:
  friend GadgetTree gadget_expand(const CanonicalTree& t, Gadget gadget);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> alice_leaf_;
  std::vector<std::uint32_t> bob_leaf_;
  std::size_t t_ = 0;
  std::string target_formula_;
  std::optional<Gadget> gadget_;
};

/// Replaces each leaf z_i by (x_i op y_i), where op is the gadget gate; a
/// negated leaf becomes the dual gate over negated x_i and y_i. Coordinate i
/// is the i-th variable of `t` in VarLess order.
GadgetTree gadget_expand(const CanonicalTree& t, Gadget gadget);

/// Throws LengthMismatch unless |x| = |y| = g.t().
bool eval_gadget(const GadgetTree& g, const Bits& x, const Bits& y);

/// Dense 0/1 matrix stored row-major in 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool at(std::size_t r, std::size_t c) const {
    return (words_[r * stride_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v);

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Row index encodes x and column index encodes y, with bit 1 of the string
/// as the most significant bit. Throws SizeLimitExceeded when t > limit.
BitMatrix truth_table(const GadgetTree& g, std::size_t limit = 13);

/// One target coordinate of h_a or h_b: a constant, or a (possibly negated)
/// copy of a source bit.
struct CoordEntry {
  bool is_copy = false;
  bool bit = false;            // fixed value
  std::uint32_t slot = 0;      // 1-based source bit
  bool negated = false;

  static CoordEntry fixed(bool bit) { return CoordEntry{false, bit, 0, false}; }
  static CoordEntry copy(std::uint32_t slot, bool negated = false) {
    return CoordEntry{true, false, slot, negated};
  }

  bool operator==(const CoordEntry&) const = default;
  /// Fixed 0 < Fixed 1 < Copy(1) < Copy(1, neg) < Copy(2) < ...
  std::strong_ordering operator<=>(const CoordEntry& other) const;
};

using CoordMap = std::vector<CoordEntry>;

/// Witness that DISJ_r / NDISJ_r embeds into a gadget function through the
/// projections h_a (Alice coordinates) and h_b (Bob coordinates).
struct EmbeddingCertificate {
  Embedded embedded = Embedded::Disj;
  std::size_t r = 0;
  CoordMap h_a;
  CoordMap h_b;
  std::string target_formula;
  std::optional<Gadget> gadget;

  bool operator==(const EmbeddingCertificate&) const = default;
};

/// Maps source inputs to gadget inputs. Throws LengthMismatch or
/// MalformedCertificate (slot out of range).
std::pair<Bits, Bits> apply_embedding(const EmbeddingCertificate& c, const Bits& x, const Bits& y);

struct Counterexample {
  Bits x;
  Bits y;
  bool operator==(const Counterexample&) const = default;
};

struct VerifyOutcome {
  std::optional<Counterexample> counterexample;
  bool verified() const noexcept { return !counterexample.has_value(); }
};

/// Exhaustive-check ceiling on r; RO_EMBED_VERIFY_LIMIT overrides the default 12.
std::size_t default_verify_limit();

/// Checks embedded(x, y) == g(h_a(x), h_b(y)) on every input pair. Returns the
/// lexicographically smallest (x, y) counterexample, if any.
///
/// For r <= limit the check enumerates all 4^r pairs. Above the limit, and
/// only when `structural` is set, a certificate that copies each source bit
/// at most once per side is checked by comparing canonical read-once forms
/// (two constant-free read-once formulas are equivalent iff their canonical
/// trees coincide). Anything else above the limit throws SizeLimitExceeded.
/// An inequivalent read-once certificate above the limit throws
/// VerificationFailed without a counterexample, since finding the smallest one
/// would need the full enumeration.
///
/// Throws MalformedCertificate when the certificate does not fit `g`.
VerifyOutcome verify_embedding(const EmbeddingCertificate& c, const GadgetTree& g,
                               std::size_t limit = default_verify_limit(), bool structural = true);

/// Text identifying the target of certificates for `g`: the source formula,
/// or the gadget tree itself when it was not built by gadget_expand.
std::string target_descriptor(const GadgetTree& g);

/// Bit-exact JSON: {"embedded","r","h_a","h_b","target_formula","gadget"}.
std::string to_json(const EmbeddingCertificate& c);
/// Throws MalformedInput / MalformedCertificate.
EmbeddingCertificate certificate_from_json(std::string_view json);

}  // namespace roembed

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace roembed {

enum class GateKind : std::uint8_t { And, Or };

constexpr GateKind dual(GateKind kind) noexcept {
  return kind == GateKind::And ? GateKind::Or : GateKind::And;
}

/// The constant that leaves a gate's value unchanged: 1 for AND, 0 for OR.
constexpr bool neutral(GateKind kind) noexcept { return kind == GateKind::And; }

/// The constant that fixes a gate's value: 0 for AND, 1 for OR.
constexpr bool absorbing(GateKind kind) noexcept { return kind == GateKind::Or; }

std::string_view to_string(GateKind kind) noexcept;

/// Natural order on variable names: "z2" < "z10" < "za". Names are compared by
/// their non-digit prefix, then by the numeric value of a trailing digit run,
/// then bytewise.
bool var_less(std::string_view a, std::string_view b) noexcept;

struct VarLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept { return var_less(a, b); }
};

/// Partial or total map from variable name to bit.
using VarAssignment = std::map<std::string, bool, VarLess>;

// ---------------------------------------------------------------------------
// Raw formulas

struct FormulaNode {
  enum class Kind : std::uint8_t { Var, Not, Gate, Const };

  Kind kind = Kind::Const;
  std::string var;
  GateKind gate = GateKind::And;
  bool value = false;
  std::vector<FormulaNode> children;

  static FormulaNode variable(std::string name);
  static FormulaNode negation(FormulaNode child);
  static FormulaNode make_gate(GateKind kind, std::vector<FormulaNode> children);
  static FormulaNode constant(bool value);

  bool operator==(const FormulaNode&) const = default;
};

/// A parsed Boolean formula. Grouping is preserved exactly as written.
struct Formula {
  FormulaNode root;

  bool operator==(const Formula&) const = default;
};

/// Parses the surface grammar:
///
///   expr   := term  (('|' | "OR")  term)*
///   term   := unary (('&' | "AND") unary)*
///   unary  := ('!' | "NOT") unary | '(' expr ')' | identifier
///
/// Same-kind operators at one nesting level become a single n-ary gate. Throws
/// SyntaxError or ReadOnceViolation.
Formula parse(std::string_view text);

/// Variables of `f` in VarLess order.
std::vector<std::string> variables(const Formula& f);

/// Evaluates the AST directly. Throws MissingVariable.
bool evaluate(const Formula& f, const VarAssignment& assignment);

std::string to_text(const Formula& f);

// ---------------------------------------------------------------------------
// Canonical alternating AND-OR trees

struct CanonicalNode {
  // Leaves have no children; `var`/`negated` are meaningful only for leaves
  // and `gate` only for internal nodes.
  GateKind gate = GateKind::And;
  std::string var;
  bool negated = false;
  std::vector<CanonicalNode> children;

  bool is_leaf() const noexcept { return children.empty(); }

  static CanonicalNode leaf(std::string var, bool negated = false);
  static CanonicalNode make_gate(GateKind kind, std::vector<CanonicalNode> children);

  bool operator==(const CanonicalNode&) const = default;
};

/// Returns a description of the first violated invariant, if any: alternation,
/// fan-in >= 2, read-once, canonical child order.
std::optional<std::string> check_invariants(const CanonicalNode& root);

/// Canonical child order: (leaf count, smallest variable) ascending. Siblings
/// have disjoint variable sets, so this is a strict total order.
bool canonical_less(const CanonicalNode& a, const CanonicalNode& b);

class CanonicalTree {
 public:
  /// Takes a node that already satisfies every invariant; throws
  /// MalformedInput otherwise.
  explicit CanonicalTree(CanonicalNode root);

  const CanonicalNode& root() const noexcept { return root_; }
  std::size_t n_leaves() const noexcept { return n_leaves_; }
  /// Edge count of the longest root-to-leaf path.
  std::size_t depth() const noexcept { return depth_; }
  /// Variables in VarLess order; position i is gadget coordinate i+1.
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  /// 1-based gadget coordinate of `var`. Throws MissingVariable.
  std::size_t coordinate_of(std::string_view var) const;

  bool operator==(const CanonicalTree& other) const { return root_ == other.root_; }

 private:
  CanonicalNode root_;
  std::size_t n_leaves_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::string> variables_;
};

/// Pushes negations to the leaves, flattens same-kind gates, drops single-child
/// gates, folds constants and sorts children. Throws DegenerateConstant.
CanonicalTree canonicalize(const Formula& f);

/// The tree as a formula (negated leaves become Not over Var).
Formula to_formula(const CanonicalTree& t);

/// Throws MissingVariable when a variable of `t` is unassigned.
bool evaluate(const CanonicalTree& t, const VarAssignment& assignment);

/// Either the restricted tree or the constant it collapsed to.
using Restricted = std::variant<bool, CanonicalTree>;

/// Substitutes the assigned variables and re-canonicalizes. Keys of `partial`
/// must be variables of `t` (MissingVariable otherwise).
Restricted restrict(const CanonicalTree& t, const VarAssignment& partial);

struct LeafLevels {
  std::vector<std::string> odd;
  std::vector<std::string> even;
};

/// Splits variables by the parity of their leaf's edge distance from the root.
LeafLevels leaf_levels(const CanonicalTree& t);

/// The common kind of every leaf's parent, or nullopt when kinds are mixed or
/// the root is a leaf.
std::optional<GateKind> uniform_leaf_parent(const CanonicalTree& t);

/// Surface text that parses and canonicalizes back to `t`.
std::string to_text(const CanonicalTree& t);

/// `{"gate":"AND","children":[...]}` / `{"var":"z1","neg":false}`, compact.
std::string to_json(const CanonicalTree& t);
/// Throws MalformedInput for malformed JSON or a non-canonical tree.
CanonicalTree canonical_tree_from_json(std::string_view json);

/// Graphviz rendering; leaves are labelled `z1` or `¬z1`.
std::string to_dot(const CanonicalTree& t);

}  // namespace roembed

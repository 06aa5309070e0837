#include "roembed/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "roembed/errors.hpp"

namespace roembed {

std::string_view to_string(GateKind kind) noexcept { return kind == GateKind::And ? "AND" : "OR"; }

namespace {

struct SplitName {
  std::string_view prefix;
  std::string_view digits;  // trailing digit run, leading zeros stripped
  bool has_digits = false;
};

SplitName split_name(std::string_view name) {
  std::size_t i = name.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
  SplitName out{name.substr(0, i), name.substr(i), i < name.size()};
  while (out.digits.size() > 1 && out.digits.front() == '0') out.digits.remove_prefix(1);
  return out;
}

}  // namespace

bool var_less(std::string_view a, std::string_view b) noexcept {
  const SplitName sa = split_name(a);
  const SplitName sb = split_name(b);
  if (sa.prefix != sb.prefix) return sa.prefix < sb.prefix;
  if (sa.has_digits != sb.has_digits) return !sa.has_digits;
  if (sa.digits.size() != sb.digits.size()) return sa.digits.size() < sb.digits.size();
  if (sa.digits != sb.digits) return sa.digits < sb.digits;
  return a < b;
}

// ---------------------------------------------------------------------------
// FormulaNode

FormulaNode FormulaNode::variable(std::string name) {
  FormulaNode n;
  n.kind = Kind::Var;
  n.var = std::move(name);
  return n;
}

FormulaNode FormulaNode::negation(FormulaNode child) {
  FormulaNode n;
  n.kind = Kind::Not;
  n.children.push_back(std::move(child));
  return n;
}

FormulaNode FormulaNode::make_gate(GateKind kind, std::vector<FormulaNode> children) {
  FormulaNode n;
  n.kind = Kind::Gate;
  n.gate = kind;
  n.children = std::move(children);
  return n;
}

FormulaNode FormulaNode::constant(bool value) {
  FormulaNode n;
  n.kind = Kind::Const;
  n.value = value;
  return n;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula run() {
    Formula f{parse_or()};
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input or binary operator");
    return f;
  }

 private:
  enum class Tok { And, Or, Not, LParen, RParen, Ident, End, Invalid };

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  // Classifies the next token without consuming it; `len` receives its length.
  Tok peek(std::size_t& len) {
    skip_space();
    len = 1;
    if (pos_ >= text_.size()) {
      len = 0;
      return Tok::End;
    }
    switch (text_[pos_]) {
      case '&': return Tok::And;
      case '|': return Tok::Or;
      case '!': return Tok::Not;
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      default: break;
    }
    if (!ident_start(text_[pos_])) return Tok::Invalid;
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    len = end - pos_;
    const std::string_view word = text_.substr(pos_, len);
    if (word == "AND") return Tok::And;
    if (word == "OR") return Tok::Or;
    if (word == "NOT") return Tok::Not;
    return Tok::Ident;
  }

  FormulaNode parse_or() {
    std::vector<FormulaNode> parts;
    parts.push_back(parse_and());
    std::size_t len = 0;
    while (peek(len) == Tok::Or) {
      pos_ += len;
      parts.push_back(parse_and());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return FormulaNode::make_gate(GateKind::Or, std::move(parts));
  }

  FormulaNode parse_and() {
    std::vector<FormulaNode> parts;
    parts.push_back(parse_unary());
    std::size_t len = 0;
    while (peek(len) == Tok::And) {
      pos_ += len;
      parts.push_back(parse_unary());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return FormulaNode::make_gate(GateKind::And, std::move(parts));
  }

  FormulaNode parse_unary() {
    std::size_t len = 0;
    const Tok tok = peek(len);
    const std::size_t start = pos_;
    switch (tok) {
      case Tok::Not:
        pos_ += len;
        return FormulaNode::negation(parse_unary());
      case Tok::LParen: {
        pos_ += len;
        FormulaNode inner = parse_or();
        if (peek(len) != Tok::RParen) throw SyntaxError(pos_, "')'");
        pos_ += len;
        return inner;
      }
      case Tok::Ident: {
        std::string name(text_.substr(start, len));
        pos_ += len;
        if (!seen_.insert(name).second) throw ReadOnceViolation(name);
        return FormulaNode::variable(std::move(name));
      }
      default:
        throw SyntaxError(start, "variable, '!' or '('");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<std::string> seen_;
};

void collect_vars(const FormulaNode& n, std::vector<std::string>& out) {
  if (n.kind == FormulaNode::Kind::Var) out.push_back(n.var);
  for (const auto& c : n.children) collect_vars(c, out);
}

bool eval_node(const FormulaNode& n, const VarAssignment& a) {
  switch (n.kind) {
    case FormulaNode::Kind::Var: {
      auto it = a.find(n.var);
      if (it == a.end()) throw MissingVariable(n.var);
      return it->second;
    }
    case FormulaNode::Kind::Not:
      return !eval_node(n.children.front(), a);
    case FormulaNode::Kind::Const:
      return n.value;
    case FormulaNode::Kind::Gate:
      if (n.gate == GateKind::And) {
        bool v = true;
        for (const auto& c : n.children) v = eval_node(c, a) && v;
        return v;
      } else {
        bool v = false;
        for (const auto& c : n.children) v = eval_node(c, a) || v;
        return v;
      }
  }
  return false;
}

void write_formula(const FormulaNode& n, std::string& out) {
  switch (n.kind) {
    case FormulaNode::Kind::Var:
      out += n.var;
      return;
    case FormulaNode::Kind::Const:
      out += n.value ? "1" : "0";
      return;
    case FormulaNode::Kind::Not: {
      out += '!';
      const FormulaNode& c = n.children.front();
      const bool wrap = c.kind == FormulaNode::Kind::Gate;
      if (wrap) out += '(';
      write_formula(c, out);
      if (wrap) out += ')';
      return;
    }
    case FormulaNode::Kind::Gate: {
      const char* sep = n.gate == GateKind::And ? " & " : " | ";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += sep;
        const FormulaNode& c = n.children[i];
        const bool wrap = c.kind == FormulaNode::Kind::Gate;
        if (wrap) out += '(';
        write_formula(c, out);
        if (wrap) out += ')';
      }
      return;
    }
  }
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  collect_vars(f.root, out);
  std::sort(out.begin(), out.end(), VarLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool evaluate(const Formula& f, const VarAssignment& assignment) {
  return eval_node(f.root, assignment);
}

std::string to_text(const Formula& f) {
  std::string out;
  write_formula(f.root, out);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical trees

CanonicalNode CanonicalNode::leaf(std::string var, bool negated) {
  CanonicalNode n;
  n.var = std::move(var);
  n.negated = negated;
  return n;
}

CanonicalNode CanonicalNode::make_gate(GateKind kind, std::vector<CanonicalNode> children) {
  CanonicalNode n;
  n.gate = kind;
  n.children = std::move(children);
  return n;
}

namespace {

std::size_t leaf_count(const CanonicalNode& n) {
  if (n.is_leaf()) return 1;
  std::size_t total = 0;
  for (const auto& c : n.children) total += leaf_count(c);
  return total;
}

const std::string& min_var(const CanonicalNode& n) {
  if (n.is_leaf()) return n.var;
  const std::string* best = &min_var(n.children.front());
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    const std::string& v = min_var(n.children[i]);
    if (var_less(v, *best)) best = &v;
  }
  return *best;
}

using Partial = std::variant<bool, CanonicalNode>;

// Combines already-canonical parts under a gate of `kind`.
Partial build_gate(GateKind kind, std::vector<Partial> parts) {
  std::vector<CanonicalNode> kids;
  for (auto& p : parts) {
    if (const bool* b = std::get_if<bool>(&p)) {
      if (*b == absorbing(kind)) return *b;
      continue;
    }
    auto& node = std::get<CanonicalNode>(p);
    if (!node.is_leaf() && node.gate == kind) {
      for (auto& grandchild : node.children) kids.push_back(std::move(grandchild));
    } else {
      kids.push_back(std::move(node));
    }
  }
  if (kids.empty()) return neutral(kind);
  if (kids.size() == 1) return std::move(kids.front());
  std::sort(kids.begin(), kids.end(), canonical_less);
  return CanonicalNode::make_gate(kind, std::move(kids));
}

Partial canon(const FormulaNode& n, bool negate) {
  switch (n.kind) {
    case FormulaNode::Kind::Var:
      return CanonicalNode::leaf(n.var, negate);
    case FormulaNode::Kind::Const:
      return n.value != negate;
    case FormulaNode::Kind::Not:
      return canon(n.children.front(), !negate);
    case FormulaNode::Kind::Gate: {
      const GateKind kind = negate ? dual(n.gate) : n.gate;
      std::vector<Partial> parts;
      parts.reserve(n.children.size());
      for (const auto& c : n.children) parts.push_back(canon(c, negate));
      return build_gate(kind, std::move(parts));
    }
  }
  return false;
}

Partial restrict_node(const CanonicalNode& n, const VarAssignment& partial) {
  if (n.is_leaf()) {
    auto it = partial.find(n.var);
    if (it != partial.end()) return it->second != n.negated;
    return n;
  }
  std::vector<Partial> parts;
  parts.reserve(n.children.size());
  for (const auto& c : n.children) parts.push_back(restrict_node(c, partial));
  return build_gate(n.gate, std::move(parts));
}

std::optional<std::string> check_node(const CanonicalNode& n, std::set<std::string>& seen) {
  if (n.is_leaf()) {
    if (n.var.empty()) return "leaf without a variable name";
    if (!seen.insert(n.var).second) return "variable '" + n.var + "' occurs more than once";
    return std::nullopt;
  }
  if (n.children.size() < 2) return "gate with fewer than two children";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const CanonicalNode& c = n.children[i];
    if (!c.is_leaf() && c.gate == n.gate) return "non-alternating gate under " + std::string(to_string(n.gate));
    if (i > 0 && !canonical_less(n.children[i - 1], c)) return "children not in canonical order";
    if (auto err = check_node(c, seen)) return err;
  }
  return std::nullopt;
}

std::size_t depth_of(const CanonicalNode& n) {
  std::size_t d = 0;
  for (const auto& c : n.children) d = std::max(d, depth_of(c) + 1);
  return d;
}

void collect_levels(const CanonicalNode& n, std::size_t level, LeafLevels& out) {
  if (n.is_leaf()) {
    (level % 2 ? out.odd : out.even).push_back(n.var);
    return;
  }
  for (const auto& c : n.children) collect_levels(c, level + 1, out);
}

void collect_leaf_parents(const CanonicalNode& n, std::set<GateKind>& kinds) {
  for (const auto& c : n.children) {
    if (c.is_leaf()) {
      kinds.insert(n.gate);
    } else {
      collect_leaf_parents(c, kinds);
    }
  }
}

void collect_canonical_vars(const CanonicalNode& n, std::vector<std::string>& out) {
  if (n.is_leaf()) {
    out.push_back(n.var);
    return;
  }
  for (const auto& c : n.children) collect_canonical_vars(c, out);
}

FormulaNode to_formula_node(const CanonicalNode& n) {
  if (n.is_leaf()) {
    FormulaNode v = FormulaNode::variable(n.var);
    return n.negated ? FormulaNode::negation(std::move(v)) : v;
  }
  std::vector<FormulaNode> kids;
  kids.reserve(n.children.size());
  for (const auto& c : n.children) kids.push_back(to_formula_node(c));
  return FormulaNode::make_gate(n.gate, std::move(kids));
}

bool eval_canonical(const CanonicalNode& n, const VarAssignment& a) {
  if (n.is_leaf()) {
    auto it = a.find(n.var);
    if (it == a.end()) throw MissingVariable(n.var);
    return it->second != n.negated;
  }
  if (n.gate == GateKind::And) {
    bool v = true;
    for (const auto& c : n.children) v = eval_canonical(c, a) && v;
    return v;
  }
  bool v = false;
  for (const auto& c : n.children) v = eval_canonical(c, a) || v;
  return v;
}

void write_canonical(const CanonicalNode& n, std::string& out) {
  if (n.is_leaf()) {
    if (n.negated) out += '!';
    out += n.var;
    return;
  }
  const char* sep = n.gate == GateKind::And ? " & " : " | ";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += sep;
    const CanonicalNode& c = n.children[i];
    if (c.is_leaf()) {
      write_canonical(c, out);
    } else {
      out += '(';
      write_canonical(c, out);
      out += ')';
    }
  }
}

}  // namespace

bool canonical_less(const CanonicalNode& a, const CanonicalNode& b) {
  const std::size_t la = leaf_count(a);
  const std::size_t lb = leaf_count(b);
  if (la != lb) return la < lb;
  return var_less(min_var(a), min_var(b));
}

std::optional<std::string> check_invariants(const CanonicalNode& root) {
  std::set<std::string> seen;
  return check_node(root, seen);
}

CanonicalTree::CanonicalTree(CanonicalNode root) : root_(std::move(root)) {
  if (auto err = check_invariants(root_)) throw MalformedInput("not a canonical tree: " + *err);
  collect_canonical_vars(root_, variables_);
  std::sort(variables_.begin(), variables_.end(), VarLess{});
  n_leaves_ = variables_.size();
  depth_ = depth_of(root_);
}

std::size_t CanonicalTree::coordinate_of(std::string_view var) const {
  auto it = std::lower_bound(variables_.begin(), variables_.end(), var, VarLess{});
  if (it == variables_.end() || *it != var) throw MissingVariable(std::string(var));
  return static_cast<std::size_t>(it - variables_.begin()) + 1;
}

CanonicalTree canonicalize(const Formula& f) {
  Partial p = canon(f.root, false);
  if (const bool* b = std::get_if<bool>(&p)) throw DegenerateConstant(*b);
  return CanonicalTree(std::get<CanonicalNode>(std::move(p)));
}

Formula to_formula(const CanonicalTree& t) { return Formula{to_formula_node(t.root())}; }

bool evaluate(const CanonicalTree& t, const VarAssignment& assignment) {
  return eval_canonical(t.root(), assignment);
}

Restricted restrict(const CanonicalTree& t, const VarAssignment& partial) {
  for (const auto& [var, value] : partial) {
    (void)value;
    if (!std::binary_search(t.variables().begin(), t.variables().end(), var, VarLess{}))
      throw MissingVariable(var);
  }
  Partial p = restrict_node(t.root(), partial);
  if (const bool* b = std::get_if<bool>(&p)) return *b;
  return CanonicalTree(std::get<CanonicalNode>(std::move(p)));
}

LeafLevels leaf_levels(const CanonicalTree& t) {
  LeafLevels out;
  collect_levels(t.root(), 0, out);
  std::sort(out.odd.begin(), out.odd.end(), VarLess{});
  std::sort(out.even.begin(), out.even.end(), VarLess{});
  return out;
}

std::optional<GateKind> uniform_leaf_parent(const CanonicalTree& t) {
  std::set<GateKind> kinds;
  collect_leaf_parents(t.root(), kinds);
  if (kinds.size() != 1) return std::nullopt;
  return *kinds.begin();
}

std::string to_text(const CanonicalTree& t) {
  std::string out;
  write_canonical(t.root(), out);
  return out;
}

}  // namespace roembed

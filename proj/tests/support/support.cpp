#include "support.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "roembed/generator.hpp"

namespace support {

using roembed::CanonicalNode;
using roembed::Formula;
using roembed::FormulaNode;
using roembed::GadgetSpec;
using roembed::GateKind;

bool naive_eval(const FormulaNode& n, const roembed::VarAssignment& a) {
  switch (n.kind) {
    case FormulaNode::Kind::Var: return a.at(n.var);
    case FormulaNode::Kind::Const: return n.value;
    case FormulaNode::Kind::Not: return !naive_eval(n.children.at(0), a);
    case FormulaNode::Kind::Gate: {
      bool acc = n.gate == GateKind::And;
      for (const auto& c : n.children) {
        const bool v = naive_eval(c, a);
        acc = n.gate == GateKind::And ? (acc && v) : (acc || v);
      }
      return acc;
    }
  }
  return false;
}

namespace {

bool eval_canonical(const CanonicalNode& n, const std::function<bool(const std::string&)>& value) {
  if (n.is_leaf()) return value(n.var) != n.negated;
  bool acc = n.gate == GateKind::And;
  for (const auto& c : n.children) {
    const bool v = eval_canonical(c, value);
    acc = n.gate == GateKind::And ? (acc && v) : (acc || v);
  }
  return acc;
}

bool eval_node(const GadgetTree& g, std::uint32_t i, const Bits& x, const Bits& y) {
  const auto& n = g.node(i);
  if (n.is_leaf) {
    const bool v = (n.side == roembed::Side::Alice ? x : y).at(n.coord) != 0;
    return v != n.negated;
  }
  bool acc = n.gate == GateKind::And;
  for (auto c : n.children) {
    const bool v = eval_node(g, c, x, y);
    acc = n.gate == GateKind::And ? (acc && v) : (acc || v);
  }
  return acc;
}

}  // namespace

bool naive_gadget_eval(const CanonicalTree& t, roembed::Gadget gadget, const Bits& x, const Bits& y) {
  return eval_canonical(t.root(), [&](const std::string& var) {
    const std::size_t i = t.coordinate_of(var) - 1;
    return gadget == roembed::Gadget::Or ? (x.at(i) || y.at(i)) : (x.at(i) && y.at(i));
  });
}

bool naive_tree_eval(const GadgetTree& g, const Bits& x, const Bits& y) { return eval_node(g, 0, x, y); }

Bits bits_of(std::uint64_t value, std::size_t width) {
  Bits b(width);
  for (std::size_t i = 0; i < width; ++i) b[i] = (value >> (width - 1 - i)) & 1U;
  return b;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<FormulaNode> leaf_variants(int v, bool polarities) {
  FormulaNode leaf = FormulaNode::variable("z" + std::to_string(v));
  if (!polarities) return {leaf};
  return {leaf, FormulaNode::negation(leaf)};
}

// Set partitions of `items` into at least two blocks.
void partitions(const std::vector<int>& items, const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
  std::vector<std::size_t> block(items.size(), 0);
  while (true) {
    const std::size_t k = *std::max_element(block.begin(), block.end()) + 1;
    if (k >= 2) {
      std::vector<std::vector<int>> blocks(k);
      for (std::size_t i = 0; i < items.size(); ++i) blocks[block[i]].push_back(items[i]);
      emit(blocks);
    }
    // Next restricted growth string.
    std::size_t i = items.size();
    while (true) {
      if (i <= 1) return;
      --i;
      const std::size_t limit = *std::max_element(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(i)) + 1;
      if (block[i] < limit) {
        ++block[i];
        std::fill(block.begin() + static_cast<std::ptrdiff_t>(i) + 1, block.end(), 0);
        break;
      }
    }
  }
}

std::vector<FormulaNode> trees_over(const std::vector<int>& vars, GateKind kind, bool polarities) {
  if (vars.size() == 1) return leaf_variants(vars[0], polarities);
  std::vector<FormulaNode> out;
  partitions(vars, [&](const std::vector<std::vector<int>>& blocks) {
    std::vector<std::vector<FormulaNode>> options;
    for (const auto& b : blocks) options.push_back(trees_over(b, roembed::dual(kind), polarities));
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
      std::vector<FormulaNode> kids;
      for (std::size_t i = 0; i < options.size(); ++i) kids.push_back(options[i][pick[i]]);
      out.push_back(FormulaNode::make_gate(kind, std::move(kids)));
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  });
  return out;
}

GadgetSpec pair_spec(const CanonicalNode& n, const CanonicalTree& shape, GateKind parent,
                     const std::vector<std::size_t>& bob_of, const std::vector<bool>& an, const std::vector<bool>& bn) {
  if (n.is_leaf()) {
    const std::size_t i = shape.coordinate_of(n.var);
    return GadgetSpec::make_gate(roembed::dual(parent),
                                 {GadgetSpec::alice(i, an[i - 1]), GadgetSpec::bob(bob_of[i - 1], bn[i - 1])});
  }
  std::vector<GadgetSpec> kids;
  for (const auto& c : n.children) kids.push_back(pair_spec(c, shape, n.gate, bob_of, an, bn));
  return GadgetSpec::make_gate(n.gate, std::move(kids));
}

}  // namespace

std::vector<CanonicalTree> all_canonical_trees(std::size_t n, bool polarities) {
  std::vector<int> vars(n);
  std::iota(vars.begin(), vars.end(), 1);
  std::vector<FormulaNode> raw;
  if (n == 1) {
    raw = leaf_variants(1, polarities);
  } else {
    for (GateKind k : {GateKind::And, GateKind::Or}) {
      auto part = trees_over(vars, k, polarities);
      raw.insert(raw.end(), part.begin(), part.end());
    }
  }
  std::vector<CanonicalTree> out;
  for (auto& r : raw) out.push_back(roembed::canonicalize(Formula{std::move(r)}));
  return out;
}

GadgetTree pair_tree(const CanonicalTree& shape, const std::vector<std::size_t>& bob_of,
                     const std::vector<bool>& alice_neg, const std::vector<bool>& bob_neg, GateKind single_kind) {
  const CanonicalNode& root = shape.root();
  const GateKind parent = root.is_leaf() ? roembed::dual(single_kind) : root.gate;
  return GadgetTree::from_spec(pair_spec(root, shape, parent, bob_of, alice_neg, bob_neg));
}

std::vector<GadgetTree> all_pair_trees(std::size_t s) {
  std::vector<GadgetTree> out;
  for (const auto& shape : all_canonical_trees(s, false)) {
    std::vector<std::size_t> perm(s);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * s)); ++mask) {
        std::vector<bool> an(s), bn(s);
        for (std::size_t i = 0; i < s; ++i) {
          an[i] = (mask >> (2 * i)) & 1U;
          bn[i] = (mask >> (2 * i + 1)) & 1U;
        }
        if (s == 1) {
          out.push_back(pair_tree(shape, perm, an, bn, GateKind::Or));
          out.push_back(pair_tree(shape, perm, an, bn, GateKind::And));
        } else {
          out.push_back(pair_tree(shape, perm, an, bn));
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

GadgetTree random_pair_tree(std::size_t s, Rng& rng) {
  roembed::GenSpec spec;
  spec.n_leaves = s;
  spec.max_fanin = 2 + rng.below(3);
  spec.seed = rng.next();
  const CanonicalTree shape = roembed::generate_tree(spec);
  std::vector<std::size_t> perm(s);
  std::iota(perm.begin(), perm.end(), 1);
  for (std::size_t i = s; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<bool> an(s), bn(s);
  for (std::size_t i = 0; i < s; ++i) {
    an[i] = rng.coin();
    bn[i] = rng.coin();
  }
  return pair_tree(shape, perm, an, bn, rng.coin() ? GateKind::Or : GateKind::And);
}

GadgetTree random_gadget_tree(std::size_t t, Rng& rng, bool polarities) {
  roembed::GenSpec spec;
  spec.n_leaves = 2 * t;
  spec.max_fanin = 2 + rng.below(3);
  spec.seed = rng.next();
  const CanonicalTree shape = roembed::generate_tree(spec);
  std::vector<std::size_t> slot(2 * t);
  std::iota(slot.begin(), slot.end(), 0);
  for (std::size_t i = slot.size(); i > 1; --i) std::swap(slot[i - 1], slot[rng.below(i)]);
  std::function<GadgetSpec(const CanonicalNode&)> build = [&](const CanonicalNode& n) {
    if (n.is_leaf()) {
      const std::size_t k = slot[shape.coordinate_of(n.var) - 1];
      const bool neg = polarities && rng.coin();
      return k < t ? GadgetSpec::alice(k + 1, neg) : GadgetSpec::bob(k - t + 1, neg);
    }
    std::vector<GadgetSpec> kids;
    for (const auto& c : n.children) kids.push_back(build(c));
    return GadgetSpec::make_gate(n.gate, std::move(kids));
  };
  return GadgetTree::from_spec(build(shape.root()));
}

Formula random_raw_formula(std::size_t n, Rng& rng) {
  std::vector<int> vars(n);
  std::iota(vars.begin(), vars.end(), 1);
  for (std::size_t i = n; i > 1; --i) std::swap(vars[i - 1], vars[rng.below(i)]);
  std::function<FormulaNode(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) {
    FormulaNode node;
    if (hi - lo == 1) {
      node = FormulaNode::variable("z" + std::to_string(vars[lo]));
    } else {
      const std::size_t k = 2 + rng.below(std::min<std::size_t>(3, hi - lo - 1));
      std::vector<std::size_t> cuts{lo, hi};
      while (cuts.size() < k + 1) {
        const std::size_t c = lo + 1 + rng.below(hi - lo - 1);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
      }
      std::sort(cuts.begin(), cuts.end());
      std::vector<FormulaNode> kids;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) kids.push_back(build(cuts[i], cuts[i + 1]));
      node = FormulaNode::make_gate(rng.coin() ? GateKind::And : GateKind::Or, std::move(kids));
    }
    if (rng.below(4) == 0) node = FormulaNode::negation(std::move(node));
    return node;
  };
  return Formula{build(0, n)};
}

namespace {

FormulaNode scramble_node(const FormulaNode& n, Rng& rng) {
  FormulaNode out;
  switch (n.kind) {
    case FormulaNode::Kind::Var:
    case FormulaNode::Kind::Const:
      out = n;
      break;
    case FormulaNode::Kind::Not:
      out = FormulaNode::negation(scramble_node(n.children[0], rng));
      break;
    case FormulaNode::Kind::Gate: {
      std::vector<FormulaNode> kids;
      for (const auto& c : n.children) kids.push_back(scramble_node(c, rng));
      for (std::size_t i = kids.size(); i > 1; --i) std::swap(kids[i - 1], kids[rng.below(i)]);
      if (kids.size() >= 3 && rng.coin()) {
        // Re-associate two adjacent children into a nested gate of the same kind.
        const std::size_t i = rng.below(kids.size() - 1);
        FormulaNode inner = FormulaNode::make_gate(n.gate, {kids[i], kids[i + 1]});
        kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i), kids.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(i), std::move(inner));
      }
      if (rng.below(3) == 0) {
        // De Morgan: K(a, b) = !dual(K)(!a, !b).
        for (auto& k : kids) k = FormulaNode::negation(std::move(k));
        out = FormulaNode::negation(FormulaNode::make_gate(roembed::dual(n.gate), std::move(kids)));
      } else {
        out = FormulaNode::make_gate(n.gate, std::move(kids));
      }
      break;
    }
  }
  if (rng.below(4) == 0) out = FormulaNode::negation(FormulaNode::negation(std::move(out)));
  return out;
}

}  // namespace

Formula scramble(const Formula& f, Rng& rng) { return Formula{scramble_node(f.root, rng)}; }

std::size_t bareiss_rank(const roembed::BitMatrix& m) {
  using boost::multiprecision::cpp_int;
  std::vector<std::vector<cpp_int>> a(m.rows(), std::vector<cpp_int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m.at(i, j) ? 1 : 0;
  cpp_int prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && a[p][col] == 0) ++p;
    if (p == m.rows()) continue;
    std::swap(a[p], a[row]);
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j) a[i][j] = (a[i][j] * a[row][col] - a[i][col] * a[row][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return row;
}

bool brute_force_holds(const roembed::EmbeddingCertificate& c, const GadgetTree& g) {
  const std::size_t r = c.r;
  const auto image = [&](const roembed::CoordMap& h, const Bits& src) {
    Bits out;
    for (const auto& e : h) out.push_back(e.is_copy ? static_cast<std::uint8_t>(src.at(e.slot - 1) != e.negated) : e.bit);
    return out;
  };
  for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << r); ++xv) {
    for (std::uint64_t yv = 0; yv < (std::uint64_t{1} << r); ++yv) {
      const Bits x = bits_of(xv, r);
      const Bits y = bits_of(yv, r);
      bool want = c.embedded == roembed::Embedded::Disj;
      for (std::size_t i = 0; i < r; ++i) {
        if (c.embedded == roembed::Embedded::Disj)
          want = want && (x[i] || y[i]);
        else
          want = want || (x[i] && y[i]);
      }
      if (naive_tree_eval(g, image(c.h_a, x), image(c.h_b, y)) != want) return false;
    }
  }
  return true;
}

}  // namespace support

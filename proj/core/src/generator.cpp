#include "roembed/generator.hpp"

#include <random>
#include <utility>
#include <vector>

#include "roembed/errors.hpp"

namespace roembed {

namespace {

constexpr std::size_t kMaxConstrainedLeaves = 512;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }
  bool bernoulli(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

// Which subtree sizes and fan-ins are realizable. Without a leaf-parent
// constraint everything with at least one leaf per child is; otherwise leaves
// may only hang under gates of the requested kind.
class Feasibility {
 public:
  Feasibility(std::size_t n, std::size_t max_fanin, std::optional<GateKind> leaf_parent)
      : n_(n), fanin_(std::min(max_fanin, n)), leaf_parent_(leaf_parent) {
    if (!leaf_parent_) return;
    for (int g = 0; g < 2; ++g) {
      fill_[g].assign((fanin_ + 1) * (n_ + 1), 0);
      gate_[g].assign(n_ + 1, 0);
    }
    // Fills of two or more parts only use strictly smaller parts, so they
    // come first; gate_ok(size) needs them, and a one-part fill needs gate_ok.
    for (std::size_t size = 0; size <= n_; ++size) {
      for (std::size_t j = 2; j <= fanin_; ++j) compute_fill(j, size);
      for (int g = 0; g < 2; ++g) {
        const GateKind kind = g == 0 ? GateKind::And : GateKind::Or;
        bool ok = false;
        for (std::size_t k = 2; k <= std::min(fanin_, size) && !ok; ++k) ok = fill_ok(kind, k, size);
        gate_[g][size] = ok;
      }
      for (std::size_t j = 0; j < 2 && j <= fanin_; ++j) compute_fill(j, size);
    }
  }

  void compute_fill(std::size_t j, std::size_t size) {
    for (int g = 0; g < 2; ++g) {
      const GateKind kind = g == 0 ? GateKind::And : GateKind::Or;
      bool ok = j == 0 && size == 0;
      for (std::size_t s = 1; s <= size && j > 0 && !ok; ++s)
        ok = part_ok(kind, s) && fill_ok(kind, j - 1, size - s);
      fill_[g][j * (n_ + 1) + size] = ok;
    }
  }

  bool part_ok(GateKind parent, std::size_t size) const {
    if (size == 1) return !leaf_parent_ || *leaf_parent_ == parent;
    return gate_ok(dual(parent), size);
  }

  bool fill_ok(GateKind parent, std::size_t parts, std::size_t size) const {
    if (!leaf_parent_) return parts <= size && (parts > 0 || size == 0);
    return fill_[idx(parent)][parts * (n_ + 1) + size] != 0;
  }

  bool gate_ok(GateKind kind, std::size_t size) const {
    if (!leaf_parent_) return size >= 2;
    return gate_[idx(kind)][size] != 0;
  }

  std::size_t fanin() const { return fanin_; }

 private:
  static int idx(GateKind k) { return k == GateKind::And ? 0 : 1; }

  std::size_t n_;
  std::size_t fanin_;
  std::optional<GateKind> leaf_parent_;
  std::vector<char> fill_[2];
  std::vector<char> gate_[2];
};

template <class T>
const T& pick(Rng& rng, const std::vector<T>& options) {
  return options[rng.below(options.size())];
}

struct Builder {
  const Feasibility& feas;
  double negation_prob;
  Rng& rng;
  std::size_t next_leaf = 0;
  const std::vector<std::string>& names;

  FormulaNode leaf() {
    FormulaNode v = FormulaNode::variable(names[next_leaf++]);
    return rng.bernoulli(negation_prob) ? FormulaNode::negation(std::move(v)) : v;
  }

  FormulaNode gate(GateKind kind, std::size_t size) {
    std::vector<std::size_t> fanins;
    for (std::size_t k = 2; k <= std::min(feas.fanin(), size); ++k)
      if (feas.fill_ok(kind, k, size)) fanins.push_back(k);
    std::size_t parts = pick(rng, fanins);
    std::size_t rest = size;
    std::vector<FormulaNode> children;
    while (parts > 0) {
      std::vector<std::size_t> sizes;
      for (std::size_t s = 1; s <= rest; ++s)
        if (feas.part_ok(kind, s) && feas.fill_ok(kind, parts - 1, rest - s)) sizes.push_back(s);
      const std::size_t s = pick(rng, sizes);
      children.push_back(s == 1 ? leaf() : gate(dual(kind), s));
      rest -= s;
      --parts;
    }
    return FormulaNode::make_gate(kind, std::move(children));
  }
};

}  // namespace

CanonicalTree generate_tree(const GenSpec& spec) {
  const std::size_t n = spec.n_leaves;
  if (n == 0) throw PreconditionFailed("n_leaves must be at least 1");
  if (spec.max_fanin < 2) throw PreconditionFailed("max_fanin must be at least 2");
  if (!(spec.negation_prob >= 0.0 && spec.negation_prob <= 1.0))
    throw PreconditionFailed("negation_prob must lie in [0, 1]");
  if (spec.leaf_parent && n == 1) throw PreconditionFailed("a single leaf has no parent gate");
  if (spec.leaf_parent && n > kMaxConstrainedLeaves)
    throw PreconditionFailed("leaf-parent constraint supports at most " + std::to_string(kMaxConstrainedLeaves) +
                             " leaves");

  Rng rng(spec.seed);
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "z" + std::to_string(i + 1);
  for (std::size_t i = n; i > 1; --i) std::swap(names[i - 1], names[rng.below(i)]);

  const Feasibility feas(n, spec.max_fanin, spec.leaf_parent);
  Builder b{feas, spec.negation_prob, rng, 0, names};
  if (n == 1) return canonicalize(Formula{b.leaf()});

  std::vector<GateKind> roots;
  for (GateKind k : {GateKind::And, GateKind::Or}) {
    const bool wanted = spec.root == RootChoice::Random || (spec.root == RootChoice::And) == (k == GateKind::And);
    if (wanted && feas.gate_ok(k, n)) roots.push_back(k);
  }
  if (roots.empty()) throw PreconditionFailed("no tree satisfies the requested shape");
  const GateKind root = pick(rng, roots);
  return canonicalize(Formula{b.gate(root, n)});
}

std::string generate_formula(const GenSpec& spec) { return to_text(generate_tree(spec)); }

}  // namespace roembed

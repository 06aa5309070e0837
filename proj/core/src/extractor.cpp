#include "roembed/extractor.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "roembed/errors.hpp"

namespace roembed {

std::string_view to_string(LevelSide side) noexcept { return side == LevelSide::Odd ? "odd" : "even"; }

SCount s_count(const GadgetTree& g) {
  SCount out;
  out.claim1_ok = true;
  for (const auto& n : g.nodes()) {
    if (n.is_leaf) continue;
    std::size_t leaves = 0;
    bool alice = false;
    bool bob = false;
    for (auto c : n.children) {
      const auto& child = g.node(c);
      if (!child.is_leaf) continue;
      ++leaves;
      (child.side == Side::Alice ? alice : bob) = true;
    }
    if (leaves == n.children.size()) ++out.s;
    if (leaves > 0 && !(n.children.size() == 2 && leaves == 2 && alice && bob)) out.claim1_ok = false;
  }
  return out;
}

namespace {

LeafRef ref_of(const GadgetTree::Node& n) { return LeafRef{n.side, std::size_t{n.coord} + 1}; }

std::uint32_t find_leaf(const GadgetTree& g, LeafRef leaf) {
  const std::string name = std::string(leaf.side == Side::Alice ? "x" : "y") + std::to_string(leaf.coord);
  if (leaf.coord == 0 || leaf.coord > g.t()) throw MissingVariable(name);
  return leaf.side == Side::Alice ? g.alice_leaf(leaf.coord - 1) : g.bob_leaf(leaf.coord - 1);
}

// A leaf is either pinned to an input value or carries source bit `slot`.
struct Binding {
  std::uint32_t leaf = 0;
  bool copy = false;
  bool value = false;
  std::uint32_t slot = 0;
};

struct Witness {
  std::size_t m = 0;
  std::vector<Binding> bindings;
};

// Per-node DP record, indexed by embedded type (0 = DISJ, 1 = NDISJ).
//
// best[e] realizes E_m on slots 1..m. with[e][side], when present, realizes
// E_m combined with a fresh literal of `side` on slot m+1: DISJ_m & a or
// NDISJ_m | a. Two such witnesses with opposite sides, joined by the dual
// gate, give E_{m+1}: (P | a) & (P | b) = P | (a & b).
struct Summary {
  Witness best[2];
  std::optional<Witness> with[2][2];
};

int side_index(Side s) { return s == Side::Alice ? 0 : 1; }

// The gate under which instances of `type` add up.
GateKind summing_gate(int type) { return type == 0 ? GateKind::And : GateKind::Or; }

void force_into(const GadgetTree& g, std::uint32_t subtree, bool value, std::vector<Binding>& out) {
  const std::uint32_t end = subtree + g.node(subtree).subtree_size;
  for (std::uint32_t i = subtree; i < end; ++i) {
    const auto& n = g.node(i);
    if (n.is_leaf) out.push_back(Binding{i, false, value != n.negated, 0});
  }
}

// Frees `leaf` as source bit `slot` and neutralizes every sibling on its path
// up to (and including the children of) `top`.
void expose_into(const GadgetTree& g, std::uint32_t top, std::uint32_t leaf, std::uint32_t slot,
                 std::vector<Binding>& out) {
  out.push_back(Binding{leaf, true, false, slot});
  std::uint32_t u = leaf;
  while (u != top) {
    const std::uint32_t p = g.node(u).parent;
    const auto& parent = g.node(p);
    for (auto c : parent.children)
      if (c != u) force_into(g, c, neutral(parent.gate), out);
    u = p;
  }
}

void append_shifted(const Witness& w, std::size_t offset, std::vector<Binding>& out) {
  for (Binding b : w.bindings) {
    if (b.copy) b.slot += static_cast<std::uint32_t>(offset);
    out.push_back(b);
  }
}

// Copies a with-literal witness of size w.m, cut down to size m: source bits
// m+1..w.m are pinned to the value that makes their term vanish (1 for DISJ,
// 0 for NDISJ) and the literal moves to slot m+1.
void append_trimmed(const GadgetTree& g, const Witness& w, std::size_t m, int type, std::vector<Binding>& out) {
  const bool source = type == 0;
  for (Binding b : w.bindings) {
    if (b.copy && b.slot == w.m + 1) {
      b.slot = static_cast<std::uint32_t>(m + 1);
    } else if (b.copy && b.slot > m) {
      b = Binding{b.leaf, false, source != g.node(b.leaf).negated, 0};
    }
    out.push_back(b);
  }
}

Summary summarize_leaf(std::uint32_t v, const GadgetTree::Node& n) {
  Summary out;
  for (int type = 0; type < 2; ++type)
    out.with[type][side_index(n.side)] = Witness{0, {Binding{v, true, false, 1}}};
  return out;
}

Summary summarize_gate(const GadgetTree& g, std::uint32_t v, const std::vector<Summary>& sums) {
  const auto& node = g.node(v);
  const auto& kids = node.children;
  const bool keep = neutral(node.gate);
  const int additive = node.gate == summing_gate(0) ? 0 : 1;
  const int single = 1 - additive;

  // Everything except child `skip` forced to the neutral value.
  const auto force_others = [&](std::size_t a, std::size_t b, std::vector<Binding>& out) {
    for (std::size_t k = 0; k < kids.size(); ++k)
      if (k != a && k != b) force_into(g, kids[k], keep, out);
  };

  Summary out;

  // Additive type: children's instances side by side on disjoint slots.
  Witness& sum = out.best[additive];
  for (auto c : kids) sum.m += sums[c].best[additive].m;
  if (sum.m > 0) {
    std::size_t offset = 0;
    for (auto c : kids) {
      const Witness& w = sums[c].best[additive];
      if (w.m > 0) {
        append_shifted(w, offset, sum.bindings);
        offset += w.m;
      } else {
        force_into(g, c, keep, sum.bindings);
      }
    }
  }

  // Additive type plus a literal: one child supplies the literal (possibly on
  // top of its own instance), the rest contribute their instances.
  for (int side = 0; side < 2; ++side) {
    std::size_t chosen = kids.size();
    std::size_t best_m = 0;
    for (std::size_t d = 0; d < kids.size(); ++d) {
      const auto& w = sums[kids[d]].with[additive][side];
      if (!w) continue;
      const std::size_t m = sum.m - sums[kids[d]].best[additive].m + w->m;
      if (chosen == kids.size() || m > best_m) {
        chosen = d;
        best_m = m;
      }
    }
    if (chosen == kids.size()) continue;
    Witness w{best_m, {}};
    std::size_t offset = 0;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (k == chosen) continue;
      const Witness& part = sums[kids[k]].best[additive];
      if (part.m > 0) {
        append_shifted(part, offset, w.bindings);
        offset += part.m;
      } else {
        force_into(g, kids[k], keep, w.bindings);
      }
    }
    // The chosen child's instance follows the others; its literal lands on
    // slot best_m + 1 because it sits right after that instance.
    append_shifted(*sums[kids[chosen]].with[additive][side], offset, w.bindings);
    out.with[additive][side] = std::move(w);
  }

  // Single type: the best child alone, with its siblings neutralized.
  Witness& one = out.best[single];
  std::size_t chosen = kids.size();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (sums[kids[i]].best[single].m > one.m) {
      one.m = sums[kids[i]].best[single].m;
      chosen = i;
    }
  }
  // Or two children carrying the same instance plus an Alice and a Bob
  // literal; the plain cross pair is the case m = 0.
  std::size_t pair_a = kids.size();
  std::size_t pair_b = kids.size();
  std::size_t pair_m = 0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    const auto& wa = sums[kids[i]].with[single][0];
    if (!wa) continue;
    for (std::size_t j = 0; j < kids.size(); ++j) {
      const auto& wb = sums[kids[j]].with[single][1];
      if (j == i || !wb) continue;
      const std::size_t m = std::min(wa->m, wb->m) + 1;
      if (m > one.m && m > pair_m) {
        pair_a = i;
        pair_b = j;
        pair_m = m;
      }
    }
  }
  if (pair_a < kids.size()) {
    one.m = pair_m;
    append_trimmed(g, *sums[kids[pair_a]].with[single][0], pair_m - 1, single, one.bindings);
    append_trimmed(g, *sums[kids[pair_b]].with[single][1], pair_m - 1, single, one.bindings);
    force_others(pair_a, pair_b, one.bindings);
  } else if (chosen < kids.size()) {
    append_shifted(sums[kids[chosen]].best[single], 0, one.bindings);
    force_others(chosen, chosen, one.bindings);
  }

  // Single type plus a literal passes through from one child.
  for (int side = 0; side < 2; ++side) {
    std::size_t pick = kids.size();
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto& w = sums[kids[i]].with[single][side];
      if (w && (pick == kids.size() || w->m > sums[kids[pick]].with[single][side]->m)) pick = i;
    }
    if (pick == kids.size()) continue;
    Witness w = *sums[kids[pick]].with[single][side];
    force_others(pick, pick, w.bindings);
    out.with[single][side] = std::move(w);
  }
  return out;
}

EmbeddingCertificate to_certificate(const GadgetTree& g, Embedded embedded, const Witness& w) {
  EmbeddingCertificate c;
  c.embedded = embedded;
  c.r = w.m;
  c.h_a.assign(g.t(), CoordEntry::fixed(false));
  c.h_b.assign(g.t(), CoordEntry::fixed(false));
  std::vector<bool> seen(g.size(), false);
  for (const Binding& b : w.bindings) {
    const auto& n = g.node(b.leaf);
    seen[b.leaf] = true;
    CoordMap& map = n.side == Side::Alice ? c.h_a : c.h_b;
    map[n.coord] = b.copy ? CoordEntry::copy(b.slot, n.negated) : CoordEntry::fixed(b.value);
  }
  for (std::uint32_t i = 0; i < g.size(); ++i)
    if (g.node(i).is_leaf && !seen[i])
      throw VerificationFailed("internal error: witness leaves a gadget leaf unbound", "", "");
  c.target_formula = target_descriptor(g);
  c.gadget = g.gadget();
  return c;
}

void check_certificate(const EmbeddingCertificate& c, const GadgetTree& g, const ExtractOptions& options) {
  const VerifyOutcome outcome = verify_embedding(c, g, options.verify_limit, options.structural_verify);
  if (!outcome.verified()) {
    const auto& ce = *outcome.counterexample;
    throw VerificationFailed("extracted " + std::string(to_string(c.embedded)) + "_" + std::to_string(c.r) +
                                 " certificate fails at x=" + to_string(ce.x) + ", y=" + to_string(ce.y),
                             to_string(ce.x), to_string(ce.y));
  }
}

PartialInput to_partial(const GadgetTree& g, const std::vector<Binding>& bindings) {
  PartialInput out;
  for (const Binding& b : bindings)
    if (!b.copy) out[ref_of(g.node(b.leaf))] = b.value;
  return out;
}

std::size_t isqrt(std::size_t v) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace

PartialInput force_const(const GadgetTree& g, std::uint32_t subtree, bool value) {
  if (subtree >= g.size()) throw PreconditionFailed("subtree index out of range");
  std::vector<Binding> bindings;
  force_into(g, subtree, value, bindings);
  return to_partial(g, bindings);
}

PartialInput expose_leaf(const GadgetTree& g, LeafRef leaf) {
  std::vector<Binding> bindings;
  expose_into(g, 0, find_leaf(g, leaf), 1, bindings);
  return to_partial(g, bindings);
}

ExtractionResult extract(const GadgetTree& g, const ExtractOptions& options) {
  std::vector<Summary> sums(g.size());
  for (std::uint32_t i = static_cast<std::uint32_t>(g.size()); i-- > 0;) {
    const auto& n = g.node(i);
    if (n.is_leaf) {
      sums[i] = summarize_leaf(i, n);
      continue;
    }
    sums[i] = summarize_gate(g, i, sums);
    // Children are no longer needed once summarized.
    for (auto c : n.children) sums[c] = Summary{};
  }

  ExtractionResult out;
  const SCount sc = s_count(g);
  out.s = sc.s;
  out.claim1_ok = sc.claim1_ok;
  out.claim1_applicable = sc.claim1_ok && g.n_leaves() > 2;
  out.m0 = sums[0].best[0].m;
  out.m1 = sums[0].best[1].m;
  if (out.m0 > 0) {
    out.cert0 = to_certificate(g, Embedded::Disj, sums[0].best[0]);
    check_certificate(*out.cert0, g, options);
  }
  if (out.m1 > 0) {
    out.cert1 = to_certificate(g, Embedded::Ndisj, sums[0].best[1]);
    check_certificate(*out.cert1, g, options);
  }
  out.guarantee_met = out.m0 * out.m1 >= out.s;
  return out;
}

LemmaReport lemma_pipeline(const CanonicalTree& t, const ExtractOptions& options) {
  if (t.root().is_leaf()) throw PreconditionFailed("the lemma pipeline needs at least one gate");
  const auto parent = uniform_leaf_parent(t);
  if (!parent)
    throw PreconditionFailed("leaves have both AND and OR parents; use the theorem pipeline");
  LemmaReport report;
  report.gadget = *parent == GateKind::And ? Gadget::Or : Gadget::And;
  report.n = t.n_leaves();
  report.result = extract(gadget_expand(t, report.gadget), options);
  report.bound_asserted = report.result.claim1_applicable;
  report.bound_met = report.result.m0 * report.result.m1 >= report.n;
  return report;
}

std::string TheoremReport::bound_r() const { return "Omega(" + std::to_string(best()) + ")"; }
std::string TheoremReport::bound_q() const { return "Omega(sqrt " + std::to_string(best()) + ")"; }

TheoremReport theorem_pipeline(const CanonicalTree& t, const ExtractOptions& options) {
  TheoremReport report;
  report.n = t.n_leaves();
  report.bound_target = isqrt((report.n + 1) / 2);

  const LeafLevels levels = leaf_levels(t);
  report.side = levels.odd.size() >= levels.even.size() ? LevelSide::Odd : LevelSide::Even;
  const std::size_t kept_parity = report.side == LevelSide::Odd ? 1 : 0;

  if (t.root().is_leaf()) {
    // A lone gadget node: DISJ_1 under f(x|y).
    report.gadget = Gadget::Or;
    report.n_kept = 1;
    report.restricted_formula = to_text(t);
    report.result = extract(gadget_expand(t, report.gadget), options);
    report.bound_asserted = true;
    report.bound_met = report.best() >= report.bound_target;
    return report;
  }

  // Every maximal subtree without a kept leaf is pinned to the neutral
  // element of its parent gate, so no kept leaf is lost.
  std::optional<GateKind> kept_parent;
  std::function<bool(const CanonicalNode&, std::size_t)> has_kept = [&](const CanonicalNode& n, std::size_t level) {
    if (n.is_leaf()) return level % 2 == kept_parity;
    bool any = false;
    for (const auto& c : n.children) any = has_kept(c, level + 1) || any;
    return any;
  };
  std::function<void(const CanonicalNode&, bool)> pin = [&](const CanonicalNode& n, bool value) {
    if (n.is_leaf()) {
      report.restriction[n.var] = value != n.negated;
      return;
    }
    for (const auto& c : n.children) pin(c, value);
  };
  std::function<void(const CanonicalNode&, std::size_t)> walk = [&](const CanonicalNode& n, std::size_t level) {
    for (const auto& c : n.children) {
      if (!has_kept(c, level + 1)) {
        pin(c, neutral(n.gate));
      } else if (c.is_leaf()) {
        kept_parent = n.gate;
      } else {
        walk(c, level + 1);
      }
    }
  };
  walk(t.root(), 0);

  const Restricted restricted = restrict(t, report.restriction);
  if (const bool* b = std::get_if<bool>(&restricted)) throw DegenerateConstant(*b);
  const CanonicalTree& kept = std::get<CanonicalTree>(restricted);
  report.n_kept = kept.n_leaves();
  report.restricted_formula = to_text(kept);
  report.gadget = *kept_parent == GateKind::And ? Gadget::Or : Gadget::And;

  if (!kept.root().is_leaf() && uniform_leaf_parent(kept) == kept_parent) {
    const LemmaReport lemma = lemma_pipeline(kept, options);
    report.result = lemma.result;
    report.bound_asserted = lemma.bound_asserted;
  } else {
    report.fallback = true;
    report.result = extract(gadget_expand(kept, report.gadget), options);
  }
  report.bound_met = report.best() >= report.bound_target;
  return report;
}

}  // namespace roembed

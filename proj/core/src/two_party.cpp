#include "roembed/two_party.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>
#include <tuple>

#include "roembed/errors.hpp"

namespace roembed {

Bits bits_from_string(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw MalformedInput("bitstring may only contain 0 and 1");
    out.push_back(c == '1');
  }
  return out;
}

std::string to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out += b ? '1' : '0';
  return out;
}

namespace {

void check_lengths(const Bits& x, const Bits& y) {
  if (x.size() != y.size() || x.empty())
    throw LengthMismatch("inputs must have equal nonzero length (got " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()) + ")");
}

}  // namespace

bool disj(const Bits& x, const Bits& y) {
  check_lengths(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i] && !y[i]) return false;
  return true;
}

bool ndisj(const Bits& x, const Bits& y) {
  check_lengths(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] && y[i]) return true;
  return false;
}

std::string_view to_string(Gadget g) noexcept { return g == Gadget::Or ? "OR" : "AND"; }
std::string_view to_string(Embedded e) noexcept { return e == Embedded::Disj ? "DISJ" : "NDISJ"; }

bool embedded_value(Embedded e, const Bits& x, const Bits& y) {
  return e == Embedded::Disj ? disj(x, y) : ndisj(x, y);
}

// ---------------------------------------------------------------------------
// GadgetTree

GadgetSpec GadgetSpec::alice(std::size_t coord, bool negated) {
  GadgetSpec s;
  s.side = Side::Alice;
  s.coord = coord;
  s.negated = negated;
  return s;
}

GadgetSpec GadgetSpec::bob(std::size_t coord, bool negated) {
  GadgetSpec s;
  s.side = Side::Bob;
  s.coord = coord;
  s.negated = negated;
  return s;
}

GadgetSpec GadgetSpec::make_gate(GateKind kind, std::vector<GadgetSpec> children) {
  GadgetSpec s;
  s.is_leaf = false;
  s.gate = kind;
  s.children = std::move(children);
  return s;
}

namespace {

struct SpecKey {
  std::size_t leaves;
  std::size_t coord;
  int side;
  auto operator<=>(const SpecKey&) const = default;
};

SpecKey key_of(const GadgetSpec& s) {
  if (s.is_leaf) return {1, s.coord, s.side == Side::Alice ? 0 : 1};
  SpecKey k{0, 0, 0};
  bool first = true;
  for (const auto& c : s.children) {
    const SpecKey ck = key_of(c);
    k.leaves += ck.leaves;
    if (first || std::tie(ck.coord, ck.side) < std::tie(k.coord, k.side)) {
      k.coord = ck.coord;
      k.side = ck.side;
      first = false;
    }
  }
  return k;
}

GadgetSpec normalize(const GadgetSpec& s) {
  if (s.is_leaf) return s;
  std::vector<GadgetSpec> kids;
  for (const auto& c : s.children) {
    GadgetSpec nc = normalize(c);
    if (!nc.is_leaf && nc.gate == s.gate) {
      for (auto& g : nc.children) kids.push_back(std::move(g));
    } else {
      kids.push_back(std::move(nc));
    }
  }
  if (kids.size() < 2) throw MalformedInput("gadget tree gate with fewer than two children");
  std::vector<std::pair<SpecKey, GadgetSpec>> keyed;
  keyed.reserve(kids.size());
  for (auto& k : kids) keyed.emplace_back(key_of(k), std::move(k));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  GadgetSpec out = GadgetSpec::make_gate(s.gate, {});
  for (auto& [k, child] : keyed) out.children.push_back(std::move(child));
  return out;
}

}  // namespace

GadgetTree GadgetTree::from_spec(const GadgetSpec& spec) {
  const GadgetSpec norm = normalize(spec);
  if (norm.is_leaf) throw MalformedInput("gadget tree needs at least one gate");

  GadgetTree g;
  std::size_t max_coord = 0;
  auto build = [&](auto&& self, const GadgetSpec& s, std::uint32_t parent) -> std::uint32_t {
    const auto index = static_cast<std::uint32_t>(g.nodes_.size());
    g.nodes_.emplace_back();
    {
      Node& n = g.nodes_.back();
      n.parent = parent;
      n.is_leaf = s.is_leaf;
      n.gate = s.gate;
      if (s.is_leaf) {
        if (s.coord == 0) throw MalformedInput("gadget coordinates are 1-based");
        n.side = s.side;
        n.coord = static_cast<std::uint32_t>(s.coord - 1);
        n.negated = s.negated;
        max_coord = std::max(max_coord, s.coord);
      }
    }
    std::vector<std::uint32_t> kids;
    for (const auto& c : s.children) kids.push_back(self(self, c, index));
    Node& n = g.nodes_[index];
    n.children = std::move(kids);
    n.subtree_size = static_cast<std::uint32_t>(g.nodes_.size() - index);
    return index;
  };
  build(build, norm, 0);

  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  g.t_ = max_coord;
  g.alice_leaf_.assign(g.t_, kUnset);
  g.bob_leaf_.assign(g.t_, kUnset);
  for (std::uint32_t i = 0; i < g.nodes_.size(); ++i) {
    const Node& n = g.nodes_[i];
    if (!n.is_leaf) continue;
    auto& slot = n.side == Side::Alice ? g.alice_leaf_[n.coord] : g.bob_leaf_[n.coord];
    if (slot != kUnset)
      throw MalformedInput("coordinate " + std::to_string(n.coord + 1) + " has two " +
                           (n.side == Side::Alice ? "Alice" : "Bob") + " leaves");
    slot = i;
  }
  for (std::size_t c = 0; c < g.t_; ++c) {
    if (g.alice_leaf_[c] == kUnset || g.bob_leaf_[c] == kUnset)
      throw MalformedInput("coordinate " + std::to_string(c + 1) +
                           " needs exactly one Alice and one Bob leaf");
  }
  return g;
}

std::string GadgetTree::to_text() const {
  auto write = [&](auto&& self, std::uint32_t i, std::string& out) -> void {
    const Node& n = nodes_[i];
    if (n.is_leaf) {
      if (n.negated) out += '!';
      out += n.side == Side::Alice ? 'x' : 'y';
      out += std::to_string(n.coord + 1);
      return;
    }
    const char* sep = n.gate == GateKind::And ? " & " : " | ";
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      if (k) out += sep;
      const bool wrap = !nodes_[n.children[k]].is_leaf;
      if (wrap) out += '(';
      self(self, n.children[k], out);
      if (wrap) out += ')';
    }
  };
  std::string out;
  write(write, 0, out);
  return out;
}

GadgetTree gadget_expand(const CanonicalTree& t, Gadget gadget) {
  const GateKind op = gate_of(gadget);
  auto expand = [&](auto&& self, const CanonicalNode& n) -> GadgetSpec {
    if (n.is_leaf()) {
      const std::size_t c = t.coordinate_of(n.var);
      // !(x op y) == !x dual(op) !y
      const GateKind kind = n.negated ? dual(op) : op;
      return GadgetSpec::make_gate(kind, {GadgetSpec::alice(c, n.negated), GadgetSpec::bob(c, n.negated)});
    }
    std::vector<GadgetSpec> kids;
    kids.reserve(n.children.size());
    for (const auto& c : n.children) kids.push_back(self(self, c));
    return GadgetSpec::make_gate(n.gate, std::move(kids));
  };
  GadgetTree g = GadgetTree::from_spec(expand(expand, t.root()));
  g.target_formula_ = to_text(t);
  g.gadget_ = gadget;
  return g;
}

bool eval_gadget(const GadgetTree& g, const Bits& x, const Bits& y) {
  if (x.size() != g.t() || y.size() != g.t())
    throw LengthMismatch("gadget tree has " + std::to_string(g.t()) + " coordinates");
  std::vector<std::uint8_t> value(g.size());
  for (std::size_t i = g.size(); i-- > 0;) {
    const auto& n = g.node(i);
    if (n.is_leaf) {
      const std::uint8_t input = n.side == Side::Alice ? x[n.coord] : y[n.coord];
      value[i] = (input != 0) != n.negated;
      continue;
    }
    bool v = n.gate == GateKind::And;
    for (auto c : n.children) v = n.gate == GateKind::And ? (v && value[c]) : (v || value[c]);
    value[i] = v;
  }
  return value[0] != 0;
}

// ---------------------------------------------------------------------------
// Batched evaluation: one Alice input against a block of Bob inputs.

namespace {

using Words = std::vector<std::uint64_t>;

Words source_pattern(std::size_t bit_from_msb, std::size_t width, std::size_t count) {
  Words w((count + 63) / 64, 0);
  const std::size_t shift = width - 1 - bit_from_msb;
  for (std::size_t v = 0; v < count; ++v)
    if ((v >> shift) & 1U) w[v / 64] |= std::uint64_t{1} << (v % 64);
  return w;
}

class BatchEvaluator {
 public:
  BatchEvaluator(const GadgetTree& g, std::size_t words) : g_(g), words_(words), buf_(g.size() * words) {}

  // alice[c] is x'_c; bob[c] holds y'_c across the batch.
  const std::uint64_t* run(const std::vector<std::uint8_t>& alice, const std::vector<Words>& bob) {
    for (std::size_t i = g_.size(); i-- > 0;) {
      const auto& n = g_.node(i);
      std::uint64_t* out = &buf_[i * words_];
      if (n.is_leaf) {
        const std::uint64_t flip = n.negated ? ~std::uint64_t{0} : 0;
        if (n.side == Side::Alice) {
          const std::uint64_t v = alice[n.coord] ? ~std::uint64_t{0} : 0;
          std::fill(out, out + words_, v ^ flip);
        } else {
          const Words& src = bob[n.coord];
          for (std::size_t w = 0; w < words_; ++w) out[w] = src[w] ^ flip;
        }
        continue;
      }
      const std::uint64_t* first = &buf_[n.children.front() * words_];
      std::copy(first, first + words_, out);
      for (std::size_t k = 1; k < n.children.size(); ++k) {
        const std::uint64_t* c = &buf_[n.children[k] * words_];
        if (n.gate == GateKind::And) {
          for (std::size_t w = 0; w < words_; ++w) out[w] &= c[w];
        } else {
          for (std::size_t w = 0; w < words_; ++w) out[w] |= c[w];
        }
      }
    }
    return &buf_[0];
  }

 private:
  const GadgetTree& g_;
  std::size_t words_;
  Words buf_;
};

}  // namespace

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(rows * stride_, 0) {}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (c % 64);
  if (v) {
    words_[r * stride_ + c / 64] |= mask;
  } else {
    words_[r * stride_ + c / 64] &= ~mask;
  }
}

BitMatrix truth_table(const GadgetTree& g, std::size_t limit) {
  const std::size_t t = g.t();
  if (t > limit || t > 20)
    throw SizeLimitExceeded("truth table needs t <= " + std::to_string(limit) + " (t = " + std::to_string(t) + ")");
  const std::size_t n = std::size_t{1} << t;
  const std::size_t words = (n + 63) / 64;
  std::vector<Words> bob(t);
  for (std::size_t c = 0; c < t; ++c) bob[c] = source_pattern(c, t, n);
  BatchEvaluator eval(g, words);
  BitMatrix m(n, n);
  std::vector<std::uint8_t> alice(t);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t c = 0; c < t; ++c) alice[c] = (x >> (t - 1 - c)) & 1U;
    const std::uint64_t* row = eval.run(alice, bob);
    for (std::size_t y = 0; y < n; ++y) m.set(x, y, (row[y / 64] >> (y % 64)) & 1U);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Certificates

std::strong_ordering CoordEntry::operator<=>(const CoordEntry& other) const {
  auto key = [](const CoordEntry& e) {
    return e.is_copy ? std::tuple<int, std::uint32_t, int>{1, e.slot, e.negated}
                     : std::tuple<int, std::uint32_t, int>{0, e.bit, 0};
  };
  return key(*this) <=> key(other);
}

namespace {

void check_entries(const CoordMap& map, std::size_t r, const char* name) {
  for (std::size_t j = 0; j < map.size(); ++j) {
    const CoordEntry& e = map[j];
    if (e.is_copy && (e.slot == 0 || e.slot > r))
      throw MalformedCertificate(std::string(name) + "[" + std::to_string(j + 1) + "] copies slot " +
                                 std::to_string(e.slot) + ", outside 1.." + std::to_string(r));
  }
}

Bits apply_map(const CoordMap& map, const Bits& src) {
  Bits out(map.size());
  for (std::size_t j = 0; j < map.size(); ++j) {
    const CoordEntry& e = map[j];
    out[j] = e.is_copy ? ((src[e.slot - 1] != 0) != e.negated) : e.bit;
  }
  return out;
}

}  // namespace

std::string target_descriptor(const GadgetTree& g);

namespace {

void check_fits(const EmbeddingCertificate& c, const GadgetTree& g) {
  if (c.r == 0) throw MalformedCertificate("certificate size r must be at least 1");
  if (c.h_a.size() != g.t() || c.h_b.size() != g.t())
    throw MalformedCertificate("certificate maps have " + std::to_string(c.h_a.size()) + "/" +
                               std::to_string(c.h_b.size()) + " entries; the target has " +
                               std::to_string(g.t()) + " coordinates");
  check_entries(c.h_a, c.r, "h_a");
  check_entries(c.h_b, c.r, "h_b");
  if (c.target_formula != target_descriptor(g) || c.gadget != g.gadget())
    throw MalformedCertificate("certificate target '" + c.target_formula +
                               "' does not match the gadget tree '" + target_descriptor(g) + "'");
}

Bits bits_of(std::size_t value, std::size_t width) {
  Bits out(width);
  for (std::size_t i = 0; i < width; ++i) out[i] = (value >> (width - 1 - i)) & 1U;
  return out;
}

VerifyOutcome verify_exhaustive(const EmbeddingCertificate& c, const GadgetTree& g) {
  const std::size_t r = c.r;
  const std::size_t n = std::size_t{1} << r;
  const std::size_t words = (n + 63) / 64;
  const std::uint64_t tail = (n % 64) ? ((std::uint64_t{1} << (n % 64)) - 1) : ~std::uint64_t{0};

  std::vector<Words> source(r);
  for (std::size_t s = 0; s < r; ++s) source[s] = source_pattern(s, r, n);

  // Bob's side does not depend on x: precompute y' per target coordinate.
  std::vector<Words> bob(g.t());
  for (std::size_t j = 0; j < g.t(); ++j) {
    const CoordEntry& e = c.h_b[j];
    if (e.is_copy) {
      bob[j] = source[e.slot - 1];
      if (e.negated)
        for (auto& w : bob[j]) w = ~w;
    } else {
      bob[j].assign(words, e.bit ? ~std::uint64_t{0} : 0);
    }
  }

  BatchEvaluator eval(g, words);
  std::vector<std::uint8_t> alice(g.t());
  Words expected(words);
  for (std::size_t x = 0; x < n; ++x) {
    const Bits xb = bits_of(x, r);
    for (std::size_t j = 0; j < g.t(); ++j) {
      const CoordEntry& e = c.h_a[j];
      alice[j] = e.is_copy ? ((xb[e.slot - 1] != 0) != e.negated) : e.bit;
    }
    if (c.embedded == Embedded::Disj) {
      std::fill(expected.begin(), expected.end(), ~std::uint64_t{0});
      for (std::size_t s = 0; s < r; ++s)
        if (!xb[s])
          for (std::size_t w = 0; w < words; ++w) expected[w] &= source[s][w];
    } else {
      std::fill(expected.begin(), expected.end(), 0);
      for (std::size_t s = 0; s < r; ++s)
        if (xb[s])
          for (std::size_t w = 0; w < words; ++w) expected[w] |= source[s][w];
    }
    const std::uint64_t* got = eval.run(alice, bob);
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t diff = got[w] ^ expected[w];
      if (w + 1 == words) diff &= tail;
      if (diff) {
        const std::size_t y = w * 64 + static_cast<std::size_t>(std::countr_zero(diff));
        return VerifyOutcome{Counterexample{xb, bits_of(y, r)}};
      }
    }
  }
  return VerifyOutcome{};
}

bool read_once_certificate(const EmbeddingCertificate& c) {
  for (const CoordMap* map : {&c.h_a, &c.h_b}) {
    std::vector<int> uses(c.r + 1, 0);
    for (const auto& e : *map)
      if (e.is_copy && ++uses[e.slot] > 1) return false;
  }
  return true;
}

// g(h_a(a), h_b(b)) as a formula over a1..ar, b1..br.
FormulaNode composed_formula(const EmbeddingCertificate& c, const GadgetTree& g, std::uint32_t i) {
  const auto& n = g.node(i);
  if (n.is_leaf) {
    const CoordEntry& e = (n.side == Side::Alice ? c.h_a : c.h_b)[n.coord];
    if (!e.is_copy) return FormulaNode::constant(e.bit != n.negated);
    FormulaNode v = FormulaNode::variable((n.side == Side::Alice ? "a" : "b") + std::to_string(e.slot));
    return (e.negated != n.negated) ? FormulaNode::negation(std::move(v)) : v;
  }
  std::vector<FormulaNode> kids;
  for (auto k : n.children) kids.push_back(composed_formula(c, g, k));
  return FormulaNode::make_gate(n.gate, std::move(kids));
}

Formula embedded_formula(Embedded e, std::size_t r) {
  const GateKind outer = e == Embedded::Disj ? GateKind::And : GateKind::Or;
  std::vector<FormulaNode> terms;
  for (std::size_t s = 1; s <= r; ++s) {
    terms.push_back(FormulaNode::make_gate(
        dual(outer), {FormulaNode::variable("a" + std::to_string(s)), FormulaNode::variable("b" + std::to_string(s))}));
  }
  if (terms.size() == 1) return Formula{std::move(terms.front())};
  return Formula{FormulaNode::make_gate(outer, std::move(terms))};
}

bool structurally_equivalent(const EmbeddingCertificate& c, const GadgetTree& g) {
  const CanonicalTree want = canonicalize(embedded_formula(c.embedded, c.r));
  try {
    return canonicalize(Formula{composed_formula(c, g, 0)}) == want;
  } catch (const DegenerateConstant&) {
    return false;
  }
}

}  // namespace

std::pair<Bits, Bits> apply_embedding(const EmbeddingCertificate& c, const Bits& x, const Bits& y) {
  if (x.size() != c.r || y.size() != c.r)
    throw LengthMismatch("certificate expects inputs of length " + std::to_string(c.r));
  check_entries(c.h_a, c.r, "h_a");
  check_entries(c.h_b, c.r, "h_b");
  return {apply_map(c.h_a, x), apply_map(c.h_b, y)};
}

std::size_t default_verify_limit() {
  if (const char* env = std::getenv("RO_EMBED_VERIFY_LIMIT")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 30) return static_cast<std::size_t>(v);
  }
  return 12;
}

std::string target_descriptor(const GadgetTree& g) {
  return g.target_formula().empty() ? g.to_text() : g.target_formula();
}

VerifyOutcome verify_embedding(const EmbeddingCertificate& c, const GadgetTree& g, std::size_t limit,
                               bool structural) {
  check_fits(c, g);
  if (c.r <= limit) return verify_exhaustive(c, g);
  if (!structural || !read_once_certificate(c))
    throw SizeLimitExceeded("r = " + std::to_string(c.r) + " exceeds the exhaustive verification limit " +
                            std::to_string(limit));
  if (structurally_equivalent(c, g)) return VerifyOutcome{};
  throw VerificationFailed("certificate is not an embedding (canonical forms differ); locating the smallest "
                           "counterexample at r = " + std::to_string(c.r) + " exceeds the verification limit " +
                               std::to_string(limit),
                           "", "");
}

}  // namespace roembed

#include "roembed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "roembed/errors.hpp"

namespace roembed {

// ---------------------------------------------------------------------------
// Truth-table equivalence

namespace {

// Formula compiled against a fixed variable order; evaluates on a bitmask.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const std::vector<std::string>& order) {
    std::map<std::string, std::size_t, VarLess> index;
    for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = i;
    compile(f.root, index);
  }

  bool operator()(std::uint64_t mask) const { return eval(0, mask); }

 private:
  struct Op {
    FormulaNode::Kind kind;
    GateKind gate;
    bool value;
    std::size_t var;
    std::vector<std::size_t> children;
  };

  std::size_t compile(const FormulaNode& n, const std::map<std::string, std::size_t, VarLess>& index) {
    const std::size_t id = ops_.size();
    ops_.push_back(Op{n.kind, n.gate, n.value, 0, {}});
    if (n.kind == FormulaNode::Kind::Var) ops_[id].var = index.at(n.var);
    std::vector<std::size_t> kids;
    for (const auto& c : n.children) kids.push_back(compile(c, index));
    ops_[id].children = std::move(kids);
    return id;
  }

  bool eval(std::size_t id, std::uint64_t mask) const {
    const Op& op = ops_[id];
    switch (op.kind) {
      case FormulaNode::Kind::Var: return (mask >> op.var) & 1U;
      case FormulaNode::Kind::Const: return op.value;
      case FormulaNode::Kind::Not: return !eval(op.children.front(), mask);
      case FormulaNode::Kind::Gate:
        for (auto c : op.children) {
          const bool v = eval(c, mask);
          if (op.gate == GateKind::And && !v) return false;
          if (op.gate == GateKind::Or && v) return true;
        }
        return op.gate == GateKind::And;
    }
    return false;
  }

  std::vector<Op> ops_;
};

}  // namespace

EquivResult equiv_check(const Formula& a, const Formula& b, std::size_t limit) {
  std::vector<std::string> vars = variables(a);
  for (auto& v : variables(b)) vars.push_back(v);
  std::sort(vars.begin(), vars.end(), VarLess{});
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > limit || vars.size() > 62)
    throw SizeLimitExceeded("equivalence check over " + std::to_string(vars.size()) + " variables exceeds limit " +
                            std::to_string(limit));
  const CompiledFormula fa(a, vars);
  const CompiledFormula fb(b, vars);
  const std::uint64_t total = std::uint64_t{1} << vars.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (fa(mask) == fb(mask)) continue;
    VarAssignment ce;
    for (std::size_t i = 0; i < vars.size(); ++i) ce[vars[i]] = (mask >> i) & 1U;
    return EquivResult{false, std::move(ce)};
  }
  return EquivResult{};
}

EquivResult equiv_check(const CanonicalTree& a, const CanonicalTree& b, std::size_t limit) {
  return equiv_check(to_formula(a), to_formula(b), limit);
}

// ---------------------------------------------------------------------------
// Projection-certificate search

namespace {

CoordEntry option_entry(std::size_t option) {
  if (option < 2) return CoordEntry::fixed(option == 1);
  const std::size_t k = option - 2;
  return CoordEntry::copy(static_cast<std::uint32_t>(k / 2 + 1), k % 2 == 1);
}

struct Candidate {
  CoordMap map;
  std::vector<std::uint32_t> image;  // target index for each source value
};

// Every map {0,1}^r -> {0,1}^t built from projections that reads all r bits,
// in lexicographic order. With `canonical`, slots must first appear in
// increasing order.
std::vector<Candidate> enumerate_maps(std::size_t t, std::size_t r, bool canonical) {
  const std::size_t base = 2 + 2 * r;
  std::vector<std::size_t> digits(t, 0);
  std::vector<Candidate> out;
  const std::size_t n_src = std::size_t{1} << r;
  while (true) {
    CoordMap map(t);
    std::vector<bool> used(r + 1, false);
    std::uint32_t next_new = 1;
    bool ok = true;
    for (std::size_t j = 0; j < t && ok; ++j) {
      map[j] = option_entry(digits[j]);
      if (!map[j].is_copy) continue;
      const std::uint32_t s = map[j].slot;
      if (!used[s]) {
        if (canonical && s != next_new) ok = false;
        used[s] = true;
        ++next_new;
      }
    }
    if (ok && next_new == r + 1) {
      Candidate c{std::move(map), std::vector<std::uint32_t>(n_src)};
      for (std::size_t v = 0; v < n_src; ++v) {
        std::uint32_t idx = 0;
        for (std::size_t j = 0; j < t; ++j) {
          const CoordEntry& e = c.map[j];
          const bool bit = e.is_copy ? (((v >> (r - e.slot)) & 1U) != 0) != e.negated : e.bit;
          idx = (idx << 1) | (bit ? 1U : 0U);
        }
        c.image[v] = idx;
      }
      out.push_back(std::move(c));
    }
    std::size_t pos = t;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < base) break;
      digits[pos] = 0;
      if (pos == 0) return out;
    }
    if (t == 0) return out;
  }
}

bool embedded_bit(Embedded e, std::size_t x, std::size_t y, std::size_t r) {
  const std::size_t full = (std::size_t{1} << r) - 1;
  return e == Embedded::Disj ? ((x | y) & full) == full : (x & y) != 0;
}

}  // namespace

SearchResult best_projection_embedding(const GadgetTree& g, const SearchConfig& cfg) {
  const std::size_t t = g.t();
  if (t > cfg.max_t)
    throw SizeLimitExceeded("gadget tree has t = " + std::to_string(t) + " > max_t = " + std::to_string(cfg.max_t));
  const double candidates = std::pow(2.0 + 2.0 * static_cast<double>(cfg.max_r), 2.0 * static_cast<double>(cfg.max_t));
  if (candidates > 1e8)
    throw SizeLimitExceeded("search space (2+2*max_r)^(2*max_t) exceeds 10^8 candidates");

  const BitMatrix m = truth_table(g, cfg.max_t);
  const std::size_t cols = m.cols();  // <= 64 under the guard above
  std::vector<std::uint64_t> row(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (m.at(i, j)) row[i] |= std::uint64_t{1} << j;
  const std::uint64_t all_cols = cols == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cols) - 1;

  for (std::size_t r = std::min(cfg.max_r, t); r >= 1; --r) {
    const std::size_t n_src = std::size_t{1} << r;
    const std::vector<Candidate> alice = enumerate_maps(t, r, true);
    const std::vector<Candidate> bob = enumerate_maps(t, r, false);
    std::vector<std::uint64_t> valid(n_src);
    for (const Candidate& ha : alice) {
      // valid[y]: target columns consistent with every x for this h_a.
      bool feasible = true;
      for (std::size_t y = 0; y < n_src && feasible; ++y) {
        std::uint64_t mask = all_cols;
        for (std::size_t x = 0; x < n_src; ++x) {
          const std::uint64_t rw = row[ha.image[x]];
          mask &= embedded_bit(cfg.embedded, x, y, r) ? rw : (~rw & all_cols);
        }
        valid[y] = mask;
        feasible = mask != 0;
      }
      if (!feasible) continue;
      for (const Candidate& hb : bob) {
        bool ok = true;
        for (std::size_t y = 0; y < n_src && ok; ++y) ok = (valid[y] >> hb.image[y]) & 1U;
        if (!ok) continue;
        EmbeddingCertificate cert;
        cert.embedded = cfg.embedded;
        cert.r = r;
        cert.h_a = ha.map;
        cert.h_b = hb.map;
        cert.target_formula = target_descriptor(g);
        cert.gadget = g.gadget();
        return SearchResult{r, std::move(cert)};
      }
    }
  }
  return SearchResult{};
}

// ---------------------------------------------------------------------------
// Exact rank

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1U) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::size_t rank_mod(std::vector<std::vector<std::uint8_t>> const& rows, std::size_t cols, std::uint64_t p) {
  std::vector<std::vector<std::uint64_t>> a(rows.size(), std::vector<std::uint64_t>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = rows[i][j];
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < a.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < a.size() && a[pivot][col] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[rank]);
    const std::uint64_t inv = pow_mod(a[rank][col], p - 2, p);
    for (std::size_t j = col; j < cols; ++j) a[rank][j] = mul_mod(a[rank][j], inv, p);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      const std::uint64_t f = a[i][col];
      if (f == 0) continue;
      for (std::size_t j = col; j < cols; ++j) {
        const std::uint64_t sub = mul_mod(f, a[rank][j], p);
        a[i][j] = a[i][j] >= sub ? a[i][j] - sub : a[i][j] + p - sub;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t rational_rank(const BitMatrix& m) {
  // Duplicate and zero rows/columns do not change the rank.
  std::set<std::vector<std::uint8_t>> row_set;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::uint8_t> r(m.cols());
    bool any = false;
    for (std::size_t j = 0; j < m.cols(); ++j) any = (r[j] = m.at(i, j)) || any;
    if (any) row_set.insert(std::move(r));
  }
  if (row_set.empty()) return 0;
  std::set<std::vector<std::uint8_t>> col_set;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::vector<std::uint8_t> c;
    bool any = false;
    for (const auto& r : row_set) {
      c.push_back(r[j]);
      any = r[j] || any;
    }
    if (any) col_set.insert(std::move(c));
  }
  const std::size_t n_rows = row_set.size();
  const std::size_t n_cols = col_set.size();
  std::vector<std::vector<std::uint8_t>> rows(n_rows, std::vector<std::uint8_t>(n_cols));
  {
    std::size_t j = 0;
    for (const auto& c : col_set) {
      for (std::size_t i = 0; i < n_rows; ++i) rows[i][j] = c[i];
      ++j;
    }
  }
  const std::size_t full = std::min(n_rows, n_cols);

  // Hadamard: any square 0/1 submatrix has |det| <= prod of its row norms.
  std::vector<double> norms;
  for (const auto& r : rows) norms.push_back(0.5 * std::log2(static_cast<double>(std::count(r.begin(), r.end(), 1))));
  std::sort(norms.rbegin(), norms.rend());
  double bound_bits = 1.0;
  for (std::size_t i = 0; i < full; ++i) bound_bits += norms[i];

  std::size_t best = 0;
  double covered = 0.0;
  std::uint64_t candidate = (std::uint64_t{1} << 61) - 1;
  while (covered <= bound_bits) {
    while (!is_prime(candidate)) candidate -= 2;
    best = std::max(best, rank_mod(rows, n_cols, candidate));
    if (best == full) break;
    covered += std::log2(static_cast<double>(candidate)) - 1e-9;
    candidate -= 2;
  }
  return best;
}

double log_rank(const GadgetTree& g) {
  if (g.t() > 10) throw SizeLimitExceeded("log_rank needs t <= 10 (t = " + std::to_string(g.t()) + ")");
  const std::size_t rank = rational_rank(truth_table(g, 10));
  return rank == 0 ? 0.0 : std::log2(static_cast<double>(rank));
}

}  // namespace roembed

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "roembed/errors.hpp"
#include "roembed/extractor.hpp"
#include "roembed/formula.hpp"
#include "roembed/generator.hpp"
#include "roembed/oracle.hpp"
#include "roembed/two_party.hpp"

namespace roembed::cli {

namespace {

using json = nlohmann::ordered_json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string read_all(std::istream& is) {
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

std::string read_source(const std::string& path, Streams& io) {
  if (path.empty() || path == "-") return read_all(io.in);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw MalformedInput("cannot open " + path);
  return read_all(file);
}

// Formula text from a positional argument, -f FILE, or stdin.
std::string formula_text(const std::string& inline_text, const std::string& file, Streams& io) {
  if (!inline_text.empty()) return inline_text;
  return read_source(file, io);
}

std::string trimmed(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

Gadget parse_gadget(const std::string& s) { return s == "and" ? Gadget::And : Gadget::Or; }

// ---------------------------------------------------------------------------

struct CanonArgs {
  std::string text;
  std::string file;
  std::string format = "json";
  bool from_json = false;
};

int cmd_canon(const CanonArgs& a, Streams& io) {
  const std::string src = formula_text(a.text, a.file, io);
  const CanonicalTree t = a.from_json ? canonical_tree_from_json(trimmed(src)) : canonicalize(parse(src));
  if (a.format == "dot") {
    io.out << to_dot(t);
  } else if (a.format == "text") {
    io.out << to_text(t) << '\n';
  } else {
    io.out << to_json(t) << '\n';
  }
  return kOk;
}

struct EmbedArgs {
  std::string text;
  std::string file;
  std::string gadget = "auto";
  std::string pipeline = "theorem";
  bool exhaustive_only = false;
};

int cmd_embed(const EmbedArgs& a, Streams& io) {
  const CanonicalTree t = canonicalize(parse(formula_text(a.text, a.file, io)));
  ExtractOptions opts;
  opts.structural_verify = !a.exhaustive_only;

  if (a.pipeline == "theorem") {
    if (a.gadget != "auto") throw PreconditionFailed("the theorem pipeline chooses its own gadget; use --gadget auto");
    const TheoremReport rep = theorem_pipeline(t, opts);
    io.out << to_json(rep) << '\n';
    if (rep.bound_asserted && !rep.bound_met) {
      io.err << "guarantee failed: max(m0, m1) = " << rep.best() << " < " << rep.bound_target << '\n';
      return kFailed;
    }
    if (rep.result.claim1_applicable && !rep.result.guarantee_met) {
      io.err << "guarantee failed: m0 * m1 < s = " << rep.result.s << '\n';
      return kFailed;
    }
    return kOk;
  }

  if (a.pipeline == "lemma") {
    const LemmaReport rep = lemma_pipeline(t, opts);
    if (a.gadget != "auto" && parse_gadget(a.gadget) != rep.gadget)
      throw PreconditionFailed("leaf-parent kinds select gadget " + std::string(to_string(rep.gadget)));
    io.out << to_json(rep.result) << '\n';
    if (rep.bound_asserted && !rep.bound_met) {
      io.err << "guarantee failed: m0 * m1 = " << rep.result.m0 * rep.result.m1 << " < n = " << rep.n << '\n';
      return kFailed;
    }
    return kOk;
  }

  // Plain extraction on a single gadget expansion.
  Gadget gadget;
  if (a.gadget == "auto") {
    const auto parent = uniform_leaf_parent(t);
    if (!parent) throw PreconditionFailed("--gadget auto needs every leaf parent to be the same gate kind");
    gadget = *parent == GateKind::And ? Gadget::Or : Gadget::And;
  } else {
    gadget = parse_gadget(a.gadget);
  }
  const ExtractionResult res = extract(gadget_expand(t, gadget), opts);
  io.out << to_json(res) << '\n';
  if (res.claim1_applicable && !res.guarantee_met) {
    io.err << "guarantee failed: m0 * m1 = " << res.m0 * res.m1 << " < s = " << res.s << '\n';
    return kFailed;
  }
  return kOk;
}

struct VerifyArgs {
  std::string cert_file;
  std::string formula;
  std::string formula_file;
  bool exhaustive_only = false;
};

int cmd_verify(const VerifyArgs& a, Streams& io) {
  const EmbeddingCertificate cert = certificate_from_json(trimmed(read_source(a.cert_file, io)));
  std::string text = a.formula;
  if (text.empty() && !a.formula_file.empty()) text = read_source(a.formula_file, io);
  if (text.empty()) text = cert.target_formula;
  if (!cert.gadget) throw MalformedCertificate("certificate has no gadget; cannot rebuild its target");
  const GadgetTree g = gadget_expand(canonicalize(parse(text)), *cert.gadget);
  const VerifyOutcome outcome = verify_embedding(cert, g, default_verify_limit(), !a.exhaustive_only);
  if (outcome.verified()) {
    io.out << "Verified\n";
    return kOk;
  }
  io.out << "Counterexample x=" << to_string(outcome.counterexample->x) << " y=" << to_string(outcome.counterexample->y)
         << '\n';
  return kFailed;
}

struct GenArgs {
  std::size_t n = 4;
  std::string root = "random";
  std::size_t max_fanin = 3;
  double negation_prob = 0.0;
  std::uint64_t seed = 0;
  std::string leaf_parent;
};

int cmd_gen(const GenArgs& a, Streams& io) {
  GenSpec spec;
  spec.n_leaves = a.n;
  spec.root = a.root == "and" ? RootChoice::And : a.root == "or" ? RootChoice::Or : RootChoice::Random;
  spec.max_fanin = a.max_fanin;
  spec.negation_prob = a.negation_prob;
  spec.seed = a.seed;
  if (a.leaf_parent == "and") spec.leaf_parent = GateKind::And;
  if (a.leaf_parent == "or") spec.leaf_parent = GateKind::Or;
  io.out << generate_formula(spec) << '\n';
  return kOk;
}

struct OracleArgs {
  std::string a;
  std::string b;
  std::string file;
  std::string gadget = "or";
  std::string embedded = "disj";
  std::size_t max_t = 4;
  std::size_t max_r = 4;
};

int cmd_equiv(const OracleArgs& a, Streams& io) {
  const EquivResult r = equiv_check(parse(a.a), parse(a.b));
  json j = json::object();
  j["equal"] = r.equal;
  if (r.counterexample) {
    json ce = json::object();
    for (const auto& [var, bit] : *r.counterexample) ce[var] = bit ? 1 : 0;
    j["counterexample"] = std::move(ce);
  }
  io.out << j.dump() << '\n';
  return r.equal ? kOk : kFailed;
}

int cmd_search(const OracleArgs& a, Streams& io) {
  const GadgetTree g = gadget_expand(canonicalize(parse(formula_text(a.a, a.file, io))), parse_gadget(a.gadget));
  SearchConfig cfg;
  cfg.max_t = a.max_t;
  cfg.max_r = a.max_r;
  cfg.embedded = a.embedded == "ndisj" ? Embedded::Ndisj : Embedded::Disj;
  const SearchResult r = best_projection_embedding(g, cfg);
  json j = json::object();
  j["m_star"] = r.m_star;
  j["cert"] = r.cert ? json::parse(to_json(*r.cert)) : json(nullptr);
  io.out << j.dump() << '\n';
  return kOk;
}

int cmd_rank(const OracleArgs& a, Streams& io) {
  const GadgetTree g = gadget_expand(canonicalize(parse(formula_text(a.a, a.file, io))), parse_gadget(a.gadget));
  if (g.t() > 10) throw SizeLimitExceeded("rank needs t <= 10");
  const std::size_t rank = rational_rank(truth_table(g, 10));
  json j = json::object();
  j["rank"] = rank;
  j["log_rank"] = log_rank(g);
  io.out << j.dump() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Read-once formulas: canonical trees and disjointness embeddings", "roembed"};
  app.require_subcommand(1);

  CanonArgs canon;
  auto* c = app.add_subcommand("canon", "Print the canonical alternating AND-OR tree");
  c->add_option("formula", canon.text, "Formula text (default: read -f or stdin)");
  c->add_option("-f,--file", canon.file, "Read the formula from a file ('-' for stdin)");
  auto* fmt = c->add_option_group("format");
  fmt->add_flag_callback("--json", [&] { canon.format = "json"; }, "JSON output (default)");
  fmt->add_flag_callback("--dot", [&] { canon.format = "dot"; }, "Graphviz DOT output");
  fmt->add_flag_callback("--text", [&] { canon.format = "text"; }, "Formula text output");
  fmt->require_option(0, 1);
  c->add_flag("--from-json", canon.from_json, "Input is a canonical tree in JSON");

  EmbedArgs embed;
  auto* e = app.add_subcommand("embed", "Extract DISJ/NDISJ embedding certificates");
  e->add_option("formula", embed.text, "Formula text (default: read -f or stdin)");
  e->add_option("-f,--file", embed.file, "Read the formula from a file ('-' for stdin)");
  e->add_option("--gadget", embed.gadget, "Gadget: or, and, auto")
      ->check(CLI::IsMember({"or", "and", "auto"}))
      ->capture_default_str();
  e->add_option("--pipeline", embed.pipeline, "Pipeline: extract, lemma, theorem")
      ->check(CLI::IsMember({"extract", "lemma", "theorem"}))
      ->capture_default_str();
  e->add_flag("--exhaustive-only", embed.exhaustive_only,
              "Never fall back to structural verification above the size limit");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check an embedding certificate");
  v->add_option("certificate", verify.cert_file, "Certificate JSON file ('-' for stdin)")->required();
  v->add_option("--formula", verify.formula, "Target formula text (default: the certificate's target_formula)");
  v->add_option("-f,--file", verify.formula_file, "Read the target formula from a file");
  v->add_flag("--exhaustive-only", verify.exhaustive_only, "Disable structural verification above the size limit");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random canonical read-once formula");
  g->add_option("-n,--leaves", gen.n, "Number of leaves")->capture_default_str();
  g->add_option("--root", gen.root, "Root gate: and, or, random")
      ->check(CLI::IsMember({"and", "or", "random"}))
      ->capture_default_str();
  g->add_option("--max-fanin", gen.max_fanin, "Maximum gate fan-in (>= 2)")->capture_default_str();
  g->add_option("--neg-prob", gen.negation_prob, "Probability that a leaf is negated")->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--leaf-parent", gen.leaf_parent, "Force every leaf parent to be and/or")
      ->check(CLI::IsMember({"and", "or"}));

  auto* o = app.add_subcommand("oracle", "Brute-force reference computations");
  o->require_subcommand(1);
  OracleArgs orc;
  auto* oe = o->add_subcommand("equiv", "Exhaustive equivalence of two formulas");
  oe->add_option("a", orc.a, "First formula")->required();
  oe->add_option("b", orc.b, "Second formula")->required();
  auto* os = o->add_subcommand("search", "Largest projection embedding by exhaustive search");
  auto* orank = o->add_subcommand("rank", "Rational rank of the gadget truth table");
  for (auto* sub : {os, orank}) {
    sub->add_option("formula", orc.a, "Formula text (default: read -f or stdin)");
    sub->add_option("-f,--file", orc.file, "Read the formula from a file ('-' for stdin)");
    sub->add_option("--gadget", orc.gadget, "Gadget: or, and")->check(CLI::IsMember({"or", "and"}))->capture_default_str();
  }
  os->add_option("--embedded", orc.embedded, "Embedded function: disj, ndisj")
      ->check(CLI::IsMember({"disj", "ndisj"}))
      ->capture_default_str();
  os->add_option("--max-t", orc.max_t, "Largest t searched")->capture_default_str();
  os->add_option("--max-r", orc.max_r, "Largest r searched")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (c->parsed()) return cmd_canon(canon, io);
    if (e->parsed()) return cmd_embed(embed, io);
    if (v->parsed()) return cmd_verify(verify, io);
    if (g->parsed()) return cmd_gen(gen, io);
    if (oe->parsed()) return cmd_equiv(orc, io);
    if (os->parsed()) return cmd_search(orc, io);
    if (orank->parsed()) return cmd_rank(orc, io);
  } catch (const SizeLimitExceeded& ex) {
    err << "error: " << ex.what() << '\n';
    return kSizeLimit;
  } catch (const VerificationFailed& ex) {
    err << "error: " << ex.what() << '\n';
    return kFailed;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace roembed::cli

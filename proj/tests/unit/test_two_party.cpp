#include <doctest.h>

#include <cstdlib>

#include "roembed/errors.hpp"
#include "roembed/formula.hpp"
#include "roembed/two_party.hpp"
#include "support.hpp"

using namespace roembed;

namespace {

CanonicalTree canon(const char* text) { return canonicalize(parse(text)); }

Bits b(const char* s) { return bits_from_string(s); }

EmbeddingCertificate identity_cert(const GadgetTree& g, Embedded e) {
  EmbeddingCertificate c;
  c.embedded = e;
  c.r = g.t();
  for (std::uint32_t i = 1; i <= g.t(); ++i) {
    c.h_a.push_back(CoordEntry::copy(i));
    c.h_b.push_back(CoordEntry::copy(i));
  }
  c.target_formula = target_descriptor(g);
  c.gadget = g.gadget();
  return c;
}

// Smallest counterexample by plain enumeration, x-major, bit 1 most significant.
std::optional<Counterexample> first_counterexample(const EmbeddingCertificate& c, const GadgetTree& g) {
  for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << c.r); ++xv)
    for (std::uint64_t yv = 0; yv < (std::uint64_t{1} << c.r); ++yv) {
      const Bits x = support::bits_of(xv, c.r);
      const Bits y = support::bits_of(yv, c.r);
      const auto [xa, yb] = apply_embedding(c, x, y);
      if (support::naive_tree_eval(g, xa, yb) != embedded_value(c.embedded, x, y)) return Counterexample{x, y};
    }
  return std::nullopt;
}

}  // namespace

TEST_CASE("disj and ndisj examples") {
  CHECK(disj(b("11"), b("00")));
  CHECK(disj(b("10"), b("01")));
  CHECK_FALSE(disj(b("10"), b("00")));
  CHECK_FALSE(disj(b("0"), b("0")));
  CHECK(ndisj(b("10"), b("10")));
  CHECK_FALSE(ndisj(b("10"), b("01")));
  CHECK_THROWS_AS(disj(b("10"), b("1")), LengthMismatch);
  CHECK_THROWS_AS(ndisj(Bits{}, Bits{}), LengthMismatch);
  CHECK_THROWS_AS(bits_from_string("10a"), MalformedInput);
}

TEST_CASE("property: ndisj is the dual of disj for r <= 8") {
  for (std::size_t r = 1; r <= 8; ++r)
    for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << r); ++xv)
      for (std::uint64_t yv = 0; yv < (std::uint64_t{1} << r); ++yv) {
        const Bits x = support::bits_of(xv, r);
        const Bits y = support::bits_of(yv, r);
        Bits nx = x;
        Bits ny = y;
        for (auto& v : nx) v ^= 1U;
        for (auto& v : ny) v ^= 1U;
        REQUIRE(ndisj(x, y) == !disj(nx, ny));
      }
}

TEST_CASE("gadget_expand examples") {
  using S = GadgetSpec;
  const GadgetTree a = gadget_expand(canon("z1 & z2"), Gadget::Or);
  CHECK(a == GadgetTree::from_spec(S::make_gate(GateKind::And, {S::make_gate(GateKind::Or, {S::alice(1), S::bob(1)}),
                                                                S::make_gate(GateKind::Or, {S::alice(2), S::bob(2)})})));
  CHECK(a.t() == 2);
  CHECK(a.to_text() == "(x1 | y1) & (x2 | y2)");
  CHECK(a.target_formula() == "z1 & z2");
  CHECK(a.gadget() == Gadget::Or);

  const GadgetTree o = gadget_expand(canon("z1 | z2"), Gadget::Or);
  CHECK(o == GadgetTree::from_spec(S::make_gate(GateKind::Or, {S::alice(1), S::bob(1), S::alice(2), S::bob(2)})));

  const GadgetTree n = gadget_expand(canon("!z1 & z2"), Gadget::Or);
  CHECK(n == GadgetTree::from_spec(S::make_gate(GateKind::And, {S::alice(1, true), S::bob(1, true),
                                                                S::make_gate(GateKind::Or, {S::alice(2), S::bob(2)})})));
  CHECK(n.to_text() == "!x1 & !y1 & (x2 | y2)");
  for (std::uint64_t xv = 0; xv < 4; ++xv)
    for (std::uint64_t yv = 0; yv < 4; ++yv) {
      const Bits x = support::bits_of(xv, 2);
      const Bits y = support::bits_of(yv, 2);
      CHECK(eval_gadget(n, x, y) == (!(x[0] || y[0]) && (x[1] || y[1])));
    }

  const GadgetTree single = gadget_expand(canon("z1"), Gadget::And);
  CHECK(single.to_text() == "x1 & y1");
}

TEST_CASE("GadgetTree::from_spec validates coordinate pairing") {
  using S = GadgetSpec;
  CHECK_THROWS_AS(GadgetTree::from_spec(S::make_gate(GateKind::And, {S::alice(1), S::alice(1)})), MalformedInput);
  CHECK_THROWS_AS(GadgetTree::from_spec(S::make_gate(GateKind::And, {S::alice(1), S::bob(2)})), MalformedInput);
  CHECK_THROWS_AS(GadgetTree::from_spec(S::make_gate(GateKind::And, {S::alice(1)})), MalformedInput);
  const GadgetTree g = GadgetTree::from_spec(S::make_gate(GateKind::Or, {S::bob(2), S::alice(1), S::alice(2), S::bob(1)}));
  CHECK(g.t() == 2);
  CHECK_FALSE(g.gadget().has_value());
  CHECK(target_descriptor(g) == g.to_text());
}

TEST_CASE("eval_gadget examples") {
  const GadgetTree g = gadget_expand(canon("z1 & z2"), Gadget::Or);
  CHECK(eval_gadget(g, b("10"), b("01")));
  CHECK_FALSE(eval_gadget(g, b("00"), b("10")));
  CHECK_THROWS_AS(eval_gadget(g, b("1"), b("01")), LengthMismatch);
}

TEST_CASE("property: gadget trees compute f(x op y) for n <= 10") {
  support::Rng rng(7);
  for (int round = 0; round < 150; ++round) {
    const std::size_t n = 1 + rng.below(10);
    const CanonicalTree t = canonicalize(support::random_raw_formula(n, rng));
    for (Gadget gd : {Gadget::Or, Gadget::And}) {
      const GadgetTree g = gadget_expand(t, gd);
      REQUIRE(g.t() == n);
      // Each coordinate has exactly one Alice and one Bob leaf.
      std::vector<int> alice(n, 0), bob(n, 0);
      for (const auto& node : g.nodes())
        if (node.is_leaf) ++(node.side == Side::Alice ? alice : bob)[node.coord];
      for (std::size_t i = 0; i < n; ++i) REQUIRE((alice[i] == 1 && bob[i] == 1));
      const std::size_t samples = n <= 5 ? (std::size_t{1} << (2 * n)) : 400;
      for (std::size_t s = 0; s < samples; ++s) {
        const std::uint64_t code = n <= 5 ? s : rng.next();
        const Bits x = support::bits_of(code >> n, n);
        const Bits y = support::bits_of(code, n);
        const bool want = support::naive_gadget_eval(t, gd, x, y);
        REQUIRE(eval_gadget(g, x, y) == want);
        REQUIRE(support::naive_tree_eval(g, x, y) == want);
      }
    }
  }
}

TEST_CASE("apply_embedding examples") {
  EmbeddingCertificate id;
  id.r = 2;
  id.h_a = {CoordEntry::copy(1), CoordEntry::copy(2)};
  id.h_b = id.h_a;
  CHECK(apply_embedding(id, b("10"), b("01")) == std::pair{b("10"), b("01")});

  EmbeddingCertificate c;
  c.r = 1;
  c.h_a = {CoordEntry::fixed(true), CoordEntry::copy(1)};
  c.h_b = {CoordEntry::fixed(false), CoordEntry::copy(1)};
  CHECK(apply_embedding(c, b("0"), b("1")) == std::pair{b("10"), b("01")});

  EmbeddingCertificate neg;
  neg.r = 1;
  neg.h_a = {CoordEntry::copy(1, true)};
  neg.h_b = {CoordEntry::copy(1)};
  CHECK(apply_embedding(neg, b("1"), b("1")).first == b("0"));

  EmbeddingCertificate bad = c;
  bad.h_a[1] = CoordEntry::copy(2);
  CHECK_THROWS_AS(apply_embedding(bad, b("0"), b("1")), MalformedCertificate);
  CHECK_THROWS_AS(apply_embedding(c, b("01"), b("1")), LengthMismatch);
}

TEST_CASE("verify_embedding examples") {
  const GadgetTree g = gadget_expand(canon("z1 & z2"), Gadget::Or);
  CHECK(verify_embedding(identity_cert(g, Embedded::Disj), g).verified());

  const auto wrong = verify_embedding(identity_cert(g, Embedded::Ndisj), g);
  REQUIRE_FALSE(wrong.verified());
  // Smallest in (x, y) order: x = 00, y = 11 already disagrees.
  CHECK(*wrong.counterexample == Counterexample{b("00"), b("11")});
  // The pair (10, 01) is also a disagreement.
  CHECK(ndisj(b("10"), b("01")) != eval_gadget(g, b("10"), b("01")));

  EmbeddingCertificate base;
  base.embedded = Embedded::Ndisj;
  base.r = 1;
  base.h_a = {CoordEntry::copy(1), CoordEntry::fixed(false)};
  base.h_b = {CoordEntry::fixed(false), CoordEntry::copy(1)};
  base.target_formula = "z1 & z2";
  base.gadget = Gadget::Or;
  CHECK(verify_embedding(base, g).verified());
}

TEST_CASE("verify_embedding rejects certificates that do not fit the target") {
  const GadgetTree g = gadget_expand(canon("z1 & z2"), Gadget::Or);
  EmbeddingCertificate c = identity_cert(g, Embedded::Disj);
  c.target_formula = "z1 | z2";
  CHECK_THROWS_AS(verify_embedding(c, g), MalformedCertificate);
  c = identity_cert(g, Embedded::Disj);
  c.gadget = Gadget::And;
  CHECK_THROWS_AS(verify_embedding(c, g), MalformedCertificate);
  c = identity_cert(g, Embedded::Disj);
  c.h_b.pop_back();
  CHECK_THROWS_AS(verify_embedding(c, g), MalformedCertificate);
  c = identity_cert(g, Embedded::Disj);
  c.r = 0;
  CHECK_THROWS_AS(verify_embedding(c, g), MalformedCertificate);
}

TEST_CASE("verification above the exhaustive limit") {
  std::string text = "z1";
  for (int i = 2; i <= 14; ++i) text += " & z" + std::to_string(i);
  const GadgetTree g = gadget_expand(canon(text.c_str()), Gadget::Or);
  const EmbeddingCertificate good = identity_cert(g, Embedded::Disj);
  CHECK(verify_embedding(good, g, 12).verified());
  CHECK_THROWS_AS(verify_embedding(good, g, 12, false), SizeLimitExceeded);

  EmbeddingCertificate swapped = good;
  swapped.h_b[0] = CoordEntry::copy(2);
  swapped.h_b[1] = CoordEntry::copy(1);
  CHECK_THROWS_AS(verify_embedding(swapped, g, 12), VerificationFailed);

  EmbeddingCertificate twice = good;
  twice.r = 13;
  twice.h_a[13] = CoordEntry::copy(13);
  twice.h_b[13] = CoordEntry::copy(13);
  CHECK_THROWS_AS(verify_embedding(twice, g, 12), SizeLimitExceeded);

  // Small enough to cross-check: the structural verdict matches enumeration.
  const GadgetTree small = gadget_expand(canon("(z1 | z2) & z3"), Gadget::And);
  EmbeddingCertificate c;
  c.embedded = Embedded::Ndisj;
  c.r = 2;
  c.h_a = {CoordEntry::copy(1), CoordEntry::copy(2), CoordEntry::fixed(true)};
  c.h_b = {CoordEntry::copy(1), CoordEntry::copy(2), CoordEntry::fixed(true)};
  c.target_formula = "z3 & (z1 | z2)";
  c.gadget = Gadget::And;
  CHECK(verify_embedding(c, small, 12).verified());
  CHECK(verify_embedding(c, small, 1).verified());
}

TEST_CASE("RO_EMBED_VERIFY_LIMIT overrides the default limit") {
  ::unsetenv("RO_EMBED_VERIFY_LIMIT");
  CHECK(default_verify_limit() == 12);
  ::setenv("RO_EMBED_VERIFY_LIMIT", "5", 1);
  CHECK(default_verify_limit() == 5);
  ::setenv("RO_EMBED_VERIFY_LIMIT", "junk", 1);
  CHECK(default_verify_limit() == 12);
  ::unsetenv("RO_EMBED_VERIFY_LIMIT");
}

TEST_CASE("truth_table examples") {
  const BitMatrix a = truth_table(gadget_expand(canon("z1"), Gadget::Or));
  CHECK((a.rows() == 2 && a.cols() == 2));
  CHECK((!a.at(0, 0) && a.at(0, 1) && a.at(1, 0) && a.at(1, 1)));
  const BitMatrix o = truth_table(gadget_expand(canon("z1"), Gadget::And));
  CHECK((!o.at(0, 0) && !o.at(0, 1) && !o.at(1, 0) && o.at(1, 1)));
  const BitMatrix d = truth_table(gadget_expand(canon("z1 & z2"), Gadget::Or));
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t y = 0; y < 4; ++y) CHECK(d.at(x, y) == disj(support::bits_of(x, 2), support::bits_of(y, 2)));
  CHECK_THROWS_AS(truth_table(gadget_expand(canon("a & b & c"), Gadget::Or), 2), SizeLimitExceeded);
}

TEST_CASE("certificate JSON") {
  const GadgetTree g = gadget_expand(canon("z1 & z2"), Gadget::Or);
  EmbeddingCertificate c = identity_cert(g, Embedded::Disj);
  c.h_a[1] = CoordEntry::copy(2, true);
  c.h_b[0] = CoordEntry::fixed(true);
  c.h_b[1] = CoordEntry::copy(1);
  const std::string json = to_json(c);
  CHECK(json ==
        R"({"embedded":"DISJ","r":2,"h_a":[{"copy":1,"neg":false},{"copy":2,"neg":true}],"h_b":[{"fixed":1},{"copy":1,"neg":false}],"target_formula":"z1 & z2","gadget":"OR"})");
  CHECK(certificate_from_json(json) == c);
  CHECK(to_json(certificate_from_json(json)) == json);

  c.gadget.reset();
  CHECK(to_json(c).find(R"("gadget":null)") != std::string::npos);
  CHECK(certificate_from_json(to_json(c)) == c);

  CHECK_THROWS_AS(certificate_from_json(R"({"embedded":"DISJ","r":1)"), MalformedInput);
  CHECK_THROWS_AS(certificate_from_json(
                      R"({"embedded":"XOR","r":1,"h_a":[],"h_b":[],"target_formula":"z1","gadget":"OR"})"),
                  MalformedInput);
  CHECK_THROWS_AS(
      certificate_from_json(
          R"({"embedded":"DISJ","r":1,"h_a":[{"copy":2,"neg":false}],"h_b":[{"copy":1,"neg":false}],"target_formula":"z1","gadget":"OR"})"),
      MalformedCertificate);
  CHECK_THROWS_AS(
      certificate_from_json(
          R"({"embedded":"DISJ","r":1,"h_a":[{"fixed":2}],"h_b":[{"copy":1,"neg":false}],"target_formula":"z1","gadget":"OR"})"),
      MalformedInput);
}

TEST_CASE("property: verdicts on mutated certificates agree with enumeration") {
  support::Rng rng(99);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng.below(4);
    const CanonicalTree t = canonicalize(support::random_raw_formula(n, rng));
    const GadgetTree g = gadget_expand(t, rng.coin() ? Gadget::Or : Gadget::And);
    EmbeddingCertificate c = identity_cert(g, rng.coin() ? Embedded::Disj : Embedded::Ndisj);
    c.r = 1 + rng.below(n);
    for (int side = 0; side < 2; ++side)
      for (auto& e : side == 0 ? c.h_a : c.h_b) {
        const std::size_t k = rng.below(3);
        e = k == 0 ? CoordEntry::fixed(rng.coin())
                   : CoordEntry::copy(static_cast<std::uint32_t>(1 + rng.below(c.r)), rng.coin());
      }
    const VerifyOutcome out = verify_embedding(c, g);
    const auto expected = first_counterexample(c, g);
    REQUIRE(out.verified() == !expected.has_value());
    REQUIRE(out.verified() == support::brute_force_holds(c, g));
    if (expected) REQUIRE(*out.counterexample == *expected);
  }
}
